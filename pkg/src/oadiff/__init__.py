"""Orthogonal arrays, difference schemes and alphabet reduction pairs, with an
exact toolkit for differential approximation of weighted CSPs."""

__version__ = "0.1.0"
