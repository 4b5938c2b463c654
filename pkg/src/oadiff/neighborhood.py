"""Hamming balls, radius-1 local search, exact best-in-ball and spread, and the
linear identity expressing v(x*) through the solutions between x and x*."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Iterator, Sequence

from . import budget
from .csp import CspInstance, OracleReport, better, brute_force, evaluate
from .errors import OadiffError


class NeighborhoodError(OadiffError):
    pass


class BadRadius(NeighborhoodError):
    pass


class DegenerateDiameter(NeighborhoodError):
    pass


class DistanceTooSmall(NeighborhoodError):
    pass


Vector = tuple[int, ...]


@dataclass(frozen=True)
class BallSpec:
    center: Vector
    radius: int
    shifted: bool = False

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(self.center))
        if not 0 <= self.radius <= len(self.center):
            raise BadRadius(f"radius {self.radius} outside 0..{len(self.center)}")


def ball_size(n: int, q: int, d: int) -> int:
    return sum(math.comb(n, i) * (q - 1) ** i for i in range(d + 1))


def _plain_ball(x: Vector, q: int, d: int) -> Iterator[Vector]:
    """By distance, then changed positions, then new symbols, all lexicographic."""
    n = len(x)
    for i in range(d + 1):
        for pos in combinations(range(n), i):
            choices = [[a for a in range(q) if a != x[j]] for j in pos]
            for syms in product(*choices):
                y = list(x)
                for j, a in zip(pos, syms):
                    y[j] = a
                yield tuple(y)


def ball_iter(spec: BallSpec, q: int) -> Iterator[Vector]:
    """Every member of B^d(x), or of the union of B^d(x + a) over uniform shifts
    a, exactly once."""
    x, d = spec.center, spec.radius
    if any(not 0 <= e < q for e in x):
        raise NeighborhoodError(f"center {x} is not a word over {q} symbols")
    if not spec.shifted:
        count = 0
        for y in _plain_ball(x, q, d):
            count += 1
            yield y
        assert count == ball_size(len(x), q, d)
        return
    seen: set[Vector] = set()
    for a in range(q):
        for y in _plain_ball(tuple((e + a) % q for e in x), q, d):
            if y not in seen:
                seen.add(y)
                yield y


def _ball_budget(spec: BallSpec, q: int) -> None:
    size = ball_size(len(spec.center), q, spec.radius) * (q if spec.shifted else 1)
    budget.check(size, budget.enum_budget(), "ball enumeration")


# ------------------------------------------------------------------ radius one

def _neighbors(x: Vector, q: int, kind: str) -> Iterator[Vector]:
    if kind == "B1":
        it = _plain_ball(x, q, 1)
    elif kind == "tildeB1":
        it = ball_iter(BallSpec(x, 1, True), q)
    else:
        raise NeighborhoodError(f"unknown neighborhood {kind!r}")
    for y in it:
        if y != x:
            yield y


def local_search(I: CspInstance, x0: Sequence[int], neighborhood: str = "B1",
                 on_visit: Callable[[Vector], None] | None = None) -> Vector:
    """First-improvement descent (ascent for max) over the radius-1 ball in its
    lexicographic scan order.  ``on_visit`` sees every point the walk stands on."""
    x = tuple(x0)
    val = evaluate(I, x)
    while True:
        if on_visit is not None:
            on_visit(x)
        for y in _neighbors(x, I.q, neighborhood):
            yv = evaluate(I, y)
            if better(I, yv, val):
                x, val = y, yv
                break
        else:
            return x


def b1_neighbor_sum(I: CspInstance, x: Sequence[int]) -> Fraction:
    return sum((evaluate(I, y) for y in _neighbors(tuple(x), I.q, "B1")), Fraction(0))


def b1_identity_holds(I: CspInstance, x: Sequence[int], k: int) -> bool:
    """Neighbor sum over B^1(x) minus x equals qk*mean + ((q-1)n - qk)*v(x);
    valid when every constraint has arity exactly k and is balanced
    (k-1)-wise independent."""
    q, n = I.q, I.n
    lhs = b1_neighbor_sum(I, x)
    rhs = q * k * I.mean() + ((q - 1) * n - q * k) * evaluate(I, x)
    return lhs == rhs


# ------------------------------------------------------------------ radius d

def best_in_ball(I: CspInstance, spec: BallSpec) -> tuple[Vector, Fraction]:
    """Exact optimum over the ball; ties go to the lexicographically smallest."""
    _ball_budget(spec, I.q)
    best = None
    for y in ball_iter(spec, I.q):
        v = evaluate(I, y)
        if best is None or better(I, v, best[1]) or (v == best[1] and y < best[0]):
            best = (y, v)
    return best


def ball_diameter_spread(I: CspInstance, spec: BallSpec, report: OracleReport | None = None) -> Fraction:
    """(max - min of v over the ball) / |opt - wor|."""
    _ball_budget(spec, I.q)
    rep = report or brute_force(I)
    if rep.opt == rep.wor:
        raise DegenerateDiameter("the instance has a constant objective")
    vals = [evaluate(I, y) for y in ball_iter(spec, I.q)]
    return (max(vals) - min(vals)) / rep.diameter


def ball_ratio_bound(n: int, k: int) -> Fraction:
    """Guaranteed differential ratio of the best point in a radius-k ball."""
    return Fraction(2 * math.factorial(k), (2 * n - k) ** k)


def ball_spread_bound(n: int, k: int) -> Fraction:
    """Guaranteed spread of a radius-k ball."""
    return Fraction(math.factorial(k), (2 * n - k) ** k)


def spread_from_pair_ratio(bar_delta: Fraction) -> Fraction:
    """Spread guaranteed by a restricted cover pair of ratio bar_delta."""
    bar_delta = Fraction(bar_delta)
    return 1 / (2 / bar_delta - 1)


def binom_gap_holds(k: int, x: int, y: int, z: int) -> bool:
    """C(x+z, k) + C(y, k) > C(y+z, k) + C(x, k) when x > y, z > 0, x+z >= k."""
    return math.comb(x + z, k) + math.comb(y, k) > math.comb(y + z, k) + math.comb(x, k)


# ------------------------------------------------------------------ identity

def hamming(x: Sequence[int], y: Sequence[int]) -> int:
    return sum(1 for a, b in zip(x, y) if a != b)


def n_h_set(x_star: Sequence[int], x: Sequence[int], h: int) -> list[Vector]:
    """Vectors agreeing coordinatewise with x or x_star, at distance h from x."""
    x, x_star = tuple(x), tuple(x_star)
    diff = [j for j in range(len(x)) if x[j] != x_star[j]]
    out = []
    for pos in combinations(diff, h):
        y = list(x)
        for j in pos:
            y[j] = x_star[j]
        out.append(tuple(y))
    return out


def identity_coefficient(kappa: int, k: int, h: int) -> int:
    return (-1) ** (k - h) * math.comb(kappa - 1 - h, k - h)


def identity_rhs(I: CspInstance, x_star: Sequence[int], x: Sequence[int], k: int) -> Fraction:
    kappa = hamming(x, x_star)
    if kappa <= k:
        raise DistanceTooSmall(f"distance {kappa} must exceed the arity {k}")
    total = Fraction(0)
    for h in range(k + 1):
        s = sum((evaluate(I, y) for y in n_h_set(x_star, x, h)), Fraction(0))
        total += identity_coefficient(kappa, k, h) * s
    return total


def identity_check(I: CspInstance, x_star: Sequence[int], x: Sequence[int], k: int | None = None) -> bool:
    """v(x_star) equals the signed binomial combination of the values on the
    layers N^0..N^k between x and x_star."""
    if k is None:
        k = I.arity
    return evaluate(I, x_star) == identity_rhs(I, x_star, x, k)
