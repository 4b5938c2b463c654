"""Partition-based solution multisets, average-ratio certificates, alphabet
reduction through array pairs, and alphabet enlargement by surjections."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .arpa import ArrayPair, NotAnArpa, PairCertificate, auto_arpa, verify_arpa, verify_relaxed_arpa
from .csp import (Constraint, ConstraintTable, CspInstance, OracleReport, brute_force,
                  differential_ratio, evaluate, is_in_Eq, is_in_Iqt, is_in_Oq, is_strong_coloring)
from .designs import SymbolArray, all_words, class_rep, frequency, shift_class_frequency
from .errors import OadiffError, VerificationError


class ReductionError(OadiffError):
    pass


class ShapeMismatch(ReductionError):
    pass


class NotAStrongColoring(VerificationError):
    pass


class StructuralCheckFailed(VerificationError):
    def __init__(self, constraint: int, witness):
        super().__init__(f"constraint {constraint} fails the uniformity check: {witness}")
        self.constraint = constraint
        self.witness = witness


class BadSubset(ReductionError):
    pass


class ArityExceedsP(ReductionError):
    pass


class NotSurjective(ReductionError):
    pass


Partition = Sequence[Sequence[int]]


def y_partition(V: Partition, x: Sequence[int], u: Sequence[int], q: int) -> tuple[int, ...]:
    """Shift the coordinates of class c by u[c] (classes hold 1-based indices)."""
    if len(u) != len(V):
        raise ShapeMismatch(f"word has {len(u)} entries for {len(V)} classes")
    y = list(x)
    for c, cls in enumerate(V):
        for j in cls:
            if not 1 <= j <= len(x):
                raise ShapeMismatch(f"class member {j} outside 1..{len(x)}")
            y[j - 1] = (y[j - 1] + u[c]) % q
    return tuple(y)


# ------------------------------------------------------------------ certificates

def _projection_uniform(rows: list[tuple[int, ...]], q: int, width: int, by_class: bool):
    """None when the projected rows are uniform (over words, or over
    uniform-shift classes), otherwise the first offending word and its count."""
    if width == 0:
        return None
    counts: dict = {}
    for r in rows:
        key = class_rep(r, q) if by_class else r
        counts[key] = counts.get(key, 0) + 1
    keys = [(0,) + v for v in all_words(q, width - 1)] if by_class else list(all_words(q, width))
    want = Fraction(len(rows), len(keys))
    for key in keys:
        if counts.get(key, 0) != want:
            return key, counts.get(key, 0)
    return None


def merge_last_classes(V: Partition, t: int) -> list[list[int]]:
    """Aggregate the last t color classes into one."""
    if not 1 <= t <= len(V):
        raise ShapeMismatch(f"cannot merge {t} of {len(V)} classes")
    head = [list(c) for c in V[:len(V) - t]]
    tail = sorted(j for c in V[len(V) - t:] for j in c)
    return head + [tail]


def average_certificate(I: CspInstance, V: Partition, M: SymbolArray, family: str = "general",
                        t: int | None = None, sample: int | str = 16, seed: int = 0) -> Fraction:
    """Lower bound on the average differential ratio of I obtained from the
    multiset of solutions y(V, x, M_r).

    family:
      general: M restricted to each constraint's colors is an orthogonal array.
      Eq:      tables are shift invariant, M is uniform over shift classes there.
      Iqt:     tables are balanced t-wise independent; the last t classes of V
               are merged and M (one column per merged class) ends with a zero column.
      Oq:      tables average to their mean over uniform shifts; every support
               lies in one class whose column of M is uniform.
    The identity sum_r v(y(V, x, M_r))/R = mean is then checked exactly on
    ``sample`` random x (or on all x with sample="all")."""
    if M.q != I.q:
        raise ShapeMismatch(f"array alphabet {M.q} differs from instance alphabet {I.q}")
    if family == "Oq":
        # supports sit inside one class, so only a partition is needed
        if sorted(j for cls in V for j in cls) != list(range(1, I.n + 1)):
            raise NotAStrongColoring("the classes do not partition the variables")
    elif not is_strong_coloring(I, V):
        raise NotAStrongColoring("the partition is not a strong coloring of the instance")
    if family == "Iqt":
        if t is None:
            raise ShapeMismatch("family Iqt needs the strength t")
        V = merge_last_classes(V, t)
        if any(r[-1] != 0 for r in M.rows):
            raise StructuralCheckFailed(-1, "last column of the array is not all zeros")
    if M.nu != len(V):
        raise ShapeMismatch(f"array has {M.nu} columns for {len(V)} classes")
    color = {j: c for c, cls in enumerate(V) for j in cls}
    q = I.q
    for i, con in enumerate(I.constraints):
        cols = [color[j] for j in con.support]
        by_class = False
        if family == "Eq":
            if not is_in_Eq(con.table):
                raise StructuralCheckFailed(i, "table is not shift invariant")
            by_class = True
        elif family == "Iqt":
            if not is_in_Iqt(con.table, min(t, con.table.arity)):
                raise StructuralCheckFailed(i, f"table is not balanced {t}-wise independent")
            cols = [c for c in cols if c != len(V) - 1]
        elif family == "Oq":
            if not is_in_Oq(con.table):
                raise StructuralCheckFailed(i, "table does not average to its mean over shifts")
            if len(set(cols)) != 1 and cols:
                raise StructuralCheckFailed(i, "support spans several classes")
            cols = cols[:1]
        elif family != "general":
            raise ShapeMismatch(f"unknown family {family!r}")
        bad = _projection_uniform(M.project(cols), q, len(cols), by_class)
        if bad is not None:
            raise StructuralCheckFailed(i, bad)
    mean = I.mean()
    if sample == "all":
        points = list(all_words(q, I.n))
    else:
        rng = random.Random(seed)
        points = [tuple(rng.randrange(q) for _ in range(I.n)) for _ in range(int(sample))]
    for x in points:
        avg = sum((evaluate(I, y_partition(V, x, r, q)) for r in M.rows), Fraction(0)) / M.R
        if avg != mean:
            raise StructuralCheckFailed(-1, f"average over the multiset at {x} is {avg}, mean is {mean}")
    zero = (0,) * M.nu
    if family == "Eq":
        return q * shift_class_frequency(M)[zero]
    return frequency(M)[zero]


# ------------------------------------------------------------------ alphabet reduction

def order_preserving(T: Sequence[int]) -> tuple[int, ...]:
    return tuple(sorted(T))


def subinstance(I: CspInstance, T: Sequence[int], bijections=None) -> CspInstance:
    """Restrict every variable to the symbols T; variable j reads symbol z as
    bijections[j-1][z] (order preserving by default)."""
    T = tuple(T)
    p = len(T)
    if len(set(T)) != p or any(not 0 <= a < I.q for a in T):
        raise BadSubset(f"invalid symbol subset {T} for alphabet {I.q}")
    if p < 2:
        raise BadSubset("subsets must hold at least two symbols")
    if bijections is None:
        bijections = [order_preserving(T)] * I.n
    if len(bijections) != I.n or any(sorted(b) != sorted(T) for b in bijections):
        raise BadSubset("each variable needs a bijection onto the subset")
    cons = []
    for c in I.constraints:
        maps = [bijections[j - 1] for j in c.support]
        table = ConstraintTable.from_function(
            p, c.table.arity, lambda z, t=c.table, maps=maps: t([m[e] for m, e in zip(maps, z)]))
        cons.append(Constraint(c.support, c.weight, table))
    return CspInstance(p, I.n, I.goal, tuple(cons))


def map_back(z: Sequence[int], T: Sequence[int], bijections=None) -> tuple[int, ...]:
    if bijections is None:
        order = order_preserving(T)
        return tuple(order[e] for e in z)
    return tuple(b[e] for b, e in zip(bijections, z))


def subsets_from_pair(pair: ArrayPair, q: int, p: int) -> list[tuple[int, ...]]:
    """Symbol sets of the psi rows, each padded with the smallest unused symbols
    up to size p; distinct and sorted."""
    out = set()
    for r in pair.psi.rows:
        vals = set(r)
        for a in range(q):
            if len(vals) >= p:
                break
            vals.add(a)
        out.add(tuple(sorted(vals)))
    return sorted(out)


@dataclass(frozen=True)
class ReductionOutcome:
    best_solution: tuple[int, ...]
    best_value: Fraction
    certified_ratio: Fraction | None
    subinstances_solved: int
    subsets: tuple[tuple[int, ...], ...]
    pair_ratio: Fraction
    chain_bound: Fraction | None = None
    achieved_ratio: Fraction | None = None


def _solve_base(J: CspInstance, base: str):
    if base == "brute":
        rep = brute_force(J)
        return rep.argopt, rep.opt
    if base in ("local_search", "ls"):
        from .neighborhood import local_search
        x = local_search(J, (0,) * J.n, "B1")
        return x, evaluate(J, x)
    raise ReductionError(f"unknown base solver {base!r}")


def reduce_and_solve(I: CspInstance, p: int, pair: ArrayPair | str = "auto", base: str = "brute",
                     oracle: OracleReport | bool | None = None, relaxed: bool = False,
                     base_ratio: Fraction | None = None) -> ReductionOutcome:
    """Solve I through its restrictions to p-symbol subsets taken from an array pair.

    The certified ratio is R*/R of the pair times ``base_ratio`` (1 for the
    brute-force base; None for local search unless a ratio is supplied)."""
    k = I.arity
    q = I.q
    if p > q or p < 2:
        raise ReductionError(f"need 2 <= p <= q, got p={p}, q={q}")
    if k > p:
        raise ArityExceedsP(f"constraint arity {k} exceeds p={p}")
    if base_ratio is None and base == "brute":
        base_ratio = Fraction(1)
    sign = 1 if I.goal == "max" else -1
    if p == q:
        x, val = _solve_base(I, base)
        cert = PairCertificate("arpa", q, p, max(k, 1), 1, 1)
        subsets = [tuple(range(q))]
        opts = [val]
    else:
        if isinstance(pair, str):
            if pair != "auto":
                raise ReductionError(f"unknown pair selector {pair!r}")
            if relaxed:
                raise ReductionError("the relaxed pipeline needs an explicit relaxed pair")
            pair = auto_arpa(q, p, k)
        cert = verify_relaxed_arpa(pair, q, p, k) if relaxed else verify_arpa(pair, q, p, k)
        if relaxed and not all(is_in_Eq(c.table) for c in I.constraints):
            raise NotAnArpa("relaxed pairs apply to shift-invariant instances only")
        subsets = subsets_from_pair(pair, q, p)
        x, val = None, None
        opts = []
        for T in subsets:
            z, zval = _solve_base(subinstance(I, T), base)
            cand = map_back(z, T)
            opts.append(zval)
            if x is None or sign * zval > sign * val or (zval == val and cand < x):
                x, val = cand, zval
    assert evaluate(I, x) == val
    certified = cert.ratio * base_ratio if base_ratio is not None else None
    chain = achieved = None
    if oracle:
        rep = brute_force(I) if oracle is True else oracle
        chain = (cert.R_star * rep.opt + (cert.R - cert.R_star) * rep.wor) / cert.R
        if base == "brute":
            # the best subinstance optimum reaches the averaged bound
            if sign * max(opts, key=lambda v: sign * v) < sign * chain:
                raise AssertionError(f"subinstance optimum below the pair bound {chain}")
        achieved = differential_ratio(rep, val)
        if achieved is not None and certified is not None and achieved < certified:
            raise AssertionError(f"achieved ratio {achieved} below certified {certified}")
    return ReductionOutcome(tuple(x), val, certified, len(subsets), tuple(subsets), cert.ratio, chain, achieved)


def normalize_relaxed(pair: ArrayPair) -> ArrayPair:
    """Shift every phi row so that its first entry is 0."""
    q = pair.q
    phi = SymbolArray(q, pair.nu, tuple(class_rep(r, q) for r in pair.phi.rows))
    return ArrayPair(pair.psi, phi)


# ------------------------------------------------------------------ alphabet enlargement

def _check_maps(maps, d: int, q: int, n: int) -> None:
    if d <= q:
        raise ReductionError(f"enlargement needs d > q, got d={d}, q={q}")
    if len(maps) != n:
        raise ReductionError(f"need one map per variable, got {len(maps)} for {n}")
    for m in maps:
        if len(m) != d or any(not 0 <= e < q for e in m):
            raise ReductionError(f"map {m} is not a function from {d} to {q} symbols")
        if len(set(m)) != q:
            raise NotSurjective(f"map {m} misses some symbol of 0..{q - 1}")


def enlarge_alphabet(I: CspInstance, d: int, maps) -> CspInstance:
    """d-ary instance whose variable j reads symbol z as maps[j-1][z]."""
    maps = [tuple(m) for m in maps]
    _check_maps(maps, d, I.q, I.n)
    cons = []
    for c in I.constraints:
        ms = [maps[j - 1] for j in c.support]
        table = ConstraintTable.from_function(
            d, c.table.arity, lambda z, t=c.table, ms=ms: t([m[e] for m, e in zip(ms, z)]))
        cons.append(Constraint(c.support, c.weight, table))
    return CspInstance(d, I.n, I.goal, tuple(cons))


def pull_back(maps, z: Sequence[int]) -> tuple[int, ...]:
    return tuple(m[e] for m, e in zip(maps, z))


def all_surjections(d: int, q: int) -> list[tuple[int, ...]]:
    return [m for m in product(range(q), repeat=d) if len(set(m)) == q]


def random_surjections(rng: random.Random, n: int, d: int, q: int) -> list[tuple[int, ...]]:
    pool = all_surjections(d, q)
    return [rng.choice(pool) for _ in range(n)]
