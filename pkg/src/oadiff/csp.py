"""Weighted k-CSP-q instances with dense rational tables, exact evaluation, a
brute-force oracle, function-family predicates and instance generators.

Variables are 1-based in supports and in the JSON format; solution vectors are
plain tuples indexed from 0.  Tables are dense in lexicographic order with the
first coordinate most significant.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence

from . import budget
from .designs import FrequencyFunction, all_words, is_balanced_t_independent
from .errors import OadiffError


class CspError(OadiffError):
    pass


class BadArgs(CspError):
    pass


class BadInstance(CspError):
    pass


class BadSolutionLength(CspError):
    pass


class SymbolOutOfRange(CspError):
    pass


class BadStrength(CspError):
    pass


class BadShiftLength(CspError):
    pass


class AlphabetNotBinary(CspError):
    pass


Vector = tuple[int, ...]


def _word_index(y: Sequence[int], q: int) -> int:
    idx = 0
    for e in y:
        idx = idx * q + e
    return idx


@dataclass(frozen=True)
class ConstraintTable:
    q: int
    arity: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if self.q < 2 or self.arity < 1:
            raise BadArgs(f"need q >= 2 and arity >= 1, got q={self.q}, arity={self.arity}")
        vals = tuple(Fraction(v) for v in self.values)
        if len(vals) != self.q ** self.arity:
            raise BadArgs(f"table needs {self.q ** self.arity} entries, got {len(vals)}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, q: int, arity: int, fn) -> "ConstraintTable":
        return cls(q, arity, tuple(Fraction(fn(y)) for y in all_words(q, arity)))

    def __call__(self, y: Sequence[int]) -> Fraction:
        return self.values[_word_index(y, self.q)]

    def mean(self) -> Fraction:
        return sum(self.values, Fraction(0)) / len(self.values)

    def items(self):
        return zip(all_words(self.q, self.arity), self.values)


@dataclass(frozen=True)
class Constraint:
    support: tuple[int, ...]
    weight: Fraction
    table: ConstraintTable

    def __post_init__(self):
        support = tuple(int(j) for j in self.support)
        if len(support) != self.table.arity:
            raise BadInstance(f"support {support} does not match table arity {self.table.arity}")
        if any(a >= b for a, b in zip(support, support[1:])):
            raise BadInstance(f"support {support} must be strictly increasing")
        weight = Fraction(self.weight)
        if weight <= 0:
            raise BadInstance(f"weights must be positive, got {weight}")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "weight", weight)


@dataclass(frozen=True)
class CspInstance:
    q: int
    n: int
    goal: str
    constraints: tuple[Constraint, ...]

    def __post_init__(self):
        if self.q < 2 or self.n < 1:
            raise BadInstance(f"need q >= 2 and n >= 1, got q={self.q}, n={self.n}")
        if self.goal not in ("max", "min"):
            raise BadInstance(f"goal must be max or min, got {self.goal!r}")
        cons = tuple(self.constraints)
        for c in cons:
            if c.table.q != self.q:
                raise BadInstance(f"table alphabet {c.table.q} differs from instance alphabet {self.q}")
            if c.support and not (1 <= c.support[0] and c.support[-1] <= self.n):
                raise BadInstance(f"support {c.support} outside 1..{self.n}")
        object.__setattr__(self, "constraints", cons)

    @property
    def m(self) -> int:
        return len(self.constraints)

    @property
    def arity(self) -> int:
        return max((len(c.support) for c in self.constraints), default=0)

    def mean(self) -> Fraction:
        """Average value over uniformly random solutions, in closed form."""
        return sum((c.weight * c.table.mean() for c in self.constraints), Fraction(0))

    def total_weight(self) -> Fraction:
        return sum((c.weight for c in self.constraints), Fraction(0))


def make_instance(q: int, n: int, constraints: Iterable, goal: str = "max") -> CspInstance:
    """Build from (support, weight, table) triples or Constraint objects."""
    cons = []
    for c in constraints:
        if isinstance(c, Constraint):
            cons.append(c)
        else:
            support, weight, table = c
            cons.append(Constraint(tuple(support), Fraction(weight), table))
    return CspInstance(q, n, goal, tuple(cons))


def _check_solution(I: CspInstance, x: Sequence[int]) -> None:
    if len(x) != I.n:
        raise BadSolutionLength(f"solution has {len(x)} entries, instance has {I.n} variables")
    for e in x:
        if not 0 <= e < I.q:
            raise SymbolOutOfRange(f"symbol {e} outside 0..{I.q - 1}")


def evaluate(I: CspInstance, x: Sequence[int]) -> Fraction:
    _check_solution(I, x)
    return sum((c.weight * c.table([x[j - 1] for j in c.support]) for c in I.constraints), Fraction(0))


def better(I: CspInstance, a: Fraction, b: Fraction) -> bool:
    """True when value a is strictly better than b for the instance's goal."""
    return a > b if I.goal == "max" else a < b


# ------------------------------------------------------------------ oracle

@dataclass(frozen=True)
class OracleReport:
    goal: str
    opt: Fraction
    wor: Fraction
    mean: Fraction
    argopt: Vector
    argwor: Vector

    @property
    def diameter(self) -> Fraction:
        return abs(self.opt - self.wor)

    @property
    def avd(self) -> Fraction | None:
        """Average differential ratio; None when opt = wor."""
        return differential_ratio(self, self.mean)


def differential_ratio(report: OracleReport, value: Fraction) -> Fraction | None:
    if report.opt == report.wor:
        return None
    return (Fraction(value) - report.wor) / (report.opt - report.wor)


_CHUNK = 1 << 18


def _int_tables(I: CspInstance):
    """Integer-scaled weighted tables sharing one denominator."""
    scale = 1
    for c in I.constraints:
        for v in c.table.values:
            scale = math.lcm(scale, (c.weight * v).denominator)
    tables = [[int(c.weight * v * scale) for v in c.table.values] for c in I.constraints]
    return scale, tables


def enumerate_values(I: CspInstance):
    """Yield (first_index, numpy array of scaled values) over all q^n solutions in
    lexicographic order, plus the common scale as the first item."""
    import numpy as np

    size = I.q ** I.n
    budget.check(size, budget.enum_budget(), "brute force enumeration")
    scale, tables = _int_tables(I)
    bound = sum(max((abs(v) for v in t), default=0) for t in tables) * size
    dtype = np.int64 if bound < 2 ** 62 else object
    arrays = [np.array(t, dtype=dtype) for t in tables]
    yield scale
    powers = [I.q ** (I.n - j) for j in range(1, I.n + 1)]
    for start in range(0, size, _CHUNK):
        idx = np.arange(start, min(size, start + _CHUNK), dtype=np.int64)
        digits = [(idx // p) % I.q for p in powers]
        vals = np.zeros(len(idx), dtype=dtype)
        for c, arr in zip(I.constraints, arrays):
            key = np.zeros(len(idx), dtype=np.int64)
            for j in c.support:
                key = key * I.q + digits[j - 1]
            vals = vals + arr[key]
        yield start, vals


def index_to_vector(idx: int, q: int, n: int) -> Vector:
    out = []
    for _ in range(n):
        out.append(idx % q)
        idx //= q
    return tuple(reversed(out))


def brute_force(I: CspInstance) -> OracleReport:
    """Exact opt/wor by full enumeration; ties go to the lexicographically
    smallest solution.  The enumerated mean must equal the closed form."""
    gen = enumerate_values(I)
    scale = next(gen)
    hi = lo = None
    hi_at = lo_at = 0
    total = 0
    for start, vals in gen:
        i_max = int(vals.argmax())
        i_min = int(vals.argmin())
        if hi is None or vals[i_max] > hi:
            hi, hi_at = vals[i_max], start + i_max
        if lo is None or vals[i_min] < lo:
            lo, lo_at = vals[i_min], start + i_min
        total += int(sum(int(v) for v in vals)) if vals.dtype == object else int(vals.sum())
    size = I.q ** I.n
    mean = Fraction(total, size * scale)
    closed = I.mean()
    if mean != closed:
        raise AssertionError(f"enumerated mean {mean} differs from closed form {closed}")
    hi_v, lo_v = Fraction(int(hi), scale), Fraction(int(lo), scale)
    hi_x, lo_x = index_to_vector(hi_at, I.q, I.n), index_to_vector(lo_at, I.q, I.n)
    if I.goal == "max":
        return OracleReport("max", hi_v, lo_v, mean, hi_x, lo_x)
    return OracleReport("min", lo_v, hi_v, mean, lo_x, hi_x)


def all_values(I: CspInstance) -> list[Fraction]:
    """Every solution value, indexed like ``index_to_vector``."""
    gen = enumerate_values(I)
    scale = next(gen)
    out: list[Fraction] = []
    for _, vals in gen:
        out.extend(Fraction(int(v), scale) for v in vals)
    return out


# ------------------------------------------------------------------ families

def shift_table(table: ConstraintTable, v: Sequence[int]) -> ConstraintTable:
    """The table y -> table(y + v)."""
    if len(v) != table.arity:
        raise BadShiftLength(f"shift has length {len(v)}, table arity is {table.arity}")
    q = table.q
    return ConstraintTable.from_function(q, table.arity, lambda y: table([(a + b) % q for a, b in zip(y, v)]))


def _uniform_shift(table: ConstraintTable, a: int) -> ConstraintTable:
    return shift_table(table, (a,) * table.arity)


def is_in_Eq(table: ConstraintTable) -> bool:
    """Invariant under adding the same symbol to every coordinate."""
    return all(_uniform_shift(table, a).values == table.values for a in range(1, table.q))


def is_in_Oq(table: ConstraintTable) -> bool:
    """Averaging over the q uniform shifts gives the constant mean."""
    e_part, _ = decompose_EO(table)
    r = table.mean()
    return all(v == r for v in e_part.values)


def is_in_Iqt(table: ConstraintTable, t: int) -> bool:
    """Fixing any t coordinates leaves the mean unchanged."""
    if not 1 <= t <= table.arity:
        raise BadStrength(f"strength {t} outside 1..{table.arity}")
    f = FrequencyFunction(table.q, table.arity, dict(table.items()))
    return is_balanced_t_independent(f, t)


def decompose_EO(table: ConstraintTable) -> tuple[ConstraintTable, ConstraintTable]:
    """Split into a shift-invariant part and a part whose shift average is zero."""
    q = table.q
    shifted = [_uniform_shift(table, a).values for a in range(q)]
    e_vals = tuple(sum(col, Fraction(0)) / q for col in zip(*shifted))
    e_part = ConstraintTable(q, table.arity, e_vals)
    o_part = ConstraintTable(q, table.arity, tuple(a - b for a, b in zip(table.values, e_vals)))
    return e_part, o_part


def xnor_affine_check(table: ConstraintTable) -> bool:
    """Binary table equal to a * XNOR + b: constant on each parity class."""
    if table.q != 2:
        raise AlphabetNotBinary(f"needs q = 2, got q = {table.q}")
    by_parity: dict[int, set] = {0: set(), 1: set()}
    for y, v in table.items():
        by_parity[sum(y) % 2].add(v)
    return all(len(s) <= 1 for s in by_parity.values())


# ------------------------------------------------------------------ named tables

def all_equal(k: int, q: int) -> ConstraintTable:
    return ConstraintTable.from_function(q, k, lambda y: int(len(set(y)) == 1))


def all_zeros(k: int, q: int) -> ConstraintTable:
    return ConstraintTable.from_function(q, k, lambda y: int(not any(y)))


def zero_sum(k: int, q: int) -> ConstraintTable:
    return ConstraintTable.from_function(q, k, lambda y: int(sum(y) % q == 0))


def xnor(k: int) -> ConstraintTable:
    return ConstraintTable.from_function(2, k, lambda y: int(sum(y) % 2 == 0))


def xor(k: int) -> ConstraintTable:
    return ConstraintTable.from_function(2, k, lambda y: int(sum(y) % 2 == 1))


def linear_equation(coeffs: Sequence[int], rhs: int, q: int) -> ConstraintTable:
    return ConstraintTable.from_function(
        q, len(coeffs), lambda y: int(sum(a * e for a, e in zip(coeffs, y)) % q == rhs % q))


def constant_table(k: int, q: int, value=1) -> ConstraintTable:
    return ConstraintTable(q, k, (Fraction(value),) * q ** k)


# ------------------------------------------------------------------ transforms

def lift_to_Eq(I: CspInstance) -> CspInstance:
    """Add a variable z (index n+1) and replace P(x_J) by P(x_J - z); every new
    table is shift invariant and v(lift, (x, z)) = v(I, x - z)."""
    q, n = I.q, I.n
    cons = []
    for c in I.constraints:
        t = c.table
        lifted = ConstraintTable.from_function(
            q, t.arity + 1, lambda y, t=t: t([(e - y[-1]) % q for e in y[:-1]]))
        cons.append(Constraint(c.support + (n + 1,), c.weight, lifted))
    return CspInstance(q, n + 1, I.goal, tuple(cons))


def strong_coloring(I: CspInstance) -> list[list[int]]:
    """Greedy coloring of the co-occurrence graph in variable order; an upper
    bound on the strong chromatic number, not the optimum."""
    nbrs: dict[int, set[int]] = {j: set() for j in range(1, I.n + 1)}
    for c in I.constraints:
        for a in c.support:
            nbrs[a].update(b for b in c.support if b != a)
    color: dict[int, int] = {}
    for j in range(1, I.n + 1):
        taken = {color[b] for b in nbrs[j] if b in color}
        color[j] = next(c for c in range(I.n) if c not in taken)
    classes: list[list[int]] = [[] for _ in range(max(color.values()) + 1)]
    for j in range(1, I.n + 1):
        classes[color[j]].append(j)
    return classes


def is_strong_coloring(I: CspInstance, V: Sequence[Sequence[int]]) -> bool:
    seen = sorted(j for cls in V for j in cls)
    if seen != list(range(1, I.n + 1)):
        return False
    color = {j: i for i, cls in enumerate(V) for j in cls}
    for c in I.constraints:
        used = [color[j] for j in c.support]
        if len(set(used)) != len(used):
            return False
    return True


def conditional_expectation(I: CspInstance) -> Vector:
    """Fix variables in order, each to the symbol whose exact conditional
    expectation is best (smallest symbol on ties)."""
    fixed: dict[int, int] = {}
    by_var: dict[int, list[Constraint]] = {j: [] for j in range(1, I.n + 1)}
    for c in I.constraints:
        for j in c.support:
            by_var[j].append(c)

    def cond_mean(c: Constraint) -> Fraction:
        free = [pos for pos, j in enumerate(c.support) if j not in fixed]
        total = Fraction(0)
        y = [fixed.get(j, 0) for j in c.support]
        for vals in product(range(I.q), repeat=len(free)):
            for pos, v in zip(free, vals):
                y[pos] = v
            total += c.table(y)
        return c.weight * total / I.q ** len(free)

    for j in range(1, I.n + 1):
        best = None
        for a in range(I.q):
            fixed[j] = a
            val = sum((cond_mean(c) for c in by_var[j]), Fraction(0))
            if best is None or better(I, val, best[0]):
                best = (val, a)
        fixed[j] = best[1]
    return tuple(fixed[j] for j in range(1, I.n + 1))


# ------------------------------------------------------------------ generators

def gen_I_qkn(q: int, k: int, n: int) -> CspInstance:
    """AllEqual on every k-subset of q*n variables."""
    if q < 2 or k < 1 or n < 1 or k > q * n:
        raise BadArgs(f"invalid parameters q={q}, k={k}, n={n}")
    table = all_equal(k, q)
    return make_instance(q, q * n, [(J, 1, table) for J in combinations(range(1, q * n + 1), k)])


def gen_tilde_I(n: int) -> CspInstance:
    """Equality on every pair of 2n Boolean variables except the pairs (2l-1, 2l)."""
    if n < 1:
        raise BadArgs(f"need n >= 1, got {n}")
    table = all_equal(2, 2)
    pairs = [J for J in combinations(range(1, 2 * n + 1), 2) if not (J[0] % 2 == 1 and J[1] == J[0] + 1)]
    return make_instance(2, 2 * n, [(J, 1, table) for J in pairs])


def gen_J_qkn(q: int, k: int, n: int) -> CspInstance:
    """AllZeros on every k-subset of n variables."""
    if q < 2 or not 1 <= k <= n:
        raise BadArgs(f"invalid parameters q={q}, k={k}, n={n}")
    table = all_zeros(k, q)
    return make_instance(q, n, [(J, 1, table) for J in combinations(range(1, n + 1), k)])


def _random_supports(rng: random.Random, n: int, k: int, m: int) -> list[tuple[int, ...]]:
    pool = list(combinations(range(1, n + 1), k))
    if m > len(pool):
        raise BadArgs(f"only {len(pool)} distinct supports of size {k} on {n} variables, asked for {m}")
    return sorted(rng.sample(pool, m))


_SMALL_DENOMS = (1, 2, 3, 4)


def random_table(rng: random.Random, q: int, k: int, kind: str = "predicate") -> ConstraintTable:
    """kind: predicate (0/1 entries), rational (small denominators), or Eq
    (a 0/1 predicate constant on uniform-shift classes)."""
    if kind == "predicate":
        return ConstraintTable(q, k, tuple(rng.randint(0, 1) for _ in range(q ** k)))
    if kind == "rational":
        return ConstraintTable(q, k, tuple(Fraction(rng.randint(0, 6), rng.choice(_SMALL_DENOMS))
                                           for _ in range(q ** k)))
    if kind == "Eq":
        reps: dict = {}
        vals = []
        for y in all_words(q, k):
            rep = tuple((e - y[0]) % q for e in y)
            if rep not in reps:
                reps[rep] = rng.randint(0, 1)
            vals.append(reps[rep])
        return ConstraintTable(q, k, tuple(vals))
    raise BadArgs(f"unknown table kind {kind!r}")


def planted_partition(n: int, parts: int) -> list[list[int]]:
    """Variables dealt round-robin into ``parts`` classes."""
    return [[j for j in range(1, n + 1) if (j - 1) % parts == c] for c in range(parts)]


def gen_random(q: int, k: int, n: int, m: int, seed: int, kind: str = "predicate",
               goal: str = "max", parts: int | None = None) -> CspInstance:
    """m constraints of arity k on distinct random supports, reproducible from seed.
    With ``parts``, supports only use variables from distinct classes of
    ``planted_partition(n, parts)``, which is then a strong coloring."""
    if q < 2 or not 1 <= k <= n or m < 0:
        raise BadArgs(f"invalid parameters q={q}, k={k}, n={n}, m={m}")
    rng = random.Random(seed)
    if parts is None:
        supports = _random_supports(rng, n, k, m)
    else:
        pool = [J for J in combinations(range(1, n + 1), k)
                if len({(j - 1) % parts for j in J}) == k]
        if m > len(pool):
            raise BadArgs(f"only {len(pool)} admissible supports, asked for {m}")
        supports = sorted(rng.sample(pool, m))
    return make_instance(q, n, [(J, 1, random_table(rng, q, k, kind)) for J in supports], goal)


def gen_e2lin2(n: int, m: int, seed: int, bipartite: bool = False) -> CspInstance:
    """Random equalities / disequalities between pairs of Boolean variables,
    weights in 1..3.  With ``bipartite`` every pair joins the two halves."""
    if n < 2:
        raise BadArgs(f"need n >= 2, got {n}")
    rng = random.Random(seed)
    if bipartite:
        half = n // 2
        pool = [(a, b) for a in range(1, half + 1) for b in range(half + 1, n + 1)]
        if m > len(pool):
            raise BadArgs(f"only {len(pool)} bipartite pairs available, asked for {m}")
        supports = sorted(rng.sample(pool, m))
    else:
        supports = _random_supports(rng, n, 2, m)
    eq, ne = xnor(2), xor(2)
    return make_instance(2, n, [(J, rng.randint(1, 3), eq if rng.random() < 0.5 else ne) for J in supports])


# ------------------------------------------------------------------ JSON

def _fmt(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def instance_to_json(I: CspInstance) -> str:
    doc = {
        "q": I.q, "n": I.n, "goal": I.goal,
        "constraints": [{"vars": list(c.support), "weight": _fmt(c.weight),
                         "table": [_fmt(v) for v in c.table.values]} for c in I.constraints],
    }
    return json.dumps(doc, indent=1)


def instance_from_json(text: str) -> CspInstance:
    try:
        doc = json.loads(text)
        q, n = int(doc["q"]), int(doc["n"])
        cons = []
        for c in doc["constraints"]:
            support = tuple(int(j) for j in c["vars"])
            table = ConstraintTable(q, len(support), tuple(Fraction(str(v)) for v in c["table"]))
            cons.append(Constraint(support, Fraction(str(c.get("weight", 1))), table))
        return CspInstance(q, n, doc.get("goal", "max"), tuple(cons))
    except (KeyError, TypeError, ValueError, json.JSONDecodeError, BadArgs) as exc:
        raise BadInstance(f"malformed instance: {exc}") from None
