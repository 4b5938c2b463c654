"""Arrays over Z_q, their word frequencies, and orthogonal-array style checks.

Words are tuples of ints; all orderings are lexicographic with the first
coordinate most significant.  Every value is an exact ``Fraction``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Iterator, Mapping

from .errors import OadiffError

Word = tuple[int, ...]


class DesignError(OadiffError):
    pass


class EmptyArray(DesignError):
    pass


class BadStrength(DesignError):
    pass


class BadShape(DesignError):
    pass


class OddVariantNeedsOddQ(DesignError):
    pass


def all_words(q: int, length: int) -> Iterator[Word]:
    """Every word of Z_q^length in lexicographic order."""
    return product(range(q), repeat=length)


def shift(word: Iterable[int], a: int, q: int) -> Word:
    return tuple((x + a) % q for x in word)


def class_rep(word: Word, q: int) -> Word:
    """Representative of the uniform-shift class of ``word`` with a leading 0."""
    if not word:
        return word
    return shift(word, -word[0], q)


@dataclass(frozen=True)
class SymbolArray:
    q: int
    nu: int
    rows: tuple[Word, ...] = ()

    def __post_init__(self):
        if self.q < 1:
            raise BadShape(f"alphabet size must be positive, got {self.q}")
        if self.nu < 0:
            raise BadShape(f"column count must be non-negative, got {self.nu}")
        rows = tuple(tuple(int(e) for e in r) for r in self.rows)
        for i, r in enumerate(rows):
            if len(r) != self.nu:
                raise BadShape(f"row {i} has {len(r)} entries, expected {self.nu}")
            for e in r:
                if not 0 <= e < self.q:
                    raise BadShape(f"row {i} entry {e} outside 0..{self.q - 1}")
        object.__setattr__(self, "rows", rows)

    @property
    def R(self) -> int:
        return len(self.rows)

    def canonical(self) -> tuple[Word, ...]:
        """Sorted rows; two arrays are equal as multisets iff these agree."""
        return tuple(sorted(self.rows))

    def same_rows(self, other: "SymbolArray") -> bool:
        return (self.q, self.nu) == (other.q, other.nu) and self.canonical() == other.canonical()

    def counts(self) -> Counter:
        return Counter(self.rows)

    def project(self, cols: Iterable[int]) -> list[Word]:
        cols = tuple(cols)
        return [tuple(r[j] for j in cols) for r in self.rows]

    def __iter__(self):
        return iter(self.rows)

    def __len__(self):
        return len(self.rows)


def make_array(q: int, rows: Iterable[Iterable[int]], nu: int | None = None) -> SymbolArray:
    rows = [tuple(r) for r in rows]
    if nu is None:
        if not rows:
            raise BadShape("cannot infer the column count of an empty array")
        nu = len(rows[0])
    return SymbolArray(q, nu, tuple(rows))


@dataclass(frozen=True)
class FrequencyFunction:
    """Signed rational function on Z_q^nu with finite support (zeros are not stored)."""
    q: int
    nu: int
    support: Mapping[Word, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for w, val in self.support.items():
            w = tuple(w)
            if len(w) != self.nu or any(not 0 <= e < self.q for e in w):
                raise BadShape(f"invalid word {w} for q={self.q}, nu={self.nu}")
            val = Fraction(val)
            if val != 0:
                clean[w] = val
        object.__setattr__(self, "support", clean)

    def __getitem__(self, word) -> Fraction:
        return self.support.get(tuple(word), Fraction(0))

    def total(self) -> Fraction:
        return sum(self.support.values(), Fraction(0))

    def items(self):
        return sorted(self.support.items())

    def __sub__(self, other: "FrequencyFunction") -> "FrequencyFunction":
        if (self.q, self.nu) != (other.q, other.nu):
            raise BadShape("frequency functions live on different spaces")
        diff = dict(self.support)
        for w, val in other.support.items():
            diff[w] = diff.get(w, Fraction(0)) - val
        return FrequencyFunction(self.q, self.nu, diff)


def _need_rows(M: SymbolArray) -> None:
    if M.R == 0:
        raise EmptyArray("the array has no rows")


def frequency(M: SymbolArray) -> FrequencyFunction:
    _need_rows(M)
    return FrequencyFunction(M.q, M.nu, {w: Fraction(c, M.R) for w, c in M.counts().items()})


def shift_class_frequency(M: SymbolArray) -> FrequencyFunction:
    """Average of the word frequency over the q uniform shifts of its argument."""
    _need_rows(M)
    q = M.q
    acc: dict[Word, Fraction] = {}
    for w, c in M.counts().items():
        for a in range(q):
            s = shift(w, a, q)
            acc[s] = acc.get(s, Fraction(0)) + Fraction(c, M.R * q)
    return FrequencyFunction(q, M.nu, acc)


def _check_strength(t: int, nu: int) -> None:
    if not 1 <= t <= nu:
        raise BadStrength(f"strength {t} outside 1..{nu}")


def balance_violation(f: FrequencyFunction, t: int):
    """First (J, v, margin) in lexicographic scan where the t-margin of f is
    not total/q^t, or None when f is balanced t-wise independent."""
    _check_strength(t, f.nu)
    target = f.total() / f.q ** t
    for J in combinations(range(f.nu), t):
        margin: dict[Word, Fraction] = {}
        for w, val in f.support.items():
            key = tuple(w[j] for j in J)
            margin[key] = margin.get(key, Fraction(0)) + val
        for v in all_words(f.q, t):
            got = margin.get(v, Fraction(0))
            if got != target:
                return J, v, got
    return None


def is_balanced_t_independent(f: FrequencyFunction, t: int) -> bool:
    return balance_violation(f, t) is None


def is_orthogonal_array(M: SymbolArray, t: int) -> bool:
    """Direct count: every t-column projection holds each word R/q^t times."""
    _check_strength(t, M.nu)
    size = M.q ** t
    if M.R % size:
        return False
    want = M.R // size
    for J in combinations(range(M.nu), t):
        counts = Counter(M.project(J))
        if len(counts) != size and want > 0:
            return False
        if any(c != want for c in counts.values()):
            return False
    return True


def is_difference_scheme(M: SymbolArray, t: int) -> bool:
    """Direct count over shift classes {v, v+1, ..., v+(q-1)} of each t-projection."""
    _check_strength(t, M.nu)
    q = M.q
    size = q ** (t - 1)
    if M.R % size:
        return False
    want = M.R // size
    for J in combinations(range(M.nu), t):
        counts = Counter(class_rep(w, q) for w in M.project(J))
        for v in all_words(q, t - 1):
            if counts.get((0,) + v, 0) != want:
                return False
    return True


def max_frequency(M: SymbolArray, mode: str = "plain") -> tuple[Word, Fraction]:
    """Argmax word and value of the row frequency ("plain") or of
    q * shift-class frequency over words with a leading 0 ("shift_class")."""
    _need_rows(M)
    if mode == "plain":
        counts = M.counts()
    elif mode in ("shift_class", "shift"):
        counts = Counter(class_rep(r, M.q) for r in M.rows)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    best = min(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return best[0], Fraction(best[1], M.R)


def transform_A(M: SymbolArray) -> SymbolArray:
    """Keep the rows whose last entry is 0, then drop the last column."""
    if M.nu < 2:
        raise BadShape("dropping the last column would leave no columns")
    return SymbolArray(M.q, M.nu - 1, tuple(r[:-1] for r in M.rows if r[-1] == 0))


def transform_B(M: SymbolArray) -> SymbolArray:
    """Append a column of zeros."""
    return SymbolArray(M.q, M.nu + 1, tuple(r + (0,) for r in M.rows))


def transform_C(M: SymbolArray) -> SymbolArray:
    """Replace every row by its q uniform shifts."""
    return SymbolArray(M.q, M.nu, tuple(shift(r, a, M.q) for r in M.rows for a in range(M.q)))


def zerosum_oa(q: int, t: int) -> SymbolArray:
    """Words of length t+1 whose entries sum to 0 mod q."""
    if q < 2 or t < 1:
        raise DesignError(f"need q >= 2 and t >= 1, got q={q}, t={t}")
    rows = tuple(w + ((-sum(w)) % q,) for w in all_words(q, t))
    return SymbolArray(q, t + 1, rows)


def equation_ds(q: int, nu_half: int, variant: str = "even") -> SymbolArray:
    """Solutions with a leading 0 of a shift-invariant linear equation mod q.

    even: y_1+...+y_h - y_{h+1} - ... - y_{2h} = 0            (2h columns)
    odd:  y_1+...+y_{h-1} + 2 y_h - y_{h+1} - ... - y_{2h+1} = 0 (2h+1 columns)
    """
    if q < 2 or nu_half < 1:
        raise DesignError(f"need q >= 2 and nu_half >= 1, got q={q}, nu_half={nu_half}")
    h = nu_half
    if variant == "even":
        coeffs = [1] * h + [-1] * h
    elif variant == "odd":
        if q % 2 == 0:
            raise OddVariantNeedsOddQ(f"the odd variant needs an odd alphabet, got q={q}")
        coeffs = [1] * (h - 1) + [2] + [-1] * (h + 1)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    nu = len(coeffs)
    rows = []
    for tail in all_words(q, nu - 1):
        y = (0,) + tail
        if sum(c * e for c, e in zip(coeffs, y)) % q == 0:
            rows.append(y)
    return SymbolArray(q, nu, tuple(rows))


def format_array(M: SymbolArray) -> str:
    lines = [f"{M.q} {M.nu} {M.R}"]
    lines += [" ".join(map(str, r)) for r in M.rows]
    return "\n".join(lines) + "\n"


def parse_array(text: str) -> SymbolArray:
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise BadShape("empty array file")
    try:
        q, nu, R = map(int, lines[0])
        rows = tuple(tuple(int(x) for x in ln) for ln in lines[1:])
    except ValueError as exc:
        raise BadShape(f"malformed array text: {exc}") from None
    if len(rows) != R:
        raise BadShape(f"header announces {R} rows, found {len(rows)}")
    return SymbolArray(q, nu, rows)
