"""Alphabet reduction pairs (ARPAs), their Boolean cover analogues (CPAs),
the T/S counting numbers, and the inductive constructions."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

from .designs import (BadShape, SymbolArray, Word, balance_violation,
                      class_rep, frequency, shift_class_frequency)
from .errors import OadiffError, VerificationError


class BadArgs(OadiffError):
    pass


class IndexOutOfRange(OadiffError):
    pass


class AlphabetMismatch(OadiffError):
    pass


class NotAnArpa(VerificationError):
    pass


class MissingIdentityRow(NotAnArpa):
    pass


class PsiRowTooRich(NotAnArpa):
    def __init__(self, row: int, word: Word, limit: int):
        super().__init__(f"psi row {row} {word} exceeds the limit {limit}")
        self.row = row
        self.word = word


class NotBalanced(NotAnArpa):
    def __init__(self, J, v, margin):
        super().__init__(f"difference not balanced at columns {J}, word {v} (margin {margin})")
        self.J = J
        self.v = v


class PhiRowWeightViolation(NotAnArpa):
    def __init__(self, row: int, word: Word):
        super().__init__(f"phi row {row} {word} has a forbidden weight")
        self.row = row
        self.word = word


# ---------------------------------------------------------------- numbers

def t_number(a: int, b: int) -> int:
    """T(a, b) = sum_{r=0}^{b} C(a, r) C(a-1-r, b-r), defined for a > b >= 0."""
    if not (a > b >= 0):
        raise BadArgs(f"T(a, b) needs a > b >= 0, got ({a}, {b})")
    return sum(comb(a, r) * comb(a - 1 - r, b - r) for r in range(b + 1))


def s_number(a: int, b: int, c: int) -> int:
    """S(a, b, c) = sum_r (-1)^r C(a, r) C(b-r, c-r)."""
    if min(a, b, c) < 0 or c > b:
        raise BadArgs(f"S(a, b, c) needs a, b, c >= 0 and c <= b, got ({a}, {b}, {c})")
    return sum((-1) ** r * comb(a, r) * comb(b - r, c - r) for r in range(min(a, c) + 1))


def alpha_word(q: int, J) -> Word:
    """Word of length q-1: position j holds j when j is in J, else q-1."""
    J = set(J)
    for j in J:
        if not 0 <= j <= q - 2:
            raise IndexOutOfRange(f"index {j} outside 0..{q - 2}")
    return tuple(j if j in J else q - 1 for j in range(q - 1))


# ---------------------------------------------------------------- types

@dataclass(frozen=True)
class ArrayPair:
    psi: SymbolArray
    phi: SymbolArray

    def __post_init__(self):
        if self.psi.q != self.phi.q or self.psi.nu != self.phi.nu:
            raise BadShape("psi and phi must share alphabet and column count")
        if self.psi.R != self.phi.R:
            raise BadShape(f"psi has {self.psi.R} rows but phi has {self.phi.R}")

    @property
    def q(self) -> int:
        return self.psi.q

    @property
    def nu(self) -> int:
        return self.psi.nu

    @property
    def R(self) -> int:
        return self.psi.R

    def same_rows(self, other: "ArrayPair") -> bool:
        return self.psi.same_rows(other.psi) and self.phi.same_rows(other.phi)


def make_pair(q: int, psi_rows, phi_rows) -> ArrayPair:
    psi_rows = [tuple(r) for r in psi_rows]
    phi_rows = [tuple(r) for r in phi_rows]
    nu = len(psi_rows[0]) if psi_rows else len(phi_rows[0])
    return ArrayPair(SymbolArray(q, nu, tuple(psi_rows)), SymbolArray(q, nu, tuple(phi_rows)))


@dataclass(frozen=True)
class PairCertificate:
    kind: str
    q_or_n: int
    p_or_d: int
    k: int
    R: int
    R_star: int

    def __post_init__(self):
        if not self.R >= self.R_star >= 1:
            raise BadArgs(f"certificate needs R >= R* >= 1, got R={self.R}, R*={self.R_star}")

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.R_star, self.R)


# ---------------------------------------------------------------- verification

def _check_shape(pair: ArrayPair, q: int, nu: int) -> None:
    if pair.q != q or pair.nu != nu:
        raise BadShape(f"expected {nu} columns over alphabet {q}, "
                       f"got {pair.nu} columns over alphabet {pair.q}")
    if pair.R == 0:
        raise MissingIdentityRow("the pair has no rows")


def _check_balance(f, k: int) -> None:
    bad = balance_violation(f, k)
    if bad is not None:
        raise NotBalanced(*bad)


def verify_arpa(pair: ArrayPair, q: int, p: int, k: int) -> PairCertificate:
    """Check the three ARPA conditions and return the pair's (R, R*)."""
    _check_shape(pair, q, q)
    if not 1 <= k <= q:
        raise BadArgs(f"strength {k} outside 1..{q}")
    ident = tuple(range(q))
    r_star = sum(1 for r in pair.phi.rows if r == ident)
    if r_star == 0:
        raise MissingIdentityRow(f"phi has no row {ident}")
    for i, r in enumerate(pair.psi.rows):
        if len(set(r)) > p:
            raise PsiRowTooRich(i, r, p)
    _check_balance(frequency(pair.psi) - frequency(pair.phi), k)
    return PairCertificate("arpa", q, p, k, pair.R, r_star)


def verify_relaxed_arpa(pair: ArrayPair, q: int, p: int, k: int) -> PairCertificate:
    """As verify_arpa, but identity rows count up to a uniform shift and the
    balance test applies to the shift-class frequencies."""
    _check_shape(pair, q, q)
    if not 1 <= k <= q:
        raise BadArgs(f"strength {k} outside 1..{q}")
    ident = tuple(range(q))
    r_star = sum(1 for r in pair.phi.rows if class_rep(r, q) == ident)
    if r_star == 0:
        raise MissingIdentityRow("phi has no uniform shift of the identity row")
    for i, r in enumerate(pair.psi.rows):
        if len(set(r)) > p:
            raise PsiRowTooRich(i, r, p)
    _check_balance(shift_class_frequency(pair.psi) - shift_class_frequency(pair.phi), k)
    return PairCertificate("relaxed_arpa", q, p, k, pair.R, r_star)


def _verify_boolean(pair: ArrayPair, n: int, d: int, k: int, kind: str) -> PairCertificate:
    _check_shape(pair, 2, n)
    if not 1 <= k <= n:
        raise BadArgs(f"strength {k} outside 1..{n}")
    ones = (1,) * n
    r_star = sum(1 for r in pair.phi.rows if r == ones)
    if r_star == 0:
        raise MissingIdentityRow("phi has no all-ones row")
    for i, r in enumerate(pair.psi.rows):
        if sum(r) > d:
            raise PsiRowTooRich(i, r, d)
    if kind == "bar_cpa":
        for i, r in enumerate(pair.phi.rows):
            w = sum(r)
            if w != n and w > d:
                raise PhiRowWeightViolation(i, r)
    _check_balance(frequency(pair.psi) - frequency(pair.phi), k)
    return PairCertificate(kind, n, d, k, pair.R, r_star)


def verify_cpa(pair: ArrayPair, n: int, d: int, k: int) -> PairCertificate:
    return _verify_boolean(pair, n, d, k, "cpa")


def verify_bar_cpa(pair: ArrayPair, n: int, d: int, k: int) -> PairCertificate:
    return _verify_boolean(pair, n, d, k, "bar_cpa")


# ---------------------------------------------------------------- constructions

def extend_arpa(pair: ArrayPair, k: int) -> ArrayPair:
    """Grow a (q-1, k)-ARPA of strength k into a (q, k)-ARPA of strength k.

    The first column is copied into a new last column, the identity rows of
    phi are completed, then for h = k-1 down to 0 and every h-subset J of
    {0..q-2} (lexicographic) C(q-h-2, k-h-1) * R* rows (alpha(J), q-1) and
    (alpha(J), 0) are added, to psi and phi or the other way round depending
    on the parity of k-1-h.
    """
    old_q = pair.q
    try:
        cert = verify_arpa(pair, old_q, k, k)
    except NotAnArpa as exc:
        raise NotAnArpa(f"input is not a ({old_q}, {k})-ARPA of strength {k}: {exc}") from exc
    q = old_q + 1
    r_star = cert.R_star
    old_ident = tuple(range(q - 1)) + (0,)
    new_ident = tuple(range(q))
    psi = [r + (r[0],) for r in pair.psi.rows]
    phi = [r + (r[0],) for r in pair.phi.rows]
    phi = [new_ident if r == old_ident else r for r in phi]
    for h in range(k - 1, -1, -1):
        mult = comb(q - h - 2, k - h - 1) * r_star
        for J in combinations(range(q - 1), h):
            a = alpha_word(q, J)
            top, bottom = a + (q - 1,), a + (0,)
            if (k - 1 - h) % 2 == 0:
                psi += [top] * mult
                phi += [bottom] * mult
            else:
                phi += [top] * mult
                psi += [bottom] * mult
    return ArrayPair(SymbolArray(q, q, tuple(psi)), SymbolArray(q, q, tuple(phi)))


def build_arpa(q: int, k: int) -> tuple[ArrayPair, PairCertificate]:
    """(q, k)-ARPA of strength k with R = (T(q,k)+1)/2 rows and R* = 1."""
    if not q >= k >= 1:
        raise BadArgs(f"need q >= k >= 1, got q={q}, k={k}")
    base = tuple(range(k))
    pair = make_pair(k, [base], [base])
    rows = 1
    for i in range(k + 1, q + 1):
        pair = extend_arpa(pair, k)
        rows += t_number(i - 1, k - 1)
        assert pair.R == rows
    if q > k:
        assert 2 * pair.R == t_number(q, k) + 1
    cert = verify_arpa(pair, q, k, k)
    assert cert.R_star == 1
    return pair, cert


def pad_arpa(pair: ArrayPair, q: int, p: int, k: int) -> ArrayPair:
    """Lift a (q-p+k, k)-ARPA to a (q, p)-ARPA by appending q-p+k, ..., q-1."""
    if not p > k:
        raise BadArgs(f"padding needs p > k, got p={p}, k={k}")
    small = q - p + k
    verify_arpa(pair, small, k, k)
    suffix = tuple(range(small, q))
    psi = tuple(r + suffix for r in pair.psi.rows)
    phi = tuple(r + suffix for r in pair.phi.rows)
    out = ArrayPair(SymbolArray(q, q, psi), SymbolArray(q, q, phi))
    verify_arpa(out, q, p, k)
    return out


def auto_arpa(q: int, p: int, k: int) -> ArrayPair:
    """Constructive (q, p)-ARPA of strength k: build on q-p+k symbols, then pad."""
    if not q >= p >= k >= 1:
        raise BadArgs(f"need q >= p >= k >= 1, got ({q}, {p}, {k})")
    pair, _ = build_arpa(q - p + k, k)
    return pad_arpa(pair, q, p, k) if p > k else pair


def sigma_n(M: SymbolArray) -> SymbolArray:
    """Boolean array marking the positions j where a row holds the symbol j."""
    if M.q != M.nu:
        raise AlphabetMismatch(f"needs as many columns as symbols, got q={M.q}, nu={M.nu}")
    return SymbolArray(2, M.nu, tuple(tuple(int(e == j) for j, e in enumerate(r)) for r in M.rows))


def sigma_pair(pair: ArrayPair) -> ArrayPair:
    return ArrayPair(sigma_n(pair.psi), sigma_n(pair.phi))


def _indicator(n: int, ones) -> Word:
    ones = set(ones)
    return tuple(int(j in ones) for j in range(n))


def build_cpa(n: int, k: int) -> tuple[ArrayPair, PairCertificate]:
    """Boolean cover pair grown column by column (the Boolean counterpart of
    build_arpa); each weight-a word, a <= k, ends up C(n-1-a, k-a) times."""
    if not n > k >= 1:
        raise BadArgs(f"need n > k >= 1, got n={n}, k={k}")
    psi: list[list[int]] = [[1] * k]
    phi: list[list[int]] = [[1] * k]
    for i in range(k + 1, n + 1):
        for r in psi:
            r.append(0)
        for r in phi:
            r.append(0)
        phi[0][-1] = 1
        for size in range(k):
            mult = comb(i - 2 - size, k - 1 - size)
            if mult == 0:
                continue
            for J in combinations(range(i - 1), size):
                with_i = list(_indicator(i, J + (i - 1,)))
                without = list(_indicator(i, J))
                if size % 2 != k % 2:
                    psi += [list(with_i) for _ in range(mult)]
                    phi += [list(without) for _ in range(mult)]
                else:
                    phi += [list(with_i) for _ in range(mult)]
                    psi += [list(without) for _ in range(mult)]
    pair = ArrayPair(SymbolArray(2, n, tuple(map(tuple, psi))),
                     SymbolArray(2, n, tuple(map(tuple, phi))))
    assert 2 * pair.R == t_number(n, k) + 1
    cert = verify_bar_cpa(pair, n, k, k)
    return pair, cert


def cpa_profile_expected(n: int, k: int) -> tuple[dict[Word, int], dict[Word, int]]:
    """Multiplicities predicted by the closed-form description of build_cpa."""
    psi: dict[Word, int] = {}
    phi: dict[Word, int] = {(1,) * n: 1}
    for a in range(k + 1):
        mult = comb(n - 1 - a, k - a)
        if mult == 0:
            continue
        side = psi if a % 2 == k % 2 else phi
        for ones in combinations(range(n), a):
            side[_indicator(n, ones)] = mult
    return psi, phi


# ---------------------------------------------------------------- text format

def format_pair(pair: ArrayPair, kind: str = "arpa") -> str:
    lines = [f"PAIR {kind} {pair.q} {pair.nu} {pair.R}", "PSI"]
    lines += [" ".join(map(str, r)) for r in pair.psi.rows]
    lines.append("PHI")
    lines += [" ".join(map(str, r)) for r in pair.phi.rows]
    return "\n".join(lines) + "\n"


def parse_pair(text: str) -> tuple[str, ArrayPair]:
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    try:
        head = lines[0]
        if head[0] != "PAIR" or len(head) != 5:
            raise ValueError("missing PAIR header")
        kind = head[1]
        q, nu, R = map(int, head[2:])
        if lines[1] != ["PSI"] or lines[R + 2] != ["PHI"]:
            raise ValueError("missing PSI/PHI section")
        psi = tuple(tuple(map(int, ln)) for ln in lines[2:R + 2])
        phi = tuple(tuple(map(int, ln)) for ln in lines[R + 3:])
    except (IndexError, ValueError) as exc:
        raise BadShape(f"malformed pair text: {exc}") from None
    if len(phi) != R:
        raise BadShape(f"header announces {R} rows, phi has {len(phi)}")
    return kind, ArrayPair(SymbolArray(q, nu, psi), SymbolArray(q, nu, phi))
