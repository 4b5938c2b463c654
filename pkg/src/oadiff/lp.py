"""Exact rational linear and integer programming, plus the model builders for
the extremal design numbers (rho, rho_E, F, E, gamma, gamma_E, delta).

Two engines solve a continuous model:

* ``exact``: a two-phase dense tableau simplex over ``Fraction`` with Bland's
  least-index rule, so it always terminates.
* ``certified``: HiGHS (through scipy) proposes a primal point and dual
  multipliers in floating point; both are rounded to nearby rationals and the
  result is accepted only if the primal point is exactly feasible and the
  dual multipliers prove, in exact arithmetic, that no better value exists.
  If rounding fails to produce such a certificate the exact engine runs.

``auto`` picks ``exact`` for small tableaus and ``certified`` otherwise.
"""
from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from . import budget
from .arpa import ArrayPair
from .designs import SymbolArray, all_words, class_rep
from .errors import BudgetError, OadiffError


class LpError(OadiffError):
    pass


class BadArgs(LpError):
    pass


class NonIntegerAfterScale(LpError):
    pass


OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"
EXACT_CELL_LIMIT = 5_000


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass
class Variable:
    name: str
    lo: Fraction = Fraction(0)
    hi: Fraction | None = None
    integer: bool = False


@dataclass
class Constraint:
    coeffs: dict[int, Fraction]
    sense: str
    rhs: Fraction
    name: str = ""


@dataclass
class LpSolution:
    status: str
    value: Fraction | None = None
    assignment: dict[str, Fraction] = field(default_factory=dict)
    engine: str = ""
    nodes: int = 0

    def __getitem__(self, name: str) -> Fraction:
        return self.assignment[name]


class LpModel:
    """Linear program with named variables, rational data, and an objective sense."""

    def __init__(self, name: str = "model", sense: str = "max"):
        self.name = name
        self.variables: list[Variable] = []
        self.index: dict[str, int] = {}
        self.constraints: list[Constraint] = []
        self.objective: dict[int, Fraction] = {}
        self.sense = sense
        self.meta: dict = {}

    def add_var(self, name: str, lo=0, hi=None, integer: bool = False) -> int:
        if name in self.index:
            raise BadArgs(f"duplicate variable {name}")
        lo = _frac(lo)
        hi = None if hi is None else _frac(hi)
        if hi is not None and hi < lo:
            raise BadArgs(f"bounds of {name} are inconsistent: {lo} > {hi}")
        self.index[name] = len(self.variables)
        self.variables.append(Variable(name, lo, hi, integer))
        return self.index[name]

    def _resolve(self, coeffs) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for key, val in coeffs.items():
            j = self.index[key] if isinstance(key, str) else key
            if not 0 <= j < len(self.variables):
                raise BadArgs(f"unknown variable {key}")
            out[j] = out.get(j, Fraction(0)) + _frac(val)
        return {j: v for j, v in out.items() if v != 0}

    def add_constraint(self, coeffs, sense: str, rhs, name: str = "") -> None:
        if sense not in ("<=", ">=", "=="):
            raise BadArgs(f"unknown constraint sense {sense!r}")
        self.constraints.append(Constraint(self._resolve(coeffs), sense, _frac(rhs), name))

    def set_objective(self, coeffs, sense: str) -> None:
        if sense not in ("max", "min"):
            raise BadArgs(f"unknown objective sense {sense!r}")
        self.objective = self._resolve(coeffs)
        self.sense = sense

    @property
    def has_integers(self) -> bool:
        return any(v.integer for v in self.variables)

    def relaxed(self) -> "LpModel":
        m = copy.deepcopy(self)
        for v in m.variables:
            v.integer = False
        return m

    def objective_value(self, values: list[Fraction]) -> Fraction:
        return sum((c * values[j] for j, c in self.objective.items()), Fraction(0))

    def is_feasible(self, values: list[Fraction]) -> bool:
        for j, v in enumerate(self.variables):
            if values[j] < v.lo or (v.hi is not None and values[j] > v.hi):
                return False
        for con in self.constraints:
            lhs = sum((c * values[j] for j, c in con.coeffs.items()), Fraction(0))
            if con.sense == "<=" and lhs > con.rhs:
                return False
            if con.sense == ">=" and lhs < con.rhs:
                return False
            if con.sense == "==" and lhs != con.rhs:
                return False
        return True

    def dump(self) -> str:
        """Plain-text listing of the model for audit."""
        names = [v.name for v in self.variables]

        def form(coeffs):
            return " ".join(f"{'+' if c > 0 else '-'} {abs(c)} {names[j]}" for j, c in sorted(coeffs.items())) or "0"

        lines = [f"MODEL {self.name}", f"{self.sense.upper()} {form(self.objective)}", "SUBJECT TO"]
        for con in self.constraints:
            label = f"{con.name}: " if con.name else ""
            lines.append(f"  {label}{form(con.coeffs)} {con.sense} {con.rhs}")
        lines.append("BOUNDS")
        for v in self.variables:
            hi = "inf" if v.hi is None else str(v.hi)
            kind = " integer" if v.integer else ""
            lines.append(f"  {v.lo} <= {v.name} <= {hi}{kind}")
        return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ exact engine

class _Tableau:
    """Dense simplex tableau for: maximize c.x, A x = b, x >= 0, b >= 0."""

    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.ncols = len(rows[0]) if rows else 0
        self.blocked: set[int] = set()
        self.d: list[Fraction] = []
        self.z = Fraction(0)

    def price(self, cost: list[Fraction]) -> None:
        d = list(cost)
        z = Fraction(0)
        for i, bvar in enumerate(self.basis):
            cb = cost[bvar]
            if cb:
                row = self.rows[i]
                for j in range(self.ncols):
                    if row[j]:
                        d[j] -= cb * row[j]
                z += cb * self.rhs[i]
        self.d = d
        self.z = z

    def pivot(self, r: int, s: int) -> None:
        prow = self.rows[r]
        piv = prow[s]
        if piv != 1:
            inv = 1 / piv
            for j in range(self.ncols):
                if prow[j]:
                    prow[j] *= inv
            self.rhs[r] *= inv
        nz = [j for j in range(self.ncols) if prow[j]]
        br = self.rhs[r]
        for i, row in enumerate(self.rows):
            if i != r:
                f = row[s]
                if f:
                    for j in nz:
                        row[j] -= f * prow[j]
                    self.rhs[i] -= f * br
        f = self.d[s]
        if f:
            for j in nz:
                self.d[j] -= f * prow[j]
            self.z += f * br
        self.basis[r] = s

    def run(self) -> str:
        """Bland's rule: least entering index, ties in the ratio test by least basic index."""
        while True:
            s = next((j for j in range(self.ncols) if self.d[j] > 0 and j not in self.blocked), None)
            if s is None:
                return OPTIMAL
            best = None
            for i, row in enumerate(self.rows):
                a = row[s]
                if a > 0:
                    key = (self.rhs[i] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            self.pivot(best[1], s)


def _solve_exact(model: LpModel) -> LpSolution:
    nvar = len(model.variables)
    for v in model.variables:
        if v.lo is None:
            raise BadArgs(f"variable {v.name} needs a finite lower bound")
    # shift x = lo + y, y >= 0; upper bounds become rows
    raw: list[tuple[dict[int, Fraction], str, Fraction]] = []
    for con in model.constraints:
        rhs = con.rhs - sum((c * model.variables[j].lo for j, c in con.coeffs.items()), Fraction(0))
        raw.append((con.coeffs, con.sense, rhs))
    for j, v in enumerate(model.variables):
        if v.hi is not None:
            raw.append(({j: Fraction(1)}, "<=", v.hi - v.lo))
    m = len(raw)
    n_slack = sum(1 for _, s, _ in raw if s != "==")
    ncols = nvar + n_slack + m  # one artificial column per row, some unused
    rows, rhs, basis = [], [], []
    artificial = []
    slack_col = nvar
    for i, (coeffs, sense, b) in enumerate(raw):
        row = [Fraction(0)] * ncols
        sign = -1 if b < 0 else 1
        for j, c in coeffs.items():
            row[j] = sign * c
        b = sign * b
        if sense != "==":
            s = 1 if sense == "<=" else -1
            row[slack_col] = Fraction(sign * s)
            col = slack_col
            slack_col += 1
            if row[col] == 1:
                rows.append(row)
                rhs.append(b)
                basis.append(col)
                continue
        art = nvar + n_slack + i
        row[art] = Fraction(1)
        artificial.append(art)
        rows.append(row)
        rhs.append(b)
        basis.append(art)
    used = set(range(nvar + n_slack)) | set(artificial)
    tab = _Tableau(rows, rhs, basis)
    tab.blocked = set(range(ncols)) - used
    art_set = set(artificial)
    if artificial:
        cost1 = [Fraction(-1) if j in art_set else Fraction(0) for j in range(ncols)]
        tab.price(cost1)
        tab.run()
        if tab.z < 0:
            return LpSolution(INFEASIBLE, engine="exact")
        # drive remaining artificials out of the basis, drop redundant rows
        i = 0
        while i < len(tab.rows):
            if tab.basis[i] in art_set:
                row = tab.rows[i]
                s = next((j for j in range(nvar + n_slack) if row[j] != 0), None)
                if s is None:
                    del tab.rows[i], tab.rhs[i], tab.basis[i]
                    continue
                tab.pivot(i, s)
            i += 1
        tab.blocked |= art_set
    sign = 1 if model.sense == "max" else -1
    cost = [Fraction(0)] * ncols
    for j, c in model.objective.items():
        cost[j] = sign * c
    tab.price(cost)
    status = tab.run()
    if status == UNBOUNDED:
        return LpSolution(UNBOUNDED, engine="exact")
    y = [Fraction(0)] * ncols
    for i, bvar in enumerate(tab.basis):
        y[bvar] = tab.rhs[i]
    values = [model.variables[j].lo + y[j] for j in range(nvar)]
    return _finish(model, values, "exact")


def _finish(model: LpModel, values: list[Fraction], engine: str) -> LpSolution:
    assert model.is_feasible(values), "internal error: returned point is infeasible"
    return LpSolution(OPTIMAL, model.objective_value(values),
                      {v.name: values[j] for j, v in enumerate(model.variables)}, engine)


# ------------------------------------------------------------------ certified engine


try:  # gmpy2 rationals are much faster than Fraction for the elimination
    from gmpy2 import mpq as _rat
except ImportError:  # pragma: no cover
    _rat = Fraction


def _solve_system(rows, rhs, guess):
    """Exact solution of a linear system given as sparse rows; columns left
    free by the elimination take their rounded guess.  None if inconsistent."""
    rows = [{j: _rat(a.numerator, a.denominator) for j, a in r.items()} for r in rows]
    rhs = [_rat(b.numerator, b.denominator) for b in rhs]
    zero = _rat(0)
    pivots: list[tuple[int, int]] = []
    used = [False] * len(rows)
    cols = sorted({j for r in rows for j in r})
    for col in cols:
        r = next((i for i in range(len(rows)) if not used[i] and rows[i].get(col)), None)
        if r is None:
            continue
        used[r] = True
        prow = rows[r]
        inv = 1 / prow[col]
        for j in prow:
            prow[j] *= inv
        rhs[r] *= inv
        for i in range(len(rows)):
            if i != r and rows[i].get(col):
                row = rows[i]
                f = row[col]
                for j, a in prow.items():
                    val = row.get(j, zero) - f * a
                    if val:
                        row[j] = val
                    else:
                        row.pop(j, None)
                rhs[i] -= f * rhs[r]
        pivots.append((r, col))
    for i in range(len(rows)):
        if not used[i] and rhs[i] != 0:
            return None
    pivot_cols = {c for _, c in pivots}
    sol = {j: guess(j) for j in cols if j not in pivot_cols}
    for r, col in pivots:
        acc = rhs[r]
        for j, a in rows[r].items():
            if j != col:
                acc -= a * _rat(sol[j].numerator, sol[j].denominator)
        sol[col] = Fraction(int(acc.numerator), int(acc.denominator))
    return sol


def _near(a: float, b: float) -> bool:
    return abs(a - b) <= 1e-9 * max(1.0, abs(b))


def _snap_primal(model: LpModel, xf):
    """Rebuild an exact vertex from a floating point one: variables sitting on a
    bound are fixed there, the tight constraints are solved exactly for the rest."""
    nvar = len(model.variables)
    x: list[Fraction | None] = [None] * nvar
    for j, v in enumerate(model.variables):
        if _near(xf[j], float(v.lo)):
            x[j] = v.lo
        elif v.hi is not None and _near(xf[j], float(v.hi)):
            x[j] = v.hi
    rows, rhs = [], []
    for con in model.constraints:
        lhs = sum(float(a) * xf[j] for j, a in con.coeffs.items())
        if con.sense != "==" and not _near(lhs, float(con.rhs)):
            continue
        row = {j: a for j, a in con.coeffs.items() if x[j] is None}
        b = con.rhs - sum((a * x[j] for j, a in con.coeffs.items() if x[j] is not None), Fraction(0))
        rows.append(row)
        rhs.append(b)
    sol = _solve_system(rows, rhs, lambda j: Fraction(float(xf[j])).limit_denominator(10 ** 6))
    if sol is None:
        return None
    for j in range(nvar):
        if x[j] is None:
            x[j] = sol.get(j, Fraction(float(xf[j])).limit_denominator(10 ** 6))
    return x if model.is_feasible(x) else None


def _snap_dual(model: LpModel, x, free, yf, sign):
    """Exact multipliers: zero on slack constraints and on those the float
    solve left at zero; reduced cost zero on every variable strictly inside
    its bounds or whose float reduced cost vanishes."""
    nvar = len(model.variables)
    df = [0.0] * nvar
    for j, c in model.objective.items():
        df[j] = sign * float(c)
    active = []
    for i, con in enumerate(model.constraints):
        for j, a in con.coeffs.items():
            df[j] -= yf[i] * float(a)
        lhs = sum((a * x[j] for j, a in con.coeffs.items()), Fraction(0))
        if con.sense == "==" or (lhs == con.rhs and not _near(yf[i], 0.0)):
            active.append(i)
    tight = set(free) | {j for j in range(nvar) if _near(df[j], 0.0)}
    col_of = {i: k for k, i in enumerate(active)}
    rows = {j: {} for j in sorted(tight)}
    for i in active:
        for j, a in model.constraints[i].coeffs.items():
            if j in rows:
                rows[j][col_of[i]] = a
    rhs = [sign * model.objective.get(j, Fraction(0)) for j in rows]
    sol = _solve_system(list(rows.values()), rhs,
                        lambda k: Fraction(float(yf[active[k]])).limit_denominator(10 ** 6))
    if sol is None:
        return None
    y = [Fraction(0)] * len(model.constraints)
    for k, i in enumerate(active):
        y[i] = sol.get(k, Fraction(float(yf[i])).limit_denominator(10 ** 6))
    return y


def _dual_bound(model: LpModel, cons_dual: list[Fraction], sign: int):
    """Exact objective bound implied by constraint multipliers, or None when the
    multipliers have the wrong signs.  Works on the max form sign * objective."""
    nvar = len(model.variables)
    # max c.x ; multipliers y_i: sign conditions y >= 0 for <=, y <= 0 for >=
    d = [Fraction(0)] * nvar
    for j, c in model.objective.items():
        d[j] = sign * c
    bound = Fraction(0)
    for con, y in zip(model.constraints, cons_dual):
        if y == 0:
            continue
        if (con.sense == "<=" and y < 0) or (con.sense == ">=" and y > 0):
            return None
        for j, a in con.coeffs.items():
            d[j] -= y * a
        bound += y * con.rhs
    # remaining reduced costs are absorbed by the variable bounds
    for j, v in enumerate(model.variables):
        if d[j] > 0:
            if v.hi is None:
                return None
            bound += d[j] * v.hi
        elif d[j] < 0:
            bound += d[j] * v.lo
    return bound


def _solve_certified(model: LpModel) -> LpSolution:
    import numpy as np
    from scipy.optimize import linprog
    from scipy.sparse import csr_matrix

    nvar = len(model.variables)
    sign = 1 if model.sense == "max" else -1
    c = np.zeros(nvar)
    for j, v in model.objective.items():
        c[j] = -sign * float(v)
    ub_rows, eq_rows = [], []
    for i, con in enumerate(model.constraints):
        (eq_rows if con.sense == "==" else ub_rows).append(i)

    def block(idx, flip):
        data, ri, ci, b = [], [], [], []
        for r, i in enumerate(idx):
            con = model.constraints[i]
            s = -1.0 if flip(con) else 1.0
            for j, a in con.coeffs.items():
                data.append(s * float(a))
                ri.append(r)
                ci.append(j)
            b.append(s * float(con.rhs))
        if not idx:
            return None, None
        return csr_matrix((data, (ri, ci)), shape=(len(idx), nvar)), np.array(b)

    A_ub, b_ub = block(ub_rows, lambda con: con.sense == ">=")
    A_eq, b_eq = block(eq_rows, lambda con: False)
    bounds = [(float(v.lo), None if v.hi is None else float(v.hi)) for v in model.variables]
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=bounds, method="highs-ds")
    if res.status != 0:
        # infeasible/unbounded claims are re-derived exactly
        return _solve_exact(model)
    duals = [0.0] * len(model.constraints)
    if A_ub is not None:
        for r, i in enumerate(ub_rows):
            flip = model.constraints[i].sense == ">="
            # scipy marginals are d(min objective)/d(b) <= 0 for A_ub x <= b
            duals[i] = -float(res.ineqlin.marginals[r]) * (-1 if flip else 1)
    if A_eq is not None:
        for r, i in enumerate(eq_rows):
            duals[i] = -float(res.eqlin.marginals[r])
    x = _snap_primal(model, res.x)
    if x is not None:
        value = sign * model.objective_value(x)
        free = [j for j, v in enumerate(model.variables) if v.lo < x[j] and (v.hi is None or x[j] < v.hi)]
        y = _snap_dual(model, x, free, duals, sign)
        if y is not None and _dual_bound(model, y, sign) == value:
            return _finish(model, x, "certified")
    return _solve_exact(model)


def _cells(model: LpModel) -> int:
    rows = len(model.constraints) + sum(1 for v in model.variables if v.hi is not None)
    return rows * (len(model.variables) + rows)


def solve_lp(model: LpModel, engine: str = "auto") -> LpSolution:
    """Exact optimum of the continuous relaxation of ``model``."""
    if engine == "auto":
        engine = "exact" if _cells(model) <= EXACT_CELL_LIMIT else "certified"
    if engine == "exact":
        return _solve_exact(model)
    if engine == "certified":
        return _solve_certified(model)
    raise BadArgs(f"unknown engine {engine!r}")


def solve_ilp(model: LpModel, node_limit: int = 10 ** 6, engine: str = "auto") -> LpSolution:
    """Branch and bound over exact relaxations; branches on the fractional
    integer variable with the lexicographically smallest name, down branch first."""
    sign = 1 if model.sense == "max" else -1
    order = sorted((v.name, j) for j, v in enumerate(model.variables) if v.integer)
    best: LpSolution | None = None
    stack = [model.relaxed()]
    nodes = 0
    saw_unbounded = False
    while stack:
        node = stack.pop()
        nodes += 1
        if nodes > node_limit:
            raise BudgetError(f"branch and bound exceeded {node_limit} nodes")
        sol = solve_lp(node, engine)
        if sol.status == INFEASIBLE:
            continue
        if sol.status == UNBOUNDED:
            saw_unbounded = True
            continue
        if best is not None and sign * sol.value <= sign * best.value:
            continue
        frac_var = next(((name, j) for name, j in order
                         if sol.assignment[name].denominator != 1), None)
        if frac_var is None:
            best = sol
            continue
        name, j = frac_var
        val = sol.assignment[name]
        up = copy.deepcopy(node)
        up.variables[j].lo = Fraction(math.ceil(val))
        down = copy.deepcopy(node)
        down.variables[j].hi = Fraction(math.floor(val))
        if down.variables[j].hi < down.variables[j].lo:
            stack.append(up)
        else:
            stack.extend([up, down])
    if best is None:
        return LpSolution(UNBOUNDED if saw_unbounded else INFEASIBLE, engine="bb", nodes=nodes)
    best.engine = "bb"
    best.nodes = nodes
    return best


def solve(model: LpModel, **kw) -> LpSolution:
    return solve_ilp(model, **kw) if model.has_integers else solve_lp(model, **kw)


# ------------------------------------------------------------------ model builders

def _wname(prefix: str, u) -> str:
    return f"{prefix}({','.join(map(str, u))})"


def _check_design_args(nu: int, q: int, t: int) -> None:
    if q < 2 or not 1 <= t <= nu:
        raise BadArgs(f"need q >= 2 and 1 <= t <= nu, got nu={nu}, q={q}, t={t}")


def _design_model(nu: int, q: int, t: int, shift_class: bool, integer: bool, name: str) -> LpModel:
    _check_design_args(nu, q, t)
    n_words = q ** (nu - 1) if shift_class else q ** nu
    budget.check(n_words, budget.lp_budget(), name)
    m = LpModel(name)
    words = [w for w in all_words(q, nu) if not shift_class or w[0] == 0]
    for u in words:
        m.add_var(_wname("P", u), integer=integer)
    m.add_var("R", lo=0)
    zero = _wname("P", (0,) * nu)
    coeffs = {_wname("P", u): 1 for u in words}
    coeffs["R"] = -1
    m.add_constraint(coeffs, "==", 0, "total")
    for u in words[1:]:
        m.add_constraint({zero: 1, _wname("P", u): -1}, ">=", 0, f"zero_max{u}")
    if shift_class:
        classes = [(0,) + v for v in all_words(q, t - 1)]
        share = Fraction(1, q ** (t - 1))
    else:
        classes = list(all_words(q, t))
        share = Fraction(1, q ** t)
    for J in combinations(range(nu), t):
        groups: dict = {v: [] for v in classes}
        for u in words:
            key = tuple(u[j] for j in J)
            groups[class_rep(key, q) if shift_class else key].append(_wname("P", u))
        for v in classes:
            coeffs = {name: 1 for name in groups[v]}
            coeffs["R"] = -share
            m.add_constraint(coeffs, "==", 0, f"balance{J}{v}")
    m.meta = {"kind": "ds" if shift_class else "oa", "q": q, "nu": nu, "t": t,
              "words": {_wname("P", u): u for u in words}, "zero": zero}
    return m


def model_rho(nu: int, q: int, t: int) -> LpModel:
    """Largest word frequency in an OA(R, nu, q, t)."""
    m = _design_model(nu, q, t, False, False, f"rho({nu},{q},{t})")
    m.add_constraint({"R": 1}, "==", 1, "unit")
    m.set_objective({m.meta["zero"]: 1}, "max")
    return m


def model_rho_E(nu: int, q: int, t: int) -> LpModel:
    """Largest shift-class frequency in a difference scheme of strength t."""
    m = _design_model(nu, q, t, True, False, f"rho_E({nu},{q},{t})")
    m.add_constraint({"R": 1}, "==", 1, "unit")
    m.set_objective({m.meta["zero"]: 1}, "max")
    return m


def model_F(nu: int, q: int, t: int) -> LpModel:
    """Fewest runs of an OA(R, nu, q, t)."""
    m = _design_model(nu, q, t, False, True, f"F({nu},{q},{t})")
    m.variables[m.index["R"]].lo = Fraction(1)
    m.set_objective({"R": 1}, "min")
    return m


def model_E(nu: int, q: int, t: int) -> LpModel:
    """Fewest rows of a difference scheme of strength t."""
    m = _design_model(nu, q, t, True, True, f"E({nu},{q},{t})")
    m.variables[m.index["R"]].lo = Fraction(1)
    m.set_objective({"R": 1}, "min")
    return m


def model_R_min(nu: int, q: int, t: int, rho, shift_class: bool = False) -> LpModel:
    """Fewest rows among arrays whose zero word reaches frequency rho."""
    m = _design_model(nu, q, t, shift_class, True, f"R_min({nu},{q},{t})")
    m.variables[m.index["R"]].lo = Fraction(1)
    m.add_constraint({m.meta["zero"]: 1, "R": -_frac(rho)}, ">=", 0, "reach_rho")
    m.set_objective({"R": 1}, "min")
    return m


def model_R_star(nu: int, q: int, t: int, F: int, shift_class: bool = False) -> LpModel:
    """Largest multiplicity of the zero word among arrays with exactly F rows."""
    m = _design_model(nu, q, t, shift_class, True, f"R_star({nu},{q},{t})")
    m.add_constraint({"R": 1}, "==", F, "rows")
    m.set_objective({m.meta["zero"]: 1}, "max")
    return m


def _pair_model(name, q, psi_words, phi_words, groups_of, keys, target, meta) -> LpModel:
    budget.check(len(psi_words) + len(phi_words), budget.lp_budget(), name)
    m = LpModel(name)
    for u in psi_words:
        m.add_var(_wname("P", u))
    for u in phi_words:
        m.add_var(_wname("Q", u))
    m.add_var("R", lo=0)
    coeffs = {_wname("P", u): 1 for u in psi_words}
    coeffs["R"] = -1
    m.add_constraint(coeffs, "==", 0, "total")
    m.add_constraint({"R": 1}, "==", 1, "unit")
    for J in combinations(range(meta["nu"]), meta["k"]):
        coeffs: dict[str, Fraction] = {}
        rows = {v: {} for v in keys}
        for u in psi_words:
            v = groups_of(tuple(u[j] for j in J))
            rows[v][_wname("P", u)] = 1
        for u in phi_words:
            v = groups_of(tuple(u[j] for j in J))
            rows[v][_wname("Q", u)] = -1
        for v in keys:
            m.add_constraint(rows[v], "==", 0, f"balance{J}{v}")
    m.set_objective({_wname("Q", target): 1}, "max")
    meta = dict(meta)
    meta["psi_words"] = {_wname("P", u): u for u in psi_words}
    meta["phi_words"] = {_wname("Q", u): u for u in phi_words}
    m.meta = meta
    return m


def model_gamma(q: int, p: int, k: int) -> LpModel:
    """Best ratio R*/R of a (q, p)-ARPA of strength k (R normalized to 1)."""
    if not q >= p >= k >= 1:
        raise BadArgs(f"need q >= p >= k >= 1, got ({q}, {p}, {k})")
    words = list(all_words(q, q))
    psi = [u for u in words if len(set(u)) <= p]
    return _pair_model(f"gamma({q},{p},{k})", q, psi, words, lambda v: v,
                       list(all_words(q, k)), tuple(range(q)),
                       {"kind": "arpa", "q": q, "nu": q, "p": p, "k": k})


def model_gamma_E(q: int, p: int, k: int) -> LpModel:
    """Best ratio of a relaxed (q, p)-ARPA; words restricted to a leading 0."""
    if not q >= p >= k >= 1:
        raise BadArgs(f"need q >= p >= k >= 1, got ({q}, {p}, {k})")
    words = [u for u in all_words(q, q) if u[0] == 0]
    psi = [u for u in words if len(set(u)) <= p]
    return _pair_model(f"gamma_E({q},{p},{k})", q, psi, words, lambda v: class_rep(v, q),
                       [(0,) + v for v in all_words(q, k - 1)], tuple(range(q)),
                       {"kind": "relaxed_arpa", "q": q, "nu": q, "p": p, "k": k})


def _delta_model(n: int, d: int, k: int, bar: bool) -> LpModel:
    if not n >= d >= k >= 1:
        raise BadArgs(f"need n >= d >= k >= 1, got ({n}, {d}, {k})")
    words = list(all_words(2, n))
    psi = [u for u in words if sum(u) <= d]
    phi = [u for u in words if sum(u) <= d or sum(u) == n] if bar else words
    kind = "bar_cpa" if bar else "cpa"
    return _pair_model(f"{'bar_' if bar else ''}delta({n},{d},{k})", 2, psi, phi, lambda v: v,
                       list(all_words(2, k)), (1,) * n,
                       {"kind": kind, "q": 2, "nu": n, "p": d, "k": k})


def model_delta(n: int, d: int, k: int) -> LpModel:
    return _delta_model(n, d, k, False)


def model_bar_delta(n: int, d: int, k: int) -> LpModel:
    return _delta_model(n, d, k, True)


# ------------------------------------------------------------------ witnesses

def _scale_for(values) -> int:
    return math.lcm(*[v.denominator for v in values]) if values else 1


def _rows_from(assign, names: dict, scale: int) -> list:
    rows = []
    for name, word in names.items():
        count = assign[name] * scale
        if count.denominator != 1:
            raise NonIntegerAfterScale(f"{name} = {assign[name]} is not integral after scaling by {scale}")
        rows += [word] * int(count)
    return rows


def extract_witness(model: LpModel, solution: LpSolution, scale: int | None = None):
    """Turn an optimal assignment into concrete arrays (an array or a pair)."""
    if solution.status != OPTIMAL:
        raise LpError(f"cannot extract a witness from a {solution.status} solution")
    meta = model.meta
    assign = solution.assignment
    if meta.get("kind") in ("oa", "ds"):
        names = meta["words"]
        if scale is None:
            scale = _scale_for([assign[n] for n in names])
        return SymbolArray(meta["q"], meta["nu"], tuple(_rows_from(assign, names, scale)))
    if meta.get("kind") in ("arpa", "relaxed_arpa", "cpa", "bar_cpa"):
        names = {**meta["psi_words"], **meta["phi_words"]}
        if scale is None:
            scale = _scale_for([assign[n] for n in names])
        psi = _rows_from(assign, meta["psi_words"], scale)
        phi = _rows_from(assign, meta["phi_words"], scale)
        q, nu = meta["q"], meta["nu"]
        return ArrayPair(SymbolArray(q, nu, tuple(psi)), SymbolArray(q, nu, tuple(phi)))
    raise LpError("model carries no witness layout")
