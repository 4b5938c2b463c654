"""Command-line front end.

Exit status: 0 on success, 1 when a verification fails (the failing witness is
printed), 2 on usage or input errors.  Rationals print as num/den.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import arpa, csp, designs, lp, neighborhood, reduction
from .errors import BudgetError, OadiffError, VerificationError

SCHEMA = 1


class UsageError(Exception):
    pass


class Failure(Exception):
    """A verification failed; carries the report to print."""

    def __init__(self, report: dict):
        super().__init__(report.get("reason", "verification failed"))
        self.report = report


def fmt(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, (tuple, list)):
        return ",".join(fmt(e) for e in x)
    return str(x)


def _jsonable(x):
    if isinstance(x, Fraction):
        return fmt(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def parse_vector(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(e) for e in text.split(",") if e.strip() != "")
    except ValueError:
        raise UsageError(f"not a comma separated vector: {text!r}") from None


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str) -> None:
    Path(path).write_text(text)


def _instance(path: str) -> csp.CspInstance:
    return csp.instance_from_json(_read(path))


# ------------------------------------------------------------------ verbs

def cmd_verify(args) -> dict:
    if args.oa or args.ds:
        if args.strength is None:
            raise UsageError("--strength is required with --oa/--ds")
        M = designs.parse_array(_read(args.oa or args.ds))
        t = args.strength
        if args.oa:
            ok = designs.is_orthogonal_array(M, t)
            f = designs.frequency(M)
        else:
            ok = designs.is_difference_scheme(M, t)
            f = designs.shift_class_frequency(M)
        report = {"object": "oa" if args.oa else "ds", "strength": t, "R": M.R, "ok": ok}
        if not ok:
            bad = designs.balance_violation(f, t)
            report["witness"] = ({"columns": list(bad[0]), "word": list(bad[1]), "margin": bad[2]}
                                 if bad else "row count is not a multiple of the block size")
            raise Failure(report)
        return report
    for flag, fn in (("arpa", arpa.verify_arpa), ("relaxed_arpa", arpa.verify_relaxed_arpa),
                     ("cpa", arpa.verify_cpa), ("bar_cpa", arpa.verify_bar_cpa)):
        spec = getattr(args, flag)
        if spec:
            path, *nums = spec
            try:
                a, b, k = (int(v) for v in nums)
            except ValueError:
                raise UsageError(f"--{flag.replace('_', '-')} takes FILE and three integers") from None
            _, pair = arpa.parse_pair(_read(path))
            try:
                cert = fn(pair, a, b, k)
            except VerificationError as exc:
                raise Failure({"object": flag, "ok": False, "reason": str(exc)})
            return {"object": flag, "ok": True, "R": cert.R, "R_star": cert.R_star, "ratio": cert.ratio}
    raise UsageError("verify needs one of --oa, --ds, --arpa, --relaxed-arpa, --cpa, --bar-cpa")


_SEARCH = {
    "rho": (lp.model_rho, False), "rho_E": (lp.model_rho_E, False),
    "F": (lp.model_F, True), "E": (lp.model_E, True),
    "gamma": (lp.model_gamma, False), "gamma_E": (lp.model_gamma_E, False),
    "delta": (lp.model_delta, False), "bar_delta": (lp.model_bar_delta, False),
}


def _solve(model, engine):
    sol = lp.solve_ilp(model, engine=engine) if model.has_integers else lp.solve_lp(model, engine)
    if sol.status != lp.OPTIMAL:
        raise OadiffError(f"{model.name} is {sol.status}")
    return sol


def cmd_search(args) -> dict:
    chosen = [name for name in list(_SEARCH) + ["R_min", "R_star"] if getattr(args, name) is not None]
    if len(chosen) != 1:
        raise UsageError("search needs exactly one quantity flag")
    name = chosen[0]
    a, b, c = getattr(args, name)
    report: dict = {"quantity": name, "args": [a, b, c]}
    if name in _SEARCH:
        model = _SEARCH[name][0](a, b, c)
        sol = _solve(model, args.engine)
        report["value"] = int(sol.value) if _SEARCH[name][1] else sol.value
    else:
        shift = args.shift_class
        if name == "R_min":
            rho = _solve((lp.model_rho_E if shift else lp.model_rho)(a, b, c), args.engine).value
            model = lp.model_R_min(a, b, c, rho, shift_class=shift)
            sol = _solve(model, args.engine)
            report.update(R=int(sol.value), R_star=int(rho * sol.value), value=rho)
        else:
            F = _solve((lp.model_E if shift else lp.model_F)(a, b, c), args.engine).value
            model = lp.model_R_star(a, b, c, F, shift_class=shift)
            sol = _solve(model, args.engine)
            report.update(R=int(F), R_star=int(sol.value), value=sol.value / F)
    if args.dump_lp:
        _write(args.dump_lp, model.dump())
    if args.witness:
        w = lp.extract_witness(model, sol)
        if isinstance(w, arpa.ArrayPair):
            _write(args.witness, arpa.format_pair(w, model.meta["kind"]))
        else:
            _write(args.witness, designs.format_array(w))
        report["witness_rows"] = w.R
    return report


def cmd_arpa(args) -> dict:
    if args.build:
        q, k = args.build
        pair, cert = arpa.build_arpa(q, k)
        p = k
    elif args.auto:
        q, p, k = args.auto
        pair = arpa.auto_arpa(q, p, k)
        cert = arpa.verify_arpa(pair, q, p, k)
    else:
        raise UsageError("arpa needs --build Q K or --auto Q P K")
    if args.out:
        _write(args.out, arpa.format_pair(pair, "arpa"))
    return {"q": q, "p": p, "k": k, "R": cert.R, "R_star": cert.R_star, "ratio": cert.ratio,
            "t_number": arpa.t_number(q, k) if args.build else None}


def cmd_cpa(args) -> dict:
    n, k = args.build
    pair, cert = arpa.build_cpa(n, k)
    if args.out:
        _write(args.out, arpa.format_pair(pair, "bar_cpa"))
    return {"n": n, "k": k, "R": cert.R, "R_star": cert.R_star, "ratio": cert.ratio}


def cmd_csp(args) -> dict:
    I = _instance(args.instance)
    report: dict = {"q": I.q, "n": I.n, "m": I.m, "goal": I.goal, "mean": I.mean()}
    if args.eval:
        report["value"] = csp.evaluate(I, parse_vector(args.eval))
    if args.coloring:
        V = csp.strong_coloring(I)
        report["coloring"] = V
        report["greedy_nu"] = len(V)
    if args.condexp:
        x = csp.conditional_expectation(I)
        report["condexp_solution"] = list(x)
        report["condexp_value"] = csp.evaluate(I, x)
    if args.oracle:
        rep = csp.brute_force(I)
        report.update(opt=rep.opt, wor=rep.wor, argopt=list(rep.argopt), argwor=list(rep.argwor),
                      avd=rep.avd if rep.avd is not None else "undefined")
    return report


def cmd_reduce(args) -> dict:
    I = _instance(args.instance)
    pair = "auto"
    if args.pair:
        _, pair = arpa.parse_pair(_read(args.pair))
    base = "brute" if args.base == "brute" else "local_search"
    out = reduction.reduce_and_solve(I, args.p, pair, base, oracle=bool(args.oracle))
    report = {"value": out.best_value, "solution": list(out.best_solution),
              "certified_ratio": out.certified_ratio if out.certified_ratio is not None else "unknown",
              "pair_ratio": out.pair_ratio, "subinstances": out.subinstances_solved}
    if args.oracle:
        report["achieved_ratio"] = out.achieved_ratio if out.achieved_ratio is not None else "undefined"
        report["chain_bound"] = out.chain_bound
    return report


def cmd_ball(args) -> dict:
    I = _instance(args.instance)
    spec = neighborhood.BallSpec(parse_vector(args.center), args.radius, args.shifted)
    y, val = neighborhood.best_in_ball(I, spec)
    report: dict = {"best": list(y), "value": val}
    if args.oracle:
        rep = csp.brute_force(I)
        ratio = csp.differential_ratio(rep, val)
        report["ratio"] = ratio if ratio is not None else "undefined"
        if rep.opt != rep.wor:
            report["spread"] = neighborhood.ball_diameter_spread(I, spec, rep)
        if args.radius >= I.arity >= 2 and not args.shifted and ratio is not None:
            bound = neighborhood.ball_ratio_bound(I.n, I.arity)
            report["ratio_bound"] = bound
            if ratio < bound:
                report["reason"] = "ratio below the guaranteed bound"
                raise Failure(report)
    return report


def cmd_identity(args) -> dict:
    I = _instance(args.instance)
    x, xs = parse_vector(args.x), parse_vector(args.xstar)
    k = args.k or I.arity
    lhs = csp.evaluate(I, xs)
    rhs = neighborhood.identity_rhs(I, xs, x, k)
    report = {"lhs": lhs, "rhs": rhs, "ok": lhs == rhs, "kappa": neighborhood.hamming(x, xs)}
    if lhs != rhs:
        raise Failure(report)
    return report


def cmd_gen(args) -> dict:
    fam = args.family
    need = {"I": ("q", "k", "n"), "tildeI": ("n",), "J": ("q", "k", "n"),
            "random": ("q", "k", "n", "m"), "e2lin2": ("n", "m")}[fam]
    missing = [f"--{a}" for a in need if getattr(args, a) is None]
    if missing:
        raise UsageError(f"family {fam} needs {' '.join(missing)}")
    if fam == "I":
        I = csp.gen_I_qkn(args.q, args.k, args.n)
    elif fam == "tildeI":
        I = csp.gen_tilde_I(args.n)
    elif fam == "J":
        I = csp.gen_J_qkn(args.q, args.k, args.n)
    elif fam == "random":
        I = csp.gen_random(args.q, args.k, args.n, args.m, args.seed, args.kind, parts=args.parts)
    else:
        I = csp.gen_e2lin2(args.n, args.m, args.seed, args.bipartite)
    text = csp.instance_to_json(I)
    if args.out:
        _write(args.out, text + "\n")
        return {"family": fam, "n": I.n, "m": I.m, "out": args.out}
    return {"family": fam, "instance": json.loads(text)}


def load_expected() -> list[dict]:
    text = resources.files("oadiff").joinpath("data/expected_tables.json").read_text()
    return json.loads(text)["entries"]


def compute_entry(entry: dict, engine: str = "auto") -> dict:
    """Recompute one table entry; returns the fields that the entry records."""
    kind, (a, b, c) = entry["quantity"], entry["args"]
    if kind in _SEARCH:
        return {"value": fmt(_solve(_SEARCH[kind][0](a, b, c), engine).value)}
    shift = kind.endswith("_E")
    if kind.startswith("R_min"):
        rho = _solve((lp.model_rho_E if shift else lp.model_rho)(a, b, c), engine).value
        R = _solve(lp.model_R_min(a, b, c, rho, shift_class=shift), engine).value
        return {"value": fmt(rho), "R": int(R), "R_star": int(rho * R)}
    if kind.startswith("R_star"):
        F = _solve((lp.model_E if shift else lp.model_F)(a, b, c), engine).value
        Rs = _solve(lp.model_R_star(a, b, c, F, shift_class=shift), engine).value
        return {"value": fmt(Rs / F), "R": int(F), "R_star": int(Rs)}
    raise OadiffError(f"unknown table quantity {kind!r}")


def cmd_tables(args) -> dict:
    entries = load_expected()
    if args.only:
        entries = [e for e in entries if e["table"] == args.only]
    rows, diffs = [], 0
    for e in entries:
        got = compute_entry(e, args.engine)
        want = {key: e[key] for key in got}
        same = got == want
        diffs += not same
        rows.append({"table": e["table"], "quantity": e["quantity"], "args": e["args"],
                     "expected": want, "got": got, "ok": same})
    report = {"entries": rows, "mismatches": diffs}
    if diffs:
        report["reason"] = f"{diffs} entries differ from the bundled expectations"
        raise Failure(report)
    return report


# ------------------------------------------------------------------ plumbing

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="oadiff", description=__doc__.splitlines()[0])
    ap.add_argument("--json", action="store_true", help="emit a JSON report")
    ap.add_argument("--jobs", type=int, default=1, help="worker count (results do not depend on it)")
    sub = ap.add_subparsers(dest="verb", required=True)

    v = sub.add_parser("verify", help="check an array or a pair of arrays")
    v.add_argument("--oa", metavar="FILE")
    v.add_argument("--ds", metavar="FILE")
    v.add_argument("--strength", type=int)
    for flag in ("arpa", "relaxed-arpa", "cpa", "bar-cpa"):
        v.add_argument(f"--{flag}", nargs=4, metavar=("FILE", "A", "B", "K"))
    v.set_defaults(fn=cmd_verify)

    s = sub.add_parser("search", help="compute an extremal design number exactly")
    for flag, meta in (("rho", "NU Q T"), ("rho-E", "NU Q T"), ("F", "NU Q T"), ("E", "NU Q T"),
                       ("R-min", "NU Q T"), ("R-star", "NU Q T"),
                       ("gamma", "Q P K"), ("gamma-E", "Q P K"), ("delta", "N D K"), ("bar-delta", "N D K")):
        s.add_argument(f"--{flag}", nargs=3, type=int, metavar=tuple(meta.split()),
                       dest=flag.replace("-", "_"))
    s.add_argument("--shift-class", action="store_true", help="R-min/R-star over difference schemes")
    s.add_argument("--engine", choices=("auto", "exact", "certified"), default="auto")
    s.add_argument("--witness", metavar="FILE")
    s.add_argument("--dump-lp", metavar="FILE")
    s.set_defaults(fn=cmd_search)

    a = sub.add_parser("arpa", help="build an alphabet reduction pair")
    a.add_argument("--build", nargs=2, type=int, metavar=("Q", "K"))
    a.add_argument("--auto", nargs=3, type=int, metavar=("Q", "P", "K"))
    a.add_argument("--out", metavar="FILE")
    a.set_defaults(fn=cmd_arpa)

    c = sub.add_parser("cpa", help="build a Boolean cover pair")
    c.add_argument("--build", nargs=2, type=int, metavar=("N", "K"), required=True)
    c.add_argument("--out", metavar="FILE")
    c.set_defaults(fn=cmd_cpa)

    i = sub.add_parser("csp", help="inspect or solve an instance")
    i.add_argument("--instance", required=True)
    i.add_argument("--eval", metavar="CSV")
    i.add_argument("--oracle", action="store_true")
    i.add_argument("--coloring", action="store_true")
    i.add_argument("--condexp", action="store_true")
    i.set_defaults(fn=cmd_csp)

    r = sub.add_parser("reduce", help="solve through p-symbol restrictions")
    r.add_argument("--instance", required=True)
    r.add_argument("--p", type=int, required=True)
    r.add_argument("--pair", metavar="FILE")
    r.add_argument("--base", choices=("brute", "ls"), default="brute")
    r.add_argument("--oracle", action="store_true")
    r.set_defaults(fn=cmd_reduce)

    b = sub.add_parser("ball", help="best solution in a Hamming ball")
    b.add_argument("--instance", required=True)
    b.add_argument("--center", required=True)
    b.add_argument("--radius", type=int, required=True)
    b.add_argument("--shifted", action="store_true")
    b.add_argument("--oracle", action="store_true")
    b.set_defaults(fn=cmd_ball)

    d = sub.add_parser("identity", help="check the Hamming-layer identity")
    d.add_argument("--instance", required=True)
    d.add_argument("--x", required=True)
    d.add_argument("--xstar", required=True)
    d.add_argument("--k", type=int)
    d.set_defaults(fn=cmd_identity)

    g = sub.add_parser("gen", help="generate an instance")
    g.add_argument("--family", choices=("I", "tildeI", "J", "random", "e2lin2"), required=True)
    for name in ("q", "k", "n", "m", "parts"):
        g.add_argument(f"--{name}", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--kind", choices=("predicate", "rational", "Eq"), default="predicate")
    g.add_argument("--bipartite", action="store_true")
    g.add_argument("--out", metavar="FILE")
    g.set_defaults(fn=cmd_gen)

    t = sub.add_parser("tables", help="recompute bundled table entries and diff them")
    t.add_argument("--only", choices=("rho", "gamma", "gamma_E"))
    t.add_argument("--engine", choices=("auto", "exact", "certified"), default="auto")
    t.set_defaults(fn=cmd_tables)
    return ap


def render(verb: str, report: dict) -> str:
    if verb == "search":
        lines = [fmt(report["value"])]
        for key in ("R", "R_star", "witness_rows"):
            if key in report:
                lines.append(f"{key} = {fmt(report[key])}")
        return "\n".join(lines) + "\n"
    if verb == "tables":
        lines = []
        for row in report["entries"]:
            mark = "ok" if row["ok"] else "DIFF"
            args = ",".join(map(str, row["args"]))
            exp = " ".join(f"{k}={v}" for k, v in row["expected"].items())
            got = " ".join(f"{k}={v}" for k, v in row["got"].items())
            lines.append(f"{mark:4} {row['table']:8} {row['quantity']}({args}) expected {exp} got {got}")
        lines.append(f"mismatches = {report['mismatches']}")
        return "\n".join(lines) + "\n"
    if verb == "gen" and "instance" in report:
        return json.dumps(report["instance"], indent=1) + "\n"
    lines = []
    for key, val in report.items():
        if val is None:
            continue
        if isinstance(val, bool):
            val = "yes" if val else "no"
        elif isinstance(val, list) and val and isinstance(val[0], list):
            val = " | ".join(fmt(v) for v in val)
        lines.append(f"{key} = {fmt(val)}")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.jobs < 1:
        parser.print_usage(sys.stderr)
        print("oadiff: --jobs must be positive", file=sys.stderr)
        return 2
    status = 0
    try:
        report = args.fn(args)
    except Failure as exc:
        report, status = exc.report, 1
    except UsageError as exc:
        print(f"oadiff {args.verb}: {exc}", file=sys.stderr)
        return 2
    except BudgetError as exc:
        print(f"oadiff {args.verb}: {exc}", file=sys.stderr)
        return 2
    except VerificationError as exc:
        report, status = {"ok": False, "reason": str(exc)}, 1
    except OadiffError as exc:
        print(f"oadiff {args.verb}: {exc}", file=sys.stderr)
        return 2
    if args.json:
        doc = {"schema": SCHEMA, "verb": args.verb, "status": "fail" if status else "ok"}
        doc.update(_jsonable(report))
        sys.stdout.write(json.dumps(doc, indent=1, sort_keys=True) + "\n")
    else:
        if status:
            sys.stdout.write("FAIL\n")
        sys.stdout.write(render(args.verb, report))
    return status


if __name__ == "__main__":
    sys.exit(main())
