"""Command-line entry point.

Exit codes: 0 on success, 1 when a mathematical check fails (a
counterexample or an unreached tolerance), 2 on usage or input errors.
Numeric output carries 12 significant digits.  Reports default to CSV;
identical configuration produces byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import acceptance, advsdp, compose, funcore, randsearch, recur
from . import strdnc as sd

USAGE_ERROR = 2
CHECK_FAILED = 1


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, float):
        return format(v, ".12g")
    return str(v)


def _emit(rows: list[dict], fmt: str, out) -> None:
    if not rows:
        return
    keys = list(rows[0].keys())
    if fmt == "json":
        out.write(json.dumps([{k: r[k] for k in keys} for r in rows],
                             default=_fmt, indent=2))
        out.write("\n")
        return
    table = [[_fmt(r[k]) for k in keys] for r in rows]
    if fmt == "csv":
        out.write(",".join(keys) + "\n")
        for line in table:
            out.write(",".join(line) + "\n")
        return
    widths = [max(len(k), *(len(row[i]) for row in table)) for i, k in enumerate(keys)]
    out.write("  ".join(k.ljust(w) for k, w in zip(keys, widths)).rstrip() + "\n")
    for line in table:
        out.write("  ".join(c.ljust(w) for c, w in zip(line, widths)).rstrip() + "\n")


def _parse_number(text: str):
    """Accept plain ints, fractions (2/3), decimals, and sqrt(x) / x^(p/q)."""
    text = text.strip()
    if text.startswith("sqrt(") and text.endswith(")"):
        return recur.Power(Fraction(text[5:-1]), Fraction(1, 2))
    if "^" in text:
        base, _, expo = text.partition("^")
        expo = expo.strip()
        if expo.startswith("(") and expo.endswith(")"):
            expo = expo[1:-1]
        return recur.Power(Fraction(base), Fraction(expo))
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return Fraction(text)
    except ValueError:
        pass
    return float(text)


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_single_string(path: str):
    for line in _read(path).splitlines():
        line = line.split("#", 1)[0].strip()
        if line.startswith("string:"):
            return sd.parse_symbols(line.partition(":")[2].split())
    raise ValueError(f"{path}: no 'string:' line")


def _load_paired_strings(path: str):
    x = y = None
    for line in _read(path).splitlines():
        line = line.split("#", 1)[0].strip()
        if line.startswith("x:"):
            x = sd.parse_symbols(line.partition(":")[2].split())
        elif line.startswith("y:"):
            y = sd.parse_symbols(line.partition(":")[2].split())
    if x is None or y is None:
        raise ValueError(f"{path}: need both 'x:' and 'y:' lines")
    return x, y


# ---------------------------------------------------------------------------
# Subcommand handlers


def _cmd_adv(args, out) -> int:
    f = funcore.load_function_path(args.fn)
    bracket = advsdp.adv_value(f, tol=args.tol, cross_check=args.cross_check)
    out.write(
        f"value={_fmt(bracket.upper)} lower={_fmt(bracket.lower)} "
        f"upper={_fmt(bracket.upper)}\n"
    )
    if args.cross_check and bracket.notes.get("solver_defect"):
        out.write(f"solver_defect single_family={_fmt(bracket.notes['single_family'])}\n")
        return CHECK_FAILED
    return 0


def _cmd_gamma2(args, out) -> int:
    target = funcore.read_matrix_csv(_read(args.a))
    filters = [funcore.read_matrix_csv(_read(p)) for p in args.z]
    value, sol = advsdp.gamma2_filtered(target, filters, tol=args.tol)
    out.write(f"value={_fmt(value)}\n")
    if args.dump_solution:
        with open(args.dump_solution, "w", encoding="utf-8") as fh:
            fh.write(funcore.write_matrix_csv(sol.full_gram()))
    return 0


def _cmd_certify(args, out) -> int:
    f = funcore.load_function_path(args.fn)
    gamma = funcore.read_matrix_csv(_read(args.gamma))
    value = advsdp.adv_lower_certify(f, gamma)
    out.write(f"value={_fmt(value)}\n")
    return 0


def _cmd_compose(args, out) -> int:
    if args.action == "verify-orand":
        rng = np.random.Generator(np.random.Philox(args.seed))
        cache = compose._AdvCache(args.tol)
        rows = []
        for t in range(args.trials):
            f1 = compose.random_boolean_function(rng, args.n1, nonconstant=True)
            f2 = compose.random_boolean_function(rng, args.n2, nonconstant=True)
            r = compose.verify_or_and_bound(f1, f2, args.tol, cache, instance=t)
            rows.append({
                "instance_id": t,
                "lhs": r.adv_or**2,
                "rhs": r.adv_f1**2 + r.adv_f2**2,
                "margin": r.bound_margin,
                "pass": r.passed,
            })
    elif args.action == "verify-switch":
        reports = compose.sweep_switch(args.trials, arity=args.n1,
                                       max_values=3, seed=args.seed, tol=args.tol)
        rows = [{
            "instance_id": r.instance,
            "lhs": r.adv_h,
            "rhs": r.selector_term + r.max_branch,
            "margin": r.margin,
            "pass": r.passed,
        } for r in reports]
    else:  # gamma2-facts
        report = compose.gamma2_fact_checks(trials=args.trials, seed=args.seed)
        rows = [{
            "instance_id": f"{r.fact}:{r.instance}",
            "lhs": r.lhs,
            "rhs": r.rhs,
            "margin": r.margin,
            "pass": r.passed,
        } for r in report.rows]
    _emit(rows, args.format, out)
    return 0 if all(r["pass"] for r in rows) else CHECK_FAILED


def _cmd_recur(args, out) -> int:
    if args.action == "master":
        spec = recur.RecurrenceSpec(
            a=_parse_number(args.a), b=_parse_number(args.b),
            c=_parse_number(args.c), p=_parse_number(args.p),
            squared=args.squared,
        )
        out.write(recur.master_solve(spec).describe() + "\n")
        return 0
    if args.action == "split-factor":
        m = recur.min_splitting_factor(_parse_number(args.target))
        out.write(f"m={m}\n")
        return 0
    rows = [{
        "problem": r.problem,
        "k": "" if r.k is None else r.k,
        "derived": r.derived.describe(),
        "stated": r.stated.describe(),
        "pass": r.matches,
    } for r in recur.headline_bounds()]
    _emit(rows, args.format, out)
    return 0 if all(r["pass"] for r in rows) else CHECK_FAILED


def _cmd_strings(args, out) -> int:
    if args.problem == "regular":
        result = sd.regular_decide(_load_single_string(args.infile))
    elif args.problem == "minsub":
        x, y = _load_paired_strings(args.infile)
        result = sd.minsub_decide(x, y)
    elif args.problem == "rotation":
        result = sd.rotation_decide(_load_single_string(args.infile), args.i)
    elif args.problem == "suffix":
        result = sd.suffix_decide(_load_single_string(args.infile), args.i)
    elif args.problem == "kis":
        result = sd.lis_decide(_load_single_string(args.infile), args.k)
    else:  # kcs
        if args.x and args.y:
            x = _load_single_string(args.x)
            y = _load_single_string(args.y)
        else:
            x, y = _load_paired_strings(args.infile)
        result = sd.kcs_decide(x, y, args.k)
        if args.m:
            chk = sd.kcs_decompose_check(x, y, args.k, args.m)
            out.write(
                f"result={result} composite={chk.composite} "
                f"critical={chk.critical} split_equal={int(chk.equal)}\n"
            )
            return 0 if chk.equal else CHECK_FAILED
    out.write(f"result={result}\n")
    return 0


def _cmd_sweep(args, out) -> int:
    rng = np.random.Generator(np.random.Philox(args.seed))
    rows = []
    for t in range(args.trials):
        if args.which == "regular":
            n = int(rng.integers(1, 13))
            x = sd.QueryString(tuple(int(v) for v in rng.integers(0, 3, size=n)))
            lhs = sd.regular_decide(x)
            rhs = sd.regular_brute(tuple(x.snapshot()))
            queries = x.query_count
        elif args.which == "minsub":
            n = int(rng.choice([8, 16, 32]))
            x = sd.QueryString(tuple(int(v) for v in rng.integers(0, 4, size=n)))
            y = tuple(int(v) for v in rng.integers(0, 4, size=n // 2))
            lhs = sd.minsub_recursion_decide(x, y)
            rhs = sd.minsub_decide(x.snapshot(), y)
            queries = x.query_count
        elif args.which == "lis":
            n = int(rng.integers(2, 17))
            raw = rng.integers(-2, 9, size=n)
            x = sd.QueryString(tuple(int(v) if v > 0 else sd.STAR for v in raw))
            k = int(rng.integers(1, 4))
            lhs = sd.lis_decide(x, k)
            rhs = int(sd.lis_length(x.snapshot()) >= k)
            queries = x.query_count
        else:  # kcs
            n = int(rng.integers(7, 29))
            x = sd.QueryString(tuple(int(v) for v in rng.integers(0, 5, size=n)))
            y = tuple(int(v) for v in rng.integers(0, 5, size=n))
            k = int(rng.integers(2, 4))
            chk = sd.kcs_decompose_check(x, y, k, 7)
            lhs, rhs, queries = chk.lhs, int(bool(chk.composite or chk.critical)), x.query_count
        rows.append({
            "instance_id": t, "lhs": lhs, "rhs": rhs,
            "pass": lhs == rhs, "queries": queries,
        })
    _emit(rows, args.format, out)
    return 0 if all(r["pass"] for r in rows) else CHECK_FAILED


def _cmd_randsearch(args, out) -> int:
    if args.action == "run":
        values = list(range(1, args.n + 1))
        target = values[args.target_rank - 1]
        rows = []
        ok = True
        for t in range(args.trials):
            res = randsearch.randomized_search(values, target, args.delta,
                                               seed=args.seed + t)
            ok &= res.found
            rows.append({
                "trial": t, "iterations": res.iterations,
                "success": res.found, "O_calls": res.o_calls,
                "R_calls": res.r_calls,
            })
        _emit(rows, args.format, out)
        return 0 if ok else CHECK_FAILED
    if args.action == "shrink":
        rep = randsearch.shrink_statistic(args.n, args.trials, seed=args.seed)
        rows = [{
            "statistic": "mean_ratio", "observed": rep.mean_ratio,
            "bound": rep.ratio_bound, "pass": rep.ratio_ok,
        }] + [{
            "statistic": f"tail_t{p.t}", "observed": p.observed,
            "bound": p.bound, "pass": p.ok,
        } for p in rep.tails]
        _emit(rows, args.format, out)
        return 0 if rep.passed else CHECK_FAILED
    x = _load_single_string(args.infile)
    res = randsearch.min_last_via_search(x, args.j, args.delta, seed=args.seed)
    value = "absent" if res.value is None and res.absent else res.value
    out.write(f"value={value} iterations={res.iterations} "
              f"O_calls={res.o_calls} R_calls={res.r_calls}\n")
    return 0


def _cmd_report(args, out) -> int:
    try:
        rows = acceptance.run_all(seed=args.seed, tol=args.tol)
    except advsdp.SolverBudgetError as exc:
        out.write(f"budget-error,{exc}\n")
        return CHECK_FAILED
    table = [{
        "criterion": r.criterion, "anchor": r.anchor, "computed": r.computed,
        "expected": r.expected, "margin": r.margin, "pass": r.passed,
    } for r in rows if args.timing or not r.anchor.startswith("runtime")]
    _emit(table, args.format, out)
    return 0 if all(r["pass"] for r in table) else CHECK_FAILED


# ---------------------------------------------------------------------------


def _global_flags(p: argparse.ArgumentParser, top: bool = False) -> None:
    # Accepted before or after the subcommand; the later mention wins.
    d = dict(default=argparse.SUPPRESS) if not top else {}
    p.add_argument("--tol", type=float, **(d or {"default": advsdp.DEFAULT_TOL}))
    p.add_argument("--seed", type=int, **(d or {"default": 42}))
    p.add_argument("--format", choices=("csv", "json", "text"),
                   **(d or {"default": "csv"}))
    p.add_argument("--out", help="write output to a file",
                   **(d or {"default": None}))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="advdc",
        description="Adversary-bound programs, combining rules, recurrences, "
                    "string oracles, and randomized search",
    )
    _global_flags(parser, top=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("adv", help="adversary value bracket of a function file")
    p.add_argument("--fn", required=True)
    p.add_argument("--cross-check", action="store_true")
    _global_flags(p)
    p.set_defaults(handler=_cmd_adv)

    p = sub.add_parser("gamma2", help="filtered norm of a matrix against filters")
    p.add_argument("--a", required=True)
    p.add_argument("--z", nargs="+", required=True)
    p.add_argument("--dump-solution", default=None)
    _global_flags(p)
    p.set_defaults(handler=_cmd_gamma2)

    p = sub.add_parser("certify", help="validate an explicit lower-bound matrix")
    p.add_argument("--fn", required=True)
    p.add_argument("--gamma", required=True)
    _global_flags(p)
    p.set_defaults(handler=_cmd_certify)

    p = sub.add_parser("compose", help="combining-rule sweeps")
    p.add_argument("action", choices=("verify-orand", "verify-switch", "gamma2-facts"))
    p.add_argument("--n1", type=int, default=2)
    p.add_argument("--n2", type=int, default=2)
    p.add_argument("--trials", type=int, default=20)
    _global_flags(p)
    p.set_defaults(handler=_cmd_compose)

    p = sub.add_parser("recur", help="recurrence classification")
    p.add_argument("action", choices=("master", "split-factor", "headline"))
    p.add_argument("--a", default="2")
    p.add_argument("--b", default="2")
    p.add_argument("--c", default="1")
    p.add_argument("--p", default="0")
    p.add_argument("--squared", action="store_true")
    p.add_argument("--target", default="2/3")
    _global_flags(p)
    p.set_defaults(handler=_cmd_recur)

    p = sub.add_parser("strings", help="string-problem decisions")
    p.add_argument("problem", choices=("regular", "minsub", "rotation",
                                       "suffix", "kis", "kcs"))
    p.add_argument("--in", dest="infile", default=None)
    p.add_argument("--x", default=None)
    p.add_argument("--y", default=None)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--i", type=int, default=0)
    p.add_argument("--j", type=int, default=1)
    _global_flags(p)
    p.set_defaults(handler=_cmd_strings)

    p = sub.add_parser("sweep", help="randomized oracle-agreement sweeps")
    p.add_argument("which", choices=("regular", "minsub", "lis", "kcs"))
    p.add_argument("--trials", type=int, default=100)
    _global_flags(p)
    p.set_defaults(handler=_cmd_sweep)

    p = sub.add_parser("randsearch", help="bracketing-search experiments")
    p.add_argument("action", choices=("run", "shrink", "minlast"))
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--target-rank", type=int, default=1)
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--in", dest="infile", default=None)
    p.add_argument("--j", type=int, default=1)
    _global_flags(p)
    p.set_defaults(handler=_cmd_randsearch)

    p = sub.add_parser("report", help="run the full acceptance table")
    p.add_argument("--timing", action="store_true",
                   help="include wall-clock rows (breaks byte-determinism)")
    _global_flags(p)
    p.set_defaults(handler=_cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = sys.stdout
    opened = None
    if args.out:
        opened = open(args.out, "w", encoding="utf-8")
        out = opened
    try:
        return args.handler(args, out)
    except (advsdp.InfeasibleProgramError, advsdp.InvalidCertificateError,
            advsdp.SolverBudgetError, sd.WitnessValidationError,
            sd.OracleInconsistencyError) as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return CHECK_FAILED
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    finally:
        if opened:
            opened.close()


if __name__ == "__main__":
    sys.exit(main())
