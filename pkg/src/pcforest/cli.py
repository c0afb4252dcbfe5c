"""Command line entry point.

Exit codes: 0 success, 1 instance error, 2 budget exceeded.
"""
from __future__ import annotations

import argparse
import contextlib
import json
import sys
from pathlib import Path

from .bench import parse_params, run_bench, summarize, write_results
from .core import BudgetExceeded, InstanceError, solution_cost
from .diagnostics import diagnose
from .exact import solve_exact
from .instance import generate, load_instance
from .penalty import validate_axioms
from .recursive import recursive_pcf
from .ssw import run_ssw

EXIT_OK, EXIT_INSTANCE, EXIT_BUDGET = 0, 1, 2


def _dump(obj) -> str:
    return json.dumps(obj, indent=1)


def cmd_solve(args) -> int:
    inst = load_instance(args.instance)
    g, o = inst.graph, inst.oracle
    with contextlib.ExitStack() as stack:
        trace = stack.enter_context(open(args.trace, "w")) if args.trace else None
        if args.algo == "exact":
            if trace is not None:
                print("note: the exact solver writes no trace", file=sys.stderr)
            sol = solve_exact(g, o).best
        elif args.algo == "ssw":
            sol = solution_cost(run_ssw(g, o, backend=args.backend, trace=trace).forest, g, o)
        else:
            sol = recursive_pcf(g, o, backend=args.backend, trace=trace).solution
    print(_dump(sol.to_json()))
    return EXIT_OK


def cmd_validate(args) -> int:
    inst = load_instance(args.instance)
    rep = validate_axioms(inst.oracle, inst.graph.n, sample_budget=args.budget, seed=args.seed)
    print(_dump({
        "n": rep.n, "exhaustive": rep.exhaustive, "checks": rep.checks, "ok": rep.ok,
        "violations": [
            {"axiom": v.axiom, "witness": repr(v.witness), "lhs": str(v.lhs), "rhs": str(v.rhs)}
            for v in rep.violations[: args.show]
        ],
    }))
    return EXIT_OK if rep.ok else EXIT_INSTANCE


def _seed_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    try:
        return range(int(lo), int(hi) + 1) if sep else range(int(lo), int(lo) + 1)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seeds must look like A..B, got {text!r}")


def cmd_bench(args) -> int:
    try:
        params = parse_params(args.params)
    except ValueError as exc:
        raise InstanceError(str(exc)) from exc
    records = run_bench(args.seeds, params, args.workers)
    summary_path = write_results(records, Path(args.out))
    summary = summarize(records)
    print(_dump({k: v for k, v in summary.items() if k != "failed"} | {
        "failed": len(summary["failed"]), "summary": str(summary_path)}))
    return EXIT_OK if not summary["failed"] else EXIT_INSTANCE


def cmd_diagnose(args) -> int:
    inst = load_instance(args.instance)
    g, o = inst.graph, inst.oracle
    exact = solve_exact(g, o)
    rec = recursive_pcf(g, o)
    report, ledger = diagnose(g, o, rec, exact)
    out = {
        "instance": inst.name,
        "opt": exact.best.to_json(),
        "recursive": rec.solution.to_json(),
        "levels": [lvl.summary() for lvl in rec.levels],
        "analysis": report.to_json(),
        "ledger": [c.to_json() for c in ledger],
    }
    Path(args.out).write_text(_dump(out) + "\n")
    failed = [c.name for c in ledger if not c.passed]
    print(_dump({"ledger_passed": not failed, "failed": failed}))
    return EXIT_OK


def cmd_generate(args) -> int:
    try:
        params = parse_params(args.params)
    except ValueError as exc:
        raise InstanceError(str(exc)) from exc
    text = generate(args.seed, params).dumps()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pcforest", description="Prize-collecting forests with submodular penalties")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve one instance and print the solution as JSON")
    s.add_argument("--algo", choices=("ssw", "recursive", "exact"), default="recursive")
    s.add_argument("--instance", required=True)
    s.add_argument("--trace", help="write the event trace as JSON lines")
    s.add_argument("--backend", choices=("auto", "exhaustive", "mnp"), default="auto")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("validate-oracle", help="check the penalty axioms of an instance")
    v.add_argument("--instance", required=True)
    v.add_argument("--budget", type=int, default=100_000)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--show", type=int, default=10, help="violations to print")
    v.set_defaults(func=cmd_validate)

    b = sub.add_parser("bench", help="compare SSW and recursive against the optimum on seeded instances")
    b.add_argument("--seeds", type=_seed_range, required=True, help="inclusive range A..B")
    b.add_argument("--params", nargs="*", default=[], help="generator settings key=value")
    b.add_argument("--out", required=True, help="CSV path; the summary goes to <out>.summary.json")
    b.add_argument("--workers", type=int, default=None, help="overrides PCFOREST_WORKERS")
    b.set_defaults(func=cmd_bench)

    d = sub.add_parser("diagnose", help="bound ledger of one instance against its optimum")
    d.add_argument("--instance", required=True)
    d.add_argument("--out", required=True)
    d.set_defaults(func=cmd_diagnose)

    g = sub.add_parser("generate", help="write a seeded random instance")
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--params", nargs="*", default=[])
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InstanceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INSTANCE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
