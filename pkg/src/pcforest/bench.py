"""Benchmark harness: exact optimum vs SSW vs recursive on seeded instances."""
from __future__ import annotations

import csv
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from fractions import Fraction
from pathlib import Path

from .core import connected_components, format_rational
from .diagnostics import diagnose
from .exact import solve_exact
from .instance import GenParams, Instance, generate
from .invariants import check_run
from .recursive import recursive_pcf
from .ssw import run_ssw

CSV_COLUMNS = ("seed", "opt", "ssw", "rec", "ssw_ratio", "rec_ratio", "levels", "ssw_ms", "rec_ms")
WORKERS_ENV = "PCFOREST_WORKERS"


@dataclass
class BenchRecord:
    seed: int | None
    name: str
    opt: Fraction
    ssw: Fraction
    rec: Fraction
    levels: int
    ssw_ms: float
    rec_ms: float
    failures: dict[str, list[str]] = field(default_factory=dict)

    @property
    def ssw_ratio(self) -> Fraction | None:
        return self.ssw / self.opt if self.opt else None

    @property
    def rec_ratio(self) -> Fraction | None:
        return self.rec / self.opt if self.opt else None

    @property
    def ok(self) -> bool:
        return not any(self.failures.values())

    def row(self) -> dict:
        fmt = lambda r: "" if r is None else format_rational(r)
        return {
            "seed": self.seed, "opt": format_rational(self.opt), "ssw": format_rational(self.ssw),
            "rec": format_rational(self.rec), "ssw_ratio": fmt(self.ssw_ratio),
            "rec_ratio": fmt(self.rec_ratio), "levels": self.levels,
            "ssw_ms": f"{self.ssw_ms:.1f}", "rec_ms": f"{self.rec_ms:.1f}",
        }


def evaluate(inst: Instance, *, audit: bool = True) -> BenchRecord:
    """Solve one instance three ways and run every invariant and bound check."""
    g, o = inst.graph, inst.oracle
    exact = solve_exact(g, o)
    t0 = time.perf_counter()
    ssw = run_ssw(g, o)
    t1 = time.perf_counter()
    rec = recursive_pcf(g, o, audit=audit)
    t2 = time.perf_counter()
    ssw_total = g.cost(ssw.forest.edge_ids) + o.eval(connected_components(ssw.forest.edge_ids, g))
    opt = exact.best.total
    failures = check_run(rec, g)
    _, ledger = diagnose(g, o, rec, exact)
    failures["ledger"] = [f"{c.name}: {c.lhs} {c.relation} {c.rhs} fails" for c in ledger if not c.passed]
    ratio = []
    if rec.solution.total > 2 * opt:
        ratio.append(f"recursive {rec.solution.total} > 2 * opt {opt}")
    if ssw_total > 3 * opt:
        ratio.append(f"ssw {ssw_total} > 3 * opt {opt}")
    if ssw_total != rec.levels[0].candidate.total:
        ratio.append("standalone SSW disagrees with recursion level 0")
    failures["ratio"] = ratio
    return BenchRecord(inst.seed, inst.name, opt, ssw_total, rec.solution.total, rec.level_count,
                       (t1 - t0) * 1e3, (t2 - t1) * 1e3, failures)


def _run_seed(args) -> BenchRecord:
    seed, params = args
    return evaluate(generate(seed, params))


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def run_bench(seeds, params: GenParams, workers: int | None = None) -> list[BenchRecord]:
    """Records in seed order regardless of worker count."""
    jobs = [(s, params) for s in seeds]
    workers = workers or worker_count()
    if workers == 1:
        return [_run_seed(j) for j in jobs]
    with ProcessPoolExecutor(workers) as pool:
        return list(pool.map(_run_seed, jobs))


def summarize(records: list[BenchRecord]) -> dict:
    rated = [r for r in records if r.opt]
    zero = [r for r in records if not r.opt]
    max_of = lambda xs: max(xs, default=None)
    ssw_max, rec_max = max_of([r.ssw_ratio for r in rated]), max_of([r.rec_ratio for r in rated])
    return {
        "instances": len(records),
        "opt_zero": len(zero),
        "opt_zero_nonzero_solver": sum(1 for r in zero if r.ssw or r.rec),
        "max_ssw_ratio": None if ssw_max is None else format_rational(ssw_max),
        "max_rec_ratio": None if rec_max is None else format_rational(rec_max),
        "max_ssw_ratio_float": None if ssw_max is None else float(ssw_max),
        "max_rec_ratio_float": None if rec_max is None else float(rec_max),
        "max_levels": max((r.levels for r in records), default=0),
        "failed": [{"seed": r.seed, "failures": {k: v for k, v in r.failures.items() if v}}
                   for r in records if not r.ok],
    }


def write_results(records: list[BenchRecord], out: Path) -> Path:
    """Write the CSV to ``out`` and the summary JSON next to it; returns the summary path."""
    out = Path(out)
    with out.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        w.writeheader()
        for r in records:
            w.writerow(r.row())
    summary = out.with_suffix(".summary.json")
    summary.write_text(json.dumps(summarize(records), indent=1) + "\n")
    return summary


def parse_params(pairs: list[str]) -> GenParams:
    """``key=value`` strings into :class:`GenParams`; ranges are written ``lo..hi``."""
    names = {f.name: f for f in fields(GenParams)}
    kw = {}
    for pair in pairs:
        key, sep, val = pair.partition("=")
        if not sep or key not in names:
            raise ValueError(f"bad parameter {pair!r}")
        if key in ("cost_range", "weight_range"):
            lo, _, hi = val.partition("..")
            kw[key] = (int(lo), int(hi or lo))
        elif key == "denominators":
            kw[key] = tuple(int(x) for x in val.split(","))
        elif key == "concave":
            kw[key] = "mixed" if val == "mixed" else val.lower() in ("1", "true", "yes")
        elif key == "edge_prob":
            kw[key] = float(val)
        else:
            kw[key] = int(val)
    return GenParams(**kw)
