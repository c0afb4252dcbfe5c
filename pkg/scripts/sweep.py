"""Run the benchmark over a small grid of instance sizes and print one summary line per cell.

Usage: python scripts/sweep.py --seeds 0..99 --out results/
Set PCFOREST_WORKERS to use a process pool.
"""
import argparse
import json
import sys
from pathlib import Path

from pcforest.bench import parse_params, run_bench, summarize, write_results
from pcforest.cli import _seed_range

GRID = [
    ["n=4", "edge_prob=0.8", "item_count=3"],
    ["n=6", "edge_prob=0.5", "item_count=4", "concave=mixed"],
    ["n=8", "edge_prob=0.45", "max_edges=14", "item_count=5", "concave=mixed"],
]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=_seed_range, default=range(0, 50))
    ap.add_argument("--out", default="results")
    args = ap.parse_args(argv)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    bad = 0
    for cell in GRID:
        records = run_bench(args.seeds, parse_params(cell))
        tag = "_".join(p.replace("=", "") for p in cell)
        write_results(records, out / f"{tag}.csv")
        s = summarize(records)
        bad += len(s["failed"])
        print(json.dumps({"params": cell, "max_ssw": s["max_ssw_ratio"], "max_rec": s["max_rec_ratio"],
                          "max_levels": s["max_levels"], "failed": len(s["failed"])}))
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
