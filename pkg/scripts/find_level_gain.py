"""Search seeded small instances for one where a deeper recursion level beats level 0.

Usage: python scripts/find_level_gain.py --n 4 --seeds 0..2000
"""
import argparse
import sys

from pcforest.bench import parse_params
from pcforest.cli import _seed_range
from pcforest.instance import generate
from pcforest.recursive import recursive_pcf


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=_seed_range, default=range(0, 2001))
    ap.add_argument("--params", nargs="*", default=["n=4", "edge_prob=0.7", "item_count=3"])
    ap.add_argument("--limit", type=int, default=5, help="stop after this many hits")
    args = ap.parse_args(argv)
    params = parse_params(args.params)
    hits = 0
    for seed in args.seeds:
        inst = generate(seed, params)
        rec = recursive_pcf(inst.graph, inst.oracle)
        if rec.best_depth > 0 and rec.solution.total < rec.levels[0].candidate.total:
            hits += 1
            print(f"seed {seed}: level 0 pays {rec.levels[0].candidate.total}, "
                  f"level {rec.best_depth} pays {rec.solution.total}")
            if hits >= args.limit:
                break
    if not hits:
        print("no instance found", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
