"""Instance files and the seeded random instance generator.

Instance JSON::

    {"name": ..., "seed": ..., "vertices": n,
     "edges": [{"u": 0, "v": 1, "cost": "3/2"}, ...],
     "penalty": {"kind": "pair_coverage" | "concave_pair_coverage" | "zero",
                 "items": [{"u": 0, "v": 2, "weight": "4"}, ...],
                 "breakpoints": [["0", "0"], ["3", "3"], ["7", "5"]]}}

Every rational is a string (``"p/q"`` or an integer).
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .core import MAX_VERTICES, Graph, InstanceError, format_rational, parse_rational
from .penalty import PenaltyOracle


@dataclass(frozen=True)
class Instance:
    graph: Graph
    oracle: PenaltyOracle
    name: str = ""
    seed: int | None = None

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "seed": self.seed,
            "vertices": self.graph.n,
            "edges": [
                {"u": e.u, "v": e.v, "cost": format_rational(e.cost)} for e in self.graph.edges
            ],
            "penalty": self.oracle.to_json(),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1) + "\n"


def parse_instance(data: dict) -> Instance:
    try:
        n = int(data["vertices"])
        if n > MAX_VERTICES:
            raise InstanceError(f"{n} vertices exceeds the {MAX_VERTICES}-vertex limit")
        edges = [(int(e["u"]), int(e["v"]), parse_rational(e["cost"])) for e in data.get("edges", [])]
        graph = Graph(n, tuple(edges))
        pen = data.get("penalty", {"kind": "zero"})
        items = tuple(
            (int(it["u"]), int(it["v"]), parse_rational(it["weight"])) for it in pen.get("items", [])
        )
        bps = tuple(tuple(bp) for bp in pen.get("breakpoints", []))
        oracle = PenaltyOracle(n, pen.get("kind", "zero"), items, bps)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InstanceError):
            raise
        raise InstanceError(f"malformed instance: {exc!r}") from exc
    seed = data.get("seed")
    return Instance(graph, oracle, str(data.get("name", "")), None if seed is None else int(seed))


def load_instance(path) -> Instance:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InstanceError(f"cannot read instance {path}: {exc}") from exc
    return parse_instance(data)


@dataclass
class GenParams:
    n: int = 6
    edge_prob: float = 0.5
    cost_range: tuple[int, int] = (1, 8)
    max_edges: int | None = None
    item_count: int = 4
    weight_range: tuple[int, int] = (1, 8)
    concave: bool | str = False  # True, False or "mixed" (coin flip per seed)
    denominators: tuple[int, ...] = (1, 2)

    def __post_init__(self):
        if not 1 <= self.n <= MAX_VERTICES:
            raise InstanceError(f"n must be in 1..{MAX_VERTICES}")
        if not 0 <= self.edge_prob <= 1:
            raise InstanceError("edge_prob must be in [0, 1]")
        for lo, hi in (self.cost_range, self.weight_range):
            if lo < 0 or hi < lo:
                raise InstanceError("ranges must satisfy 0 <= lo <= hi")
        if self.item_count < 0:
            raise InstanceError("item_count must be nonnegative")
        if self.concave not in (True, False, "mixed"):
            raise InstanceError("concave must be true, false or 'mixed'")
        if self.item_count and self.n < 2:
            raise InstanceError("penalty pairs need at least two vertices")


def _rand_rational(rng: random.Random, lo: int, hi: int, dens) -> Fraction:
    d = rng.choice(dens)
    return Fraction(rng.randint(lo * d, hi * d), d)


def _rand_curve(rng: random.Random, total: Fraction):
    top = max(int(total), 2)
    k = rng.randint(1, 3)
    xs = sorted(rng.sample(range(1, top + 1), min(k, top)))
    slopes = sorted((Fraction(rng.randint(0, 4), 4) for _ in xs), reverse=True)
    slopes[0] = max(slopes[0], Fraction(1, 4))
    pts = [(Fraction(0), Fraction(0))]
    for x, s in zip(xs, slopes):
        x0, g0 = pts[-1]
        pts.append((Fraction(x), g0 + s * (x - x0)))
    if len(pts) == 2:
        x0, g0 = pts[-1]
        pts.append((x0 + 1, g0 + slopes[-1] / 2))
    return tuple(pts)


def generate(seed: int, params: GenParams | None = None, name: str | None = None) -> Instance:
    """Seeded random instance; identical seeds and params give identical files."""
    p = params or GenParams()
    rng = random.Random(seed)
    pairs = [(u, v) for u in range(p.n) for v in range(u + 1, p.n)]
    chosen = [pr for pr in pairs if rng.random() < p.edge_prob]
    if p.max_edges is not None and len(chosen) > p.max_edges:
        keep = sorted(rng.sample(range(len(chosen)), p.max_edges))
        chosen = [chosen[i] for i in keep]
    edges = tuple((u, v, _rand_rational(rng, *p.cost_range, p.denominators)) for u, v in chosen)
    items = tuple(
        (u, v, _rand_rational(rng, *p.weight_range, p.denominators))
        for u, v in (rng.choice(pairs) for _ in range(p.item_count))
    ) if p.item_count else ()
    concave = rng.random() < 0.5 if p.concave == "mixed" else p.concave
    if not items:
        oracle = PenaltyOracle(p.n, "zero")
    elif concave:
        total = sum((w for _, _, w in items), Fraction(0))
        oracle = PenaltyOracle(p.n, "concave_pair_coverage", items, _rand_curve(rng, total))
    else:
        oracle = PenaltyOracle(p.n, "pair_coverage", items)
    return Instance(Graph(p.n, edges), oracle, name or f"rand-{seed}", seed)
