"""Recursive 2-approximation: SSW on successively conditioned penalties.

Each level runs SSW against ``pi(. | D_base)``, where ``D_base`` is the union
of the tight families of all earlier levels, and stops once a level's tight
family has zero conditioned penalty.  The recursion is tail-shaped after
flattening nested marginals into one base family, so it runs as a loop.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import IO

from .core import Family, Forest, Graph, Solution, connected_components, solution_cost
from .penalty import refine_partition
from .ssw import SSWResult, run_ssw


@dataclass
class RecursionLevel:
    depth: int
    base: Family
    oracle: object
    ssw: SSWResult
    marginal_tight_penalty: Fraction
    level_cost: Fraction
    candidate: Solution
    partition_size: int

    @property
    def ssw_forest(self) -> Forest:
        return self.ssw.forest

    @property
    def ssw_tight(self) -> Family:
        return self.ssw.tight

    def summary(self) -> dict:
        return {
            "depth": self.depth,
            "marginal_tight_penalty": str(self.marginal_tight_penalty),
            "candidate_total": str(self.candidate.total),
            "partition_size": self.partition_size,
        }


@dataclass
class RecursiveResult:
    solution: Solution
    levels: list[RecursionLevel]
    best_depth: int
    nested_choice: list[int]

    @property
    def level_count(self) -> int:
        return len(self.levels)


def minimal_partition(base, n: int) -> Family:
    """Minimal nonempty sets of ``closure(base)``; a partition of V."""
    return Family(refine_partition(base, n))


def _nested_choices(levels: list[RecursionLevel], graph: Graph) -> list[int]:
    """Depth each level would return under literal recursion with its own penalty."""
    choice = [0] * len(levels)
    choice[-1] = len(levels) - 1
    for k in range(len(levels) - 2, -1, -1):
        oracle = levels[k].oracle
        deeper = levels[choice[k + 1]].candidate.forest
        rec_cost = graph.cost(deeper.edge_ids) + oracle.eval(connected_components(deeper.edge_ids, graph))
        choice[k] = k if levels[k].level_cost <= rec_cost else choice[k + 1]
    return choice


def recursive_pcf(graph: Graph, oracle, *, backend: str = "auto", audit: bool = False,
                  trace: IO[str] | None = None) -> RecursiveResult:
    """Best forest over all levels, every candidate priced under ``oracle``.

    Candidates are compared under the original penalty; on ties the
    shallower level wins.
    """
    base = Family()
    levels: list[RecursionLevel] = []
    prev_parts = 1
    while True:
        depth = len(levels)
        if depth > graph.n:
            raise AssertionError(f"recursion depth {depth} exceeds n={graph.n}")
        level_oracle = oracle.with_base(base) if base else oracle
        res = run_ssw(graph, level_oracle, backend=backend, audit=audit, trace=trace)
        comps = connected_components(res.forest.edge_ids, graph)
        level_cost = graph.cost(res.forest.edge_ids) + level_oracle.eval(comps)
        marginal = level_oracle.eval(res.tight)
        level = RecursionLevel(
            depth=depth,
            base=base,
            oracle=level_oracle,
            ssw=res,
            marginal_tight_penalty=marginal,
            level_cost=level_cost,
            candidate=solution_cost(res.forest, graph, oracle),
            partition_size=len(minimal_partition(base | res.tight, graph.n)),
        )
        levels.append(level)
        if trace is not None:
            trace.write(json.dumps({"kind": "level", **level.summary()}) + "\n")
        if marginal == 0:
            break
        if level.partition_size <= prev_parts:
            raise AssertionError(
                f"minimal partition did not grow at depth {depth}: {prev_parts} -> {level.partition_size}"
            )
        prev_parts = level.partition_size
        base = base | res.tight

    best = min(range(len(levels)), key=lambda k: (levels[k].candidate.total, k))
    return RecursiveResult(levels[best].candidate, levels, best, _nested_choices(levels, graph))
