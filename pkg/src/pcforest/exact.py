"""Brute-force optimum for desk-scale instances.

Only acyclic edge subsets are enumerated: dropping an edge that closes a
cycle leaves the components (hence the penalty) unchanged and never raises
the edge cost, so nothing is lost.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import BudgetExceeded, Forest, Graph, Solution, solution_cost

MAX_EDGES = 20


@dataclass
class ExactResult:
    best: Solution
    forests_examined: int


def iter_forests(graph: Graph):
    """Yield ``(edge ids, component masks)`` for every acyclic edge subset."""
    m = len(graph.edges)
    start = [1 << v for v in range(graph.n)]

    def rec(i, comp_of, chosen):
        if i == m:
            yield chosen, comp_of
            return
        yield from rec(i + 1, comp_of, chosen)
        e = graph.edges[i]
        cu, cv = comp_of[e.u], comp_of[e.v]
        if cu != cv:
            merged = cu | cv
            nxt = [merged if c == cu or c == cv else c for c in comp_of]
            yield from rec(i + 1, nxt, chosen + (i,))

    yield from rec(0, start, ())


def solve_exact(graph: Graph, oracle, max_edges: int = MAX_EDGES) -> ExactResult:
    """Minimum of ``c(F) + pi(CC(F))`` over all forests ``F``.

    Ties go to the lexicographically smallest sorted edge-id tuple.
    """
    if len(graph.edges) > max_edges:
        raise BudgetExceeded(f"{len(graph.edges)} edges exceeds the exact budget of {max_edges}")
    costs = [e.cost for e in graph.edges]
    best_key, best_ids = None, ()
    count = 0
    for ids, comp_of in iter_forests(graph):
        count += 1
        total = sum((costs[i] for i in ids), Fraction(0)) + oracle.eval(set(comp_of))
        key = (total, ids)
        if best_key is None or key < best_key:
            best_key, best_ids = key, ids
    return ExactResult(solution_cost(Forest.build(graph, best_ids), graph, oracle), count)
