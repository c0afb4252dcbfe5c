"""Per-run invariant checks shared by the benchmark and the acceptance suite.

Each check returns a list of human-readable failure strings; an empty list
means the run satisfied the property exactly.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .core import Graph, common_denominator, connected_components, cut_edges, int_array
from .penalty import in_closure, tabulate
from .recursive import RecursiveResult, minimal_partition
from .ssw import SSWResult

DUAL_FAMILY_MAX = 16
CLOSURE_CHECK_MAX_N = 8


def dual_feasibility(res: SSWResult, graph: Graph, oracle) -> list[str]:
    """Edge colors within cost, colors match the duals, and no family is overpaid."""
    out = []
    for i, e in enumerate(graph.edges):
        if res.colored[i] > e.cost:
            out.append(f"edge {i} colored {res.colored[i]} > cost {e.cost}")
        # coloring is frozen once both endpoints share a component, so only
        # sets cutting the edge at that time contributed; the sum over all
        # recorded sets cutting it is an upper bound
        paid = sum((res.y.get(s, Fraction(0)) for s in res.recorded if (s >> e.u ^ s >> e.v) & 1),
                   Fraction(0))
        if res.colored[i] > paid:
            out.append(f"edge {i} colored {res.colored[i]} beyond its cutting duals {paid}")
    sets = list(res.recorded)
    if len(sets) > DUAL_FAMILY_MAX:
        return out
    codes, values = tabulate(oracle, sets)
    ys = [res.y.get(s, Fraction(0)) for s in sets]
    d = common_denominator(list(values) + ys)
    pen = int_array([v * d for v in values], headroom=4)[codes]
    dual = np.zeros(1 << len(sets), dtype=pen.dtype)
    for i, yv in enumerate(ys):
        half = 1 << i
        dual[half : 2 * half] = dual[:half] + int(yv * d)
    bad = np.nonzero(dual > pen)[0]
    if len(bad):
        m = int(bad[0])
        out.append(f"subfamily {m:#x} of recorded sets has duals {Fraction(int(dual[m]), d)}"
                   f" > penalty {Fraction(int(pen[m]), d)}")
    return out


def tightness(res: SSWResult, oracle) -> list[str]:
    ysum = sum((res.y.get(s, Fraction(0)) for s in res.tight), Fraction(0))
    pen = oracle.eval(res.tight)
    return [] if ysum == pen else [f"tight family duals {ysum} != penalty {pen}"]


def structural(res: SSWResult, graph: Graph, oracle) -> list[str]:
    """Penalty of the forest's components, closure containment and the 2x dual edge bound."""
    out = []
    comps = connected_components(res.forest.edge_ids, graph)
    pen_f, pen_d = oracle.eval(comps), oracle.eval(res.tight)
    if pen_f > pen_d:
        out.append(f"forest penalty {pen_f} > tight penalty {pen_d}")
    if graph.n <= CLOSURE_CHECK_MAX_N:
        for c in comps:
            if not in_closure(c, res.tight, graph.n):
                out.append(f"component {c:#x} outside the closure of the tight family")
    cost, duals = graph.cost(res.forest.edge_ids), res.dual_total
    if cost > 2 * duals:
        out.append(f"forest cost {cost} > 2 * duals {2 * duals}")
    for s in res.tight:
        if len(cut_edges(s, res.forest.edge_ids, graph)) == 1:
            out.append(f"tight set {s:#x} still cuts exactly one forest edge after pruning")
    return out


def recursion(rec: RecursiveResult, graph: Graph) -> list[str]:
    out = []
    if rec.level_count > max(graph.n, 1):
        out.append(f"{rec.level_count} levels > n = {graph.n}")
    prev = 1
    for lvl in rec.levels[:-1]:
        size = len(minimal_partition(lvl.base | lvl.ssw.tight, graph.n))
        if size <= prev:
            out.append(f"minimal partition did not grow at depth {lvl.depth}: {prev} -> {size}")
        prev = size
    if rec.levels[-1].marginal_tight_penalty != 0:
        out.append("recursion stopped with a nonzero marginal tight penalty")
    return out


def audit(res: SSWResult) -> list[str]:
    return [f"step {i}: epsilon_family==0 is {a} but tight family exists is {b}"
            for i, (a, b) in enumerate(res.audit) if a != b]


def check_run(rec: RecursiveResult, graph: Graph) -> dict[str, list[str]]:
    """Every per-level invariant over a recursive run, grouped by property."""
    found = {"dual": [], "tight": [], "structural": [], "recursion": recursion(rec, graph), "audit": []}
    for lvl in rec.levels:
        tag = f"level {lvl.depth}: "
        found["dual"] += [tag + m for m in dual_feasibility(lvl.ssw, graph, lvl.oracle)]
        found["tight"] += [tag + m for m in tightness(lvl.ssw, lvl.oracle)]
        found["structural"] += [tag + m for m in structural(lvl.ssw, graph, lvl.oracle)]
        found["audit"] += [tag + m for m in audit(lvl.ssw)]
    return found
