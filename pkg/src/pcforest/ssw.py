"""Primal-dual moat growing with submodular family constraints (the SSW 3-approximation).

Every active component grows its dual ``y_S`` at unit rate and colors the
edges it cuts.  Growth stops at the first of two events: an edge between
distinct components becomes fully colored (it joins the forest and its
components merge into a new active component), or some family containing an
active set becomes tight (its active members are deactivated and the family
is recorded).  When nothing is active the forest is pruned against the
recorded tight sets.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import IO, Iterable

from .core import Family, Forest, Graph, InstanceError, cut_edges
from .sfm import INF, GroundSet, epsilon_family, find_tight_family


@dataclass
class TraceEvent:
    time: Fraction
    kind: str
    sets: tuple[int, ...] = ()
    edges: tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {
            "t": str(self.time),
            "kind": self.kind,
            "sets": [hex(s) for s in self.sets],
            "edges": list(self.edges),
        }


@dataclass
class GrowthState:
    """Mutable state of one SSW run."""

    graph: Graph
    forest: list[int] = field(default_factory=list)
    components: list[int] = field(default_factory=list)
    active: list[int] = field(default_factory=list)
    y: dict[int, Fraction] = field(default_factory=dict)
    colored: list[Fraction] = field(default_factory=list)
    tight: list[int] = field(default_factory=list)
    recorded: list[int] = field(default_factory=list)
    clock: Fraction = Fraction(0)
    iterations: int = 0
    trace: list[TraceEvent] = field(default_factory=list)
    audit: list[tuple[bool, bool]] = field(default_factory=list)

    @classmethod
    def initial(cls, graph: Graph) -> "GrowthState":
        singles = [1 << v for v in range(graph.n)]
        return cls(
            graph,
            components=list(singles),
            active=list(singles),
            colored=[Fraction(0)] * len(graph.edges),
            recorded=list(singles),
        )

    def component_of(self, v: int) -> int:
        for c in self.components:
            if c >> v & 1:
                return c
        raise AssertionError(f"vertex {v} lost from the component partition")

    def ground(self) -> GroundSet:
        """Active sets plus inactive sets with positive duration, in recorded order."""
        act = set(self.active)
        elems = [s for s in self.recorded if s in act or self.y.get(s, 0) > 0]
        return GroundSet.build(elems, act)

    def emit(self, kind, sets=(), edges=()):
        self.trace.append(TraceEvent(self.clock, kind, tuple(sets), tuple(edges)))


@dataclass
class SSWResult:
    forest: Forest
    tight: Family
    y: dict[int, Fraction]
    colored: list[Fraction]
    clock: Fraction
    iterations: int
    recorded: tuple[int, ...]
    unpruned: Forest
    trace: list[TraceEvent]
    audit: list[tuple[bool, bool]]

    @property
    def dual_total(self) -> Fraction:
        return sum(self.y.values(), Fraction(0))


def epsilon_edge(state: GrowthState, graph: Graph):
    """First edge to become fully colored: ``(time, edge id)`` or ``(INF, None)``."""
    act = set(state.active)
    best, best_id = INF, None
    for i, e in enumerate(graph.edges):
        su, sv = state.component_of(e.u), state.component_of(e.v)
        if su == sv:
            continue
        rate = (su in act) + (sv in act)
        if rate == 0:
            continue
        t = (e.cost - state.colored[i]) / rate
        if t < best:
            best, best_id = t, i
    return best, best_id


def _advance(state: GrowthState, eps: Fraction):
    act = set(state.active)
    for s in state.active:
        state.y[s] = state.y.get(s, Fraction(0)) + eps
    for i, e in enumerate(state.graph.edges):
        su, sv = state.component_of(e.u), state.component_of(e.v)
        if su != sv:
            state.colored[i] += eps * ((su in act) + (sv in act))
    state.clock += eps
    if eps:
        state.emit("grow", state.active)


def _merge_full_edges(state: GrowthState) -> int:
    merges = 0
    for i, e in enumerate(state.graph.edges):
        if state.colored[i] != e.cost:
            continue
        su, sv = state.component_of(e.u), state.component_of(e.v)
        if su == sv:
            continue
        state.emit("edge_tight", edges=(i,))
        merged = su | sv
        state.forest.append(i)
        state.components = [c for c in state.components if c not in (su, sv)] + [merged]
        state.active = [c for c in state.active if c not in (su, sv)] + [merged]
        state.recorded.append(merged)
        state.emit("merge", sets=(su, sv, merged), edges=(i,))
        merges += 1
    return merges


def _deactivate_tight(state: GrowthState, oracle, backend: str) -> int:
    count = 0
    while state.active:
        fam = find_tight_family(oracle, state.y, state.ground(), backend)
        if fam is None:
            break
        state.emit("family_tight", sets=fam)
        gone = [s for s in state.active if s in fam]
        state.active = [s for s in state.active if s not in fam]
        for s in fam:
            if s not in state.tight:
                state.tight.append(s)
        state.emit("deactivate", sets=gone)
        count += len(gone)
    return count


def step(state: GrowthState, graph: Graph, oracle, backend: str = "auto", audit: bool = False):
    """One loop iteration: grow to the next event, merge, then retire tight families."""
    if not state.active:
        raise ValueError("step requires at least one active set")
    eps_e, _ = epsilon_edge(state, graph)
    ground = state.ground()
    eps_f = epsilon_family(oracle, state.y, ground, backend)
    if audit:
        tight_now = find_tight_family(oracle, state.y, ground, backend) is not None
        state.audit.append((eps_f == 0, tight_now))
    eps = min(eps_e, eps_f)
    if eps == INF:
        raise AssertionError("no event ahead with active sets remaining")
    _advance(state, eps)
    merges = _merge_full_edges(state)
    retired = _deactivate_tight(state, oracle, backend)
    state.iterations += 1
    if merges == 0 and retired == 0:
        raise AssertionError(f"iteration {state.iterations} made no progress at t={state.clock}")
    return state


def prune(forest: Iterable[int], tight: Iterable[int], graph: Graph, state: GrowthState | None = None):
    """Drop forest edges that are the only forest edge cut by some tight set.

    Scans tight sets in insertion order and restarts after each removal.
    """
    edges = set(forest)
    tight = list(tight)
    changed = True
    while changed:
        changed = False
        for s in tight:
            cut = cut_edges(s, edges, graph)
            if len(cut) == 1:
                edges.discard(cut[0])
                if state is not None:
                    state.emit("prune", sets=(s,), edges=(cut[0],))
                changed = True
                break
    return Forest.build(graph, edges)


def run_ssw(graph: Graph, oracle, *, backend: str = "auto", audit: bool = False,
            trace: IO[str] | None = None) -> SSWResult:
    """Run moat growing to completion and prune.

    Returns the pruned forest, the union of all tight families, and the dual
    certificate (final ``y``, edge coloring and clock).  With ``audit`` the
    equivalence ``epsilon_family == 0 <=> a tight family exists`` is recorded
    at the start of every iteration.
    """
    if getattr(oracle, "n", graph.n) != graph.n:
        raise InstanceError("penalty oracle and graph disagree on the vertex universe")
    state = GrowthState.initial(graph)
    limit = 2 * graph.n
    while state.active:
        step(state, graph, oracle, backend, audit)
        if state.iterations > limit:
            raise AssertionError(f"SSW exceeded {limit} iterations")
    unpruned = Forest.build(graph, state.forest)
    forest = prune(state.forest, state.tight, graph, state)
    if trace is not None:
        for ev in state.trace:
            trace.write(json.dumps(ev.to_json()) + "\n")
    return SSWResult(
        forest=forest,
        tight=Family(state.tight),
        y={s: v for s, v in state.y.items() if v},
        colored=list(state.colored),
        clock=state.clock,
        iterations=state.iterations,
        recorded=tuple(state.recorded),
        unpruned=unpruned,
        trace=state.trace,
        audit=state.audit,
    )
