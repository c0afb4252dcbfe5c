"""Shared model types: rationals, vertex sets, families, graphs and forests.

Vertex sets are plain ``int`` bitmasks (bit ``v`` set iff vertex ``v`` is in
the set), so union/intersection/difference are ``|``, ``&`` and ``& ~``.
All scalars are :class:`fractions.Fraction`; nothing in the solver path
ever touches floating point.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

MAX_VERTICES = 64

_RATIONAL_RE = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


class InstanceError(ValueError):
    """Malformed or out-of-range problem data."""


class BudgetExceeded(RuntimeError):
    """An enumeration or materialization exceeds its configured budget."""


# -- rationals ---------------------------------------------------------------

def parse_rational(text, *, allow_negative: bool = False) -> Fraction:
    """Parse ``"p/q"`` or an integer string into an exact Fraction."""
    if isinstance(text, Fraction):
        value = text
    elif isinstance(text, int) and not isinstance(text, bool):
        value = Fraction(text)
    elif isinstance(text, str) and _RATIONAL_RE.match(text):
        try:
            value = Fraction(text.replace(" ", ""))
        except ZeroDivisionError:
            raise InstanceError(f"zero denominator in {text!r}") from None
    else:
        raise InstanceError(f"not a rational literal: {text!r}")
    if value < 0 and not allow_negative:
        raise InstanceError(f"negative value not allowed: {text!r}")
    return value


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


# -- vertex sets ---------------------------------------------------------------

def vset(*vertices: int) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def full_set(n: int) -> int:
    return (1 << n) - 1


def complement(s: int, n: int) -> int:
    return full_set(n) & ~s


def members(s: int) -> list[int]:
    out = []
    v = 0
    while s:
        if s & 1:
            out.append(v)
        s >>= 1
        v += 1
    return out


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


def lowest_vertex(s: int) -> int:
    return (s & -s).bit_length() - 1


class Family:
    """Deduplicated, insertion-ordered collection of vertex sets.

    Equality and hashing ignore order; iteration follows insertion order so
    that every scan over a family is deterministic.
    """

    __slots__ = ("sets", "_frozen")

    def __init__(self, sets: Iterable[int] = ()):
        self.sets: tuple[int, ...] = tuple(dict.fromkeys(int(s) for s in sets))
        self._frozen = frozenset(self.sets)

    @classmethod
    def of(cls, *sets: int) -> "Family":
        return cls(sets)

    def __iter__(self) -> Iterator[int]:
        return iter(self.sets)

    def __len__(self) -> int:
        return len(self.sets)

    def __contains__(self, s) -> bool:
        return s in self._frozen

    def __bool__(self) -> bool:
        return bool(self.sets)

    def __eq__(self, other) -> bool:
        if isinstance(other, Family):
            return self._frozen == other._frozen
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._frozen)

    def __or__(self, other: Iterable[int]) -> "Family":
        return Family((*self.sets, *other))

    union = __or__

    def __and__(self, other: Iterable[int]) -> "Family":
        keep = set(other)
        return Family(s for s in self.sets if s in keep)

    def __sub__(self, other: Iterable[int]) -> "Family":
        drop = set(other)
        return Family(s for s in self.sets if s not in drop)

    def issubset(self, other: "Family") -> bool:
        return self._frozen <= other._frozen

    def as_lists(self) -> list[list[int]]:
        return [members(s) for s in self.sets]

    def __repr__(self) -> str:
        inner = ", ".join("{" + ",".join(map(str, members(s))) + "}" for s in self.sets)
        return f"Family({inner})"


# -- graphs ---------------------------------------------------------------------

@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    cost: Fraction

    @property
    def mask(self) -> int:
        return (1 << self.u) | (1 << self.v)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VERTICES:
            raise InstanceError(f"vertex count {self.n} outside [0, {MAX_VERTICES}]")
        edges = tuple(
            e if isinstance(e, Edge) else Edge(int(e[0]), int(e[1]), parse_rational(e[2]))
            for e in self.edges
        )
        for i, e in enumerate(edges):
            if not (0 <= e.u < self.n and 0 <= e.v < self.n):
                raise InstanceError(f"edge {i} has an endpoint outside 0..{self.n - 1}")
            if e.u == e.v:
                raise InstanceError(f"edge {i} is a self-loop")
            if e.cost < 0:
                raise InstanceError(f"edge {i} has negative cost")
        object.__setattr__(self, "edges", edges)

    @property
    def all_vertices(self) -> int:
        return full_set(self.n)

    def cost(self, edge_ids: Iterable[int]) -> Fraction:
        return sum((self.edges[i].cost for i in edge_ids), Fraction(0))


class UnionFind:
    """Disjoint-set forest with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


@dataclass(frozen=True)
class Forest:
    """An acyclic set of edge ids of some graph."""

    edge_ids: frozenset[int] = frozenset()

    @classmethod
    def build(cls, graph: Graph, edge_ids: Iterable[int] = ()) -> "Forest":
        ids = frozenset(int(i) for i in edge_ids)
        uf = UnionFind(graph.n)
        for i in sorted(ids):
            if not 0 <= i < len(graph.edges):
                raise InstanceError(f"edge id {i} out of range")
            e = graph.edges[i]
            if not uf.union(e.u, e.v):
                raise InstanceError(f"edge set contains a cycle through edge {i}")
        return cls(ids)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.edge_ids))

    def __len__(self) -> int:
        return len(self.edge_ids)

    def without(self, edge_id: int) -> "Forest":
        return Forest(self.edge_ids - {edge_id})

    def sorted(self) -> list[int]:
        return sorted(self.edge_ids)


def cut_edges(s: int, forest: Iterable[int], graph: Graph) -> list[int]:
    """Edges of ``forest`` with exactly one endpoint in ``s``, by edge index."""
    out = []
    for i in sorted(forest):
        e = graph.edges[i]
        if ((s >> e.u) & 1) != ((s >> e.v) & 1):
            out.append(i)
    return out


def connected_components(forest: Iterable[int], graph: Graph) -> Family:
    """Connected components of ``forest`` over all vertices, ordered by smallest vertex."""
    uf = UnionFind(graph.n)
    for i in forest:
        e = graph.edges[i]
        uf.union(e.u, e.v)
    comps: dict[int, int] = {}
    for v in range(graph.n):
        r = uf.find(v)
        comps[r] = comps.get(r, 0) | (1 << v)
    return Family(sorted(comps.values(), key=lowest_vertex))


@dataclass(frozen=True)
class Solution:
    forest: Forest
    paid_components: Family
    forest_cost: Fraction
    penalty_cost: Fraction
    total: Fraction = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "total", self.forest_cost + self.penalty_cost)

    def to_json(self) -> dict:
        return {
            "total": format_rational(self.total),
            "forest_cost": format_rational(self.forest_cost),
            "penalty_cost": format_rational(self.penalty_cost),
            "forest": self.forest.sorted(),
        }


def solution_cost(forest: Forest | Sequence[int], graph: Graph, oracle) -> Solution:
    """Cost of a forest: edge cost plus the penalty of its components.

    The penalty family is the closure of the components, which the oracle
    prices identically, so the closure is never built.
    """
    if not isinstance(forest, Forest):
        forest = Forest.build(graph, forest)
    comps = connected_components(forest.edge_ids, graph)
    return Solution(forest, comps, graph.cost(forest.edge_ids), oracle.eval(comps))


# -- exact integer scaling for vectorized tables -------------------------------

def common_denominator(values: Iterable[Fraction]) -> int:
    return math.lcm(1, *(Fraction(v).denominator for v in values))


def int_array(values: Sequence[int], headroom: int = 1):
    """numpy array of python ints, int64 when ``headroom * max|v|`` is safe."""
    import numpy as np

    bound = max((abs(int(v)) for v in values), default=0) * max(headroom, 1)
    dtype = np.int64 if bound < 2**62 else object
    return np.array([int(v) for v in values], dtype=dtype)
