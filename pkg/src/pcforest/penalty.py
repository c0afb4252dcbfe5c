"""Submodular penalty oracles over families of vertex sets.

Every built-in oracle is a (possibly concave-wrapped) weighted pair coverage:
item ``(u, v, w)`` is *hit* by a family when some member set separates ``u``
from ``v``, and the raw penalty is ``g(sum of hit weights)`` with ``g`` the
identity or a concave nondecreasing piecewise-linear curve.  A set hits an
item iff its complement does, and ``S1 | S2`` separates a pair only if ``S1``
or ``S2`` already does, so the union and complementarity axioms hold by
construction; ``g`` concave over a coverage function keeps submodularity and
monotonicity.

Marginal oracles ``pi(. | D)`` are represented flatly: an oracle carries the
accumulated base family, and every evaluation costs exactly two root calls.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .core import (
    BudgetExceeded,
    Family,
    InstanceError,
    common_denominator,
    complement,
    full_set,
    int_array,
    parse_rational,
)

KINDS = ("pair_coverage", "concave_pair_coverage", "zero")
CLOSURE_MAX_N = 12
EXHAUSTIVE_AXIOM_MAX_N = 4


@dataclass
class CallStats:
    """Shared counter of root-oracle evaluations."""

    root_calls: int = 0


@dataclass(frozen=True)
class PenaltyOracle:
    n: int
    kind: str = "zero"
    items: tuple[tuple[int, int, Fraction], ...] = ()
    breakpoints: tuple[tuple[Fraction, Fraction], ...] = ()
    base: Family = Family()
    stats: CallStats = field(default_factory=CallStats, compare=False, repr=False)
    _hit_cache: dict = field(default_factory=dict, compare=False, repr=False)
    _base_hits: int = field(default=0, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InstanceError(f"unknown penalty kind {self.kind!r}")
        items = tuple((int(u), int(v), parse_rational(w)) for u, v, w in self.items)
        for u, v, _ in items:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InstanceError(f"penalty item ({u},{v}) outside the vertex universe")
            if u == v:
                raise InstanceError(f"penalty item ({u},{v}) pairs a vertex with itself")
        if self.kind == "zero" and items:
            raise InstanceError("zero oracle takes no items")
        object.__setattr__(self, "items", items)
        bps = tuple((parse_rational(x), parse_rational(g)) for x, g in self.breakpoints)
        if self.kind == "concave_pair_coverage":
            _check_curve(bps)
        elif bps:
            raise InstanceError("breakpoints only apply to concave_pair_coverage")
        object.__setattr__(self, "breakpoints", bps)
        base = self.base if isinstance(self.base, Family) else Family(self.base)
        object.__setattr__(self, "base", base)
        self._check_universe(base)
        object.__setattr__(self, "_base_hits", self.hits(base))

    # -- structure ------------------------------------------------------------

    def set_hits(self, s: int) -> int:
        """Bitmask over ``items`` of the pairs separated by vertex set ``s``."""
        h = self._hit_cache.get(s)
        if h is None:
            h = 0
            for i, (u, v, _) in enumerate(self.items):
                if ((s >> u) & 1) != ((s >> v) & 1):
                    h |= 1 << i
            self._hit_cache[s] = h
        return h

    def hits(self, fam: Iterable[int]) -> int:
        h = 0
        for s in fam:
            h |= self.set_hits(s)
        return h

    def coverage(self, hits: int) -> Fraction:
        total = Fraction(0)
        i = 0
        while hits:
            if hits & 1:
                total += self.items[i][2]
            hits >>= 1
            i += 1
        return total

    def raw_hits(self, hits: int) -> Fraction:
        """One root-oracle call: the unconditioned penalty of a hit pattern."""
        self.stats.root_calls += 1
        c = self.coverage(hits)
        if self.kind == "concave_pair_coverage":
            return _curve_at(self.breakpoints, c)
        return c

    def eval_hits(self, hits: int) -> Fraction:
        if not self.base:
            return self.raw_hits(hits)
        return self.raw_hits(hits | self._base_hits) - self.raw_hits(self._base_hits)

    # -- public surface ---------------------------------------------------------

    def eval(self, fam: Iterable[int]) -> Fraction:
        """Penalty of ``fam`` conditioned on this oracle's base family."""
        fam = list(fam)
        self._check_universe(fam)
        return self.eval_hits(self.hits(fam))

    def raw(self, fam: Iterable[int]) -> Fraction:
        """Root penalty of ``fam``, ignoring the base family."""
        fam = list(fam)
        self._check_universe(fam)
        return self.raw_hits(self.hits(fam))

    def with_base(self, extra: Iterable[int]) -> "PenaltyOracle":
        """Marginal oracle ``pi(. | base | extra)`` of the same root oracle."""
        return PenaltyOracle(
            self.n,
            self.kind,
            self.items,
            self.breakpoints,
            self.base | extra,
            self.stats,
            self._hit_cache,
        )

    @property
    def root(self) -> "PenaltyOracle":
        return PenaltyOracle(
            self.n, self.kind, self.items, self.breakpoints, Family(), self.stats, self._hit_cache
        )

    def _check_universe(self, fam):
        top = full_set(self.n)
        for s in fam:
            if s < 0 or s & ~top:
                raise InstanceError(f"vertex set {s:#x} outside a {self.n}-vertex universe")

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "items": [{"u": u, "v": v, "weight": str(w)} for u, v, w in self.items],
        }
        if self.kind == "concave_pair_coverage":
            out["breakpoints"] = [[str(x), str(g)] for x, g in self.breakpoints]
        return out


def pair_coverage(n: int, items: Iterable[Sequence]) -> PenaltyOracle:
    return PenaltyOracle(n, "pair_coverage", tuple(tuple(it) for it in items))


def concave_pair_coverage(n: int, items: Iterable[Sequence], breakpoints) -> PenaltyOracle:
    return PenaltyOracle(
        n, "concave_pair_coverage", tuple(tuple(it) for it in items), tuple(map(tuple, breakpoints))
    )


def zero(n: int) -> PenaltyOracle:
    return PenaltyOracle(n, "zero")


def _check_curve(bps):
    if len(bps) < 2:
        raise InstanceError("a concave curve needs at least two breakpoints")
    if bps[0] != (0, 0):
        raise InstanceError("concave curve must start at (0, 0)")
    prev_slope = None
    for (x0, g0), (x1, g1) in zip(bps, bps[1:]):
        if x1 <= x0:
            raise InstanceError("breakpoint abscissae must strictly increase")
        slope = (g1 - g0) / (x1 - x0)
        if slope < 0:
            raise InstanceError("concave curve must be nondecreasing")
        if prev_slope is not None and slope > prev_slope:
            raise InstanceError("concave curve slopes must not increase")
        prev_slope = slope


def _curve_at(bps, x: Fraction) -> Fraction:
    for (x0, g0), (x1, g1) in zip(bps, bps[1:]):
        if x <= x1:
            return g0 + (g1 - g0) * (x - x0) / (x1 - x0)
    (x0, g0), (x1, g1) = bps[-2], bps[-1]
    return g1 + (g1 - g0) * (x - x1) / (x1 - x0)


# -- closure and its partition ------------------------------------------------------

def refine_partition(fam: Iterable[int], n: int) -> list[int]:
    """Coarsest partition of V refining every member of ``fam`` (and its complement).

    These are the minimal nonempty sets of the closure; blocks are ordered by
    smallest vertex.
    """
    blocks = [full_set(n)] if n else []
    for s in fam:
        nxt = []
        for b in blocks:
            inside, outside = b & s, b & ~s
            nxt.extend(x for x in (inside, outside) if x)
        blocks = nxt
    return sorted(blocks, key=lambda b: (b & -b))


def closure(fam: Iterable[int], n: int) -> Family:
    """Closure of ``fam`` under union and complement, without the trivial sets.

    ``{}`` and ``V`` belong to the closure of any nonempty family but separate
    nothing, so they are omitted.  The result is every union of atoms of the
    generated Boolean algebra, ordered by bitmask.
    """
    if n > CLOSURE_MAX_N:
        raise BudgetExceeded(f"closure materialization limited to n <= {CLOSURE_MAX_N}")
    fam = list(fam)
    if not fam:
        return Family()
    atoms = refine_partition(fam, n)
    top = full_set(n)
    out = set()
    for r in range(1, len(atoms) + 1):
        for combo in itertools.combinations(atoms, r):
            u = 0
            for a in combo:
                u |= a
            out.add(u)
    out.discard(0)
    out.discard(top)
    return Family(sorted(out))


def in_closure(s: int, fam: Iterable[int], n: int) -> bool:
    """Membership test for the full closure (trivial sets included when ``fam`` is nonempty)."""
    fam = list(fam)
    if not fam:
        return False
    return all(a & s == 0 or a & ~s == 0 for a in refine_partition(fam, n))


# -- tabulation -------------------------------------------------------------------

def tabulate(oracle, sets: Sequence[int]):
    """Penalty of every subfamily of ``sets``.

    Subfamily ``m`` (bit ``i`` set iff ``sets[i]`` is included) has penalty
    ``values[codes[m]]``.  Coverage oracles are tabulated by OR-ing hit masks,
    so only distinct hit patterns reach the oracle.
    """
    k = len(sets)
    if isinstance(oracle, PenaltyOracle):
        hs = [oracle.set_hits(s) for s in sets]
        wide = len(oracle.items) > 62
        table = np.zeros(1 << k, dtype=object if wide else np.int64)
        for i, h in enumerate(hs):
            half = 1 << i
            table[half : 2 * half] = table[:half] | (h if wide else np.int64(h))
        uniq, codes = np.unique(table, return_inverse=True)
        values = [oracle.eval_hits(int(h)) for h in uniq]
        return codes.reshape(-1), values
    index: dict[Fraction, int] = {}
    values = []
    codes = np.empty(1 << k, dtype=np.int64)
    for m in range(1 << k):
        val = Fraction(oracle.eval(Family(s for i, s in enumerate(sets) if m >> i & 1)))
        if val not in index:
            index[val] = len(values)
            values.append(val)
        codes[m] = index[val]
    return codes, values


def scaled_table(oracle, sets: Sequence[int]):
    """Integer table ``T`` and denominator ``d`` with ``pi(subfamily m) = T[m] / d``."""
    codes, values = tabulate(oracle, sets)
    d = common_denominator(values)
    scaled = int_array([v * d for v in values], headroom=4)
    return scaled[codes], d


# -- axiom validation -------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple
    lhs: Fraction
    rhs: Fraction


@dataclass
class AxiomReport:
    n: int
    exhaustive: bool
    checks: int = 0
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, axiom, witness, lhs, rhs):
        self.violations.append(Violation(axiom, witness, Fraction(lhs), Fraction(rhs)))


def validate_axioms(oracle, n: int, sample_budget: int = 100_000, seed: int = 0) -> AxiomReport:
    """Check the five penalty axioms (plus nonnegativity) and report witnesses.

    For ``n <= 4`` every family over the ``2**n`` vertex subsets is tabulated
    and empty-set, nonnegativity, monotonicity, union and complementarity are
    checked exhaustively; submodularity is checked exhaustively in its local
    form (equivalent to the pairwise form) and additionally on all pairs, or
    ``sample_budget`` random pairs when there are more.  Larger ``n`` falls
    back to random families.  Any object with ``eval(family)`` is accepted.
    """
    if getattr(oracle, "n", n) != n:
        raise InstanceError(f"oracle universe has {oracle.n} vertices, not {n}")
    if n <= EXHAUSTIVE_AXIOM_MAX_N:
        return _validate_exhaustive(oracle, n, sample_budget, seed)
    return _validate_sampled(oracle, n, sample_budget, seed)


def _fam(mask: int) -> Family:
    return Family(s for s in range(mask.bit_length()) if mask >> s & 1)


def _validate_exhaustive(oracle, n, budget, seed) -> AxiomReport:
    k = 1 << n
    report = AxiomReport(n, exhaustive=True)
    T, d = scaled_table(oracle, list(range(k)))
    size = 1 << k
    masks = np.arange(size, dtype=np.int64)

    def val(m):
        return Fraction(int(T[m]), d)

    def first_bad(cond):
        bad = np.flatnonzero(~cond)
        return int(bad[0]) if bad.size else None

    report.checks += 1
    if T[0] != 0:
        report.add("empty_set", (Family(),), val(0), 0)

    report.checks += size
    m = first_bad(T >= 0)
    if m is not None:
        report.add("nonnegativity", (_fam(m),), val(m), 0)

    for i in range(k):
        bit = 1 << i
        base = masks[(masks & bit) == 0]
        report.checks += base.size
        j = first_bad(T[base | bit] >= T[base])
        if j is not None:
            m = int(base[j])
            report.add("monotonicity", (_fam(m), _fam(m | bit)), val(m), val(m | bit))
            break

    found = False
    for i in range(k):
        for j in range(i + 1, k):
            bi, bj = 1 << i, 1 << j
            base = masks[(masks & (bi | bj)) == 0]
            report.checks += base.size
            cond = T[base | bi] + T[base | bj] >= T[base | bi | bj] + T[base]
            t = first_bad(cond)
            if t is not None:
                m = int(base[t])
                report.add(
                    "submodularity",
                    (_fam(m | bi), _fam(m | bj)),
                    val(m | bi) + val(m | bj),
                    val(m | bi | bj) + val(m),
                )
                found = True
                break
        if found:
            break

    if size * size <= budget:
        a, b = np.meshgrid(masks, masks, indexing="ij")
        a, b = a.reshape(-1), b.reshape(-1)
    else:
        rng = np.random.default_rng(seed)
        a = rng.integers(0, size, budget, dtype=np.int64)
        b = rng.integers(0, size, budget, dtype=np.int64)
    report.checks += a.size
    t = first_bad(T[a] + T[b] >= T[a | b] + T[a & b])
    if t is not None and not found:
        x, y = int(a[t]), int(b[t])
        report.add("submodularity", (_fam(x), _fam(y)), val(x) + val(y), val(x | y) + val(x & y))

    for s1 in range(k):
        for s2 in range(k):
            report.checks += 1
            pair = (1 << s1) | (1 << s2)
            triple = pair | (1 << (s1 | s2))
            if T[pair] != T[triple]:
                report.add("union", (s1, s2), val(pair), val(triple))
                break
        else:
            continue
        break

    for s in range(k):
        report.checks += 1
        single, both = 1 << s, (1 << s) | (1 << complement(s, n))
        if T[single] != T[both]:
            report.add("complementarity", (s,), val(single), val(both))
            break
    return report


def _validate_sampled(oracle, n, budget, seed) -> AxiomReport:
    import random

    rng = random.Random(seed)
    top = full_set(n)
    report = AxiomReport(n, exhaustive=False)

    def rand_set():
        return rng.randrange(0, top + 1)

    def rand_fam():
        return Family(rand_set() for _ in range(rng.randint(0, 4)))

    report.checks += 1
    if oracle.eval(Family()) != 0:
        report.add("empty_set", (Family(),), oracle.eval(Family()), 0)
    seen = set()
    for _ in range(budget):
        f1, f2 = rand_fam(), rand_fam()
        v1, v2 = oracle.eval(f1), oracle.eval(f2)
        vu, vi = oracle.eval(f1 | f2), oracle.eval(f1 & f2)
        report.checks += 1
        if min(v1, v2) < 0 and "nonnegativity" not in seen:
            seen.add("nonnegativity")
            report.add("nonnegativity", (f1 if v1 < 0 else f2,), min(v1, v2), 0)
        if vu < max(v1, v2) and "monotonicity" not in seen:
            seen.add("monotonicity")
            report.add("monotonicity", (f1, f1 | f2), v1, vu)
        if v1 + v2 < vu + vi and "submodularity" not in seen:
            seen.add("submodularity")
            report.add("submodularity", (f1, f2), v1 + v2, vu + vi)
        s1, s2 = rand_set(), rand_set()
        a, b = oracle.eval(Family.of(s1, s2)), oracle.eval(Family.of(s1, s2, s1 | s2))
        if a != b and "union" not in seen:
            seen.add("union")
            report.add("union", (s1, s2), a, b)
        a, b = oracle.eval(Family.of(s1)), oracle.eval(Family.of(s1, complement(s1, n)))
        if a != b and "complementarity" not in seen:
            seen.add("complementarity")
            report.add("complementarity", (s1,), a, b)
    return report
