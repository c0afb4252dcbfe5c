"""Submodular minimization over small ground sets of candidate moats.

A ground set is an ordered list of vertex sets; a subfamily is a bitmask
over that list.  The default backend tabulates the function over every
subfamily with exact integer arithmetic (numpy, after scaling to a common
denominator).  Above ``EXHAUSTIVE_MAX`` elements a Fujishige-Wolfe
minimum-norm-point solver proposes candidates in floating point, and the
candidate is re-scored exactly.

Ties between minimizers go to the smallest subfamily bitmask.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .core import Family, common_denominator, int_array
from .penalty import scaled_table

EXHAUSTIVE_MAX = 20
INF = math.inf

_MNP_EPS = 1e-10


@dataclass(frozen=True)
class GroundSet:
    elements: tuple[int, ...]
    active_mask: int = 0

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("ground set elements must be distinct")

    @classmethod
    def build(cls, elements: Sequence[int], active: Sequence[int] = ()) -> "GroundSet":
        elements = tuple(elements)
        act = set(active)
        return cls(elements, sum(1 << i for i, s in enumerate(elements) if s in act))

    def __len__(self) -> int:
        return len(self.elements)

    def index(self, s: int) -> int:
        return self.elements.index(s)

    def active_indices(self) -> list[int]:
        return [i for i in range(len(self.elements)) if self.active_mask >> i & 1]

    def family(self, mask: int) -> Family:
        return Family(s for i, s in enumerate(self.elements) if mask >> i & 1)


def _doubling(weights: Sequence[int]) -> np.ndarray:
    """Table of subset sums of ``weights`` indexed by bitmask."""
    k = len(weights)
    bound = sum(abs(w) for w in weights)
    dtype = np.int64 if bound < 2**60 else object
    table = np.zeros(1 << k, dtype=dtype)
    for i, w in enumerate(weights):
        half = 1 << i
        table[half : 2 * half] = table[:half] + w
    return table


def _fits(*bounds: int) -> bool:
    return sum(bounds) < 2**62


class ReducedFunction:
    """``h(F) = pi(F) - sum_{S in F} y_S - eps * |F & active|`` over a ground set.

    ``h`` is a submodular penalty minus a modular term, with ``h(empty) = 0``.
    """

    def __init__(self, oracle, ground: GroundSet, y: Mapping[int, Fraction] | None = None,
                 eps: Fraction = Fraction(0)):
        self.oracle = oracle
        self.ground = ground
        self.y = {} if y is None else y
        self.eps = Fraction(eps)
        self._base = None

    def __len__(self) -> int:
        return len(self.ground)

    def at(self, eps) -> "ReducedFunction":
        """Same function with a different ``eps``, sharing the tabulation."""
        other = ReducedFunction(self.oracle, self.ground, self.y, eps)
        other._base = self._base
        return other

    def __call__(self, mask: int) -> Fraction:
        fam = self.ground.family(mask)
        ys = sum((self.y.get(s, Fraction(0)) for s in fam), Fraction(0))
        n_active = (mask & self.ground.active_mask).bit_count()
        return self.oracle.eval(fam) - ys - self.eps * n_active

    def base_table(self):
        """``(B, A, d)``: ``pi - sum y = B / d`` and active counts ``A`` per subfamily."""
        if self._base is None:
            pi_t, d_pi = scaled_table(self.oracle, self.ground.elements)
            ys = [self.y.get(s, Fraction(0)) for s in self.ground.elements]
            d = common_denominator([Fraction(1, d_pi), *ys])
            y_t = _doubling([int(v * d) for v in ys])
            a_t = _doubling([1 if self.ground.active_mask >> i & 1 else 0
                             for i in range(len(self.ground))])
            scale = d // d_pi
            if not _fits(_absmax(pi_t) * scale, _absmax(y_t)):
                pi_t, y_t = pi_t.astype(object), y_t.astype(object)
            self._base = (pi_t * scale - y_t, a_t, d)
        return self._base

    def table(self):
        """``(H, d)`` with ``h(m) = H[m] / d`` exactly."""
        b, a, d = self.base_table()
        p, q = self.eps.numerator, self.eps.denominator
        if p == 0:
            return b, d
        if not _fits(_absmax(b) * q, abs(p) * d * len(self.ground)):
            b = b.astype(object)
        return b * q - a * (p * d), d * q


class TabularFunction:
    """A set function given by its full value table (test and benchmark aid)."""

    def __init__(self, values: Sequence, ground: GroundSet | None = None):
        k = int(math.log2(len(values)))
        if 1 << k != len(values):
            raise ValueError("table length must be a power of two")
        self.values = [Fraction(v) for v in values]
        self.ground = ground if ground is not None else GroundSet(tuple(1 << i for i in range(k)))
        if len(self.ground) != k:
            raise ValueError("ground size does not match the table")

    def __len__(self) -> int:
        return len(self.ground)

    def __call__(self, mask: int) -> Fraction:
        return self.values[mask]

    def table(self):
        d = common_denominator(self.values)
        return int_array([v * d for v in self.values], headroom=4), d


def _absmax(arr) -> int:
    return int(abs(arr).max()) if len(arr) else 0


# -- exhaustive backend ------------------------------------------------------------

def _argmin_where(values: np.ndarray, allowed: np.ndarray | None):
    if allowed is None:
        j = int(np.argmin(values))
        return j, values[j]
    idx = np.flatnonzero(allowed)
    j = int(idx[np.argmin(values[idx])])
    return j, values[j]


# -- minimum-norm-point backend ------------------------------------------------------

def min_norm_point(k: int, fn: Callable[[int], float], max_iter: int = 10_000) -> np.ndarray:
    """Fujishige-Wolfe minimum-norm point of the base polytope of ``fn``.

    ``fn`` maps a subset bitmask of ``range(k)`` to a float with ``fn(0) == 0``.
    The sign pattern of the returned point identifies minimizers.
    """
    if k == 0:
        return np.zeros(0)
    cache: dict[int, float] = {}

    def f(mask):
        v = cache.get(mask)
        if v is None:
            v = cache[mask] = float(fn(mask))
        return v

    def greedy(w):
        order = np.argsort(w, kind="stable")
        x = np.empty(k)
        prefix, prev = 0, 0.0
        for i in order:
            prefix |= 1 << int(i)
            cur = f(prefix)
            x[i] = cur - prev
            prev = cur
        return x

    x = greedy(np.zeros(k))
    pts = x.reshape(1, k)
    lam = np.ones(1)
    for _ in range(max_iter):
        q = greedy(x)
        scale = max(float(q @ q), float(np.max(np.sum(pts * pts, axis=1))), 1.0)
        if x @ x - x @ q <= _MNP_EPS * scale:
            break
        if np.any(np.all(np.abs(pts - q) < 1e-12, axis=1)):
            break
        pts = np.vstack([pts, q])
        lam = np.append(lam, 0.0)
        while True:
            m = pts.shape[0]
            g = pts @ pts.T
            mat = np.block([[np.zeros((1, 1)), np.ones((1, m))], [np.ones((m, 1)), g]])
            rhs = np.zeros(m + 1)
            rhs[0] = 1.0
            sol = np.linalg.lstsq(mat, rhs, rcond=None)[0]
            mu = sol[1:]
            if np.all(mu > -_MNP_EPS):
                lam = np.clip(mu, 0.0, None)
                lam /= lam.sum()
                x = lam @ pts
                break
            down = lam - mu > _MNP_EPS
            theta = min(1.0, float(np.min(lam[down] / (lam - mu)[down])))
            lam = (1 - theta) * lam + theta * mu
            keep = lam > _MNP_EPS
            pts, lam = pts[keep], lam[keep]
            lam /= lam.sum()
            x = lam @ pts
    return x


def _mnp_candidates(x: np.ndarray) -> list[int]:
    """Level sets ``{i : x_i <= t}`` for every distinct coordinate value ``t``."""
    out = [0]
    order = np.argsort(x, kind="stable")
    mask = 0
    for pos, i in enumerate(order):
        mask |= 1 << int(i)
        if pos + 1 == len(order) or x[order[pos + 1]] - x[i] > 1e-9:
            out.append(mask)
    return out


def _mnp_minimize(f, k: int, pinned: int | None = None):
    """Minimize ``f`` (exact callable on bitmasks) with the numeric backend."""
    if pinned is None:
        x = min_norm_point(k, lambda m: float(f(m)))
        cands = _mnp_candidates(x)
    else:
        others = [i for i in range(k) if i != pinned]
        pin = 1 << pinned
        f_pin = f(pin)

        def expand(m):
            out = pin
            for j, i in enumerate(others):
                if m >> j & 1:
                    out |= 1 << i
            return out

        x = min_norm_point(len(others), lambda m: float(f(expand(m)) - f_pin))
        cands = [expand(m) for m in _mnp_candidates(x)]
    best = None
    for m in cands:
        v = f(m)
        if best is None or v < best[1] or (v == best[1] and m < best[0]):
            best = (m, v)
    return best


# -- public operations ---------------------------------------------------------------

def _choose(backend: str, k: int) -> str:
    if backend == "auto":
        return "exhaustive" if k <= EXHAUSTIVE_MAX else "mnp"
    if backend not in ("exhaustive", "mnp"):
        raise ValueError(f"unknown SFM backend {backend!r}")
    return backend


def minimize(f, ground: GroundSet | None = None, backend: str = "auto"):
    """Minimizing subfamily of the ground set and its exact value."""
    ground = f.ground if ground is None else ground
    k = len(ground)
    if _choose(backend, k) == "exhaustive":
        table, d = f.table()
        j, v = _argmin_where(table, None)
        return ground.family(j), Fraction(int(v), d)
    m, v = _mnp_minimize(f, k)
    return ground.family(m), v


def minimize_containing(f, ground: GroundSet | None, pinned: int, backend: str = "auto"):
    """Minimum of ``f`` over subfamilies that contain the vertex set ``pinned``."""
    ground = f.ground if ground is None else ground
    i = ground.index(pinned)
    k = len(ground)
    if _choose(backend, k) == "exhaustive":
        table, d = f.table()
        allowed = (np.arange(1 << k) >> i) & 1 == 1
        j, v = _argmin_where(table, allowed)
        return ground.family(j), Fraction(int(v), d)
    m, v = _mnp_minimize(f, k, pinned=i)
    return ground.family(m), v


def find_tight_family(oracle, y: Mapping[int, Fraction], ground: GroundSet,
                      backend: str = "auto") -> Family | None:
    """A family containing an active set with ``pi(F) == sum y``, or ``None``.

    Scans the active elements in ground order and pins each in turn.
    """
    f = ReducedFunction(oracle, ground, y)
    for i in ground.active_indices():
        fam, v = minimize_containing(f, ground, ground.elements[i], backend)
        if v < 0:
            raise RuntimeError(f"family constraint violated: {fam!r} has slack {v}")
        if v == 0:
            return fam
    return None


def epsilon_family(oracle, y: Mapping[int, Fraction], ground: GroundSet,
                   backend: str = "auto"):
    """Largest uniform growth of the active sets keeping every family feasible.

    Equals the minimum over subfamilies ``F`` touching an active set of
    ``(pi(F) - sum y) / |F & active|``, found by discrete Newton iteration
    starting from the best active singleton.
    """
    active = ground.active_indices()
    if not active:
        return INF
    f = ReducedFunction(oracle, ground, y)
    k = len(ground)
    if _choose(backend, k) == "exhaustive":
        b, a, d = f.base_table()
        idx = np.flatnonzero(a > 0)
        bt, at = b[idx], a[idx]
        eps = min(Fraction(int(b[1 << i]), d) for i in active)
        if eps < 0:
            raise RuntimeError("family constraint violated before growth")
        while True:
            p, q = eps.numerator, eps.denominator
            if not _fits(_absmax(bt) * q, p * d * k):
                bt = bt.astype(object)
            vals = bt * q - at * (p * d)
            j = int(np.argmin(vals))
            if vals[j] >= 0:
                return eps
            eps = Fraction(int(bt[j]), d * int(at[j]))

    eps = min(f(1 << i) for i in active)
    if eps < 0:
        raise RuntimeError("family constraint violated before growth")
    while True:
        g = f.at(eps)
        best = None
        for i in active:
            m, v = _mnp_minimize(g, k, pinned=i)
            if best is None or v < best[1]:
                best = (m, v)
        m, v = best
        if v >= 0:
            return eps
        n_act = (m & ground.active_mask).bit_count()
        eps = (f(m)) / n_act
