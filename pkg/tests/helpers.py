"""Shared random generators for the SFM tests."""
from fractions import Fraction as F

from pcforest.penalty import concave_pair_coverage, pair_coverage
from pcforest.sfm import GroundSet, ReducedFunction


def random_reduced_function(rng, k_max=12):
    """A coverage-based reduced function over ``<= k_max`` random vertex sets."""
    n = rng.randint(3, 6)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    items = [(*rng.choice(pairs), F(rng.randint(1, 12), rng.choice([1, 2, 3])))
             for _ in range(rng.randint(1, 6))]
    if rng.random() < 0.5:
        oracle = pair_coverage(n, items)
    else:
        oracle = concave_pair_coverage(n, items, [(0, 0), (2, 2), (5, 3), (9, F(7, 2))])
    k = rng.randint(1, min(k_max, (1 << n) - 2))
    elems = rng.sample(range(1, (1 << n) - 1), k)
    active = [s for s in elems if rng.random() < 0.5]
    y = {s: F(rng.randint(0, 8), rng.choice([1, 2, 4])) for s in elems}
    ground = GroundSet.build(elems, active)
    return ReducedFunction(oracle, ground, y, F(rng.randint(0, 4), 2)), ground
