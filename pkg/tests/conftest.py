from fractions import Fraction as F

import pytest

from pcforest.core import Graph
from pcforest.penalty import pair_coverage


@pytest.fixture
def example_a():
    """Two vertices, edge cost 4, pair weight 3: paying the penalty is cheaper."""
    return Graph(2, ((0, 1, F(4)),)), pair_coverage(2, [(0, 1, F(3))])


@pytest.fixture
def example_b():
    """Two vertices, edge cost 2, pair weight 3: buying the edge is cheaper."""
    return Graph(2, ((0, 1, F(2)),)), pair_coverage(2, [(0, 1, F(3))])
