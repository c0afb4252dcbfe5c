"""Prize-collecting forests with submodular penalties.

Exact-rational implementations of the SSW primal-dual 3-approximation, the
recursive 2-approximation built on it, a brute-force optimum, and the
analysis harness that checks every bound against that optimum.
"""
from .core import BudgetExceeded, Family, Forest, Graph, InstanceError, Solution
from .exact import solve_exact
from .instance import GenParams, Instance, generate, load_instance
from .penalty import PenaltyOracle, closure, validate_axioms
from .recursive import recursive_pcf
from .ssw import run_ssw

__all__ = [
    "BudgetExceeded", "Family", "Forest", "Graph", "InstanceError", "Solution",
    "solve_exact", "GenParams", "Instance", "generate", "load_instance",
    "PenaltyOracle", "closure", "validate_axioms", "recursive_pcf", "run_ssw",
]
