"""Post-hoc analysis of a solve against a known optimum.

Splits the level-0 tight family into sets the optimum also pays for
(``d_paid``) and sets it connects (``d_unpaid``), the latter by how many
optimal forest edges they cut, and evaluates the chain of inequalities that
bounds both the SSW forest and the recursive answer by twice the optimum.
Every inequality is checked in exact arithmetic; a failure is a solver bug.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .core import Family, Forest, Graph, connected_components, cut_edges
from .exact import ExactResult
from .recursive import RecursiveResult


@dataclass
class AnalysisReport:
    d_paid: Family
    d_unpaid: Family
    d_single: Family
    d_multiple: Family
    y_single: Fraction
    y_multiple: Fraction
    single_edges: dict[int, int] = field(default_factory=dict)
    opt_components: Family = Family()

    def to_json(self) -> dict:
        return {
            "d_paid": self.d_paid.as_lists(),
            "d_unpaid": self.d_unpaid.as_lists(),
            "d_single": self.d_single.as_lists(),
            "d_multiple": self.d_multiple.as_lists(),
            "y_single": str(self.y_single),
            "y_multiple": str(self.y_multiple),
        }


@dataclass(frozen=True)
class BoundCheck:
    name: str
    lhs: Fraction
    rhs: Fraction
    relation: str  # "<=", ">=" or "n/a"

    @property
    def passed(self) -> bool:
        if self.relation == "<=":
            return self.lhs <= self.rhs
        if self.relation == ">=":
            return self.lhs >= self.rhs
        return True

    def to_json(self) -> dict:
        return {"name": self.name, "lhs": str(self.lhs), "rhs": str(self.rhs),
                "relation": self.relation, "passed": self.passed}


def classify(tight: Family, y: dict[int, Fraction], opt_forest: Forest, graph: Graph,
             oracle) -> AnalysisReport:
    """Partition ``tight`` by the marginal penalty each set adds to the optimum's family.

    ``pi({S} | P(F_opt))`` is computed against the optimal components, whose
    closure the oracle prices identically.
    """
    opt_cc = connected_components(opt_forest.edge_ids, graph)
    base_pen = oracle.eval(opt_cc)
    paid, unpaid, single, multiple = [], [], [], []
    single_edges = {}
    for s in tight:
        if oracle.eval(opt_cc | [s]) - base_pen == 0:
            paid.append(s)
            continue
        unpaid.append(s)
        cut = cut_edges(s, opt_forest.edge_ids, graph)
        if not cut:
            raise AssertionError(f"unpaid set {s:#x} cuts no optimal edge")
        if len(cut) == 1:
            single.append(s)
            single_edges[s] = cut[0]
        else:
            multiple.append(s)
    ysum = lambda fam: sum((y.get(s, Fraction(0)) for s in fam), Fraction(0))
    return AnalysisReport(
        Family(paid), Family(unpaid), Family(single), Family(multiple),
        ysum(single), ysum(multiple), single_edges, opt_cc,
    )


def bound_ledger(report: AnalysisReport, rec: RecursiveResult, exact: ExactResult,
                 graph: Graph, oracle) -> list[BoundCheck]:
    """Evaluate the optimum lower bound and the SSW / recursive upper bounds."""
    lvl = rec.levels[0]
    ssw = lvl.ssw
    opt = exact.best.total
    y_total = ssw.dual_total
    pi_tight = oracle.eval(ssw.tight)
    ssw_total = lvl.candidate.total
    opt_forest = exact.best.forest
    checks = [
        BoundCheck("opt_lower_bound", opt, y_total + report.y_multiple, ">="),
        BoundCheck("ssw_upper_bound", ssw_total,
                   2 * opt - 2 * report.y_multiple + pi_tight, "<="),
    ]

    opt_cc = report.opt_components
    marginal_vs_opt = oracle.eval(opt_cc | ssw.tight) - oracle.eval(opt_cc)
    checks.append(BoundCheck("unpaid_duals_cover_marginal",
                             report.y_single + report.y_multiple, marginal_vs_opt, ">="))

    removed = set(report.single_edges.values())
    f_r = Forest.build(graph, opt_forest.edge_ids - removed)
    checks.append(BoundCheck("reduced_forest_cost", graph.cost(f_r.edge_ids),
                             graph.cost(opt_forest.edge_ids) - report.y_single, "<="))
    pi_r = oracle.with_base(ssw.tight)
    checks.append(BoundCheck("reduced_forest_penalty",
                             pi_r.eval(connected_components(f_r.edge_ids, graph)),
                             pi_r.eval(opt_cc), "<="))

    if len(rec.levels) > 1:
        deeper = rec.levels[rec.nested_choice[1]].candidate
        checks.append(BoundCheck("recursive_upper_bound", deeper.total,
                                 2 * opt + 2 * report.y_multiple - pi_tight, "<="))
    else:
        checks.append(BoundCheck("recursive_upper_bound", Fraction(0), Fraction(0), "n/a"))
    return checks


def diagnose(graph: Graph, oracle, rec: RecursiveResult, exact: ExactResult):
    lvl = rec.levels[0]
    report = classify(lvl.ssw.tight, lvl.ssw.y, exact.best.forest, graph, oracle)
    return report, bound_ledger(report, rec, exact, graph, oracle)
