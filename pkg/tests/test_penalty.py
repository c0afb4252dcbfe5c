import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from pcforest.core import BudgetExceeded, Family, InstanceError, complement, full_set
from pcforest.penalty import (
    PenaltyOracle, closure, concave_pair_coverage, in_closure, pair_coverage, refine_partition,
    validate_axioms, zero,
)

W3 = pair_coverage(2, [(0, 1, 3)])


def test_eval_examples():
    assert W3.eval(Family()) == 0
    assert W3.eval(Family.of(0b01)) == 3
    assert W3.eval(Family.of(0b01, 0b10)) == 3
    # V and the empty set separate nothing
    assert W3.eval(Family.of(0, 0b11)) == 0


def test_with_base_examples():
    f = Family.of(0b10)
    assert W3.with_base(Family()).eval(f) == W3.eval(f)
    assert W3.with_base(Family.of(0b01)).eval(f) == 0


def test_concave_curve_caps_and_extends():
    o = concave_pair_coverage(3, [(0, 1, 4), (1, 2, 4)], [(0, 0), (4, 4), (6, 5)])
    assert o.eval(Family.of(0b001)) == 4
    assert o.eval(Family.of(0b010)) == 6  # coverage 8: slope 1/2 continues past the last breakpoint
    assert o.eval(Family.of(0b100)) == 4


@pytest.mark.parametrize("bps", [
    [(0, 0)],
    [(1, 0), (2, 1)],
    [(0, 0), (2, 1), (1, 3)],
    [(0, 0), (1, 1), (2, 3)],
    [(0, 0), (1, 2), (2, 1)],
])
def test_bad_curves_rejected(bps):
    with pytest.raises(InstanceError):
        concave_pair_coverage(2, [(0, 1, 1)], bps)


@pytest.mark.parametrize("kw", [
    dict(kind="nope"),
    dict(kind="pair_coverage", items=((0, 5, 1),)),
    dict(kind="pair_coverage", items=((1, 1, 1),)),
    dict(kind="pair_coverage", items=((0, 1, "-1"),)),
    dict(kind="zero", items=((0, 1, 1),)),
    dict(kind="pair_coverage", items=((0, 1, 1),), breakpoints=((0, 0), (1, 1))),
])
def test_bad_oracles_rejected(kw):
    with pytest.raises(InstanceError):
        PenaltyOracle(3, **kw)


def test_universe_mismatch():
    with pytest.raises(InstanceError):
        W3.eval(Family.of(0b100))


def test_marginal_costs_two_root_calls():
    o = pair_coverage(3, [(0, 1, 1), (1, 2, 2)])
    m = o.with_base(Family.of(0b001)).with_base(Family.of(0b100))
    before = o.stats.root_calls
    m.eval(Family.of(0b010))
    assert o.stats.root_calls - before == 2
    before = o.stats.root_calls
    o.eval(Family.of(0b010))
    assert o.stats.root_calls - before == 1


def _all_families(n):
    k = 1 << n
    for m in range(1 << k):
        yield Family(s for s in range(k) if m >> s & 1)


def test_stacking_is_flat_on_three_vertices():
    o = concave_pair_coverage(3, [(0, 1, 2), (1, 2, 3), (0, 2, 1)], [(0, 0), (2, 2), (5, 3)])
    rng = random.Random(7)
    for _ in range(6):
        d1 = Family(rng.randrange(8) for _ in range(rng.randint(0, 2)))
        d2 = Family(rng.randrange(8) for _ in range(rng.randint(0, 2)))
        nested, flat = o.with_base(d1).with_base(d2), o.with_base(d1 | d2)
        for fam in _all_families(3):
            assert nested.eval(fam) == flat.eval(fam)
            assert flat.eval(fam) == o.eval(fam | d1 | d2) - o.eval(d1 | d2)


# -- closure ----------------------------------------------------------------------

def test_closure_examples():
    assert closure(Family.of(0b01), 2) == Family.of(0b01, 0b10)
    assert closure(Family.of(0b001, 0b010), 3) == Family.of(0b001, 0b010, 0b011, 0b110, 0b101, 0b100)
    assert closure(Family(), 5) == Family()


def test_closure_size_limit():
    with pytest.raises(BudgetExceeded):
        closure(Family.of(1), 13)


def _fixpoint(fam, n):
    """Brute-force closure under pairwise union and complement."""
    top = full_set(n)
    out = set(fam)
    while True:
        new = {complement(s, n) for s in out} | {a | b for a in out for b in out}
        if new <= out:
            break
        out |= new
    return Family(sorted(out - {0, top}))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.integers(0, (1 << n) - 1), max_size=4))))
def test_closure_matches_fixpoint(case):
    n, sets = case
    fam = Family(sets)
    got = closure(fam, n)
    assert got == _fixpoint(fam, n)
    if fam:
        assert all(in_closure(s, fam, n) for s in got)
        # closed under intersection and difference as well
        for a, b in itertools.product(got, repeat=2):
            for s in (a & b, a & ~b):
                assert s in (0, full_set(n)) or s in got


def test_refine_partition_orders_blocks():
    assert refine_partition([0b0110], 4) == [0b1001, 0b0110]
    assert refine_partition([], 3) == [0b111]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_closure_invariance_exhaustive(n):
    rng = random.Random(n)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    items = [(*rng.choice(pairs), rng.randint(1, 5)) for _ in range(3)]
    o = concave_pair_coverage(n, items, [(0, 0), (3, 3), (6, 4)])
    k = 1 << n
    for m in range(0, 1 << k, 1 if n < 4 else 97):
        fam = Family(s for s in range(k) if m >> s & 1)
        assert o.eval(fam) == o.eval(closure(fam, n))


# -- axioms -----------------------------------------------------------------------

@pytest.mark.parametrize("oracle", [
    zero(3),
    pair_coverage(3, [(0, 1, 2), (1, 2, F(1, 2)), (0, 2, 5)]),
    concave_pair_coverage(3, [(0, 1, 2), (1, 2, 3)], [(0, 0), (1, 1), (4, 2)]),
    pair_coverage(4, [(0, 3, 1), (1, 2, 2), (0, 1, 3)]),
], ids=["zero", "pair3", "concave3", "pair4"])
def test_builtins_satisfy_axioms(oracle):
    rep = validate_axioms(oracle, oracle.n)
    assert rep.exhaustive and rep.ok, rep.violations


def test_marginal_oracle_satisfies_axioms():
    o = concave_pair_coverage(3, [(0, 1, 2), (1, 2, 3), (0, 2, 1)], [(0, 0), (2, 2), (5, 3)])
    for base in (Family.of(0b001), Family.of(0b011, 0b100)):
        assert validate_axioms(o.with_base(base), 3).ok


def test_sampled_mode_for_larger_universe():
    o = pair_coverage(6, [(0, 5, 1), (2, 3, 2)])
    rep = validate_axioms(o, 6, sample_budget=200)
    assert not rep.exhaustive and rep.ok


class SquaredCoverage:
    """Convex in coverage: union and complement hold but submodularity fails."""

    def __init__(self, base):
        self.n, self.base = base.n, base

    def eval(self, fam):
        return self.base.eval(fam) ** 2


def test_non_submodular_table_is_caught():
    bad = SquaredCoverage(pair_coverage(3, [(0, 1, 1), (1, 2, 1)]))
    rep = validate_axioms(bad, 3)
    kinds = {v.axiom for v in rep.violations}
    assert "submodularity" in kinds
    assert "union" not in kinds and "complementarity" not in kinds
    v = next(v for v in rep.violations if v.axiom == "submodularity")
    f1, f2 = v.witness
    assert bad.eval(f1) + bad.eval(f2) < bad.eval(f1 | f2) + bad.eval(f1 & f2)


def test_validator_universe_mismatch():
    with pytest.raises(InstanceError):
        validate_axioms(W3, 3)


# -- properties on random families ------------------------------------------------

ORACLE = concave_pair_coverage(5, [(0, 1, 3), (1, 4, 2), (2, 3, 4), (0, 4, 1)], [(0, 0), (3, 3), (7, 5)])
fams = st.lists(st.integers(0, 31), max_size=4).map(Family)


@given(fams, fams)
def test_subadditive(a, b):
    assert ORACLE.eval(a | b) <= ORACLE.eval(a) + ORACLE.eval(b)


@given(fams, fams, st.integers(0, 31))
def test_diminishing_returns(a, extra, s):
    b = a | extra
    assert ORACLE.with_base(b).eval(Family.of(s)) <= ORACLE.with_base(a).eval(Family.of(s))


@given(st.integers(0, 31), st.integers(0, 31))
def test_union_and_complement(s1, s2):
    assert ORACLE.eval(Family.of(s1, s2)) == ORACLE.eval(Family.of(s1, s2, s1 | s2))
    assert ORACLE.eval(Family.of(s1)) == ORACLE.eval(Family.of(s1, complement(s1, 5)))


def test_to_json_round_trip():
    o = concave_pair_coverage(3, [(0, 1, F(3, 2))], [(0, 0), (1, 1), (2, F(3, 2))])
    js = o.to_json()
    again = PenaltyOracle(3, js["kind"], tuple((i["u"], i["v"], i["weight"]) for i in js["items"]),
                          tuple(map(tuple, js["breakpoints"])))
    assert again == o
