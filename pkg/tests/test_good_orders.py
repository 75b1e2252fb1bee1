import random
from fractions import Fraction

import pytest
from hypothesis import given

from snpkit.dependency import interval_structure, is_interval
from snpkit.digraph import Digraph, has_snp
from snpkit.errors import NotAnInterval, NotGoodDigraph, NotMedianOrder
from snpkit.generators import random_weights
from snpkit.good_orders import (
    check_main_inequality,
    contract_intervals,
    good_median_order,
    is_contiguous,
    is_good_median_order,
    sed,
    sed_classify,
)
from snpkit.matching import orient_paths
from snpkit.oracles import brute_force_optimum
from snpkit.orders import SubsetDP, exact_median_order, order_weight

from conftest import missing_matchings, tournaments, weighted


def test_contract_examples(fx):
    empty = Digraph.from_arcs(3, [])
    assert contract_intervals(empty, None, (0, 1, 2), [{0, 2}]) == (1, 0, 2)
    assert contract_intervals(fx["G4"], None, (0, 2, 1, 3), [set(range(4))]) == (0, 2, 1, 3)


def test_contract_rejects_bad_input(fx):
    with pytest.raises(NotAnInterval):
        contract_intervals(fx["P5"], None, exact_median_order(fx["P5"]), [{0, 1}])
    with pytest.raises(NotMedianOrder):
        contract_intervals(fx["TT3"], None, (2, 1, 0), [{0}])
    with pytest.raises(NotAnInterval):
        contract_intervals(fx["G4"], None, (0, 2, 1, 3), [{0, 1, 2, 3}, {0}])


def _planted(seed: int):
    """Random weighted digraph with disjoint sets of vertices sharing one
    outside profile each (so each set is an interval)."""
    rng = random.Random(seed)
    n = rng.randint(3, 7)
    groups: list[list[int]] = []
    verts = list(range(n))
    rng.shuffle(verts)
    while verts:
        size = min(len(verts), rng.choice([1, 1, 2, 3]))
        groups.append(verts[:size])
        verts = verts[size:]
    arcs = set()
    for gi, g in enumerate(groups):
        for u in g:  # inside a group: arbitrary
            for v in g:
                if u < v and rng.random() < 0.6:
                    arcs.add((u, v) if rng.random() < 0.5 else (v, u))
        for g2 in groups[gi + 1:]:  # between groups: one shared direction or none
            r = rng.random()
            if r < 0.8:
                for u in g:
                    for v in g2:
                        arcs.add((u, v) if r < 0.4 else (v, u))
    d = Digraph.from_arcs(n, arcs)
    return d, random_weights(n, seed), [set(g) for g in groups if len(g) > 1]


@pytest.mark.parametrize("seed", range(200))
def test_contract_planted_intervals(seed):
    d, w, groups = _planted(seed)
    assert all(is_interval(d, g) for g in groups)
    order = exact_median_order(d, w)
    out = contract_intervals(d, w, order, groups)
    assert order_weight(d, w, out) == order_weight(d, w, order)
    assert out[-1] == order[-1]
    assert all(is_contiguous(out, g) for g in groups)


def test_good_median_order_examples(fx):
    for name in ("C3", "TT3"):
        assert good_median_order(fx[name]) == exact_median_order(fx[name])
    assert order_weight(fx["G4"], None, good_median_order(fx["G4"])) == 3
    d1p = fx["D1"].with_arcs(add=[(0, 1), (2, 3)])
    assert good_median_order(d1p) == (0, 1, 2, 3)
    assert order_weight(d1p, None, (0, 1, 2, 3)) == 6
    with pytest.raises(NotGoodDigraph):
        good_median_order(fx["P5"])


@given(weighted(missing_matchings(max_n=7)))
def test_good_median_order_is_good(dw):
    d, w = dw
    dprime = orient_paths(d).dprime
    order = good_median_order(dprime, w)
    assert order_weight(dprime, w, order) == brute_force_optimum(dprime, w)
    assert all(is_contiguous(order, b) for b in interval_structure(dprime).blocks)


def test_main_inequality_examples(fx):
    rep = check_main_inequality(fx["C3"], None, (0, 1, 2))
    assert rep.block == {2}
    assert [(r.outside_out, r.outside_good) for r in rep.rows] == [(1, 1)]
    assert rep.ok
    rep = check_main_inequality(fx["G4"], None, (0, 2, 1, 3))
    assert rep.block == {0, 1, 2, 3}
    assert all(r.outside_out == r.outside_good == 0 for r in rep.rows)
    feed_row = next(r for r in rep.rows if r.vertex == 3)
    assert feed_row.snp_in_block and feed_row.snp_in_digraph
    assert check_main_inequality(fx["TT3"], None, (0, 1, 2)).ok


def test_main_inequality_preconditions(fx):
    with pytest.raises(NotGoodDigraph):
        check_main_inequality(fx["P5"], None, exact_median_order(fx["P5"]))
    with pytest.raises(NotMedianOrder):
        check_main_inequality(fx["C3"], None, (1, 0, 2))


@given(weighted(missing_matchings(max_n=8)))
def test_main_inequality_property(dw):
    d, w = dw
    dprime = orient_paths(d).dprime
    assert check_main_inequality(dprime, w, good_median_order(dprime, w)).ok


def test_sed_examples(fx):
    c3 = fx["C3"]
    assert sed(c3, None, (0, 1, 2)) == (2, 0, 1)
    assert order_weight(c3, None, (2, 0, 1)) == 2
    assert sed(fx["TT3"], None, (0, 1, 2)) == (0, 1, 2)
    assert sed(c3, [1, 1, 2], (1, 2, 0)) == (1, 2, 0)


def test_sed_rejects_reversed_inequality(fx):
    # feed 0 of TT3 has out-weight 2 and nothing good
    with pytest.raises(NotMedianOrder):
        sed(fx["TT3"], None, (1, 2, 0))


def test_weighted_c3_is_median(fx):
    w = [1, 1, 2]
    assert order_weight(fx["C3"], w, (1, 2, 0)) == 4 == brute_force_optimum(fx["C3"], w)


def test_sed_classify_examples(fx):
    out = sed_classify(fx["C3"], [1, 1, 2], (1, 2, 0))
    assert (out.kind, out.rank) == ("stable", 0)
    out = sed_classify(fx["C3"], None, (0, 1, 2))
    assert out.kind == "periodic"
    assert out.cycle == ((0, 1, 2), (2, 0, 1), (1, 2, 0))
    out = sed_classify(fx["TT3"], None, (0, 1, 2))
    assert out.kind == "periodic" and out.cycle == ((0, 1, 2),)


@given(weighted(tournaments(max_n=7)))
def test_sed_preserves_good_median(dw):
    d, w = dw
    dp = SubsetDP(d, w)
    s = interval_structure(d)
    out = sed_classify(d, w, good_median_order(d, w, s), s, dp)
    assert len(out.trace) <= len(set(out.trace)) + 1
    for o in out.trace:
        assert order_weight(d, w, o) == dp.optimum
        assert is_good_median_order(d, w, o, s, dp)
    if out.kind == "stable":
        assert out.trace[out.rank] == out.final


@given(weighted(missing_matchings(max_n=7)))
def test_sed_on_good_oriented(dw):
    d, w = dw
    dprime = orient_paths(d).dprime
    s = interval_structure(dprime)
    out = sed_classify(dprime, w, good_median_order(dprime, w, s), s)
    assert out.kind in ("stable", "periodic")


def test_block_lifting_uses_block_snp():
    # inside the feed block the SNP must transfer to the whole digraph
    d = Digraph.from_arcs(4, [(0, 2), (2, 1), (1, 3), (3, 0)])
    rep = check_main_inequality(d, [Fraction(1)] * 4, (0, 2, 1, 3))
    assert all(r.snp_in_block == has_snp(d, None, r.vertex) for r in rep.rows)
