"""Score-ratio bounds, pair dominance, and the perimeter-ratio threshold.

The 4x4 grid is exhaustively checked elsewhere (acceptance harness); here
the focus is small exact instances, the non-vacuous ladder configurations,
threshold arithmetic, and report plumbing.
"""

import math
from fractions import Fraction

import pytest

from treescore import (
    BoundReport,
    BoundsError,
    LambdaParams,
    Partition,
    PartitionError,
    chain_slacks,
    count_spanning_trees,
    cut_edges,
    derivation_chain,
    make_grid,
    merge_reports,
    partition_deletion_set,
    perimeter_ratio_threshold,
    spanning_tree_distribution,
    spanning_tree_score,
    verify_exponential_gap,
    verify_pair_dominance,
    verify_score_ratio,
    verify_score_ratios,
)
from treescore.fixtures import make_twelve_county, twelve_county_compact_partition


def test_threshold_reference_values():
    assert perimeter_ratio_threshold(4, 4, 1.0, 0.001) == pytest.approx(
        7.229262518959628, abs=1e-12
    )
    assert perimeter_ratio_threshold(6, 4, 1.0, 0.01) == pytest.approx(
        11.415352, abs=1e-6
    )


def test_threshold_closed_form():
    for k1, k2, alpha, eps in [(4, 4, 1.0, 0.5), (3, 5, 2.0, 0.25), (6, 4, 1.5, 1.0)]:
        want = (math.log(1 / (2 * k2)) - math.log(alpha)) / math.log(1 - 1 / k1) + eps
        assert perimeter_ratio_threshold(k1, k2, alpha, eps) == pytest.approx(want)


def test_threshold_monotonicity():
    base = perimeter_ratio_threshold(4, 4, 1.0, 0.5)
    assert perimeter_ratio_threshold(4, 4, 2.0, 0.5) > base  # stronger dominance
    assert perimeter_ratio_threshold(4, 4, 1.0, 1.0) > base  # looser premise
    assert perimeter_ratio_threshold(4, 8, 1.0, 0.5) > base  # bigger faces
    assert perimeter_ratio_threshold(8, 4, 1.0, 0.5) > base  # bigger vertices


def test_threshold_rejects_bad_parameters():
    with pytest.raises(BoundsError):
        perimeter_ratio_threshold(1, 4)
    with pytest.raises(BoundsError):
        perimeter_ratio_threshold(4, 0)
    with pytest.raises(BoundsError):
        perimeter_ratio_threshold(4, 4, alpha=0.5)
    with pytest.raises(BoundsError):
        perimeter_ratio_threshold(4, 4, epsilon=0)


def test_lambda_params():
    params = LambdaParams.compute(4, 4, alpha=1.0, epsilon=0.001)
    assert params.value == perimeter_ratio_threshold(4, 4, 1.0, 0.001)
    blob = params.to_json()
    assert blob["lambda"] == params.value
    assert blob["k1"] == 4


def test_report_validates_claim():
    with pytest.raises(BoundsError):
        BoundReport(claim="nonsense", instances_checked=0, applicable=0)


def test_report_json_shape():
    rep = BoundReport(
        claim="eq4",
        instances_checked=3,
        applicable=2,
        margins={"x": Fraction(1, 2)},
        c1=Fraction(1, 8),
        c2=Fraction(3, 4),
        notes=("note",),
    )
    blob = rep.to_json()
    assert blob["holds"] is True
    assert blob["c1"] == "1/8"
    assert blob["margins"]["x"] == "1/2"


def test_merge_reports():
    a = BoundReport(claim="eq4", instances_checked=1, applicable=1,
                    margins={"s": 2.0}, notes=("x",), c1=Fraction(1, 8))
    b = BoundReport(claim="eq4", instances_checked=2, applicable=1,
                    margins={"s": 1.0, "t": 5.0}, notes=("x", "y"))
    merged = merge_reports(a, b)
    assert merged.instances_checked == 3
    assert merged.applicable == 2
    assert merged.margins == {"s": 1.0, "t": 5.0}
    assert merged.notes == ("x", "y")
    assert merged.c1 == Fraction(1, 8)
    with pytest.raises(BoundsError):
        merge_reports()
    with pytest.raises(BoundsError):
        merge_reports(a, BoundReport(claim="lemma32", instances_checked=0, applicable=0))


def test_partition_deletion_set(twelve_county):
    p = Partition.from_dict(3, twelve_county_compact_partition())
    deletable, retained = partition_deletion_set(twelve_county, p)
    cut = cut_edges(twelve_county, p).edges
    assert set(deletable) | set(retained) == cut
    assert not set(deletable) & set(retained)
    assert len(retained) == p.m - 1
    g = twelve_county
    for e in deletable:
        g = g.delete_edge(e)
    assert g.is_connected()
    # removing all non-retained cut edges leaves exactly score(P) * 1 trees
    # per the quotient-tree structure
    remaining = twelve_county
    for e in deletable:
        remaining = remaining.delete_edge(e)
    assert int(count_spanning_trees(remaining)) == spanning_tree_score(twelve_county, p)


def test_partition_deletion_set_rejects_invalid(grid22):
    with pytest.raises(PartitionError):
        partition_deletion_set(grid22, Partition.from_dict(2, {0: 0, 3: 0, 1: 1, 2: 1}))


def test_score_ratio_single_partition(grid44):
    p = Partition.from_dict(2, {v: (0 if v % 4 < 2 else 1) for v in grid44.vertices})
    rep = verify_score_ratio(grid44, p, 4, 4)
    assert rep.claim == "eq4"
    assert rep.holds
    assert rep.applicable == 1
    assert any("exact arithmetic" in n for n in rep.notes)
    assert rep.margins["lower-slack-log2"] >= 0
    assert rep.margins["upper-slack-log2"] >= 0
    b = cut_edges(grid44, p).size
    ratio = Fraction(
        spanning_tree_score(grid44, p), int(count_spanning_trees(grid44))
    )
    assert Fraction(1, 8) ** (b - 1) <= ratio <= Fraction(3, 4) ** (b - 1)


def test_score_ratios_small_grid_exhaustive():
    g = make_grid(4, 2)
    rep = verify_score_ratios(g, 2, 4, 4)
    assert rep.holds
    assert rep.instances_checked == len(
        list(spanning_tree_distribution(g, 2).entries)
    )
    assert rep.applicable == rep.instances_checked


def test_score_ratios_requires_bounded(grid44):
    with pytest.raises(BoundsError):
        verify_score_ratios(grid44, 2, 3, 4)


def test_pair_dominance_nonvacuous_ladder():
    g = make_grid(12, 2)
    rep = verify_pair_dominance(g, 2, 3, 4, alpha=1.0, epsilon=0.5, max_vertices=24)
    assert rep.holds
    assert rep.applicable > 0
    assert any("applicable ordered pairs" in n for n in rep.notes)
    assert rep.margins["conclusion-slack-log2"] >= 0
    # every inequality of the derivation is reported with non-negative slack
    assert all(
        float(v) >= -1e-9 for k, v in rep.margins.items() if k.startswith("chain-")
    )


def test_pair_dominance_vacuous_is_disclosed(grid44):
    rep = verify_pair_dominance(grid44, 2, 4, 4)
    assert rep.holds
    assert rep.applicable == 0
    assert any("0 applicable" in n for n in rep.notes)


def test_pair_dominance_rejects_bad_parameters(grid44):
    with pytest.raises(BoundsError):
        verify_pair_dominance(grid44, 2, 4, 4, alpha=0.5)
    with pytest.raises(BoundsError):
        verify_pair_dominance(grid44, 2, 4, 4, epsilon=0)


def test_exponential_gap_nonvacuous_ladder():
    g = make_grid(14, 2)
    rep = verify_exponential_gap(g, 2, 3, 4, max_vertices=28)
    assert rep.holds
    assert rep.applicable > 0
    assert any("extreme pair" in n for n in rep.notes)


def test_exponential_gap_vacuous_is_disclosed(grid44):
    rep = verify_exponential_gap(grid44, 2, 4, 4)
    assert rep.holds
    assert rep.applicable == 0
    assert any("extreme pair" in n for n in rep.notes)
    with pytest.raises(BoundsError):
        verify_exponential_gap(grid44, 2, 1, 4)


def test_derivation_chain_descends():
    g = make_grid(12, 2)
    table = spanning_tree_distribution(g, 2, max_vertices=24)
    entries = sorted(table.entries, key=lambda e: e.cut_size)
    small, big = entries[0], entries[-1]
    lam = perimeter_ratio_threshold(3, 4, 1.0, 0.5)
    assert big.cut_size >= lam * small.cut_size  # the premise of the claim
    chain = derivation_chain(
        b1=small.cut_size,
        b2=big.cut_size,
        m=2,
        k1=3,
        k2=4,
        alpha=1.0,
        epsilon=0.5,
        ratio1=Fraction(small.score, table.graph_trees),
        ratio2=Fraction(big.score, table.graph_trees),
    )
    slacks = chain_slacks(chain)
    assert len(chain) == 7
    assert all(s >= -1e-9 for s in slacks)
    assert chain[0][1] >= chain[-1][1]


def test_derivation_chain_rejects_trivial_cut():
    with pytest.raises(BoundsError):
        derivation_chain(0, 5, 2, 4, 4, 1.0, 1.0, Fraction(1), Fraction(1))
