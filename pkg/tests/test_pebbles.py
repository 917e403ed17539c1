"""Pile potentials and prefix-product bounds on sampler runs.

The pile tracker is re-verified here with independent arithmetic: pile
merges recomputed from the step records, the potential recurrence checked
value by value, and prefix products compared against the bound constants
with exact fractions.
"""

import json
from fractions import Fraction

import pytest

from treescore import (
    BoundsError,
    PebbleError,
    attach_pebbles,
    check_bounded,
    check_prefix_products,
    make_grid,
    pointwise_outside,
    sample_deletion_run,
    sample_tree_resistance,
    track_pebbles,
    trace_to_jsonl,
    verify_run_products,
)
from treescore.fixtures import make_diamond


def tracked(g, seed, k1=4, k2=4, deletion=False):
    cert = check_bounded(g, k1, k2)
    assert cert.holds
    trace = (
        sample_deletion_run(g, seed=seed) if deletion else sample_tree_resistance(g, seed=seed)
    )
    return trace, track_pebbles(trace, g, cert.v0, cert.f0, k1, k2)


def test_initial_potential_is_exempt_degree_product(grid33):
    _, hist = tracked(grid33, seed=0)
    g = grid33
    dual = g.trace_faces()
    assert hist.initial_potential == g.degree(hist.v0) * dual.face_degree[hist.f0]
    assert hist.initial_potential == 32
    assert hist.potential(0) == 32


def test_history_holds_and_floor(grid33):
    for seed in range(12):
        trace, hist = tracked(grid33, seed=seed)
        assert hist.holds
        assert not hist.violations
        pots = hist.potentials()
        assert len(pots) == len(trace.steps) + 1
        assert min(pots) >= hist.initial_potential
        assert pots[-1] >= pots[0]


def test_potential_recurrence_recomputed(grid33):
    _, hist = tracked(grid33, seed=3)
    pots = hist.potentials()
    for step, before, after in zip(hist.steps, pots, pots[1:]):
        x, y = step.pile_x, step.pile_y
        assert x <= y
        # merging piles x and y multiplies the product by (x + y) / (x * y)
        assert after * x * y == before * (x + y)
        assert step.potential_ratio == Fraction(x + y, x * y)


def test_per_step_inequalities(grid33):
    _, hist = tracked(grid33, seed=7)
    for step in hist.steps:
        want = Fraction(1, 8) if step.action == "deleted" else Fraction(1, 8)
        assert step.threshold == want
        check = step.probability * Fraction(step.pile_x * step.pile_y, step.pile_x + step.pile_y)
        assert step.check_value == check
        assert step.ok
        assert check >= step.threshold


def test_deletion_runs_track_too(grid44):
    trace, hist = tracked(grid44, seed=1, deletion=True)
    assert hist.holds
    assert all(s.action == "deleted" for s in hist.steps)
    assert hist.potential(len(trace.steps)) >= hist.initial_potential


def test_unbounded_graph_rejected(grid44):
    trace = sample_tree_resistance(grid44, seed=0)
    with pytest.raises(PebbleError, match="degree"):
        track_pebbles(trace, grid44, v0=0, f0=0, k1=3, k2=4)


def test_bridge_graph_rejected():
    g = make_grid(4, 1)
    trace = sample_tree_resistance(g, seed=0)
    with pytest.raises(PebbleError):
        track_pebbles(trace, g, v0=0, f0=0, k1=4, k2=4)


def test_bad_exemptions_rejected(grid33):
    trace = sample_tree_resistance(grid33, seed=0)
    with pytest.raises(PebbleError):
        track_pebbles(trace, grid33, v0=99, f0=0, k1=4, k2=4)
    with pytest.raises(PebbleError):
        track_pebbles(trace, grid33, v0=4, f0=99, k1=4, k2=4)
    with pytest.raises(PebbleError):
        track_pebbles(trace, grid33, v0=4, f0=0, k1=0, k2=4)


def test_attach_pebbles_fills_trace(grid33):
    cert = check_bounded(grid33, 4, 4)
    trace = sample_tree_resistance(grid33, seed=5)
    assert trace.pebbles is None
    trace2, hist = attach_pebbles(trace, grid33, cert)
    assert trace2.pebbles == hist.potentials()
    records = [json.loads(line) for line in trace_to_jsonl(trace2).strip().splitlines()]
    for k, rec in enumerate(records):
        assert rec["P"] == str(hist.potential(k + 1))


def test_attach_requires_valid_certificate(grid44):
    cert = check_bounded(grid44, 3, 4)
    assert not cert.holds
    trace = sample_tree_resistance(grid44, seed=0)
    with pytest.raises(PebbleError):
        attach_pebbles(trace, grid44, cert)


def test_history_json(grid33):
    _, hist = tracked(grid33, seed=2)
    blob = hist.to_json()
    assert blob["holds"] is True
    assert blob["initial-potential"] == "32"
    assert blob["final-potential"] == str(hist.potential(len(hist.steps)))
    assert len(blob["steps"]) == len(hist.steps)
    assert len(blob["pile-sizes"]) == len(hist.steps) + 1


def test_prefix_products_deletion_constants(grid44):
    trace = sample_deletion_run(grid44, seed=4)
    report = check_prefix_products(trace, 4, 4, run_type="deletion")
    assert report.claim == "lemma32"
    assert not report.violations
    assert report.c1 == Fraction(1, 8)
    assert report.c2 == Fraction(3, 4)
    # independent recomputation of every prefix
    prod = Fraction(1)
    for t, step in enumerate(trace.steps, start=1):
        prod *= step.probability
        assert Fraction(1, 8) ** t <= prod <= Fraction(3, 4) ** t


def test_prefix_products_mixed_constants(grid33):
    trace = sample_tree_resistance(grid33, seed=9)
    report = check_prefix_products(trace, 4, 4, run_type="mixed")
    assert not report.violations
    assert report.c1 == Fraction(1, 8)
    assert report.c2 == pytest.approx((1 - Fraction(1, 4)) ** Fraction(1, 6), abs=1e-12)
    prod = Fraction(1)
    c2 = float(report.c2)
    for t, step in enumerate(trace.steps, start=1):
        prod *= step.probability
        assert float(prod) <= c2**t * (1 + 1e-9)
        assert prod >= Fraction(1, 8) ** t


def test_prefix_auto_detects_run_type(grid44):
    trace = sample_deletion_run(grid44, seed=4)
    auto = check_prefix_products(trace, 4, 4)
    assert auto.c2 == Fraction(3, 4)
    mixed_trace = sample_tree_resistance(grid44, seed=4)
    auto2 = check_prefix_products(mixed_trace, 4, 4)
    assert isinstance(auto2.c2, float)


def test_deletion_constants_rejected_for_mixed_trace(grid33):
    trace = sample_tree_resistance(grid33, seed=1)
    assert any(s.action == "contracted" for s in trace.steps)
    with pytest.raises(BoundsError):
        check_prefix_products(trace, 4, 4, run_type="deletion")


def test_mixed_constants_need_two_piles():
    g = make_diamond()
    trace = sample_tree_resistance(g, seed=0)
    with pytest.raises(BoundsError):
        check_prefix_products(trace, 1, 4, run_type="mixed")


def test_forced_steps_fall_outside_pointwise(grid33):
    found = None
    for seed in range(40):
        trace = sample_tree_resistance(grid33, seed=seed)
        if any(s.forced for s in trace.steps):
            found = trace
            break
    assert found is not None
    report = check_prefix_products(found, 4, 4, run_type="mixed")
    outside = pointwise_outside(found, report.c1, report.c2)
    forced = [s.index for s in found.steps if s.forced]
    assert set(forced) <= set(outside)
    assert outside
    assert not report.violations  # prefix products still hold


def test_verify_run_products_clean(grid33):
    report = verify_run_products(grid33, 4, 4, runs=20, mode="mixed", seed=0)
    assert not report.violations
    assert report.instances_checked > 0
    assert any("pile tracker" in n for n in report.notes)
    assert any("20 seeded mixed runs" in n for n in report.notes)


def test_verify_run_products_deletion_mode(grid33):
    report = verify_run_products(grid33, 4, 4, runs=20, mode="deletion", seed=0)
    assert not report.violations
    assert report.c2 == Fraction(3, 4)


def test_verify_run_products_rejects_unbounded(grid44):
    with pytest.raises(BoundsError):
        verify_run_products(grid44, 3, 4, runs=2, mode="mixed", seed=0)


def test_verify_run_products_rejects_unknown_mode(grid33):
    with pytest.raises(BoundsError):
        verify_run_products(grid33, 4, 4, runs=2, mode="sideways", seed=0)
