"""Resistance-driven tree sampling.

The central oracle is an exhaustive explorer written here from scratch: it
walks every coin-outcome path of the sampling process (resistances from the
spectral module, bridges detected by deletion + connectivity) and sums the
exact probability reaching each spanning tree. Uniformity means every tree
accumulates exactly 1/trees(G), for any edge-selection rule.
"""

import json
from fractions import Fraction
from random import Random

import pytest

from treescore import (
    CachedTreeSampler,
    DisconnectedGraphError,
    EdgePolicy,
    EmbeddedMultiGraph,
    SamplerError,
    count_spanning_trees,
    enumerate_spanning_trees,
    make_grid,
    replay_decisions,
    resistance_fraction,
    run_constrained_deletions,
    sample_deletion_run,
    sample_tree_resistance,
    sample_tree_wilson,
    sample_trees_counter,
    save_trace,
    trace_to_jsonl,
)
from treescore.fixtures import make_cycle, make_diamond, make_theta


def explore_all_paths(g, choose_edge):
    """Exact per-tree probability mass over every coin-outcome path."""
    masses: dict[frozenset, Fraction] = {}

    def rec(h, contracted, prob):
        if h.num_vertices == 1:
            key = frozenset(contracted)
            masses[key] = masses.get(key, Fraction(0)) + prob
            return
        e = choose_edge(h)
        if h.is_loop(e):
            rec(h.delete_edge(e), contracted, prob)
            return
        deleted = h.delete_edge(e)
        if not deleted.is_connected():
            rec(h.contract_edge(e), contracted + [e], prob)
            return
        r = resistance_fraction(h, e)
        rec(h.contract_edge(e), contracted + [e], prob * r)
        rec(deleted, contracted, prob * (1 - r))

    rec(g, [], Fraction(1))
    return masses


@pytest.mark.parametrize(
    "make",
    [make_diamond, lambda: make_cycle(4), lambda: make_theta(3), lambda: make_grid(3, 2)],
)
def test_every_tree_equally_likely_by_exhaustion(make):
    g = make()
    masses = explore_all_paths(g, lambda h: min(h.edge_ids))
    trees = {frozenset(t) for t in enumerate_spanning_trees(g)}
    total = int(count_spanning_trees(g))
    assert set(masses) == trees
    for mass in masses.values():
        assert mass == Fraction(1, total)


def test_uniformity_independent_of_edge_order():
    g = make_diamond()
    for choose in (
        lambda h: min(h.edge_ids),
        lambda h: max(h.edge_ids),
        lambda h: sorted(h.edge_ids)[len(h.edge_ids) // 2],
    ):
        masses = explore_all_paths(g, choose)
        assert all(m == Fraction(1, 8) for m in masses.values())
        assert sum(masses.values()) == 1


@pytest.mark.parametrize("seed", range(30))
def test_complete_run_probability_is_one_over_trees(seed, grid33):
    trace = sample_tree_resistance(grid33, seed=seed)
    assert trace.complete
    assert trace.p_product() == Fraction(1, 192)
    assert frozenset(trace.contracted()) == trace.tree
    assert len(trace.tree) == grid33.num_vertices - 1


def test_sampled_tree_is_spanning(grid33):
    trees = {frozenset(t) for t in enumerate_spanning_trees(grid33)}
    for seed in range(20):
        assert sample_tree_resistance(grid33, seed=seed).tree in trees


def test_trace_is_deterministic_in_seed(grid33):
    a = sample_tree_resistance(grid33, seed=11)
    b = sample_tree_resistance(grid33, seed=11)
    assert a == b
    c = sample_tree_resistance(grid33, seed=12)
    assert a != c


def test_trace_step_indices_and_fields(grid33):
    trace = sample_tree_resistance(grid33, seed=5)
    for k, step in enumerate(trace.steps):
        assert step.index == k + 1
        assert step.action in ("contracted", "deleted")
        if step.action == "contracted":
            assert step.probability == step.resistance
        else:
            assert step.probability == 1 - step.resistance
        if not step.forced:
            assert 0 < step.probability < 1


def test_tree_input_all_forced():
    trace = sample_tree_resistance(make_grid(5, 1), seed=0)
    assert trace.p_product() == 1
    assert all(s.forced and s.action == "contracted" for s in trace.steps)
    assert trace.tree == frozenset(make_grid(5, 1).edge_ids)


def test_replay_first_step_probabilities():
    diamond = make_diamond()
    trace = replay_decisions(diamond, {0: "deleted"}, stop_when_decided=True)
    assert trace.p_product() == 1 - Fraction(5, 8)
    c4 = make_cycle(4)
    trace = replay_decisions(c4, {0: "deleted"}, stop_when_decided=True)
    assert trace.p_product() == Fraction(1, 4)
    trace = replay_decisions(c4, {0: "contracted"}, stop_when_decided=True)
    assert trace.p_product() == Fraction(3, 4)


def test_replay_rejects_zero_probability_path():
    with pytest.raises(SamplerError):
        replay_decisions(make_grid(2, 1), {0: "deleted"})
    g = EmbeddedMultiGraph(
        {0: (0, 0), 1: (0, 1)}, {0: [(0, 0), (0, 1), (1, 0)], 1: [(1, 1)]}
    )
    with pytest.raises(SamplerError):
        replay_decisions(g, {0: "contracted"})


def test_replay_rejects_unknown_action(grid33):
    with pytest.raises(SamplerError):
        replay_decisions(grid33, {0: "dropped"})


def test_given_order_policy_exhausted(grid33):
    with pytest.raises(SamplerError):
        sample_tree_resistance(grid33, seed=0, policy=EdgePolicy.given_order([0, 1]))


def test_boundary_first_policy(grid33):
    policy = EdgePolicy.boundary_first({5, 7})
    trace = sample_tree_resistance(grid33, seed=0, policy=policy)
    assert {trace.steps[0].edge, trace.steps[1].edge} <= {5, 7}
    assert trace.p_product() == Fraction(1, 192)


def test_deletion_run_probability(grid33):
    for seed in range(15):
        trace = sample_deletion_run(grid33, seed=seed)
        assert not trace.complete
        assert all(s.action == "deleted" for s in trace.steps)
        assert trace.p_product() == Fraction(1, 192)
        assert len(trace.tree) == grid33.num_vertices - 1


def test_constrained_deletions_probability():
    diamond = make_diamond()
    prob, remaining = run_constrained_deletions(diamond, [1, 3])
    trees_left = int(count_spanning_trees(remaining))
    assert prob == Fraction(trees_left, 8) == Fraction(1, 8)


def test_constrained_deletions_telescopes(grid44):
    deletions = [0, 5, 9]
    prob, remaining = run_constrained_deletions(grid44, deletions)
    assert prob == Fraction(
        int(count_spanning_trees(remaining)), int(count_spanning_trees(grid44))
    )


def test_constrained_deletions_rejects_disconnect():
    with pytest.raises(SamplerError):
        run_constrained_deletions(make_diamond(), [0, 1, 2])
    with pytest.raises(SamplerError):
        run_constrained_deletions(make_diamond(), [1, 1])


def test_float_mode_close_to_exact(grid33):
    trace = sample_tree_resistance(grid33, seed=3, exact_threshold=1)
    assert trace.complete
    assert float(trace.p_product()) == pytest.approx(1 / 192, rel=1e-9)
    assert len(trace.tree) == 8


def test_wilson_trees_are_spanning(grid33):
    trees = {frozenset(t) for t in enumerate_spanning_trees(grid33)}
    for seed in range(25):
        assert sample_tree_wilson(grid33, seed=seed) in trees


def test_wilson_handles_multiedges_and_loops():
    g = EmbeddedMultiGraph(
        {0: (0, 1), 1: (0, 1), 2: (1, 1)},
        {0: [(0, 0), (1, 0)], 1: [(1, 1), (0, 1), (2, 0), (2, 1)]},
    )
    counts = {0: 0, 1: 0}
    for seed in range(400):
        (edge,) = sample_tree_wilson(g, seed=seed)
        counts[edge] += 1
    assert counts[0] + counts[1] == 400
    assert min(counts.values()) > 120  # both parallel copies are reachable


def test_wilson_rejects_disconnected():
    g = EmbeddedMultiGraph(
        {0: (0, 1), 1: (2, 3)},
        {0: [(0, 0)], 1: [(0, 1)], 2: [(1, 0)], 3: [(1, 1)]},
    )
    with pytest.raises(DisconnectedGraphError):
        sample_tree_wilson(g, seed=0)


def test_cached_sampler_matches_direct_support():
    g = make_diamond()
    counts = sample_trees_counter(g, 4000, seed=9)
    trees = {frozenset(t) for t in enumerate_spanning_trees(g)}
    assert set(counts) == trees
    assert min(counts.values()) > 4000 / 8 * 0.7


def test_cached_sampler_rejects_large_graphs():
    with pytest.raises(SamplerError):
        CachedTreeSampler(make_grid(9, 9))


def test_cached_sampler_reuses_rng():
    g = make_cycle(4)
    sampler = CachedTreeSampler(g)
    rng = Random(4)
    seq1 = [sampler.sample(rng) for _ in range(10)]
    rng = Random(4)
    seq2 = [sampler.sample(rng) for _ in range(10)]
    assert seq1 == seq2


def test_trace_jsonl_round_trip(grid33, tmp_path):
    trace = sample_tree_resistance(grid33, seed=2)
    text = trace_to_jsonl(trace)
    records = [json.loads(line) for line in text.strip().splitlines()]
    assert len(records) == len(trace.steps)
    for rec, step in zip(records, trace.steps):
        assert rec["i"] == step.index
        assert rec["edge"] == step.edge
        assert rec["action"] == step.action
        num, den = rec["r"].split("/") if "/" in rec["r"] else (rec["r"], "1")
        assert Fraction(int(num), int(den)) == step.resistance
    path = tmp_path / "trace.jsonl"
    save_trace(trace, path)
    assert path.read_text() == text
