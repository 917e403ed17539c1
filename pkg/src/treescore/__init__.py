"""Spanning-tree scores for graph partitions.

Exact spanning-tree counting on embedded multigraphs, effective
resistances, a resistance-driven uniform tree sampler with per-step
traces, prefix-probability and pile-potential verification, the exact
tree-score distribution over balanced connected partitions, a
recombination chain, and two families showing the bounds need bounded
degrees. The ``treescore`` command exposes the same operations on files.
"""

from .bounds import (
    BoundReport,
    BoundsError,
    LambdaParams,
    chain_slacks,
    derivation_chain,
    merge_reports,
    partition_deletion_set,
    perimeter_ratio_threshold,
    verify_exponential_gap,
    verify_pair_dominance,
    verify_score_ratio,
    verify_score_ratios,
)
from .counterexample import (
    CounterexampleError,
    FaceFamilyScores,
    LogBoundSummary,
    ResistanceChain,
    bound_step_implication_early,
    bound_step_implication_late,
    floor_pow_4_3,
    grid_tree_number,
    ratio_bound_threshold,
    recurrence_bound_step,
    resistance_fixed_point,
    unbounded_degree_log_bounds,
    unbounded_degree_resistances,
    unbounded_face_scores,
)
from .graphs import (
    BoundednessCertificate,
    DualGraph,
    EmbeddedMultiGraph,
    InvalidGraphError,
    check_bounded,
    graph_from_json,
    graph_to_json,
    graph_to_json_str,
    induced_subgraph,
    load_graph,
    make_grid,
    same_embedding,
    save_graph,
)
from .partition import (
    CutSet,
    DistEntry,
    DistributionTable,
    Partition,
    PartitionError,
    cut_edges,
    enumerate_partitions,
    load_partition,
    partition_from_json,
    partition_to_json,
    quotient_graph,
    save_partition,
    spanning_tree_distribution,
    spanning_tree_score,
    validate_partition,
)
from .pebbles import (
    PebbleError,
    PebbleHistory,
    PebbleStep,
    attach_pebbles,
    check_prefix_products,
    pointwise_outside,
    track_pebbles,
    verify_run_products,
)
from .recom import (
    ChainConfig,
    EnsembleStats,
    RecomError,
    SampleRecord,
    StepResult,
    adjacent_district_pairs,
    balance_edges,
    check_tolerant_partition,
    recom_step,
    run_chain,
)
from .sampler import (
    CachedTreeSampler,
    EdgePolicy,
    SamplerError,
    SampleTrace,
    TraceStep,
    replay_decisions,
    run_constrained_deletions,
    sample_deletion_run,
    sample_tree_resistance,
    sample_tree_wilson,
    sample_trees_counter,
    save_trace,
    trace_to_jsonl,
)
from .spectral import (
    DisconnectedGraphError,
    ResistanceResult,
    TreeCount,
    count_spanning_trees,
    effective_resistance,
    enumerate_spanning_trees,
    resistance_fraction,
    solve_flow,
)

__all__ = [
    "BoundReport",
    "BoundednessCertificate",
    "BoundsError",
    "CachedTreeSampler",
    "ChainConfig",
    "CounterexampleError",
    "CutSet",
    "DisconnectedGraphError",
    "DistEntry",
    "DistributionTable",
    "DualGraph",
    "EdgePolicy",
    "EmbeddedMultiGraph",
    "EnsembleStats",
    "FaceFamilyScores",
    "InvalidGraphError",
    "LambdaParams",
    "LogBoundSummary",
    "Partition",
    "PartitionError",
    "PebbleError",
    "PebbleHistory",
    "PebbleStep",
    "RecomError",
    "ResistanceChain",
    "ResistanceResult",
    "SampleRecord",
    "SampleTrace",
    "SamplerError",
    "StepResult",
    "TraceStep",
    "TreeCount",
    "adjacent_district_pairs",
    "attach_pebbles",
    "balance_edges",
    "bound_step_implication_early",
    "bound_step_implication_late",
    "chain_slacks",
    "check_bounded",
    "check_prefix_products",
    "check_tolerant_partition",
    "count_spanning_trees",
    "cut_edges",
    "derivation_chain",
    "effective_resistance",
    "enumerate_partitions",
    "enumerate_spanning_trees",
    "floor_pow_4_3",
    "graph_from_json",
    "graph_to_json",
    "graph_to_json_str",
    "grid_tree_number",
    "induced_subgraph",
    "load_graph",
    "load_partition",
    "make_grid",
    "merge_reports",
    "partition_deletion_set",
    "partition_from_json",
    "partition_to_json",
    "perimeter_ratio_threshold",
    "pointwise_outside",
    "quotient_graph",
    "ratio_bound_threshold",
    "recom_step",
    "recurrence_bound_step",
    "replay_decisions",
    "resistance_fixed_point",
    "resistance_fraction",
    "run_chain",
    "run_constrained_deletions",
    "same_embedding",
    "sample_deletion_run",
    "sample_tree_resistance",
    "sample_tree_wilson",
    "sample_trees_counter",
    "save_graph",
    "save_partition",
    "save_trace",
    "solve_flow",
    "spanning_tree_distribution",
    "spanning_tree_score",
    "track_pebbles",
    "trace_to_jsonl",
    "unbounded_degree_log_bounds",
    "unbounded_degree_resistances",
    "unbounded_face_scores",
    "validate_partition",
    "verify_exponential_gap",
    "verify_pair_dominance",
    "verify_run_products",
    "verify_score_ratio",
    "verify_score_ratios",
]
