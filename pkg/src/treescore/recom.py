"""Merge-split Markov chain over balanced partitions.

One step of the chain picks a uniformly random pair of adjacent districts
(districts sharing at least one cut edge), merges them, draws a uniform
spanning tree of the merged region, and cuts a tree edge whose two sides both
land within the balance tolerance of ``|V|/m``. If several edges qualify, one
is chosen uniformly; if none do, a fresh tree is drawn, up to a resample
budget, after which the step is skipped and the partition left unchanged.
Cutting a spanning tree guarantees both new districts are connected.

The chain is driven by a single seeded generator, so runs are deterministic
given ``(graph, start, config)``. Two tree samplers are available: the
loop-erased random-walk sampler (``"wilson"``, default) and the
resistance-driven sampler (``"alg1"``); both draw uniformly, so the chain's
distribution does not depend on the choice.

How closely the chain's empirical distribution tracks the spanning-tree-score
distribution is reported by callers as a diagnostic only; nothing here asserts
convergence.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .graphs import EmbeddedMultiGraph, induced_subgraph
from .partition import Partition, PartitionError, cut_edges
from .sampler import sample_tree_resistance, sample_tree_wilson

__all__ = [
    "RecomError",
    "TREE_SAMPLERS",
    "ChainConfig",
    "StepResult",
    "SampleRecord",
    "EnsembleStats",
    "check_tolerant_partition",
    "adjacent_district_pairs",
    "balance_edges",
    "recom_step",
    "run_chain",
]


TREE_SAMPLERS = ("wilson", "alg1")


class RecomError(ValueError):
    """Invalid chain configuration or step input."""


@dataclass(frozen=True)
class ChainConfig:
    """Parameters of one chain run.

    ``balance_tolerance`` is the largest allowed deviation of a district's
    vertex count from ``|V|/m`` (compared exactly: a size ``s`` qualifies when
    ``|s*m - |V|| <= tolerance * m``). ``max_resample`` caps the number of
    spanning trees drawn per step before the step is skipped.
    """

    steps: int
    seed: int
    balance_tolerance: int = 0
    max_resample: int = 64
    tree_sampler: str = "wilson"

    def __post_init__(self):
        if self.steps < 0:
            raise RecomError("steps must be non-negative")
        if self.balance_tolerance < 0:
            raise RecomError("balance tolerance must be non-negative")
        if self.max_resample < 1:
            raise RecomError("resample budget must be at least 1")
        if self.tree_sampler not in TREE_SAMPLERS:
            raise RecomError(
                f"unknown tree sampler {self.tree_sampler!r}; "
                f"choose from {', '.join(TREE_SAMPLERS)}"
            )

    def to_json(self) -> dict:
        return {
            "steps": self.steps,
            "seed": self.seed,
            "balance-tolerance": self.balance_tolerance,
            "max-resample": self.max_resample,
            "tree-sampler": self.tree_sampler,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ChainConfig":
        def pick(name: str, default):
            for key in (name, name.replace("-", "_")):
                if key in obj:
                    return obj[key]
            if default is None:
                raise RecomError(f"config is missing required field {name!r}")
            return default

        known = set()
        for name in ("steps", "seed", "balance-tolerance", "max-resample", "tree-sampler"):
            known.add(name)
            known.add(name.replace("-", "_"))
        unknown = sorted(set(obj) - known)
        if unknown:
            raise RecomError(f"unknown config fields: {', '.join(unknown)}")
        return cls(
            steps=int(pick("steps", None)),
            seed=int(pick("seed", None)),
            balance_tolerance=int(pick("balance-tolerance", 0)),
            max_resample=int(pick("max-resample", 64)),
            tree_sampler=str(pick("tree-sampler", "wilson")),
        )

    @classmethod
    def from_json_str(cls, text: str) -> "ChainConfig":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise RecomError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(obj, dict):
            raise RecomError("config JSON must be an object")
        return cls.from_json(obj)


@dataclass(frozen=True)
class StepResult:
    """Outcome of one chain step."""

    partition: Partition
    skipped: bool
    resamples: int


@dataclass(frozen=True)
class SampleRecord:
    step: int
    cut_size: int
    digest: str


@dataclass(frozen=True)
class EnsembleStats:
    """Recorded trajectory of one chain run.

    ``samples`` includes the starting partition at step 0. ``acceptance`` is
    the fraction of steps that produced a new split (1.0 for a zero-step run);
    the histogram counts recorded samples by cut size, so its values total
    ``len(samples)``.
    """

    m: int
    steps: int
    acceptance: float
    samples: tuple[SampleRecord, ...]
    histogram: dict[int, int] = field(default_factory=dict)
    skipped_steps: int = 0
    final_partition: Partition | None = None

    def to_csv(self) -> str:
        lines = ["step,cut_edges,partition_hash"]
        lines.extend(f"{s.step},{s.cut_size},{s.digest}" for s in self.samples)
        return "\n".join(lines) + "\n"

    def histogram_json(self) -> dict:
        return {
            "steps": self.steps,
            "acceptance": self.acceptance,
            "skipped-steps": self.skipped_steps,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
        }

    def to_json(self) -> dict:
        out = self.histogram_json()
        out["m"] = self.m
        out["samples"] = [[s.step, s.cut_size, s.digest] for s in self.samples]
        if self.final_partition is not None:
            out["final-partition"] = {
                str(v): d for v, d in sorted(self.final_partition.as_dict().items())
            }
        return out


def _size_within(size: int, n: int, m: int, tolerance: int) -> bool:
    return abs(size * m - n) <= tolerance * m


def check_tolerant_partition(
    g: EmbeddedMultiGraph, p: Partition, tolerance: int
) -> list[str]:
    """Problems with a partition under the chain's balance rule (empty = ok).

    Every vertex must be assigned to exactly one district, every district must
    be connected, and every district size must lie within ``tolerance`` of
    ``|V|/m``. With tolerance 0 this is exact balance.
    """
    problems: list[str] = []
    n = g.num_vertices
    assigned = {v for v, _ in p.assignment}
    verts = set(g.vertices)
    if assigned != verts:
        missing = sorted(verts - assigned)
        extra = sorted(assigned - verts)
        if missing:
            problems.append(f"unassigned vertices {missing}")
        if extra:
            problems.append(f"unknown vertices {extra}")
        return problems
    for i, block in enumerate(p.districts()):
        if not _size_within(len(block), n, p.m, tolerance):
            problems.append(
                f"district {i} has {len(block)} vertices, outside tolerance "
                f"{tolerance} of {n}/{p.m}"
            )
        elif not induced_subgraph(g, block).is_connected():
            problems.append(f"district {i} is not connected")
    return problems


def adjacent_district_pairs(g: EmbeddedMultiGraph, p: Partition) -> list[tuple[int, int]]:
    """Unordered district pairs joined by at least one cut edge, sorted."""
    a = p.as_dict()
    pairs = set()
    for e, (u, v) in g.edges_dict().items():
        if u != v and a[u] != a[v]:
            pairs.add((min(a[u], a[v]), max(a[u], a[v])))
    return sorted(pairs)


def balance_edges(
    sub: EmbeddedMultiGraph,
    tree: frozenset[int],
    n: int,
    m: int,
    tolerance: int,
) -> list[tuple[int, frozenset[int]]]:
    """Tree edges whose removal splits the region into two tolerable halves.

    ``sub`` is the merged region, ``tree`` a spanning tree of it (edge ids of
    ``sub``), and ``n``/``m`` the whole graph's vertex count and district
    count. Returns ``(edge, vertices-on-the-root side)`` pairs sorted by edge
    id; the root is the region's smallest vertex. For every tree edge the two
    side sizes always total the region size.
    """
    verts = sub.vertices
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in verts}
    for e in sorted(tree):
        u, v = sub.endpoints(e)
        adj[u].append((e, v))
        adj[v].append((e, u))
    root = min(verts)
    # Iterative post-order: subtree size below each tree edge.
    order: list[tuple[int, int, int]] = []  # (vertex, parent-edge, parent)
    stack = [(root, -1, -1)]
    seen = {root}
    while stack:
        v, pe, pv = stack.pop()
        order.append((v, pe, pv))
        for e, w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append((w, e, v))
    subtree = {v: 1 for v in verts}
    below: dict[int, tuple[int, int]] = {}  # parent edge -> (side size, child)
    for v, pe, pv in reversed(order):
        if pe >= 0:
            below[pe] = (subtree[v], v)
            subtree[pv] += subtree[v]
    region = len(verts)
    out = []
    for e in sorted(below):
        side, child = below[e]
        if _size_within(side, n, m, tolerance) and _size_within(
            region - side, n, m, tolerance
        ):
            child_side = _collect_side(adj, e, child)
            out.append((e, frozenset(verts) - child_side))
    return out


def _collect_side(adj, cut_edge: int, start: int) -> frozenset[int]:
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for e, w in adj[v]:
            if e != cut_edge and w not in seen:
                seen.add(w)
                stack.append(w)
    return frozenset(seen)


def recom_step(
    g: EmbeddedMultiGraph,
    p: Partition,
    rng: random.Random,
    cfg: ChainConfig,
) -> StepResult:
    """One merge-split step; returns the new partition or a skip.

    Raises :class:`~treescore.partition.PartitionError` when the input
    partition is invalid under the chain's balance rule and
    :class:`RecomError` when there is no district pair to merge (``m = 1``).
    After a successful split, the side containing the merged region's smallest
    vertex keeps the smaller of the two district labels.
    """
    problems = check_tolerant_partition(g, p, cfg.balance_tolerance)
    if problems:
        raise PartitionError("; ".join(problems))
    if p.m < 2:
        raise RecomError("need at least two districts to merge")
    pairs = adjacent_district_pairs(g, p)
    if not pairs:
        raise RecomError("no adjacent district pair exists")
    da, db = pairs[rng.randrange(len(pairs))]
    blocks = p.districts()
    merged = blocks[da] | blocks[db]
    sub = induced_subgraph(g, merged)
    n, m = g.num_vertices, p.m
    for attempt in range(1, cfg.max_resample + 1):
        if cfg.tree_sampler == "wilson":
            tree = sample_tree_wilson(sub, rng=rng)
        else:
            tree = sample_tree_resistance(sub, rng=rng).tree
        candidates = balance_edges(sub, tree, n, m, cfg.balance_tolerance)
        if candidates:
            _, root_side = candidates[rng.randrange(len(candidates))]
            other_side = merged - root_side
            low_side = root_side if min(merged) in root_side else other_side
            high_side = merged - low_side
            assignment = p.as_dict()
            for v in low_side:
                assignment[v] = da
            for v in high_side:
                assignment[v] = db
            return StepResult(
                partition=Partition.from_dict(m, assignment),
                skipped=False,
                resamples=attempt,
            )
    return StepResult(partition=p, skipped=True, resamples=cfg.max_resample)


def run_chain(g: EmbeddedMultiGraph, p0: Partition, cfg: ChainConfig) -> EnsembleStats:
    """Run the chain from ``p0`` and record every visited partition.

    Deterministic given ``(g, p0, cfg)``. Every recorded partition — the start
    included — is re-checked under the balance rule; a failure raises, since
    it would mean the step construction is broken.
    """
    problems = check_tolerant_partition(g, p0, cfg.balance_tolerance)
    if problems:
        raise PartitionError("; ".join(problems))
    rng = random.Random(cfg.seed)
    p = p0
    samples = [SampleRecord(0, cut_edges(g, p).size, p.digest())]
    skipped = 0
    for step in range(1, cfg.steps + 1):
        result = recom_step(g, p, rng, cfg)
        p = result.partition
        if result.skipped:
            skipped += 1
        else:
            problems = check_tolerant_partition(g, p, cfg.balance_tolerance)
            if problems:
                raise RecomError(
                    f"step {step} produced an invalid partition: "
                    + "; ".join(problems)
                )
        samples.append(SampleRecord(step, cut_edges(g, p).size, p.digest()))
    histogram: dict[int, int] = {}
    for s in samples:
        histogram[s.cut_size] = histogram.get(s.cut_size, 0) + 1
    acceptance = 1.0 if cfg.steps == 0 else (cfg.steps - skipped) / cfg.steps
    return EnsembleStats(
        m=p0.m,
        steps=cfg.steps,
        acceptance=acceptance,
        samples=tuple(samples),
        histogram=histogram,
        skipped_steps=skipped,
        final_partition=p,
    )
