"""Uniform spanning tree sampling driven by effective resistances.

The sampler walks the edge list of a connected multigraph. At each step it
computes the chosen edge's effective resistance r (the probability a uniform
spanning tree contains it), contracts the edge with probability r or deletes
it otherwise, and records p = r or 1 - r. The contracted edges form a
uniformly random spanning tree, and the product of the recorded p values
along any computation path equals the probability of that path: the fraction
of spanning trees consistent with its decisions.

A Wilson loop-erased-walk sampler is included as an independent oracle.

Randomness: one ``random.Random`` stream per run. A regular run consumes
exactly one ``random()`` per non-forced iteration (forced moves, where r is
0 or 1, consume nothing); a deletion run consumes one ``randrange()`` per
iteration to pick the edge.
"""

from __future__ import annotations

import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from random import Random

import numpy as np

from ._linalg import laplacian_minor_det
from .graphs import EmbeddedMultiGraph
from .spectral import DisconnectedGraphError

EXACT_SAMPLER_THRESHOLD = 64
FLOAT_FORCED_TOL = 1e-12


class SamplerError(ValueError):
    pass


@dataclass(frozen=True)
class EdgePolicy:
    """Rule for choosing the next edge to process.

    kinds: "lowest-id" (default), "given-order" (first surviving edge of a
    fixed sequence), "boundary-first" (edges of a given cut set first, lowest
    id within each class).
    """

    kind: str = "lowest-id"
    order: tuple[int, ...] | None = None
    cut: frozenset[int] | None = None

    @classmethod
    def lowest_id(cls) -> "EdgePolicy":
        return cls(kind="lowest-id")

    @classmethod
    def given_order(cls, order) -> "EdgePolicy":
        return cls(kind="given-order", order=tuple(order))

    @classmethod
    def boundary_first(cls, cut_set) -> "EdgePolicy":
        return cls(kind="boundary-first", cut=frozenset(cut_set))

    def select(self, surviving) -> int:
        if self.kind == "lowest-id":
            return min(surviving)
        if self.kind == "given-order":
            for e in self.order:
                if e in surviving:
                    return e
            raise SamplerError("policy order exhausted before the run finished")
        if self.kind == "boundary-first":
            on_cut = [e for e in surviving if e in self.cut]
            return min(on_cut) if on_cut else min(surviving)
        raise SamplerError(f"unknown policy kind {self.kind!r}")


@dataclass(frozen=True)
class TraceStep:
    index: int
    edge: int
    resistance: Fraction | float
    probability: Fraction | float
    action: str  # "contracted" | "deleted"
    forced: bool


@dataclass(frozen=True)
class SampleTrace:
    steps: tuple[TraceStep, ...]
    tree: frozenset[int]
    complete: bool
    initial_trees: int | None
    # Potential values from a pile tracker, one per prefix: pebbles[0] is the
    # initial potential and pebbles[i] the value after step i. Optional; filled
    # in by the pebbles module.
    pebbles: tuple[int, ...] | None = None

    def p_product(self) -> Fraction:
        prod = Fraction(1)
        for s in self.steps:
            prod *= s.probability
        return prod

    def contracted(self) -> list[int]:
        return [s.edge for s in self.steps if s.action == "contracted"]

    def deleted(self) -> list[int]:
        return [s.edge for s in self.steps if s.action == "deleted"]


def _num(x) -> object:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return float(x)


def trace_to_jsonl(trace: SampleTrace) -> str:
    lines = []
    for k, s in enumerate(trace.steps):
        record = {
            "i": s.index,
            "edge": s.edge,
            "r": _num(s.resistance),
            "p": _num(s.probability),
            "action": s.action,
            "forced": s.forced,
        }
        if trace.pebbles is not None:
            record["P"] = str(trace.pebbles[k + 1])
        lines.append(json.dumps(record, sort_keys=True))
    return "\n".join(lines) + ("\n" if lines else "")


def save_trace(trace: SampleTrace, path) -> None:
    with open(path, "w") as fh:
        fh.write(trace_to_jsonl(trace))


def find_bridges(edges: dict[int, tuple[int, int]], vertices) -> set[int]:
    """Bridge edges of a multigraph; parallel copies and self-loops are never bridges."""
    adj: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for eid, (u, v) in edges.items():
        if u != v:
            adj[u].append((v, eid))
            adj[v].append((u, eid))
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    bridges: set[int] = set()
    timer = 0
    for root in vertices:
        if root in disc:
            continue
        disc[root] = low[root] = timer
        timer += 1
        frames = [[root, -1, 0]]
        while frames:
            v, pe, i = frames[-1]
            nbrs = adj.get(v, ())
            if i < len(nbrs):
                frames[-1][2] += 1
                w, eid = nbrs[i]
                if eid == pe:
                    continue
                if w not in disc:
                    disc[w] = low[w] = timer
                    timer += 1
                    frames.append([w, eid, 0])
                elif disc[w] < low[v]:
                    low[v] = disc[w]
            else:
                frames.pop()
                if frames:
                    u = frames[-1][0]
                    if low[v] < low[u]:
                        low[u] = low[v]
                    if low[v] > disc[u]:
                        bridges.add(pe)
    return bridges


class _RunState:
    """Mutable multigraph view used inside a run (original edge ids kept)."""

    __slots__ = ("edges", "vertices", "trees")

    def __init__(self, g: EmbeddedMultiGraph, exact: bool):
        if not g.is_connected():
            raise DisconnectedGraphError("graph is not connected")
        self.edges: dict[int, tuple[int, int]] = g.edges_dict()
        self.vertices: set[int] = set(g.vertices)
        self.trees: int | None = None
        if exact:
            self.trees = self._minor_det(frozenset([min(self.vertices)]))

    def _minor_det(self, excluded) -> int:
        return laplacian_minor_det(sorted(self.vertices), self.edges.values(), excluded)

    def trees_containing(self, u: int, v: int) -> int:
        return self._minor_det({u, v})

    def resistance_float(self, u: int, v: int) -> float:
        kept = sorted(w for w in self.vertices if w != v)
        idx = {w: i for i, w in enumerate(kept)}
        n = len(kept)
        a = np.zeros((n, n))
        for x, y in self.edges.values():
            if x == y:
                continue
            ix, iy = idx.get(x), idx.get(y)
            if ix is not None:
                a[ix, ix] += 1
            if iy is not None:
                a[iy, iy] += 1
            if ix is not None and iy is not None:
                a[ix, iy] -= 1
                a[iy, ix] -= 1
        b = np.zeros(n)
        b[idx[u]] = 1.0
        x = np.linalg.solve(a, b)
        return float(x[idx[u]])

    def contract(self, e: int) -> None:
        u, v = self.edges.pop(e)
        keep, gone = (u, v) if u < v else (v, u)
        if keep == gone:
            raise SamplerError("cannot contract a self-loop")
        for f, (x, y) in list(self.edges.items()):
            nx = keep if x == gone else x
            ny = keep if y == gone else y
            if nx != x or ny != y:
                self.edges[f] = (nx, ny)
        self.vertices.discard(gone)

    def delete(self, e: int) -> None:
        del self.edges[e]


def _run(
    g: EmbeddedMultiGraph,
    rng: Random | None,
    policy: EdgePolicy,
    decisions: dict[int, str] | None,
    stop_when_decided: bool,
    exact_threshold: int,
) -> SampleTrace:
    exact = g.num_vertices <= exact_threshold
    state = _RunState(g, exact)
    initial = state.trees
    steps: list[TraceStep] = []
    tree: list[int] = []
    pending = set(decisions) if decisions is not None else None
    index = 0
    while len(state.vertices) >= 2 and state.edges:
        if stop_when_decided and pending is not None and not pending:
            break
        e = policy.select(state.edges)
        index += 1
        u, v = state.edges[e]
        forced = None
        if u == v:
            r: Fraction | float = Fraction(0) if exact else 0.0
            forced = "deleted"
        elif exact:
            cont = state.trees_containing(u, v)
            r = Fraction(cont, state.trees)
            if r == 1:
                forced = "contracted"
        else:
            r = state.resistance_float(u, v)
            if r >= 1.0 - FLOAT_FORCED_TOL:
                r = 1.0
                forced = "contracted"
            elif r <= FLOAT_FORCED_TOL:
                r = 0.0
                forced = "deleted"
            else:
                r = min(max(r, 0.0), 1.0)

        if forced is not None:
            action = forced
        elif decisions is not None:
            if e not in decisions:
                raise SamplerError(f"no decision recorded for edge {e}")
            action = decisions[e]
        else:
            x = rng.random()
            action = "contracted" if Fraction(x) < r else "deleted"
        if decisions is not None and e in decisions and decisions[e] != action:
            raise SamplerError(
                f"decision {decisions[e]!r} for edge {e} has probability zero (forced {action})"
            )

        if action == "contracted":
            p = r
            state.contract(e)
            if exact:
                state.trees = cont if u != v else state.trees
            tree.append(e)
        else:
            p = 1 - r
            state.delete(e)
            if exact and u != v:
                state.trees -= cont
        if pending is not None:
            pending.discard(e)
        steps.append(
            TraceStep(
                index=index,
                edge=e,
                resistance=r,
                probability=p,
                action=action,
                forced=forced is not None,
            )
        )
    complete = len(state.vertices) < 2
    return SampleTrace(
        steps=tuple(steps), tree=frozenset(tree), complete=complete, initial_trees=initial
    )


def sample_tree_resistance(
    g: EmbeddedMultiGraph,
    seed: int | None = None,
    policy: EdgePolicy | None = None,
    rng: Random | None = None,
    exact_threshold: int = EXACT_SAMPLER_THRESHOLD,
) -> SampleTrace:
    """Run the resistance-driven sampler to completion.

    Exact rational resistances below the vertex threshold, floating above
    (resistances within 1e-12 of 0 or 1 are then treated as forced and the
    step is flagged). The contracted edge set is the sampled tree.
    """
    if rng is None:
        rng = Random(seed)
    if policy is None:
        policy = EdgePolicy.lowest_id()
    return _run(g, rng, policy, None, False, exact_threshold)


def replay_decisions(
    g: EmbeddedMultiGraph,
    decisions: dict[int, str],
    policy: EdgePolicy | None = None,
    stop_when_decided: bool = False,
    exact_threshold: int = EXACT_SAMPLER_THRESHOLD,
) -> SampleTrace:
    """Deterministically replay a run whose non-forced decisions are given.

    Forced moves (self-loops, bridges) resolve themselves; a decision that
    contradicts a forced move describes a probability-zero path and raises.
    """
    for a in decisions.values():
        if a not in ("contracted", "deleted"):
            raise SamplerError(f"unknown action {a!r}")
    if policy is None:
        policy = EdgePolicy.lowest_id()
    return _run(g, None, policy, dict(decisions), stop_when_decided, exact_threshold)


def run_constrained_deletions(
    g: EmbeddedMultiGraph, delete_edges
) -> tuple[Fraction, EmbeddedMultiGraph]:
    """Delete the given edges in order, multiplying out (1 - r) at each step.

    The product is the probability that a uniform spanning tree avoids the
    whole set. Raises if a deletion would disconnect the graph. Returns the
    probability and the remaining embedded graph.
    """
    order = list(delete_edges)
    if len(set(order)) != len(order):
        raise SamplerError("duplicate edges in deletion set")
    for e in order:
        if e not in g.edges_dict():
            raise SamplerError(f"no edge {e}")
    decisions = {e: "deleted" for e in order}
    trace = replay_decisions(
        g, decisions, policy=EdgePolicy.given_order(order), stop_when_decided=True
    )
    prob = trace.p_product()
    remaining = g
    for e in order:
        remaining = remaining.delete_edge(e)
    return prob, remaining


def sample_deletion_run(
    g: EmbeddedMultiGraph,
    seed: int | None = None,
    rng: Random | None = None,
    exact_threshold: int = EXACT_SAMPLER_THRESHOLD,
) -> SampleTrace:
    """Random all-deletions computation path, run until a spanning tree remains.

    Each step deletes a uniformly random surviving non-bridge edge (a
    positive-probability choice, since such an edge always has r < 1) and
    records p = 1 - r. The returned trace is a partial run: the remaining
    bridges are reported as the tree but were never processed.
    """
    if rng is None:
        rng = Random(seed)
    exact = g.num_vertices <= exact_threshold
    state = _RunState(g, exact)
    initial = state.trees
    steps: list[TraceStep] = []
    index = 0
    while True:
        bridges = find_bridges(state.edges, state.vertices)
        candidates = sorted(e for e in state.edges if e not in bridges)
        if not candidates:
            break
        e = candidates[rng.randrange(len(candidates))]
        index += 1
        u, v = state.edges[e]
        if u == v:
            r: Fraction | float = Fraction(0) if exact else 0.0
            forced = True
        elif exact:
            cont = state.trees_containing(u, v)
            r = Fraction(cont, state.trees)
            forced = False
        else:
            r = state.resistance_float(u, v)
            forced = r <= FLOAT_FORCED_TOL
        state.delete(e)
        if exact and u != v:
            state.trees -= cont
        steps.append(
            TraceStep(
                index=index,
                edge=e,
                resistance=r,
                probability=1 - r,
                action="deleted",
                forced=forced,
            )
        )
    return SampleTrace(
        steps=tuple(steps),
        tree=frozenset(state.edges),
        complete=False,
        initial_trees=initial,
    )


def sample_tree_wilson(
    g: EmbeddedMultiGraph, seed: int | None = None, rng: Random | None = None
) -> frozenset[int]:
    """Uniform spanning tree via loop-erased random walks.

    Self-loops are skipped (they are in no tree and only delay the walk);
    parallel edges are distinct walk choices, so trees that use different
    copies are distinct outcomes.
    """
    if rng is None:
        rng = Random(seed)
    if not g.is_connected():
        raise DisconnectedGraphError("graph is not connected")
    incident: dict[int, list[tuple[int, int]]] = {v: [] for v in g.vertices}
    for e, (u, v) in g.edges_dict().items():
        if u == v:
            continue
        incident[u].append((e, v))
        incident[v].append((e, u))
    verts = g.vertices
    root = verts[0]
    in_tree = {root}
    next_edge: dict[int, int] = {}
    next_vertex: dict[int, int] = {}
    tree: list[int] = []
    for start in verts:
        if start in in_tree:
            continue
        u = start
        while u not in in_tree:
            e, w = incident[u][rng.randrange(len(incident[u]))]
            next_edge[u] = e
            next_vertex[u] = w
            u = w
        u = start
        while u not in in_tree:
            in_tree.add(u)
            tree.append(next_edge[u])
            u = next_vertex[u]
    return frozenset(tree)


class CachedTreeSampler:
    """Repeated runs of the resistance sampler with a shared decision cache.

    With a deterministic edge policy the state after any sequence of coin
    outcomes is fixed, so each distinct outcome prefix needs its resistance
    computed once. Complete runs correspond one-to-one with spanning trees,
    which makes repeated sampling on small graphs cheap. Only the sampled
    tree is returned (no trace).
    """

    def __init__(self, g: EmbeddedMultiGraph, policy: EdgePolicy | None = None):
        if g.num_vertices > EXACT_SAMPLER_THRESHOLD:
            raise SamplerError("cached sampling is for small graphs")
        self._g = g
        self._policy = policy or EdgePolicy.lowest_id()
        self._nodes: dict[tuple[int, ...], tuple] = {}

    def _expand(self, bits: tuple[int, ...]) -> tuple:
        state = _RunState(self._g, exact=False)
        pos = 0
        tree: list[int] = []
        while len(state.vertices) >= 2 and state.edges:
            e = self._policy.select(state.edges)
            u, v = state.edges[e]
            if u == v:
                state.delete(e)
                continue
            bridges = find_bridges(state.edges, state.vertices)
            if e in bridges:
                state.contract(e)
                tree.append(e)
                continue
            if pos < len(bits):
                if bits[pos]:
                    state.contract(e)
                    tree.append(e)
                else:
                    state.delete(e)
                pos += 1
                continue
            verts = sorted(state.vertices)
            total = laplacian_minor_det(verts, state.edges.values(), {verts[0]})
            cont = laplacian_minor_det(verts, state.edges.values(), {u, v})
            node = ("coin", e, Fraction(cont, total))
            self._nodes[bits] = node
            return node
        node = ("end", frozenset(tree))
        self._nodes[bits] = node
        return node

    def sample(self, rng: Random) -> frozenset[int]:
        bits: tuple[int, ...] = ()
        while True:
            node = self._nodes.get(bits)
            if node is None:
                node = self._expand(bits)
            if node[0] == "end":
                return node[1]
            _, _, r = node
            bits = bits + (1 if Fraction(rng.random()) < r else 0,)


def sample_trees_counter(
    g: EmbeddedMultiGraph,
    n_samples: int,
    seed: int | None = None,
    policy: EdgePolicy | None = None,
) -> Counter:
    """Draw many trees from the resistance sampler; returns tree -> frequency."""
    rng = Random(seed)
    sampler = CachedTreeSampler(g, policy)
    counts: Counter = Counter()
    for _ in range(n_samples):
        counts[sampler.sample(rng)] += 1
    return counts
