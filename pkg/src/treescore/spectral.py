"""Spanning-tree counts, electrical flows, and effective resistances.

Counts come from the reduced Laplacian determinant, evaluated with exact
integer arithmetic up to a size threshold. The effective resistance of an
edge equals the probability that a uniformly random spanning tree contains
it, which is also the ratio of two such determinants.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._linalg import laplacian_minor_det, log2_int, solve_rational
from .graphs import EmbeddedMultiGraph

EXACT_COUNT_THRESHOLD = 2048
EXACT_FLOW_THRESHOLD = 64


@dataclass(frozen=True)
class TreeCount:
    """Spanning-tree count; exact unless the graph exceeded the size threshold."""

    value: int | None
    exact: bool = True
    log2: float | None = None

    def __int__(self) -> int:
        if self.value is None:
            raise ValueError("count is approximate; use .log2")
        return self.value


@dataclass(frozen=True)
class FlowSolution:
    """Unit electrical flow: voltages per vertex (sink at 0) and per-edge currents.

    The current on edge e = (u, v) is v(u) - v(v), oriented from u to v.
    """

    source: int
    sink: int
    voltages: dict[int, Fraction] | dict[int, float]
    currents: dict[int, Fraction] | dict[int, float]
    exact: bool


@dataclass(frozen=True)
class ResistanceResult:
    edge: int
    exact: Fraction | None
    approx: float
    method: str


class DisconnectedGraphError(ValueError):
    pass


def _endpoint_iter(g: EmbeddedMultiGraph):
    return g.edges_dict().values()


def count_spanning_trees(
    g: EmbeddedMultiGraph, exact_threshold: int = EXACT_COUNT_THRESHOLD
) -> TreeCount:
    """Number of spanning trees (1 for a single vertex, 0 when disconnected)."""
    n = g.num_vertices
    if n == 0:
        raise ValueError("empty graph")
    if n == 1:
        return TreeCount(1, True, 0.0)
    if not g.is_connected():
        return TreeCount(0, True, None)
    verts = g.vertices
    if n <= exact_threshold:
        value = laplacian_minor_det(verts, _endpoint_iter(g), {verts[-1]})
        return TreeCount(value, True, log2_int(value))
    idx = {v: i for i, v in enumerate(verts[:-1])}
    m = np.zeros((n - 1, n - 1))
    for u, v in _endpoint_iter(g):
        if u == v:
            continue
        iu, iv = idx.get(u), idx.get(v)
        if iu is not None:
            m[iu, iu] += 1
        if iv is not None:
            m[iv, iv] += 1
        if iu is not None and iv is not None:
            m[iu, iv] -= 1
            m[iv, iu] -= 1
    sign, logdet = np.linalg.slogdet(m)
    if sign <= 0:
        return TreeCount(0, True, None)
    return TreeCount(None, False, float(logdet / np.log(2.0)))


def enumerate_spanning_trees(g: EmbeddedMultiGraph) -> list[frozenset[int]]:
    """All spanning trees by brute force (independent of any determinant).

    Feasible only for small graphs; intended as an oracle.
    """
    verts = g.vertices
    n = len(verts)
    non_loops = [e for e in g.edge_ids if not g.is_loop(e)]
    trees = []
    for combo in itertools.combinations(non_loops, n - 1):
        parent = {v: v for v in verts}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        ok = True
        for e in combo:
            u, v = g.endpoints(e)
            ru, rv = find(u), find(v)
            if ru == rv:
                ok = False
                break
            parent[ru] = rv
        if ok:
            trees.append(frozenset(combo))
    return trees


def resistance_fraction(g: EmbeddedMultiGraph, e: int) -> Fraction:
    """Exact effective resistance of edge e via two tree counts.

    For a self-loop the resistance is 0. For any other edge it equals
    (trees containing e) / (all trees), both computed as Laplacian minors.
    """
    u, v = g.endpoints(e)
    if u == v:
        return Fraction(0)
    verts = g.vertices
    total = laplacian_minor_det(verts, _endpoint_iter(g), {u})
    if total == 0:
        raise DisconnectedGraphError("graph is not connected")
    containing = laplacian_minor_det(verts, _endpoint_iter(g), {u, v})
    return Fraction(containing, total)


def solve_flow(
    g: EmbeddedMultiGraph,
    source: int,
    sink: int,
    exact: bool | None = None,
    refine_tol: float = 1e-12,
) -> FlowSolution:
    """Voltages and currents for one unit of current from source to sink.

    Exact rational arithmetic below the size threshold; otherwise a floating
    SPD solve with the sink pinned to zero and iterative refinement.
    """
    if source == sink:
        raise ValueError("source and sink must differ")
    verts = g.vertices
    if source not in g._rotation or sink not in g._rotation:
        raise ValueError("source/sink not in graph")
    if not g.is_connected():
        raise DisconnectedGraphError("graph is not connected")
    if exact is None:
        exact = g.num_vertices <= EXACT_FLOW_THRESHOLD

    kept = [v for v in verts if v != sink]
    idx = {v: i for i, v in enumerate(kept)}
    n = len(kept)

    if exact:
        a = [[Fraction(0)] * n for _ in range(n)]
        for u, v in _endpoint_iter(g):
            if u == v:
                continue
            iu, iv = idx.get(u), idx.get(v)
            if iu is not None:
                a[iu][iu] += 1
            if iv is not None:
                a[iv][iv] += 1
            if iu is not None and iv is not None:
                a[iu][iv] -= 1
                a[iv][iu] -= 1
        b = [Fraction(0)] * n
        b[idx[source]] = Fraction(1)
        x = solve_rational(a, b)
        voltages: dict = {v: x[idx[v]] for v in kept}
        voltages[sink] = Fraction(0)
    else:
        from scipy.linalg import cho_factor, cho_solve

        a = np.zeros((n, n))
        for u, v in _endpoint_iter(g):
            if u == v:
                continue
            iu, iv = idx.get(u), idx.get(v)
            if iu is not None:
                a[iu, iu] += 1
            if iv is not None:
                a[iv, iv] += 1
            if iu is not None and iv is not None:
                a[iu, iv] -= 1
                a[iv, iu] -= 1
        b = np.zeros(n)
        b[idx[source]] = 1.0
        factor = cho_factor(a)
        x = cho_solve(factor, b)
        for _ in range(50):
            res = b - a @ x
            if float(np.max(np.abs(res))) <= refine_tol:
                break
            x = x + cho_solve(factor, res)
        voltages = {v: float(x[idx[v]]) for v in kept}
        voltages[sink] = 0.0

    currents: dict = {}
    for e in g.edge_ids:
        u, v = g.endpoints(e)
        currents[e] = voltages[u] - voltages[v] if u != v else voltages[u] * 0
    return FlowSolution(source=source, sink=sink, voltages=voltages, currents=currents, exact=exact)


def effective_resistance(
    g: EmbeddedMultiGraph, e: int, method: str = "auto"
) -> ResistanceResult:
    """Effective resistance across edge e.

    method: "tree-ratio" (exact), "laplacian-solve" (flow-based), or "auto"
    (tree-ratio up to the exact-flow threshold, laplacian-solve beyond).
    """
    if method == "auto":
        method = "tree-ratio" if g.num_vertices <= EXACT_FLOW_THRESHOLD else "laplacian-solve"
    if method == "tree-ratio":
        r = resistance_fraction(g, e)
        return ResistanceResult(edge=e, exact=r, approx=float(r), method=method)
    if method == "laplacian-solve":
        u, v = g.endpoints(e)
        if u == v:
            return ResistanceResult(edge=e, exact=Fraction(0), approx=0.0, method=method)
        fl = solve_flow(g, u, v)
        r = fl.voltages[u] - fl.voltages[v]
        if fl.exact:
            return ResistanceResult(edge=e, exact=r, approx=float(r), method=method)
        return ResistanceResult(edge=e, exact=None, approx=float(r), method=method)
    raise ValueError(f"unknown method {method!r}")


class InvalidCycleError(ValueError):
    pass


def check_cycle_bound(g: EmbeddedMultiGraph, e: int, cycle_edges) -> bool:
    """True when R(e) <= 1 - 1/k for the given simple cycle of length k through e.

    The cycle is a list of edge ids; two parallel edges form a valid cycle of
    length 2. Always true for valid inputs; exposed as a checkable predicate.
    """
    cyc = list(cycle_edges)
    if len(set(cyc)) != len(cyc):
        raise InvalidCycleError("repeated edge in cycle")
    if e not in cyc:
        raise InvalidCycleError("cycle does not contain the edge")
    touch: dict[int, int] = {}
    for f in cyc:
        u, v = g.endpoints(f)
        if u == v:
            raise InvalidCycleError("self-loop in cycle")
        touch[u] = touch.get(u, 0) + 1
        touch[v] = touch.get(v, 0) + 1
    if any(c != 2 for c in touch.values()) or len(touch) != len(cyc):
        raise InvalidCycleError("edges do not form a simple cycle")
    seen = {cyc[0]}
    frontier = set(g.endpoints(cyc[0]))
    grew = True
    while grew:
        grew = False
        for f in cyc:
            if f in seen:
                continue
            u, v = g.endpoints(f)
            if u in frontier or v in frontier:
                seen.add(f)
                frontier.update((u, v))
                grew = True
    if len(seen) != len(cyc):
        raise InvalidCycleError("cycle is not connected")
    k = len(cyc)
    r = resistance_fraction(g, e)
    return r <= 1 - Fraction(1, k)


def check_degree_bound(g: EmbeddedMultiGraph, e: int) -> bool:
    """True when R(e) >= 1/deg(a) for the lower-degree endpoint a."""
    u, v = g.endpoints(e)
    if u == v:
        raise ValueError("degree bound does not apply to self-loops")
    d = min(g.degree(u), g.degree(v))
    r = resistance_fraction(g, e)
    return r >= Fraction(1, d)
