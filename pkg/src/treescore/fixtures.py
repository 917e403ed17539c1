"""Reference graphs used by the tests, demos, and verification harness."""

from __future__ import annotations

import random

from .graphs import EmbeddedMultiGraph, make_grid


def make_cycle(k: int) -> EmbeddedMultiGraph:
    """Cycle on k >= 2 vertices (k = 2 gives two parallel edges)."""
    if k < 2:
        raise ValueError("cycle needs at least 2 vertices")
    if k == 2:
        return make_theta(2)
    edges = {i: (i, (i + 1) % k) for i in range(k)}
    rotation = {}
    for v in range(k):
        prev = (v - 1) % k
        rotation[v] = [(v, 0), (prev, 1)]
    return EmbeddedMultiGraph(edges, rotation)


def make_theta(k: int) -> EmbeddedMultiGraph:
    """Two vertices joined by k >= 2 parallel edges (nested arcs)."""
    if k < 2:
        raise ValueError("need at least 2 parallel edges")
    edges = {i: (0, 1) for i in range(k)}
    rotation = {
        0: [(i, 0) for i in range(k)],
        1: [(i, 1) for i in range(k - 1, -1, -1)],
    }
    return EmbeddedMultiGraph(edges, rotation)


def make_diamond() -> EmbeddedMultiGraph:
    """Two triangles sharing an edge (4 vertices, 5 edges).

    Edge 0 joins a degree-3 vertex (0) and a degree-2 vertex (1); among the
    8 spanning trees exactly 5 contain edge 0, so its effective resistance
    is 5/8.
    """
    edges = {0: (0, 1), 1: (0, 2), 2: (0, 3), 3: (1, 2), 4: (2, 3)}
    rotation = {
        0: [(1, 0), (0, 0), (2, 0)],
        1: [(0, 1), (3, 0)],
        2: [(3, 1), (1, 1), (4, 0)],
        3: [(4, 1), (2, 1)],
    }
    return EmbeddedMultiGraph(edges, rotation)


def make_complete4() -> EmbeddedMultiGraph:
    """K4 embedded with one vertex inside the outer triangle."""
    edges = {0: (0, 1), 1: (1, 2), 2: (0, 2), 3: (0, 3), 4: (1, 3), 5: (2, 3)}
    rotation = {
        0: [(0, 0), (3, 0), (2, 0)],
        1: [(1, 0), (4, 0), (0, 1)],
        2: [(2, 1), (5, 0), (1, 1)],
        3: [(5, 1), (3, 1), (4, 1)],
    }
    return EmbeddedMultiGraph(edges, rotation)


def make_twelve_county() -> EmbeddedMultiGraph:
    """A 12-vertex county-style adjacency map with two reference 3-partitions.

    Three rows of four vertices with five extra diagonal/arc edges. The
    "compact" partition has districts {0,1,4,5}, {2,3,6,7}, {8,9,10,11}
    scoring 8 * 3 * 8 = 192 with 8 cut edges; the "stringy" partition
    {0,1,4,8}, {2,5,6,9}, {3,7,10,11} has all-tree districts (score 1) and
    13 cut edges.
    """
    edges = {
        0: (0, 1), 1: (1, 2), 2: (2, 3),
        3: (4, 5), 4: (5, 6), 5: (6, 7),
        6: (8, 9), 7: (9, 10), 8: (10, 11),
        9: (0, 4), 10: (1, 5), 11: (2, 6), 12: (3, 7),
        13: (4, 8), 14: (5, 9), 15: (6, 10), 16: (7, 11),
        17: (0, 5), 18: (1, 6), 19: (2, 7), 20: (6, 11), 21: (8, 10),
    }
    rotation = {
        0: [(0, 0), (9, 0), (17, 0)],
        1: [(1, 0), (0, 1), (10, 0), (18, 0)],
        2: [(2, 0), (1, 1), (11, 0), (19, 0)],
        3: [(2, 1), (12, 0)],
        4: [(3, 0), (9, 1), (13, 0)],
        5: [(4, 0), (10, 1), (17, 1), (3, 1), (14, 0)],
        6: [(5, 0), (11, 1), (18, 1), (4, 1), (15, 0), (20, 0)],
        7: [(12, 1), (19, 1), (5, 1), (16, 0)],
        8: [(6, 0), (13, 1), (21, 0)],
        9: [(7, 0), (14, 1), (6, 1)],
        10: [(8, 0), (15, 1), (7, 1), (21, 1)],
        11: [(16, 1), (20, 1), (8, 1)],
    }
    return EmbeddedMultiGraph(edges, rotation)


def twelve_county_compact_partition() -> dict[int, int]:
    return {0: 0, 1: 0, 4: 0, 5: 0, 2: 1, 3: 1, 6: 1, 7: 1, 8: 2, 9: 2, 10: 2, 11: 2}


def twelve_county_stringy_partition() -> dict[int, int]:
    return {0: 0, 1: 0, 4: 0, 8: 0, 2: 1, 5: 1, 6: 1, 9: 1, 3: 2, 7: 2, 10: 2, 11: 2}


def _add_parallel(g: EmbeddedMultiGraph, e: int) -> EmbeddedMultiGraph:
    """Duplicate edge e; the copy hugs the original so planarity is kept."""
    u, v = g.endpoints(e)
    if u == v:
        raise ValueError("refusing to duplicate a self-loop")
    new = max(g.edge_ids) + 1
    edges = g.edges_dict()
    edges[new] = (u, v)
    rotation = {w: g.rotation(w) for w in g.vertices}
    iu = rotation[u].index((e, 0))
    rotation[u].insert(iu + 1, (new, 0))
    iv = rotation[v].index((e, 1))
    rotation[v].insert(iv, (new, 1))
    return EmbeddedMultiGraph(edges, rotation, g.labels)


def _add_loop(g: EmbeddedMultiGraph, v: int, pos: int) -> EmbeddedMultiGraph:
    """Attach a tiny self-loop at v between two consecutive darts."""
    new = max(g.edge_ids) + 1 if g.edge_ids else 0
    edges = g.edges_dict()
    edges[new] = (v, v)
    rotation = {w: g.rotation(w) for w in g.vertices}
    pos = pos % (len(rotation[v]) + 1) if rotation[v] else 0
    rotation[v][pos:pos] = [(new, 0), (new, 1)]
    return EmbeddedMultiGraph(edges, rotation, g.labels)


def _non_bridges(g: EmbeddedMultiGraph) -> list[int]:
    dual = g.trace_faces()
    bridges = dual.bridges()
    return [e for e in g.edge_ids if e not in bridges and not g.is_loop(e)]


def random_planar_multigraph(seed: int, max_vertices: int = 8) -> EmbeddedMultiGraph:
    """Small random connected planar multigraph with a valid embedding.

    Starts from a random grid that fits the vertex budget, then applies a
    random sequence of embedding-preserving edits: deleting non-bridge edges,
    duplicating edges, adding self-loops, contracting edges.
    """
    rng = random.Random(seed)
    shapes = [(w, h) for w in range(2, 5) for h in range(2, 5) if w * h <= max_vertices]
    shapes += [(n, 1) for n in range(2, max_vertices + 1)]
    w, h = rng.choice(shapes)
    g = make_grid(w, h)
    for _ in range(rng.randrange(0, 7)):
        op = rng.choice(["delete", "parallel", "loop", "contract", "none"])
        if op == "delete":
            cand = _non_bridges(g)
            if cand and g.num_edges > g.num_vertices - 1:
                g = g.delete_edge(rng.choice(cand))
        elif op == "parallel":
            cand = [e for e in g.edge_ids if not g.is_loop(e)]
            if cand:
                g = _add_parallel(g, rng.choice(cand))
        elif op == "loop":
            v = rng.choice(g.vertices)
            g = _add_loop(g, v, rng.randrange(0, max(1, g.degree(v) + 1)))
        elif op == "contract":
            cand = [e for e in g.edge_ids if not g.is_loop(e)]
            if cand and g.num_vertices > 2:
                g = g.contract_edge(rng.choice(cand))
    return g


def planar_fixture_suite(count: int = 60, max_vertices: int = 8) -> list[tuple[str, EmbeddedMultiGraph]]:
    """Named suite of small embedded graphs: grids, cycles, thetas, random edits."""
    suite: list[tuple[str, EmbeddedMultiGraph]] = []
    for w, h in [(2, 2), (3, 2), (4, 2), (2, 3), (2, 4), (3, 1), (8, 1)]:
        suite.append((f"grid{w}x{h}", make_grid(w, h)))
    for k in [3, 4, 5, 6, 7, 8]:
        suite.append((f"cycle{k}", make_cycle(k)))
    for k in [2, 3, 4, 5]:
        suite.append((f"theta{k}", make_theta(k)))
    suite.append(("diamond", make_diamond()))
    suite.append(("k4", make_complete4()))
    i = 0
    seed = 0
    while len(suite) < count:
        g = random_planar_multigraph(seed, max_vertices=max_vertices)
        seed += 1
        if g.num_vertices <= max_vertices:
            suite.append((f"random{i}", g))
            i += 1
    return suite
