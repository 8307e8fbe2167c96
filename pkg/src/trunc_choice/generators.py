"""Seeded instance generators: wheels, triangulations, Gallai trees.

All generators are deterministic functions of their seed.  Embedded
outputs always pass face tracing (Euler), and the triangulation family
is 3-connected by construction (repeated splits of a face of a
tetrahedron keep it simple and triangulated).
"""

from __future__ import annotations

import random
from typing import Optional

from .choosability import ListAssignment
from .plane import GraphError, PlaneGraph, trace_faces
from .blocks import connectivity_at_least


def double_wheel(rim: int, hubs_adjacent: bool = False) -> PlaneGraph:
    """A rim cycle with one hub inside and one outside.

    Vertices: 0..rim-1 the rim, ``rim`` the inner hub, ``rim+1`` the
    outer hub.  The designated infinite face is a triangle at the outer
    hub, so the inner hub lands in the interior of the rim cycle.
    """
    if rim < 3:
        raise GraphError("rim must have at least 3 vertices")
    a, b = rim, rim + 1
    edges = []
    rotation: list[list[int]] = [[] for _ in range(rim + 2)]
    for i in range(rim):
        j = (i + 1) % rim
        edges.append((i, j))
        edges.append((i, a))
        edges.append((i, b))
        rotation[i] = [j, a, (i - 1) % rim, b]
    rotation[a] = list(range(rim))
    rotation[b] = list(reversed(range(rim)))
    if hubs_adjacent:
        raise GraphError("adjacent hubs would be non-planar with the rim")
    g = PlaneGraph.from_edges(
        rim + 2, edges, rotation=rotation, outer_walk=None
    )
    faces = trace_faces(g)
    outer = next(
        i
        for i, w in enumerate(faces.walks)
        if b in w and len(w) == 3
    )
    return g.with_outer_walk(faces.walks[outer])


def stacked_double_wheel(rim: int, stacked: int, seed: int) -> PlaneGraph:
    """Double wheel with extra degree-3 vertices split into the inner
    hub's triangles; keeps the two hubs as the only high-degree
    vertices at the usual threshold while enlarging the low-degree
    component."""
    g = double_wheel(rim)
    rng = random.Random(seed)
    a = rim  # inner hub
    faces = [(a, i, (i + 1) % rim) for i in range(rim)]
    n = g.n
    edges = list(g.edges())
    rotation = [list(r) for r in g.rotation]
    for _ in range(stacked):
        hub, p, q = faces.pop(rng.randrange(len(faces)))
        w = n
        n += 1
        edges += [(w, hub), (w, p), (w, q)]
        rotation.append([hub, p, q])
        _splice(rotation[hub], p, q, w)
        _splice(rotation[p], q, hub, w)
        _splice(rotation[q], hub, p, w)
        faces += [(w, hub, p), (w, p, q), (w, q, hub)]
    g2 = PlaneGraph.from_edges(n, edges, rotation=rotation, outer_walk=g.outer_walk)
    trace_faces(g2)
    return g2


def _splice(rot: list[int], u: int, v: int, w: int) -> None:
    """Insert w between the (cyclically adjacent) entries u and v."""
    iu = rot.index(u)
    if rot[(iu + 1) % len(rot)] == v:
        rot.insert(iu + 1, w)
        return
    iv = rot.index(v)
    if rot[(iv + 1) % len(rot)] == u:
        rot.insert(iv + 1, w)
        return
    raise GraphError(f"{u} and {v} are not adjacent in the rotation")


def random_triangulation(n: int, seed: int) -> PlaneGraph:
    """Random stacked triangulation on n >= 4 vertices (3-connected).

    Grown from a tetrahedron by splitting a uniformly random finite
    face with a new degree-3 vertex; the outer face stays a fixed
    triangle of the original tetrahedron.
    """
    if n < 4:
        raise GraphError("need at least 4 vertices")
    rng = random.Random(seed)
    # oriented faces of the tetrahedron; (1,3,2) is the outer face
    tris = [(0, 1, 2), (0, 2, 3), (0, 3, 1)]
    outer = (1, 3, 2)
    for w in range(4, n):
        i = rng.randrange(len(tris))
        p, q, r = tris.pop(i)
        tris += [(p, q, w), (q, r, w), (r, p, w)]
    all_tris = tris + [outer]
    succ: list[dict[int, int]] = [dict() for _ in range(n)]
    edges = set()
    for p, q, r in all_tris:
        succ[p][q] = r
        succ[q][r] = p
        succ[r][p] = q
        edges |= {(min(p, q), max(p, q)), (min(q, r), max(q, r)), (min(r, p), max(r, p))}
    rotation = []
    for v in range(n):
        nbrs = succ[v]
        start = next(iter(nbrs))
        cyc = [start]
        while True:
            nxt = nbrs[cyc[-1]]
            if nxt == start:
                break
            cyc.append(nxt)
        if len(cyc) != len(nbrs):
            raise GraphError("inconsistent triangulation rotation")
        rotation.append(cyc)
    g = PlaneGraph.from_edges(n, edges, rotation=rotation, outer_walk=outer)
    trace_faces(g)
    return g


def random_two_connected_planar(n: int, seed: int, delete_tries: int = 0) -> PlaneGraph:
    """Random 2-connected embedded graph: a stacked triangulation thinned
    by random edge deletions that keep 2-connectivity (outer triangle
    kept intact so the designation survives)."""
    g = random_triangulation(n, seed)
    rng = random.Random(seed ^ 0x5EED)
    tries = delete_tries if delete_tries else 2 * n
    protected = set()
    ow = g.outer_walk
    for i in range(len(ow)):
        a, b = ow[i], ow[(i + 1) % len(ow)]
        protected.add((min(a, b), max(a, b)))
    edges = set(g.edges())
    rotation = [list(r) for r in g.rotation]
    for _ in range(tries):
        candidates = sorted(edges - protected)
        if not candidates:
            break
        u, v = candidates[rng.randrange(len(candidates))]
        trial = edges - {(u, v)}
        tg = PlaneGraph.from_edges(n, trial)
        if connectivity_at_least(tg, 2):
            edges = trial
            rotation[u].remove(v)
            rotation[v].remove(u)
    g2 = PlaneGraph.from_edges(n, edges, rotation=rotation, outer_walk=ow)
    trace_faces(g2)
    return g2


def random_block_composition(seed: int, pieces: int = 4, piece_size: int = 8) -> PlaneGraph:
    """Glue 2-connected pieces and bridge edges at random cut vertices.

    Each new piece is attached at one host vertex by splicing the
    piece's rotation arc into a random corner of the host rotation, so
    the result is a valid embedding whatever corner is chosen.
    """
    rng = random.Random(seed)
    base = random_two_connected_planar(rng.randrange(5, piece_size + 1), rng.randrange(10_000))
    edges = set(base.edges())
    rotation = {v: list(base.rotation[v]) for v in range(base.n)}
    n = base.n
    for _ in range(pieces - 1):
        host = rng.randrange(n)
        if rng.random() < 0.35:
            # bridge to a fresh leaf
            w = n
            n += 1
            edges.add((host, w))
            rotation[w] = [host]
            pos = rng.randrange(len(rotation[host]) + 1)
            rotation[host].insert(pos, w)
            continue
        piece = random_two_connected_planar(
            rng.randrange(4, piece_size + 1), rng.randrange(10_000)
        )
        attach = rng.randrange(piece.n)
        relabel = {attach: host}
        nxt = n
        for v in range(piece.n):
            if v != attach:
                relabel[v] = nxt
                nxt += 1
        n = nxt
        for u, v in piece.edges():
            a, b = relabel[u], relabel[v]
            edges.add((min(a, b), max(a, b)))
        for v in range(piece.n):
            if v != attach:
                rotation[relabel[v]] = [relabel[u] for u in piece.rotation[v]]
        arc = [relabel[u] for u in piece.rotation[attach]]
        pos = rng.randrange(len(rotation[host]) + 1)
        rotation[host][pos:pos] = arc
    rot_list = [rotation[v] for v in range(n)]
    g = PlaneGraph.from_edges(n, edges, rotation=rot_list)
    faces = trace_faces(g)
    return g.with_outer_walk(faces.walks[0])


def random_gallai_tree(max_n: int, seed: int) -> PlaneGraph:
    """Random connected graph whose blocks are complete graphs (2..4
    vertices) or odd cycles (5 or 7), attached at random vertices."""
    rng = random.Random(seed)
    edges: set[tuple[int, int]] = set()
    n = 1
    while True:
        kind = rng.choice(["K2", "K2", "K3", "K4", "C5", "C7"])
        size = {"K2": 2, "K3": 3, "K4": 4, "C5": 5, "C7": 7}[kind]
        if n + size - 1 > max_n:
            break
        attach = rng.randrange(n)
        verts = [attach] + list(range(n, n + size - 1))
        n += size - 1
        if kind.startswith("K"):
            for i in range(size):
                for j in range(i + 1, size):
                    a, b = verts[i], verts[j]
                    edges.add((min(a, b), max(a, b)))
        else:
            for i in range(size):
                a, b = verts[i], verts[(i + 1) % size]
                edges.add((min(a, b), max(a, b)))
        if rng.random() < 0.25:
            break
    if not edges:
        edges = {(0, 1)}
        n = 2
    return PlaneGraph.from_edges(n, edges)


def random_degree_lists(
    g: PlaneGraph, universe: int, seed: int
) -> ListAssignment:
    """Uniform random lists of size exactly deg(v)."""
    rng = random.Random(seed)
    lists = []
    for v in range(g.n):
        d = g.degree(v)
        if d > universe:
            raise GraphError("universe too small for the degrees")
        lists.append(frozenset(rng.sample(range(universe), d)))
    return ListAssignment(universe=universe, lists=tuple(lists))


def bad_assignment_for_gallai_tree(g: PlaneGraph, seed: int) -> ListAssignment:
    """A degree-sized assignment that defeats the Gallai tree, built
    from per-block colour sets kept disjoint at shared vertices."""
    from .blocks import block_cut_tree

    rng = random.Random(seed)
    bct = block_cut_tree(g)
    used_at: dict[int, set[int]] = {v: set() for v in range(g.n)}
    lists: list[set[int]] = [set() for _ in range(g.n)]
    palette = 0
    for b in bct.blocks:
        k = len(b)
        m_b = sum(1 for u in b for w in g.adjacency[u] if w in b and w > u)
        r = k - 1 if m_b == k * (k - 1) // 2 else 2
        forbidden = set().union(*(used_at[v] for v in b)) if b else set()
        colors: set[int] = set()
        pool = [c for c in range(palette + r + len(forbidden)) if c not in forbidden]
        rng.shuffle(pool)
        colors = set(pool[:r])
        palette = max(palette, max(colors, default=0) + 1)
        for v in b:
            used_at[v] |= colors
            lists[v] |= colors
    universe = max((c for lst in lists for c in lst), default=0) + 1
    return ListAssignment(
        universe=universe, lists=tuple(frozenset(l) for l in lists)
    )


def truncated_lists(
    g: PlaneGraph, k: int, universe: int, seed: int, v_star: Optional[int] = None
) -> ListAssignment:
    """Random lists of size min(k, deg(v)); when ``v_star`` is given and
    has a high-degree neighbour, its list shrinks to a single colour as
    the theorem's demand allows."""
    rng = random.Random(seed)
    lists = []
    for v in range(g.n):
        size = min(k, g.degree(v))
        if size > universe:
            raise GraphError("universe too small")
        lists.append(frozenset(rng.sample(range(universe), size)))
    if v_star is not None:
        high = {v for v in range(g.n) if g.degree(v) >= k}
        if any(u in high for u in g.adjacency[v_star]):
            lists[v_star] = frozenset(rng.sample(sorted(lists[v_star]), 1))
    return ListAssignment(universe=universe, lists=tuple(lists))
