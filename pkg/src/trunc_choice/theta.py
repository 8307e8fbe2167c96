"""Vertex-face incidence structure, bipolar orientations, very nice subgraphs.

The vertex-face incidence graph pairs each vertex with the faces whose
boundary it lies on.  A "very nice" spanning subgraph F of it keeps all
incidences of the designated infinite face, all but exactly two per
finite face, at most two per vertex and exactly one at the designated
vertex; the two vertices a finite face loses must share a cycle of its
boundary.

For a 2-connected embedded graph such a subgraph falls out of a bipolar
orientation: drop each finite face's local source and sink.  For
general graphs the construction recurses over the block tree.  Blocks
contribute their own bipolar-style subgraphs; a non-root block hangs at
its parent cut vertex, whose coverage is owed to the parent side, so
the block contributes its outer rim *minus* that vertex.  (Keeping it,
as a naive union would, over-covers the surrounding face whenever a
block hangs at a pole of that face's rim.)  With that correction the
degree arithmetic is exact: every finite face gets its rim minus the
rim's two poles plus the full rims (minus roots) of whatever hangs
inside it, and every vertex is covered only through its block nearest
the root.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Union

from .blocks import block_cut_tree_from_adjacency, connectivity_at_least
from .plane import (
    FaceSet,
    GraphError,
    InvariantError,
    PlaneGraph,
    SubgraphFaces,
    _canon_edge,
    _UnionFind,
    adjacency_components,
    trace_faces,
    trace_walks,
)

FacesLike = Union[FaceSet, SubgraphFaces]


@dataclass(frozen=True)
class ThetaGraph:
    """Bipartite incidence structure between vertices and faces."""

    num_vertices: int
    num_faces: int
    incidences: frozenset[tuple[int, int]]
    face_vertices: tuple[frozenset[int], ...]
    infinite_face: int

    def face_degree(self, face: int) -> int:
        return len(self.face_vertices[face])

    def vertex_degree(self, v: int) -> int:
        return sum(1 for (u, _) in self.incidences if u == v)


def build_theta(g: PlaneGraph, faces: FacesLike) -> ThetaGraph:
    incid = frozenset(
        (v, i) for i, fv in enumerate(faces.face_vertices) for v in fv
    )
    return ThetaGraph(
        num_vertices=g.n,
        num_faces=faces.num_faces,
        incidences=incid,
        face_vertices=tuple(faces.face_vertices),
        infinite_face=faces.infinite_face,
    )


def st_numbering(
    adj: Mapping[int, Sequence[int]], s: int, t: int
) -> dict[int, int]:
    """An s-t numbering of a 2-connected graph with edge st present.

    Vertices are numbered 0..n-1 with s first and t last such that every
    other vertex has both a lower and a higher neighbour.  DFS neighbour
    order is sorted, so the result is deterministic.
    """
    n = len(adj)
    if n == 2:
        return {s: 0, t: 1}
    if t not in adj[s]:
        raise GraphError("st numbering requires the edge st")
    pre: dict[int, int] = {s: 0}
    low: dict[int, int] = {s: s}
    parent: dict[int, Optional[int]] = {s: None}
    preorder = [s]
    counter = 1
    first = [t] + [w for w in sorted(adj[s]) if w != t]
    stack: list[tuple[int, list[int], int]] = [(s, first, 0)]
    while stack:
        v, nbrs, idx = stack.pop()
        advanced = False
        while idx < len(nbrs):
            w = nbrs[idx]
            idx += 1
            if w not in pre:
                pre[w] = counter
                counter += 1
                low[w] = w
                parent[w] = v
                preorder.append(w)
                stack.append((v, nbrs, idx))
                stack.append((w, sorted(adj[w]), 0))
                advanced = True
                break
            elif w != parent[v] and pre[w] < pre[low[v]]:
                low[v] = w
        if advanced:
            continue
        p = parent[v]
        if p is not None and pre[low[v]] < pre[low[p]]:
            low[p] = low[v]
    if len(pre) != n:
        raise GraphError("graph is not connected")
    if len(preorder) < 2 or preorder[1] != t:
        raise InvariantError("DFS did not take the st edge first")

    sign = {s: -1}
    order = [s, t]
    for v in preorder[2:]:
        p = parent[v]
        if pre[low[v]] >= pre[p]:
            raise GraphError("graph is not 2-connected")
        if sign[low[v]] == -1:
            order.insert(order.index(p), v)
            sign[p] = 1
        else:
            order.insert(order.index(p) + 1, v)
            sign[p] = -1
    num = {v: i for i, v in enumerate(order)}
    if num[s] != 0 or num[t] != n - 1:
        raise InvariantError("st numbering does not place the poles at the ends")
    return num


@dataclass(frozen=True)
class BipolarOrientation:
    """Acyclic orientation with unique source and sink on the outer face."""

    source: int
    sink: int
    arcs: frozenset[tuple[int, int]]

    def direction(self, u: int, v: int) -> tuple[int, int]:
        if (u, v) in self.arcs:
            return (u, v)
        if (v, u) in self.arcs:
            return (v, u)
        raise GraphError(f"edge {u}-{v} not oriented")


def bipolar_orient(
    g: PlaneGraph, s: int, t: int, faces: Optional[FaceSet] = None
) -> BipolarOrientation:
    """Orient a 2-connected embedded graph with source s and sink t.

    s and t must lie on the infinite face; st need not be an edge (a
    virtual one steers the numbering and is discarded).  All four
    defining invariants are verified against the rotation system before
    returning.
    """
    if s == t or not (0 <= s < g.n and 0 <= t < g.n):
        raise GraphError("invalid poles")
    if g.n == 2:
        orient = BipolarOrientation(source=s, sink=t, arcs=frozenset({(s, t)}))
        return orient
    if not connectivity_at_least(g, 2):
        raise GraphError("bipolar orientation requires a 2-connected graph")
    if faces is None:
        faces = trace_faces(g)
    outer = faces.face_vertices[faces.infinite_face]
    if s not in outer or t not in outer:
        raise GraphError("both poles must lie on the infinite face")
    adj = {v: list(g.adjacency[v]) for v in range(g.n)}
    if t not in adj[s]:
        adj[s].append(t)
        adj[t].append(s)
    num = st_numbering(adj, s, t)
    arcs = frozenset(
        (u, v) if num[u] < num[v] else (v, u) for u, v in g.edges()
    )
    orient = BipolarOrientation(source=s, sink=t, arcs=arcs)
    verify_bipolar(g, faces, orient)
    return orient


def verify_bipolar(g: PlaneGraph, faces: FaceSet, orient: BipolarOrientation) -> None:
    """Assert the four bipolar invariants; raises InvariantError."""
    indeg = [0] * g.n
    outdeg = [0] * g.n
    for u, v in orient.arcs:
        outdeg[u] += 1
        indeg[v] += 1
    sources = [v for v in range(g.n) if indeg[v] == 0]
    sinks = [v for v in range(g.n) if outdeg[v] == 0]
    if sources != [orient.source] or sinks != [orient.sink]:
        raise InvariantError(
            f"sources {sources} / sinks {sinks} not exactly the poles"
        )
    # acyclicity: Kahn peel
    remaining = dict(enumerate(indeg))
    out_adj: dict[int, list[int]] = {v: [] for v in range(g.n)}
    for u, v in orient.arcs:
        out_adj[u].append(v)
    queue = [v for v, d in remaining.items() if d == 0]
    seen = 0
    while queue:
        v = queue.pop()
        seen += 1
        for w in out_adj[v]:
            remaining[w] -= 1
            if remaining[w] == 0:
                queue.append(w)
    if seen != g.n:
        raise InvariantError("orientation contains a directed cycle")
    # each face boundary = two directed paths
    for walk in faces.walks:
        k = len(walk)
        if k < 3:
            continue
        flips = 0
        for i in range(k):
            a, b = walk[i], walk[(i + 1) % k]
            c, d = walk[(i + 1) % k], walk[(i + 2) % k]
            fwd1 = (a, b) in orient.arcs
            fwd2 = (c, d) in orient.arcs
            if fwd1 != fwd2:
                flips += 1
        if flips != 2:
            raise InvariantError(f"face {walk} is not two directed paths")
    # in-edges consecutive in each rotation
    for v in range(g.n):
        rot = g.rotation[v]
        d = len(rot)
        if d <= 1:
            continue
        marks = [(u, v) in orient.arcs for u in rot]
        flips = sum(1 for i in range(d) if marks[i] != marks[(i + 1) % d])
        if flips not in (0, 2):
            raise InvariantError(f"in-edges around {v} are not consecutive")


@dataclass(frozen=True)
class VeryNiceSubgraph:
    """Selected vertex-face incidences with the degree pattern above."""

    incidences: frozenset[tuple[int, int]]
    theta_star: int
    v_star: int

    def faces_of(self, v: int) -> list[int]:
        return sorted(f for (u, f) in self.incidences if u == v)

    def vertices_of(self, face: int) -> frozenset[int]:
        return frozenset(u for (u, f) in self.incidences if f == face)


def _pair_on_common_cycle(
    v1: int, v2: int, boundary_edges: set[tuple[int, int]]
) -> bool:
    adj: dict[int, list[int]] = {}
    for a, b in boundary_edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    if v1 not in adj or v2 not in adj:
        return False
    bct = block_cut_tree_from_adjacency(adj)
    # two vertices lie on a common cycle iff they share a 2-connected block
    return any(v1 in b and v2 in b and len(b) >= 3 for b in bct.blocks)


def validate_very_nice(faces: FacesLike, vn: VeryNiceSubgraph) -> None:
    """Assert all four defining conditions; raises InvariantError."""
    nf = faces.num_faces
    face_deg = [0] * nf
    vert_deg: dict[int, int] = {}
    for v, f in vn.incidences:
        if v not in faces.face_vertices[f]:
            raise InvariantError(f"incidence ({v},{f}) is not in the structure")
        face_deg[f] += 1
        vert_deg[v] = vert_deg.get(v, 0) + 1
    if vert_deg.get(vn.v_star, 0) != 1:
        raise InvariantError(
            f"designated vertex has degree {vert_deg.get(vn.v_star, 0)} != 1"
        )
    for v, d in vert_deg.items():
        if v != vn.v_star and d > 2:
            raise InvariantError(f"vertex {v} has degree {d} > 2")
    for f in range(nf):
        want = len(faces.face_vertices[f])
        if f == vn.theta_star:
            if face_deg[f] != want:
                raise InvariantError(
                    f"infinite face keeps {face_deg[f]} of {want} incidences"
                )
        else:
            if face_deg[f] != want - 2:
                raise InvariantError(
                    f"finite face {f} keeps {face_deg[f]}, expected {want - 2}"
                )
            dropped = sorted(faces.face_vertices[f] - vn.vertices_of(f))
            edges = faces.boundary_edges(f)
            for i in range(len(dropped)):
                for j in range(i + 1, len(dropped)):
                    if not _pair_on_common_cycle(dropped[i], dropped[j], edges):
                        raise InvariantError(
                            f"dropped pair {dropped[i]},{dropped[j]} of face {f} "
                            "shares no boundary cycle"
                        )


def very_nice_from_bipolar(
    g: PlaneGraph, faces: FaceSet, orient: BipolarOrientation
) -> VeryNiceSubgraph:
    """Very nice subgraph of a 2-connected embedded graph: keep the whole
    infinite face, and on each finite face drop its local source and
    sink under the orientation.  The designated vertex is the sink."""
    incid: set[tuple[int, int]] = set()
    for f in range(faces.num_faces):
        verts = faces.face_vertices[f]
        if f == faces.infinite_face:
            incid |= {(v, f) for v in verts}
            continue
        walk = faces.walks[f]
        k = len(walk)
        local_src = local_snk = None
        for i, v in enumerate(walk):
            p, q = walk[(i - 1) % k], walk[(i + 1) % k]
            out_p = (v, p) in orient.arcs
            out_q = (v, q) in orient.arcs
            if out_p and out_q:
                local_src = v
            elif not out_p and not out_q:
                local_snk = v
        if local_src is None or local_snk is None:
            raise InvariantError(f"face {walk} lacks a local pole")
        incid |= {(v, f) for v in verts if v not in (local_src, local_snk)}
    vn = VeryNiceSubgraph(
        incidences=frozenset(incid),
        theta_star=faces.infinite_face,
        v_star=orient.sink,
    )
    validate_very_nice(faces, vn)
    return vn


def _faces_world(
    g: PlaneGraph, faces: FacesLike
) -> tuple[FaceSet, frozenset[int], frozenset[tuple[int, int]], Sequence[int]]:
    """Unpack a FaceSet/SubgraphFaces into (base faces of the host,
    active vertices, active edges, base-face -> face id map)."""
    if isinstance(faces, SubgraphFaces):
        return faces.base, faces.vertices, faces.edge_set, faces.host_face_map
    verts = frozenset(range(g.n))
    edges = frozenset(_canon_edge(u, v) for u, v in g.edges())
    return faces, verts, edges, tuple(range(faces.num_faces))


def very_nice(
    g: PlaneGraph,
    faces: FacesLike,
    theta_star: Optional[int] = None,
    v_star: Optional[int] = None,
) -> VeryNiceSubgraph:
    """Very nice subgraph of a general (possibly disconnected) plane
    graph, built block by block over each component's block tree.

    ``faces`` may be the graph's own FaceSet, or a SubgraphFaces when
    the structure lives inside a host embedding (then ``g`` is the
    host).  Face ids in the result refer to ``faces``.
    """
    base, active_v, active_e, kface_of = _faces_world(g, faces)
    if theta_star is None:
        theta_star = faces.infinite_face
    if v_star is None:
        cands = faces.face_vertices[theta_star]
        if not cands:
            raise GraphError("infinite face has no boundary vertex")
        v_star = min(cands)
    if v_star not in faces.face_vertices[theta_star]:
        raise GraphError("designated vertex is not on the infinite face")

    adj_active = {
        v: tuple(u for u in g.adjacency[v] if _canon_edge(u, v) in active_e)
        for v in sorted(active_v)
    }
    host_edges = [(u, v) for u, v in g.edges()]
    incid: set[tuple[int, int]] = set()

    def kface_left(u: int, v: int) -> int:
        return kface_of[base.face_of_dedge[(u, v)]]

    def block_classes(block_edges: set[tuple[int, int]]) -> _UnionFind:
        uf = _UnionFind(base.num_faces)
        for u, v in host_edges:
            if _canon_edge(u, v) not in block_edges:
                uf.union(base.face_of_dedge[(u, v)], base.face_of_dedge[(v, u)])
        return uf

    for comp in adjacency_components(adj_active):
        if len(comp) == 1:
            v = next(iter(comp))
            kfs = {kface_of[f] for f in base.vertex_faces[v]}
            if len(kfs) != 1:
                raise InvariantError(f"isolated vertex {v} spans several faces")
            kf = kfs.pop()
            if v == v_star and kf != theta_star:
                raise GraphError("designated vertex is enclosed away from the infinite face")
            incid.add((v, kf))
            continue

        comp_adj = {v: adj_active[v] for v in comp}
        bct = block_cut_tree_from_adjacency(comp_adj)

        # Standalone analysis of each block: its walks, which is the
        # outer rim, and the face of the ambient structure adjacent to
        # each walk on the walk's far side.
        analyses = []
        for b in bct.blocks:
            bedges = {
                _canon_edge(u, v)
                for u in b
                for v in comp_adj[u]
                if v in b and u < v
            }
            rot_b = {
                v: tuple(u for u in g.rotation[v] if _canon_edge(u, v) in bedges)
                for v in b
            }
            walks = trace_walks(rot_b)
            uf = block_classes(bedges)
            outer_root = uf.find(base.infinite_face)
            outer_walk = None
            finite: list[tuple[tuple[int, ...], int]] = []
            theta_b = None
            for walk in walks:
                kfs = {
                    kface_left(walk[i], walk[(i + 1) % len(walk)])
                    for i in range(len(walk))
                }
                if len(kfs) != 1:
                    raise InvariantError(
                        f"walk {walk} of a block borders several faces"
                    )
                kf = kfs.pop()
                cls = uf.find(base.face_of_dedge[(walk[0], walk[1 % len(walk)])])
                if cls == outer_root:
                    if outer_walk is not None:
                        raise InvariantError("block has two outer walks")
                    outer_walk, theta_b = walk, kf
                else:
                    finite.append((walk, kf))
            if outer_walk is None:
                raise InvariantError("block has no outer walk")
            analyses.append((b, outer_walk, theta_b, finite))

        # Designated vertex of the component and the root block.
        if v_star in comp:
            v_comp = v_star
        else:
            uf_comp = block_classes(
                {
                    _canon_edge(u, v)
                    for u in comp
                    for v in comp_adj[u]
                    if u < v
                }
            )
            outer_root = uf_comp.find(base.infinite_face)
            boundary = {
                v
                for v in comp
                if any(uf_comp.find(f) == outer_root for f in base.vertex_faces[v])
            }
            v_comp = min(boundary)
        root = None
        for bi, (b, outer_walk, _, _) in enumerate(analyses):
            if v_comp in b and v_comp in outer_walk:
                root = bi
                break
        if root is None:
            raise InvariantError("no block has the designated vertex on its rim")
        if v_star in comp and analyses[root][2] != theta_star:
            raise GraphError(
                "designated vertex's block does not border the infinite face"
            )

        # Orient the block tree away from the root.
        blocks_at: dict[int, list[int]] = {}
        for bi, b in enumerate(bct.blocks):
            for v in b:
                blocks_at.setdefault(v, []).append(bi)
        parent_cut: dict[int, Optional[int]] = {root: None}
        order = [root]
        qi = 0
        while qi < len(order):
            bi = order[qi]
            qi += 1
            for v in sorted(bct.blocks[bi]):
                if v in bct.cut_vertices:
                    for bj in blocks_at[v]:
                        if bj not in parent_cut:
                            parent_cut[bj] = v
                            order.append(bj)

        for bi in order:
            b, outer_walk, theta_b, finite = analyses[bi]
            p = parent_cut[bi]
            t_pole = v_comp if p is None else p
            rim = set(outer_walk)
            if t_pole not in rim:
                raise InvariantError("block pole is not on its outer rim")
            if len(b) == 2:
                for v in b:
                    if p is None or v != p:
                        incid.add((v, theta_b))
                continue
            i = outer_walk.index(t_pole)
            k = len(outer_walk)
            s_pole = min(outer_walk[(i - 1) % k], outer_walk[(i + 1) % k])
            badj = {
                v: tuple(u for u in comp_adj[v] if u in b) for v in b
            }
            num = st_numbering(badj, s_pole, t_pole)
            for v in rim:
                if p is None or v != p:
                    incid.add((v, theta_b))
            for walk, kf in finite:
                lo = min(walk, key=lambda v: num[v])
                hi = max(walk, key=lambda v: num[v])
                for v in set(walk):
                    if v not in (lo, hi):
                        incid.add((v, kf))

    vn = VeryNiceSubgraph(
        incidences=frozenset(incid), theta_star=theta_star, v_star=v_star
    )
    validate_very_nice(faces, vn)
    return vn
