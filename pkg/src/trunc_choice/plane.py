"""Plane graph substrate: rotation systems, face tracing, subgraph regions.

A :class:`PlaneGraph` is a simple undirected graph on dense vertex ids
0..n-1, optionally carrying a rotation system (cyclic, counterclockwise
neighbour order per vertex).  Faces are traced combinatorially; the
tracing must satisfy Euler's formula n - m + f = 2, which certifies the
rotation system describes a genus-0 embedding.

Faces of subgraphs (needed for regions enclosed by cycles, for the
face structure induced on a vertex subset, and for standalone blocks)
are derived from the host graph's faces by merging across absent edges:
deleting an edge merges the two faces on its sides, and deleting a
vertex deletes all its edges, so the faces around it coalesce.  This
gives the correct nesting of components "for free" from the host
embedding.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence


class GraphError(ValueError):
    """Malformed graph input or violated operation precondition."""


class InvariantError(AssertionError):
    """A structural invariant that must hold by construction failed."""


def _canon_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class PlaneGraph:
    """Simple undirected graph with an optional combinatorial embedding.

    adjacency[v] is sorted; rotation[v], when present, is a cyclic
    permutation of adjacency[v] giving the counterclockwise neighbour
    order.  ``outer_walk`` optionally names the boundary walk of the
    designated infinite face (as read from a graph file).
    Instances are immutable and safe to share between threads.
    """

    n: int
    adjacency: tuple[tuple[int, ...], ...]
    rotation: Optional[tuple[tuple[int, ...], ...]] = None
    labels: Optional[tuple[str, ...]] = None
    outer_walk: Optional[tuple[int, ...]] = None

    def __post_init__(self) -> None:
        if self.n < 0 or len(self.adjacency) != self.n:
            raise GraphError("adjacency length must equal vertex count")
        seen = set()
        for v, nbrs in enumerate(self.adjacency):
            if list(nbrs) != sorted(nbrs):
                raise GraphError(f"adjacency of {v} is not sorted")
            for u in nbrs:
                if u == v:
                    raise GraphError(f"self-loop at {v}")
                if not 0 <= u < self.n:
                    raise GraphError(f"neighbour {u} of {v} out of range")
                if (v, u) in seen:
                    raise GraphError(f"parallel edge {v}-{u}")
                seen.add((v, u))
        for v, u in seen:
            if (u, v) not in seen:
                raise GraphError(f"edge {v}-{u} is not symmetric")
        if self.rotation is not None:
            if len(self.rotation) != self.n:
                raise GraphError("rotation length must equal vertex count")
            for v in range(self.n):
                if sorted(self.rotation[v]) != list(self.adjacency[v]):
                    raise GraphError(
                        f"rotation of {v} is not a permutation of its neighbours"
                    )

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        rotation: Optional[Sequence[Sequence[int]]] = None,
        labels: Optional[Sequence[str]] = None,
        outer_walk: Optional[Sequence[int]] = None,
    ) -> "PlaneGraph":
        adj: list[list[int]] = [[] for _ in range(n)]
        eset = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge {u}-{v} out of range")
            if u == v:
                raise GraphError(f"self-loop at {u}")
            e = _canon_edge(u, v)
            if e in eset:
                raise GraphError(f"parallel edge {u}-{v}")
            eset.add(e)
            adj[u].append(v)
            adj[v].append(u)
        return cls(
            n=n,
            adjacency=tuple(tuple(sorted(a)) for a in adj),
            rotation=None if rotation is None else tuple(tuple(r) for r in rotation),
            labels=None if labels is None else tuple(labels),
            outer_walk=None if outer_walk is None else tuple(outer_walk),
        )

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    @property
    def has_rotation(self) -> bool:
        return self.rotation is not None

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def edges(self) -> Iterator[tuple[int, int]]:
        for v in range(self.n):
            for u in self.adjacency[v]:
                if v < u:
                    yield (v, u)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def with_rotation(self, rotation: Sequence[Sequence[int]]) -> "PlaneGraph":
        return PlaneGraph(
            n=self.n,
            adjacency=self.adjacency,
            rotation=tuple(tuple(r) for r in rotation),
            labels=self.labels,
            outer_walk=self.outer_walk,
        )

    def with_outer_walk(self, walk: Sequence[int]) -> "PlaneGraph":
        return PlaneGraph(
            n=self.n,
            adjacency=self.adjacency,
            rotation=self.rotation,
            labels=self.labels,
            outer_walk=tuple(walk),
        )

    def is_connected(self) -> bool:
        if self.n == 0:
            return False
        return len(_component_of(self.adjacency, 0)) == self.n

    def components(self) -> list[frozenset[int]]:
        seen: set[int] = set()
        comps = []
        for v in range(self.n):
            if v not in seen:
                comp = _component_of(self.adjacency, v)
                seen |= comp
                comps.append(frozenset(comp))
        return comps


def _component_of(adjacency: Sequence[Sequence[int]], start: int) -> set[int]:
    comp = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for u in adjacency[v]:
            if u not in comp:
                comp.add(u)
                stack.append(u)
    return comp


def trace_walks(rotation: Mapping[int, Sequence[int]]) -> list[tuple[int, ...]]:
    """Trace all face walks of a rotation system given as a dict.

    Convention: from directed edge (u, v) the walk continues with
    (v, w) where w precedes u in the rotation at v.  With
    counterclockwise rotations this keeps the traced face on the left.
    Every directed edge lands in exactly one walk.
    """
    index = {
        (v, u): i for v, nbrs in rotation.items() for i, u in enumerate(nbrs)
    }
    remaining = set(index)
    walks: list[tuple[int, ...]] = []
    for start in sorted(remaining):
        if start not in remaining:
            continue
        walk = []
        u, v = start
        while (u, v) in remaining:
            remaining.discard((u, v))
            walk.append(u)
            nbrs = rotation[v]
            w = nbrs[(index[(v, u)] - 1) % len(nbrs)]
            u, v = v, w
        if (u, v) != start:
            raise GraphError("inconsistent rotation system (walk did not close)")
        walks.append(tuple(walk))
    return walks


@dataclass(frozen=True)
class FaceSet:
    """Faces of a connected embedded graph, one boundary walk per face."""

    walks: tuple[tuple[int, ...], ...]
    infinite_face: int
    face_vertices: tuple[frozenset[int], ...]
    face_of_dedge: Mapping[tuple[int, int], int]
    vertex_faces: tuple[tuple[int, ...], ...]

    @property
    def num_faces(self) -> int:
        return len(self.walks)

    def face_walks(self, face: int) -> tuple[tuple[int, ...], ...]:
        return (self.walks[face],)

    def boundary_edges(self, face: int) -> set[tuple[int, int]]:
        walk = self.walks[face]
        k = len(walk)
        return {_canon_edge(walk[i], walk[(i + 1) % k]) for i in range(k) if k > 1}


def _walk_matches(walk: tuple[int, ...], hint: tuple[int, ...]) -> bool:
    # Match up to cyclic rotation and reversal.
    if len(walk) != len(hint):
        return False
    doubled = walk + walk
    k = len(walk)
    for cand in (hint, tuple(reversed(hint))):
        for i in range(k):
            if doubled[i : i + k] == cand:
                return True
    return False


def trace_faces(g: PlaneGraph) -> FaceSet:
    """Trace all faces of a connected embedded graph.

    The infinite face is the one matching the graph's ``outer_walk``
    designation when present, else the first traced walk.  Euler's
    formula is asserted, certifying a genus-0 embedding.
    """
    if not g.has_rotation:
        raise GraphError("face tracing requires a rotation system")
    if not g.is_connected():
        raise GraphError("face tracing requires a connected graph")
    if g.n == 1:
        walks = [(0,)]
        return FaceSet(
            walks=tuple(walks),
            infinite_face=0,
            face_vertices=(frozenset({0}),),
            face_of_dedge={},
            vertex_faces=((0,),),
        )
    rotation = {v: g.rotation[v] for v in range(g.n)}
    walks = trace_walks(rotation)
    f = len(walks)
    if g.n - g.m + f != 2:
        raise GraphError(
            f"rotation system is not planar: n-m+f = {g.n}-{g.m}+{f} != 2"
        )
    face_of_dedge: dict[tuple[int, int], int] = {}
    face_vertices = []
    vfaces: list[set[int]] = [set() for _ in range(g.n)]
    for i, walk in enumerate(walks):
        k = len(walk)
        for j, v in enumerate(walk):
            face_of_dedge[(v, walk[(j + 1) % k])] = i
            vfaces[v].add(i)
        face_vertices.append(frozenset(walk))
    infinite = 0
    if g.outer_walk is not None:
        matches = [i for i, w in enumerate(walks) if _walk_matches(w, g.outer_walk)]
        if not matches:
            raise GraphError("designated outer walk does not match any traced face")
        infinite = matches[0]
    return FaceSet(
        walks=tuple(walks),
        infinite_face=infinite,
        face_vertices=tuple(face_vertices),
        face_of_dedge=face_of_dedge,
        vertex_faces=tuple(tuple(sorted(s)) for s in vfaces),
    )


class _UnionFind:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


@dataclass(frozen=True)
class SubgraphFaces:
    """Face structure of a subgraph of an embedded host graph.

    Each face of the subgraph is a union (merge class) of host faces.
    ``face_walks`` are the subgraph's own boundary walks grouped by
    face; a face may have several walks (disconnected boundary) and
    isolated subgraph vertices are recorded on the face containing
    them.  ``host_face_map[f]`` gives the subgraph face containing host
    face f, which is how components of the removed part are located.
    """

    base: FaceSet
    vertices: frozenset[int]
    edge_set: frozenset[tuple[int, int]]
    face_host_faces: tuple[frozenset[int], ...]
    face_vertices: tuple[frozenset[int], ...]
    walks_by_face: tuple[tuple[tuple[int, ...], ...], ...]
    isolated_by_face: tuple[frozenset[int], ...]
    infinite_face: int
    host_face_map: tuple[int, ...]

    @property
    def num_faces(self) -> int:
        return len(self.face_host_faces)

    def face_walks(self, face: int) -> tuple[tuple[int, ...], ...]:
        return self.walks_by_face[face]

    def boundary_edges(self, face: int) -> set[tuple[int, int]]:
        out: set[tuple[int, int]] = set()
        for walk in self.walks_by_face[face]:
            k = len(walk)
            if k > 1:
                out |= {_canon_edge(walk[i], walk[(i + 1) % k]) for i in range(k)}
        return out

    def face_of_host(self, host_face: int) -> int:
        return self.host_face_map[host_face]


def subgraph_faces(
    g: PlaneGraph,
    faces: FaceSet,
    keep_vertices: Optional[Iterable[int]] = None,
    keep_edges: Optional[Iterable[tuple[int, int]]] = None,
) -> SubgraphFaces:
    """Face structure of the subgraph induced by ``keep_vertices`` (or of
    the subgraph with exactly ``keep_edges``) under the host embedding."""
    if not g.has_rotation:
        raise GraphError("subgraph faces require an embedded host graph")
    if keep_edges is not None:
        edge_set = {_canon_edge(u, v) for u, v in keep_edges}
        verts = set()
        for u, v in edge_set:
            verts.add(u)
            verts.add(v)
        if keep_vertices is not None:
            verts |= set(keep_vertices)
    else:
        if keep_vertices is None:
            raise GraphError("need keep_vertices or keep_edges")
        verts = set(keep_vertices)
        edge_set = {
            _canon_edge(u, v)
            for u in verts
            for v in g.adjacency[u]
            if v in verts and u < v
        }
    for u, v in edge_set:
        if not g.has_edge(u, v):
            raise GraphError(f"edge {u}-{v} not in host graph")

    uf = _UnionFind(faces.num_faces)
    for u in range(g.n):
        for v in g.adjacency[u]:
            if u < v and _canon_edge(u, v) not in edge_set:
                uf.union(faces.face_of_dedge[(u, v)], faces.face_of_dedge[(v, u)])

    roots = sorted({uf.find(i) for i in range(faces.num_faces)})
    face_id = {r: i for i, r in enumerate(roots)}
    host_face_map = tuple(face_id[uf.find(i)] for i in range(faces.num_faces))
    nf = len(roots)

    host_faces: list[set[int]] = [set() for _ in range(nf)]
    for i in range(faces.num_faces):
        host_faces[host_face_map[i]].add(i)

    # Trace the subgraph's own walks and group them by merge class.
    sub_rot = {
        v: tuple(u for u in g.rotation[v] if _canon_edge(u, v) in edge_set)
        for v in verts
    }
    sub_rot = {v: r for v, r in sub_rot.items() if r}
    walks = trace_walks(sub_rot) if sub_rot else []
    walks_by_face: list[list[tuple[int, ...]]] = [[] for _ in range(nf)]
    fverts: list[set[int]] = [set() for _ in range(nf)]
    for walk in walks:
        u, v = walk[0], walk[1 % len(walk)]
        cls = host_face_map[faces.face_of_dedge[(u, v)]]
        walks_by_face[cls].append(walk)
        fverts[cls].update(walk)

    isolated: list[set[int]] = [set() for _ in range(nf)]
    for v in sorted(verts):
        if v not in sub_rot:
            if not faces.vertex_faces[v]:
                raise GraphError(f"vertex {v} has no incident host face")
            classes = {host_face_map[f] for f in faces.vertex_faces[v]}
            if len(classes) != 1:
                raise InvariantError(
                    f"isolated vertex {v} is adjacent to several merge classes"
                )
            cls = classes.pop()
            isolated[cls].add(v)
            fverts[cls].add(v)

    return SubgraphFaces(
        base=faces,
        vertices=frozenset(verts),
        edge_set=frozenset(edge_set),
        face_host_faces=tuple(frozenset(s) for s in host_faces),
        face_vertices=tuple(frozenset(s) for s in fverts),
        walks_by_face=tuple(tuple(ws) for ws in walks_by_face),
        isolated_by_face=tuple(frozenset(s) for s in isolated),
        infinite_face=host_face_map[faces.infinite_face],
        host_face_map=host_face_map,
    )


@dataclass(frozen=True)
class CycleRegion:
    """Partition of the vertices relative to a cycle of the embedding."""

    cycle: tuple[int, ...]
    interior: frozenset[int]
    exterior: frozenset[int]


def cycle_region(g: PlaneGraph, faces: FaceSet, cycle: Sequence[int]) -> CycleRegion:
    """Classify every non-cycle vertex as interior or exterior to ``cycle``.

    Interior/exterior are taken relative to the designated infinite
    face: the side containing it is the exterior.
    """
    cyc = tuple(cycle)
    if len(cyc) < 3 or len(set(cyc)) != len(cyc):
        raise GraphError("input is not a cycle (needs >= 3 distinct vertices)")
    cedges = set()
    for i, u in enumerate(cyc):
        v = cyc[(i + 1) % len(cyc)]
        if not g.has_edge(u, v):
            raise GraphError(f"input is not a cycle of the graph: missing {u}-{v}")
        cedges.add(_canon_edge(u, v))

    uf = _UnionFind(faces.num_faces)
    for u in range(g.n):
        for v in g.adjacency[u]:
            if u < v and _canon_edge(u, v) not in cedges:
                uf.union(faces.face_of_dedge[(u, v)], faces.face_of_dedge[(v, u)])
    roots = {uf.find(i) for i in range(faces.num_faces)}
    if len(roots) != 2:
        raise InvariantError(
            f"cycle splits the sphere into {len(roots)} regions, expected 2"
        )
    ext_root = uf.find(faces.infinite_face)
    onto = set(cyc)
    interior, exterior = set(), set()
    for v in range(g.n):
        if v in onto:
            continue
        root = uf.find(faces.vertex_faces[v][0])
        (exterior if root == ext_root else interior).add(v)
    if len(onto) + len(interior) + len(exterior) != g.n:
        raise InvariantError("cycle region classification is not a partition")
    return CycleRegion(cyc, frozenset(interior), frozenset(exterior))


def rotation_restricted(
    g: PlaneGraph, vertices: Iterable[int]
) -> dict[int, tuple[int, ...]]:
    """Rotation of the induced subgraph, preserving cyclic order."""
    if not g.has_rotation:
        raise GraphError("no rotation system")
    vs = set(vertices)
    return {v: tuple(u for u in g.rotation[v] if u in vs) for v in vs}


def induced_adjacency(
    g: PlaneGraph, vertices: Iterable[int]
) -> dict[int, tuple[int, ...]]:
    vs = set(vertices)
    return {v: tuple(u for u in g.adjacency[v] if u in vs) for v in vs}


def adjacency_components(adj: Mapping[int, Sequence[int]]) -> list[frozenset[int]]:
    seen: set[int] = set()
    comps = []
    for v in sorted(adj):
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        while stack:
            x = stack.pop()
            for u in adj[x]:
                if u not in comp:
                    comp.add(u)
                    stack.append(u)
        seen |= comp
        comps.append(frozenset(comp))
    return comps
