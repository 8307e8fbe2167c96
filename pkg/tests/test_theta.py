import random

import pytest

from oracles import pair_on_cycle_by_enumeration

from trunc_choice.generators import (
    random_block_composition,
    random_two_connected_planar,
)
from trunc_choice.plane import (
    GraphError,
    InvariantError,
    PlaneGraph,
    subgraph_faces,
    trace_faces,
)
from trunc_choice.planarity import is_planar
from trunc_choice.theta import (
    BipolarOrientation,
    bipolar_orient,
    build_theta,
    st_numbering,
    validate_very_nice,
    very_nice,
    very_nice_from_bipolar,
    verify_bipolar,
)


def embedded(n, edges):
    g = PlaneGraph.from_edges(n, edges)
    ok, rot = is_planar(g)
    assert ok
    return g.with_rotation(rot)


def triangle():
    return PlaneGraph.from_edges(
        3, [(0, 1), (1, 2), (0, 2)], rotation=[[1, 2], [2, 0], [0, 1]]
    )


def test_theta_counts():
    g = triangle()
    th = build_theta(g, trace_faces(g))
    assert th.num_faces == 2 and len(th.incidences) == 6
    k4 = embedded(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    th4 = build_theta(k4, trace_faces(k4))
    assert all(th4.face_degree(f) == 3 for f in range(4))
    p3 = PlaneGraph.from_edges(3, [(0, 1), (1, 2)], rotation=[[1], [0, 2], [1]])
    thp = build_theta(p3, trace_faces(p3))
    assert thp.num_faces == 1 and thp.face_degree(0) == 3


def test_st_numbering_properties():
    rng = random.Random(2)
    for seed in range(25):
        g = random_two_connected_planar(rng.randrange(5, 20), seed)
        fs = trace_faces(g)
        outer = sorted(fs.face_vertices[fs.infinite_face])
        s, t = outer[0], outer[1]
        adj = {v: list(g.adjacency[v]) for v in range(g.n)}
        if t not in adj[s]:
            adj[s].append(t)
            adj[t].append(s)
        num = st_numbering(adj, s, t)
        assert num[s] == 0 and num[t] == g.n - 1
        for v in range(g.n):
            if v in (s, t):
                continue
            nbr_nums = [num[u] for u in g.adjacency[v]]
            assert min(nbr_nums) < num[v] < max(nbr_nums)


def test_bipolar_k2():
    g = PlaneGraph.from_edges(2, [(0, 1)], rotation=[[1], [0]])
    orient = bipolar_orient(g, 0, 1)
    assert orient.arcs == frozenset({(0, 1)})


def test_bipolar_c4_opposite_poles():
    g = PlaneGraph.from_edges(
        4, [(0, 1), (1, 2), (2, 3), (0, 3)], rotation=[[1, 3], [2, 0], [3, 1], [0, 2]]
    )
    orient = bipolar_orient(g, 0, 2)
    assert orient.arcs == frozenset({(0, 1), (1, 2), (0, 3), (3, 2)})


def test_bipolar_k4_faces_split():
    g = embedded(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    fs = trace_faces(g)
    outer = sorted(fs.face_vertices[fs.infinite_face])
    orient = bipolar_orient(g, outer[0], outer[1], fs)
    verify_bipolar(g, fs, orient)  # two-path + consecutive in-edges included


def test_bipolar_rejects_bad_poles():
    g = embedded(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    fs = trace_faces(g)
    inner = next(v for v in range(4) if v not in fs.face_vertices[fs.infinite_face])
    outer = sorted(fs.face_vertices[fs.infinite_face])
    with pytest.raises(GraphError):
        bipolar_orient(g, outer[0], inner, fs)
    path = PlaneGraph.from_edges(3, [(0, 1), (1, 2)], rotation=[[1], [0, 2], [1]])
    with pytest.raises(GraphError):
        bipolar_orient(path, 0, 2)


def test_bipolar_random_suite():
    for seed in range(30):
        g = random_two_connected_planar(6 + (seed * 3) % 30, seed)
        fs = trace_faces(g)
        outer = sorted(fs.face_vertices[fs.infinite_face])
        orient = bipolar_orient(g, outer[0], outer[-1], fs)
        verify_bipolar(g, fs, orient)


def test_verify_bipolar_catches_bad_orientation():
    g = triangle()
    fs = trace_faces(g)
    bad = BipolarOrientation(source=0, sink=2, arcs=frozenset({(0, 1), (1, 2), (2, 0)}))
    with pytest.raises(InvariantError):
        verify_bipolar(g, fs, bad)


def test_very_nice_triangle_counts():
    g = triangle()
    fs = trace_faces(g)
    orient = bipolar_orient(g, 0, 2, fs)
    vn = very_nice_from_bipolar(g, fs, orient)
    infinite, finite = fs.infinite_face, 1 - fs.infinite_face
    assert len(vn.vertices_of(infinite)) == 3
    assert len(vn.vertices_of(finite)) == 1
    assert vn.faces_of(2) == [infinite]  # the sink keeps only the outer incidence


def test_very_nice_c4_inner_face():
    g = PlaneGraph.from_edges(
        4, [(0, 1), (1, 2), (2, 3), (0, 3)], rotation=[[1, 3], [2, 0], [3, 1], [0, 2]]
    )
    fs = trace_faces(g)
    orient = bipolar_orient(g, 0, 2, fs)
    vn = very_nice_from_bipolar(g, fs, orient)
    inner = 1 - fs.infinite_face
    assert len(vn.vertices_of(inner)) == 2


def test_very_nice_counting_identity_two_connected():
    for seed in range(20):
        g = random_two_connected_planar(5 + seed, seed)
        fs = trace_faces(g)
        outer = sorted(fs.face_vertices[fs.infinite_face])
        orient = bipolar_orient(g, outer[0], outer[-1], fs)
        vn = very_nice_from_bipolar(g, fs, orient)
        expect = len(fs.face_vertices[fs.infinite_face]) + sum(
            len(fs.face_vertices[f]) - 2
            for f in range(fs.num_faces)
            if f != fs.infinite_face
        )
        assert len(vn.incidences) == expect
        assert len(vn.incidences) == sum(
            1 for v in range(g.n) for f in vn.faces_of(v)
        )


def test_general_matches_bipolar_on_single_block():
    for seed in range(10):
        g = random_two_connected_planar(6 + seed, seed)
        fs = trace_faces(g)
        outer = sorted(fs.face_vertices[fs.infinite_face])
        t = outer[0]
        vn_gen = very_nice(g, fs, v_star=t)
        validate_very_nice(fs, vn_gen)
        assert vn_gen.v_star == t


def test_two_triangles_shared_cut_vertex():
    g = embedded(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    fs = trace_faces(g)
    v_star = min(fs.face_vertices[fs.infinite_face])
    vn = very_nice(g, fs, v_star=v_star)
    validate_very_nice(fs, vn)
    # the cut vertex contributes at most two incidences overall
    assert len(vn.faces_of(2)) <= 2


def test_disjoint_triangles_union():
    host = embedded(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
    fs = trace_faces(host)
    sub = subgraph_faces(
        host, fs, keep_edges=[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]
    )
    vn = very_nice(host, sub)
    validate_very_nice(sub, vn)


def test_nested_sibling_blocks():
    # pendant edge plus two triangles at the same cut vertex, one nested
    g = PlaneGraph.from_edges(
        6,
        [(0, 1), (1, 2), (2, 3), (1, 3), (1, 4), (4, 5), (1, 5)],
        rotation=[[1], [0, 2, 4, 5, 3], [3, 1], [1, 2], [5, 1], [1, 4]],
    )
    fs = trace_faces(g)
    vn = very_nice(g, fs, v_star=0)
    validate_very_nice(fs, vn)
    assert vn.faces_of(0) != []


def test_pendant_at_face_pole():
    # triangle with a pendant edge drawn inside its finite face
    g = PlaneGraph.from_edges(
        4,
        [(0, 1), (1, 2), (0, 2), (1, 3)],
        rotation=[[1, 2], [2, 3, 0], [0, 1], [1]],
    )
    fs = trace_faces(g)
    for v_star in sorted(fs.face_vertices[fs.infinite_face]):
        vn = very_nice(g, fs, v_star=v_star)
        validate_very_nice(fs, vn)


def test_very_nice_rejects_bad_designation():
    g = embedded(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    fs = trace_faces(g)
    inner = next(v for v in range(4) if v not in fs.face_vertices[fs.infinite_face])
    with pytest.raises(GraphError):
        very_nice(g, fs, v_star=inner)


def test_block_compositions_validate():
    for seed in range(15):
        g = random_block_composition(seed, pieces=4, piece_size=7)
        fs = trace_faces(g)
        vn = very_nice(g, fs)
        validate_very_nice(fs, vn)


def test_dropped_pairs_on_common_cycle_by_enumeration():
    # production check uses blocks; cross-check with explicit cycle search
    for seed in range(8):
        g = random_block_composition(seed, pieces=3, piece_size=6)
        fs = trace_faces(g)
        vn = very_nice(g, fs)
        for f in range(fs.num_faces):
            if f == vn.theta_star:
                continue
            dropped = sorted(fs.face_vertices[f] - vn.vertices_of(f))
            edges = fs.boundary_edges(f)
            for i in range(len(dropped)):
                for j in range(i + 1, len(dropped)):
                    assert pair_on_cycle_by_enumeration(edges, dropped[i], dropped[j])
