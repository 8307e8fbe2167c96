import random

import pytest

from trunc_choice.plane import (
    GraphError,
    PlaneGraph,
    cycle_region,
    subgraph_faces,
    trace_faces,
)
from trunc_choice.planarity import is_planar
from trunc_choice.generators import double_wheel, random_triangulation


def embedded(n, edges, outer=None):
    g = PlaneGraph.from_edges(n, edges)
    ok, rot = is_planar(g)
    assert ok
    g = g.with_rotation(rot)
    if outer is not None:
        g = g.with_outer_walk(outer)
    return g


def test_triangle_two_faces_euler():
    g = PlaneGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)], rotation=[[1, 2], [2, 0], [0, 1]])
    fs = trace_faces(g)
    assert fs.num_faces == 2
    assert all(len(w) == 3 for w in fs.walks)
    assert g.n - g.m + fs.num_faces == 2


def test_k4_four_triangular_faces():
    g = embedded(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    fs = trace_faces(g)
    assert fs.num_faces == 4
    assert sorted(len(w) for w in fs.walks) == [3, 3, 3, 3]


def test_path_single_face_walk_length_four():
    g = PlaneGraph.from_edges(3, [(0, 1), (1, 2)], rotation=[[1], [0, 2], [1]])
    fs = trace_faces(g)
    assert fs.num_faces == 1
    assert len(fs.walks[0]) == 4


def test_every_directed_edge_in_one_walk():
    g = embedded(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)])
    fs = trace_faces(g)
    total = sum(len(w) for w in fs.walks)
    assert total == 2 * g.m
    assert len(fs.face_of_dedge) == 2 * g.m


def test_trace_requires_rotation_and_connectivity():
    g = PlaneGraph.from_edges(3, [(0, 1), (1, 2)])
    with pytest.raises(GraphError):
        trace_faces(g)
    g2 = PlaneGraph.from_edges(4, [(0, 1), (2, 3)], rotation=[[1], [0], [3], [2]])
    with pytest.raises(GraphError):
        trace_faces(g2)


def test_inconsistent_rotation_rejected():
    with pytest.raises(GraphError):
        PlaneGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)], rotation=[[1, 2], [2, 0], [0, 0]])


def test_parallel_edges_and_loops_rejected():
    with pytest.raises(GraphError):
        PlaneGraph.from_edges(2, [(0, 1), (1, 0)])
    with pytest.raises(GraphError):
        PlaneGraph.from_edges(2, [(0, 0)])


def test_outer_walk_designation():
    g = PlaneGraph.from_edges(
        3, [(0, 1), (1, 2), (0, 2)], rotation=[[1, 2], [2, 0], [0, 1]]
    ).with_outer_walk((2, 1, 0))
    fs = trace_faces(g)
    assert set(fs.walks[fs.infinite_face]) == {0, 1, 2}
    bad = g.with_outer_walk((0, 1))
    with pytest.raises(GraphError):
        trace_faces(bad)


def test_wheel_rim_region():
    # rim cycle of a 4-wheel: hub inside, nothing outside
    g = embedded(5, [(0, 1), (1, 2), (2, 3), (3, 0), (4, 0), (4, 1), (4, 2), (4, 3)])
    fs = trace_faces(g)
    if 4 in fs.face_vertices[fs.infinite_face]:
        # re-designate so that the hub is interior
        outer = next(i for i, w in enumerate(fs.walks) if 4 not in w and len(w) == 3)
        g = g.with_outer_walk(fs.walks[outer])
        fs = trace_faces(g)
    region = cycle_region(g, fs, [0, 1, 2, 3])
    assert region.interior == {4}
    assert region.exterior == frozenset()


def test_k4_outer_triangle_one_interior():
    g = embedded(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    fs = trace_faces(g)
    outer_verts = sorted(fs.face_vertices[fs.infinite_face])
    inner = next(v for v in range(4) if v not in outer_verts)
    region = cycle_region(g, fs, outer_verts)
    assert region.interior == {inner}


def test_double_wheel_rim_separates_hubs():
    g = double_wheel(8)
    fs = trace_faces(g)
    region = cycle_region(g, fs, list(range(8)))
    assert region.interior == {8}
    assert region.exterior == {9}


def test_cycle_region_partition_random():
    rng = random.Random(5)
    for seed in range(8):
        g = random_triangulation(rng.randrange(6, 16), seed)
        fs = trace_faces(g)
        # every finite triangular face is a cycle
        for i, walk in enumerate(fs.walks):
            if i == fs.infinite_face or len(set(walk)) != len(walk):
                continue
            region = cycle_region(g, fs, walk)
            assert len(walk) + len(region.interior) + len(region.exterior) == g.n


def test_cycle_region_rejects_noncycle():
    g = embedded(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    fs = trace_faces(g)
    with pytest.raises(GraphError):
        cycle_region(g, fs, [0, 1])


def test_subgraph_faces_merge_and_isolates():
    # two triangles joined by a bridge; keep both triangles only
    g = embedded(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
    fs = trace_faces(g)
    sub = subgraph_faces(
        g, fs, keep_edges=[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]
    )
    assert sub.num_faces == 3
    sizes = sorted(len(v) for v in sub.face_vertices)
    assert sizes == [3, 3, 6]
    # isolated vertices are recorded on their containing face
    sub2 = subgraph_faces(g, fs, keep_vertices={1, 4})
    assert sub2.num_faces == 1
    assert sub2.face_vertices[0] == frozenset({1, 4})


def test_subgraph_faces_host_face_map():
    g = double_wheel(6)
    fs = trace_faces(g)
    sub = subgraph_faces(g, fs, keep_vertices={6, 7})  # the two hubs
    assert sub.num_faces == 1
    assert all(sub.face_of_host(f) == 0 for f in range(fs.num_faces))
