import itertools
import random

import pytest

from trunc_choice.choosability import (
    DemandFunction,
    EnumerationCapExceeded,
    ListAssignment,
    PartialColoring,
    SolveStats,
    enumerate_list_colorings,
    gallai_bad_certificate,
    is_f_choosable_tiny,
    is_gallai_tree,
    residual_lists,
    solve_list_coloring,
    truncated_assignment_demand,
)
from trunc_choice.plane import GraphError, PlaneGraph


def L(universe, *lists):
    return ListAssignment(universe=universe, lists=tuple(frozenset(x) for x in lists))


def complete_graph(k):
    return PlaneGraph.from_edges(k, [(i, j) for i in range(k) for j in range(i + 1, k)])


def cycle(k):
    return PlaneGraph.from_edges(k, [(i, (i + 1) % k) for i in range(k)])


def test_residual_examples():
    g = PlaneGraph.from_edges(2, [(0, 1)])
    la = L(3, {1, 2}, {1, 2})
    res = residual_lists(g, la, PartialColoring({0: 1}))
    assert res == {1: frozenset({2})}
    res2 = residual_lists(g, la, PartialColoring({}))
    assert res2 == {0: frozenset({1, 2}), 1: frozenset({1, 2})}
    tri = cycle(3)
    lt = L(4, {1, 2, 3}, {1, 2, 3}, {1, 2, 3})
    res3 = residual_lists(tri, lt, PartialColoring({0: 1, 1: 2}))
    assert res3 == {2: frozenset({3})}


def test_k4_forced_fourth_vertex():
    g = complete_graph(4)
    la = L(15, {8, 9, 10}, {8, 9, 10}, {8, 9, 10}, {8, 9, 10, 14})
    sol = solve_list_coloring(g, la)
    assert sol is not None and sol[3] == 14
    # every solution puts the extra colour on the fourth vertex
    for phi in enumerate_list_colorings(g, la):
        assert phi[3] == 14


def test_odd_cycle_two_lists_unsat():
    g = cycle(5)
    assert solve_list_coloring(g, L(2, *([{0, 1}] * 5))) is None


def test_single_vertex():
    g = PlaneGraph.from_edges(1, [])
    assert solve_list_coloring(g, L(6, {5})) == {0: 5}


def test_solver_agrees_with_enumeration():
    rng = random.Random(21)
    for _ in range(60):
        n = rng.randrange(2, 8)
        edges = {
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if rng.random() < 0.5
        }
        g = PlaneGraph.from_edges(n, edges)
        lists = tuple(
            frozenset(rng.sample(range(6), rng.randrange(1, 4))) for _ in range(n)
        )
        la = ListAssignment(universe=6, lists=lists)
        enumerated = next(iter(enumerate_list_colorings(g, la)), None)
        sol = solve_list_coloring(g, la)
        assert (sol is None) == (enumerated is None)
        if sol is not None:
            for v in range(n):
                assert sol[v] in lists[v]
            for u, v in edges:
                assert sol[u] != sol[v]


def test_solver_monotone_under_list_growth():
    rng = random.Random(8)
    for _ in range(40):
        n = rng.randrange(2, 7)
        edges = {
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if rng.random() < 0.5
        }
        g = PlaneGraph.from_edges(n, edges)
        small = [set(rng.sample(range(6), rng.randrange(1, 3))) for _ in range(n)]
        if solve_list_coloring(g, ListAssignment(6, tuple(map(frozenset, small)))) is None:
            continue
        big = [
            s | set(rng.sample(range(6), rng.randrange(0, 3))) for s in small
        ]
        assert (
            solve_list_coloring(g, ListAssignment(6, tuple(map(frozenset, big))))
            is not None
        )


def test_unsat_stable_under_tie_order():
    g = cycle(5)
    la = L(2, *([{0, 1}] * 5))
    for rank in (list(range(5)), [4, 3, 2, 1, 0], [2, 0, 4, 1, 3]):
        assert solve_list_coloring(g, la, tie_rank=rank) is None


def test_gallai_tree_examples():
    tree = PlaneGraph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    assert is_gallai_tree(tree)
    assert not is_gallai_tree(cycle(4))
    two_tri = PlaneGraph.from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    assert is_gallai_tree(two_tri)
    with pytest.raises(GraphError):
        is_gallai_tree(PlaneGraph.from_edges(4, [(0, 1), (2, 3)]))


def test_bad_certificate_path():
    path = PlaneGraph.from_edges(3, [(0, 1), (1, 2)])
    cert = gallai_bad_certificate(path, L(3, {1}, {1, 2}, {2}))
    assert cert is not None
    assert sorted(map(sorted, cert.block_colors)) == [[1], [2]]
    assert solve_list_coloring(path, L(3, {1}, {1, 2}, {2})) is None
    assert gallai_bad_certificate(path, L(3, {1}, {1, 2}, {1})) is None


def test_bad_certificate_k4():
    g = complete_graph(4)
    la = L(4, *([{1, 2, 3}] * 4))
    cert = gallai_bad_certificate(g, la)
    assert cert is not None
    assert cert.block_colors == (frozenset({1, 2, 3}),)


def test_certificate_requires_degree_lists():
    path = PlaneGraph.from_edges(3, [(0, 1), (1, 2)])
    with pytest.raises(GraphError):
        gallai_bad_certificate(path, L(3, set(), {1, 2}, {2}))


def test_certificate_iff_unsat_random():
    from trunc_choice.generators import (
        bad_assignment_for_gallai_tree,
        random_degree_lists,
        random_gallai_tree,
    )

    rng = random.Random(12)
    for i in range(80):
        g = random_gallai_tree(10, i)
        if i % 2:
            la = bad_assignment_for_gallai_tree(g, i)
        else:
            la = random_degree_lists(g, 6, i)
        cert = gallai_bad_certificate(g, la)
        sol = solve_list_coloring(g, la)
        assert (cert is None) == (sol is not None)
        if cert is not None:
            adj = {v: g.adjacency[v] for v in range(g.n)}
            cert.validate(adj, {v: la.lists[v] for v in range(g.n)})


def test_degree_choosable_when_not_gallai():
    # a connected non-Gallai-tree with degree-sized lists is always colourable
    rng = random.Random(31)
    done = 0
    while done < 40:
        n = rng.randrange(4, 9)
        edges = {
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if rng.random() < 0.5
        }
        g = PlaneGraph.from_edges(n, edges)
        if not g.is_connected():
            continue
        try:
            if is_gallai_tree(g):
                continue
        except GraphError:
            continue
        lists = tuple(
            frozenset(rng.sample(range(10), g.degree(v))) for v in range(n)
        )
        assert solve_list_coloring(g, ListAssignment(10, lists)) is not None
        done += 1


def test_truncated_demand_examples():
    k4 = complete_graph(4)
    assert truncated_assignment_demand(k4, 8).demands == (3, 3, 3, 3)
    star = PlaneGraph.from_edges(10, [(0, i) for i in range(1, 10)])
    d = truncated_assignment_demand(star, 8).demands
    assert d[0] == 8 and set(d[1:]) == {1}


def test_truncated_demand_on_assembled_gadget_vertex():
    from trunc_choice.counterexample import assemble_G

    gg = assemble_G(check=False)
    s5 = gg.copy_vertex(0, "s5")
    f = truncated_assignment_demand(gg.graph, 8)
    assert f.demands[s5] == 5
    assert len(gg.lists.lists[s5]) == 5


def test_f_choosable_tiny_examples():
    k2 = PlaneGraph.from_edges(2, [(0, 1)])
    assert not is_f_choosable_tiny(k2, DemandFunction((1, 1)))
    k3 = complete_graph(3)
    assert not is_f_choosable_tiny(k3, DemandFunction((2, 2, 2)))
    c4 = cycle(4)
    assert is_f_choosable_tiny(c4, DemandFunction((2, 2, 2, 2)))


def test_f_choosable_matches_small_brute_force():
    # brute force over all 2-lists from a 4-colour universe
    c4 = cycle(4)
    for lists in itertools.product(
        list(itertools.combinations(range(4), 2)), repeat=4
    ):
        la = ListAssignment(4, tuple(frozenset(l) for l in lists))
        assert solve_list_coloring(c4, la) is not None
    k3 = complete_graph(3)
    witness = ListAssignment(4, (frozenset({0, 1}),) * 3)
    assert solve_list_coloring(k3, witness) is None


def test_f_choosable_cap():
    g = complete_graph(6)
    with pytest.raises(EnumerationCapExceeded):
        is_f_choosable_tiny(g, DemandFunction((5,) * 6))


def test_solver_node_stats_recorded():
    g = cycle(5)
    st = SolveStats()
    solve_list_coloring(g, L(3, *([{0, 1, 2}] * 5)), stats=st)
    assert st.nodes > 0
