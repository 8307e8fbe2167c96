"""Blocks, cut vertices, and low-order connectivity tests."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .plane import GraphError, PlaneGraph, adjacency_components


def articulation_and_blocks(
    adj: Mapping[int, Sequence[int]],
) -> tuple[list[frozenset[int]], set[int]]:
    """Biconnected components and articulation points (iterative Tarjan).

    Blocks are vertex sets of maximal 2-connected subgraphs or bridges;
    degree-0 vertices form singleton blocks.  Works on adjacency dicts
    so it can serve subgraphs keyed by original ids.
    """
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    blocks: list[frozenset[int]] = []
    cuts: set[int] = set()
    counter = 0
    estack: list[tuple[int, int]] = []

    for root in sorted(adj):
        if root in disc:
            continue
        if not adj[root]:
            blocks.append(frozenset({root}))
            disc[root] = counter
            counter += 1
            continue
        disc[root] = low[root] = counter
        counter += 1
        root_children = 0
        stack: list[tuple[int, int, int]] = [(root, -1, 0)]
        while stack:
            v, parent, idx = stack.pop()
            advanced = False
            nbrs = adj[v]
            while idx < len(nbrs):
                w = nbrs[idx]
                idx += 1
                if w not in disc:
                    disc[w] = low[w] = counter
                    counter += 1
                    estack.append((v, w))
                    stack.append((v, parent, idx))
                    stack.append((w, v, 0))
                    if v == root:
                        root_children += 1
                    advanced = True
                    break
                elif w != parent and disc[w] < disc[v]:
                    estack.append((v, w))
                    if disc[w] < low[v]:
                        low[v] = disc[w]
            if advanced:
                continue
            # v fully explored; fold into parent
            if parent != -1:
                if low[v] < low[parent]:
                    low[parent] = low[v]
                if low[v] >= disc[parent]:
                    comp: set[int] = set()
                    while True:
                        a, b = estack.pop()
                        comp.add(a)
                        comp.add(b)
                        if (a, b) == (parent, v):
                            break
                    blocks.append(frozenset(comp))
                    if parent != root:
                        cuts.add(parent)
        if root_children >= 2:
            cuts.add(root)
    return blocks, cuts


@dataclass(frozen=True)
class BlockCutTree:
    """Block-cutvertex incidence structure of a graph.

    Blocks are ordered lexicographically by minimum vertex id (ties by
    the sorted vertex tuple); ``tree_edges`` pairs a block index with a
    cut vertex it contains.
    """

    blocks: tuple[frozenset[int], ...]
    cut_vertices: frozenset[int]
    tree_edges: tuple[tuple[int, int], ...]
    root: Optional[int] = None

    def blocks_at(self, v: int) -> list[int]:
        return [i for i, b in enumerate(self.blocks) if v in b]


def block_cut_tree_from_adjacency(adj: Mapping[int, Sequence[int]]) -> BlockCutTree:
    blocks, cuts = articulation_and_blocks(adj)
    blocks.sort(key=lambda b: (min(b), tuple(sorted(b))))
    tree_edges = tuple(
        (i, v) for i, b in enumerate(blocks) for v in sorted(b) if v in cuts
    )
    return BlockCutTree(
        blocks=tuple(blocks),
        cut_vertices=frozenset(cuts),
        tree_edges=tree_edges,
    )


def block_cut_tree(g: PlaneGraph) -> BlockCutTree:
    adj = {v: g.adjacency[v] for v in range(g.n)}
    return block_cut_tree_from_adjacency(adj)


def articulation_points(adj: Mapping[int, Sequence[int]]) -> set[int]:
    return articulation_and_blocks(adj)[1]


def connectivity_at_least(g: PlaneGraph, k: int) -> bool:
    """True iff the graph is k-connected, for k in {1, 2, 3}.

    Equivalent to removing every vertex subset of size < k and checking
    connectivity; 2-cuts are found as articulation points of each
    single-vertex-deleted graph, which keeps n=2000 within budget.
    """
    if k not in (1, 2, 3):
        raise GraphError("k must be 1, 2 or 3")
    if g.n <= k:
        return False
    adj = {v: g.adjacency[v] for v in range(g.n)}
    if len(adjacency_components(adj)) != 1:
        return False
    if k == 1:
        return True
    if articulation_points(adj):
        return False
    if k == 2:
        return True
    for v in range(g.n):
        sub = {
            u: tuple(w for w in g.adjacency[u] if w != v)
            for u in range(g.n)
            if u != v
        }
        if len(adjacency_components(sub)) != 1 or articulation_points(sub):
            return False
    return True
