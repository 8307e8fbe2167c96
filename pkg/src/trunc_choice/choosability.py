"""List assignments, exact list-colouring search, and Gallai-tree structure.

The solver is a deterministic backtracking search over bitmask lists:
branch on the uncoloured vertex with the smallest residual list (ties
by rank, lowest id by default), propagate forced singletons eagerly,
and prune on empty residuals.  UNSAT answers are definitive.

A connected graph all of whose blocks are complete graphs or odd
cycles (a Gallai tree) is exactly the kind that can defeat lists of
size equal to the degree; the structural certificate below pins down
the per-block colour sets that witness such a defeat, and is checked
against the search on randomized suites.
"""

from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from .blocks import block_cut_tree_from_adjacency
from .plane import GraphError, PlaneGraph, adjacency_components


class EnumerationCapExceeded(RuntimeError):
    """An exhaustive enumeration exceeded its configured budget."""


@dataclass(frozen=True)
class ListAssignment:
    """Per-vertex colour sets over the universe {0, ..., universe-1}."""

    universe: int
    lists: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        for v, lst in enumerate(self.lists):
            for c in lst:
                if not 0 <= c < self.universe:
                    raise GraphError(f"colour {c} of vertex {v} outside universe")

    @classmethod
    def from_dict(
        cls, n: int, universe: int, lists: Mapping[int, Iterable[int]]
    ) -> "ListAssignment":
        return cls(
            universe=universe,
            lists=tuple(frozenset(lists.get(v, ())) for v in range(n)),
        )

    def size(self, v: int) -> int:
        return len(self.lists[v])

    def masks(self) -> list[int]:
        return [_mask(lst) for lst in self.lists]


@dataclass(frozen=True)
class DemandFunction:
    """Required list size per vertex."""

    demands: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(d < 0 for d in self.demands):
            raise GraphError("demands must be nonnegative")

    def total(self) -> int:
        return sum(self.demands)


def truncated_assignment_demand(g: PlaneGraph, k: int) -> DemandFunction:
    """The degree-truncated demand f(v) = min(k, deg(v))."""
    if k < 1:
        raise GraphError("k must be positive")
    return DemandFunction(tuple(min(k, g.degree(v)) for v in range(g.n)))


@dataclass(frozen=True)
class PartialColoring:
    """A proper, list-respecting colouring of a vertex subset."""

    color: Mapping[int, int]

    @property
    def colored(self) -> frozenset[int]:
        return frozenset(self.color)

    def validate(self, g: PlaneGraph, L: ListAssignment) -> None:
        for v, c in self.color.items():
            if c not in L.lists[v]:
                raise GraphError(f"colour {c} of {v} not in its list")
            for u in g.adjacency[v]:
                if self.color.get(u) == c:
                    raise GraphError(f"edge {v}-{u} monochromatic")


def residual_lists(
    g: PlaneGraph, L: ListAssignment, pc: PartialColoring
) -> dict[int, frozenset[int]]:
    """Residual lists on the uncoloured vertices: list minus the colours
    already used on coloured neighbours."""
    pc.validate(g, L)
    out = {}
    for v in range(g.n):
        if v in pc.color:
            continue
        used = {pc.color[u] for u in g.adjacency[v] if u in pc.color}
        out[v] = L.lists[v] - used
    return out


def _mask(colors: Iterable[int]) -> int:
    m = 0
    for c in colors:
        m |= 1 << c
    return m


def _unmask(m: int) -> frozenset[int]:
    out = set()
    while m:
        low = m & -m
        out.add(low.bit_length() - 1)
        m ^= low
    return frozenset(out)


@dataclass
class SolveStats:
    nodes: int = 0


def solve_list_coloring(
    g: PlaneGraph,
    L: ListAssignment,
    precolored: Optional[Mapping[int, int]] = None,
    tie_rank: Optional[Sequence[int]] = None,
    stats: Optional[SolveStats] = None,
) -> Optional[dict[int, int]]:
    """Find a proper colouring from the lists, or None when none exists.

    Deterministic given ``tie_rank`` (vertex selection breaks residual
    size ties by rank; colours are tried in ascending order).
    """
    n = g.n
    rank = list(range(n)) if tie_rank is None else list(tie_rank)
    res = L.masks()
    color = [-1] * n
    trail: list[tuple[int, int, int]] = []  # (kind 0=res/1=color, vertex, old)

    if precolored:
        for v, c in precolored.items():
            if c not in L.lists[v]:
                return None
        for v, c in precolored.items():
            for u in g.adjacency[v]:
                if precolored.get(u) == c and u != v:
                    return None
        for v, c in precolored.items():
            color[v] = c
        for v, c in precolored.items():
            bit = 1 << c
            for u in g.adjacency[v]:
                if color[u] == -1 and res[u] & bit:
                    res[u] &= ~bit
                    if res[u] == 0:
                        return None

    adj = g.adjacency
    st = stats or SolveStats()

    def assign(v: int, c: int) -> bool:
        queue = [(v, c)]
        while queue:
            w, cw = queue.pop()
            if color[w] != -1:
                if color[w] == cw:
                    continue
                return False
            trail.append((1, w, -1))
            color[w] = cw
            bit = 1 << cw
            for u in adj[w]:
                if color[u] == -1 and res[u] & bit:
                    trail.append((0, u, res[u]))
                    res[u] &= ~bit
                    if res[u] == 0:
                        return False
                    if res[u] & (res[u] - 1) == 0:
                        queue.append((u, res[u].bit_length() - 1))
        return True

    def undo(mark: int) -> None:
        while len(trail) > mark:
            kind, v, old = trail.pop()
            if kind == 1:
                color[v] = -1
            else:
                res[v] = old

    def pick() -> int:
        best, key = -1, None
        for v in range(n):
            if color[v] == -1:
                k = (res[v].bit_count(), rank[v])
                if key is None or k < key:
                    best, key = v, k
        return best

    limit = max(sys.getrecursionlimit(), 2 * n + 100)
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(limit)
    try:

        def search() -> bool:
            v = pick()
            if v == -1:
                return True
            st.nodes += 1
            avail = res[v]
            while avail:
                low = avail & -avail
                avail ^= low
                c = low.bit_length() - 1
                mark = len(trail)
                if assign(v, c) and search():
                    return True
                undo(mark)
            return False

        if search():
            return {v: color[v] for v in range(n)}
        return None
    finally:
        sys.setrecursionlimit(old_limit)


def enumerate_list_colorings(
    g: PlaneGraph, L: ListAssignment, cap: Optional[int] = None
) -> Iterator[dict[int, int]]:
    """Yield every proper list colouring (brute force, vertex id order).

    Independent of the solver's search path; used as an oracle and for
    forcing arguments that quantify over all colourings.
    """
    n = g.n
    color: dict[int, int] = {}
    count = 0

    def rec(v: int) -> Iterator[dict[int, int]]:
        nonlocal count
        if v == n:
            yield dict(color)
            return
        for c in sorted(L.lists[v]):
            count += 1
            if cap is not None and count > cap:
                raise EnumerationCapExceeded(f"colouring enumeration over {cap}")
            if all(color.get(u) != c for u in g.adjacency[v]):
                color[v] = c
                yield from rec(v + 1)
                del color[v]

    yield from rec(0)


def _block_is_complete(block: frozenset[int], adj: Mapping[int, Sequence[int]]) -> bool:
    k = len(block)
    edges = sum(1 for v in block for u in adj[v] if u in block and u > v)
    return edges == k * (k - 1) // 2


def _block_is_odd_cycle(block: frozenset[int], adj: Mapping[int, Sequence[int]]) -> bool:
    k = len(block)
    if k < 3 or k % 2 == 0:
        return False
    return all(sum(1 for u in adj[v] if u in block) == 2 for v in block)


def is_gallai_tree_adjacency(adj: Mapping[int, Sequence[int]]) -> bool:
    if len(adjacency_components(adj)) != 1:
        raise GraphError("Gallai tree test requires a connected graph")
    bct = block_cut_tree_from_adjacency(adj)
    return all(
        _block_is_complete(b, adj) or _block_is_odd_cycle(b, adj) for b in bct.blocks
    )


def is_gallai_tree(g: PlaneGraph) -> bool:
    """True iff every block is a complete graph or an odd cycle."""
    return is_gallai_tree_adjacency({v: g.adjacency[v] for v in range(g.n)})


@dataclass(frozen=True)
class BadListCertificate:
    """Witness that a degree-sized list assignment on a Gallai tree
    admits no proper colouring: one colour set per block, of size equal
    to the block's regularity degree, disjoint across blocks sharing a
    vertex, and jointly covering each vertex's list exactly."""

    blocks: tuple[frozenset[int], ...]
    block_colors: tuple[frozenset[int], ...]

    def validate(self, adj: Mapping[int, Sequence[int]], lists: Mapping[int, frozenset[int]]) -> None:
        for b, cb in zip(self.blocks, self.block_colors):
            r = (
                len(b) - 1
                if _block_is_complete(b, adj)
                else 2
            )
            if len(cb) != r:
                raise GraphError(f"|C_B| = {len(cb)} != {r} for block {sorted(b)}")
        for (i, b1), (j, b2) in itertools.combinations(enumerate(self.blocks), 2):
            if b1 & b2 and self.block_colors[i] & self.block_colors[j]:
                raise GraphError(f"blocks {i},{j} share a vertex and colours")
        for v in lists:
            union = frozenset().union(
                *(cb for b, cb in zip(self.blocks, self.block_colors) if v in b)
            )
            if union != lists[v]:
                raise GraphError(f"list of {v} is not the union of its block sets")


def gallai_bad_certificate_adjacency(
    adj: Mapping[int, Sequence[int]], lists: Mapping[int, frozenset[int]]
) -> Optional[BadListCertificate]:
    """Structural bad-list test on a connected Gallai tree.

    Lists must satisfy |L(v)| >= deg(v).  Returns the per-block colour
    sets when the assignment is bad (no proper colouring exists), else
    None.  The sets are forced: rooting the block tree and propagating
    the lists of non-root vertices leaves no choice, so a single
    bottom-up pass decides.
    """
    if not is_gallai_tree_adjacency(adj):
        raise GraphError("graph is not a Gallai tree")
    for v in adj:
        if len(lists[v]) < len(adj[v]):
            raise GraphError(f"|L({v})| < deg({v})")
    if any(len(lists[v]) > len(adj[v]) for v in adj):
        return None

    bct = block_cut_tree_from_adjacency(adj)
    nb = len(bct.blocks)
    # Orient the block tree away from block 0.
    blocks_at: dict[int, list[int]] = {}
    for i, b in enumerate(bct.blocks):
        for v in b:
            blocks_at.setdefault(v, []).append(i)
    parent_cut: dict[int, Optional[int]] = {0: None}
    order = [0]
    seen_blocks = {0}
    qi = 0
    while qi < len(order):
        bi = order[qi]
        qi += 1
        for v in bct.blocks[bi]:
            if v not in bct.cut_vertices:
                continue
            for bj in blocks_at[v]:
                if bj not in seen_blocks:
                    seen_blocks.add(bj)
                    parent_cut[bj] = v
                    order.append(bj)
    if len(order) != nb:
        raise GraphError("block tree is not connected")

    consumed: dict[int, frozenset[int]] = {v: frozenset() for v in adj}
    colors: dict[int, frozenset[int]] = {}
    for bi in reversed(order):
        b = bct.blocks[bi]
        p = parent_cut[bi]
        r = len(b) - 1 if _block_is_complete(b, adj) else 2
        cb: Optional[frozenset[int]] = None
        for v in sorted(b):
            if v == p:
                continue
            cand = lists[v] - consumed[v]
            if cb is None:
                cb = cand
            elif cb != cand:
                return None
        if cb is None or len(cb) != r:
            return None
        if p is not None:
            if not cb <= (lists[p] - consumed[p]):
                return None
            consumed[p] |= cb
        colors[bi] = cb
    cert = BadListCertificate(
        blocks=bct.blocks, block_colors=tuple(colors[i] for i in range(nb))
    )
    cert.validate(adj, lists)
    return cert


def gallai_bad_certificate(
    g: PlaneGraph, L: ListAssignment
) -> Optional[BadListCertificate]:
    adj = {v: g.adjacency[v] for v in range(g.n)}
    lists = {v: L.lists[v] for v in range(g.n)}
    return gallai_bad_certificate_adjacency(adj, lists)


F_CHOOSABLE_DEMAND_CAP = 24


def is_f_choosable_tiny(g: PlaneGraph, f: DemandFunction, cap: int = F_CHOOSABLE_DEMAND_CAP) -> bool:
    """Decide f-choosability by enumerating list assignments.

    A universe of sum(f) colours suffices; assignments are enumerated
    canonically (colours appear in first-use order, fresh colours as a
    contiguous block) which deduplicates up to colour permutation.
    Only meant for tiny demands: sum(f) above the cap is rejected.
    """
    if len(f.demands) != g.n:
        raise GraphError("demand length must equal vertex count")
    total = f.total()
    if total > cap:
        raise EnumerationCapExceeded(f"sum of demands {total} exceeds cap {cap}")
    if any(d == 0 for d in f.demands):
        return False  # an empty list defeats any graph with such a vertex
    lists: list[frozenset[int]] = [frozenset()] * g.n

    def rec(v: int, used: int) -> bool:
        if v == g.n:
            L = ListAssignment(universe=max(used, 1), lists=tuple(lists))
            return solve_list_coloring(g, L) is not None
        d = f.demands[v]
        for fresh in range(min(d, total - used) + 1):
            fresh_block = tuple(range(used, used + fresh))
            for old in itertools.combinations(range(used), d - fresh):
                lists[v] = frozenset(old + fresh_block)
                if not rec(v + 1, used + fresh):
                    return False
        return True

    return rec(0, 0)
