"""Executable form of the degree-truncated colouring process.

Vertices of degree below the threshold k form V1; the rest form V2.
Each component Q of G[V1] sits inside a face of G[V2] and must be
"properly connected": every boundary vertex of that face sees Q, and Q
has a 3-fan to every enclosing cycle.  The process colours V2 in a
reverse-degeneracy order (at most 5 earlier neighbours each), guarding
every still-dangerous component through its protectors: V2 vertices
kept incident to the component's face by a very nice subgraph.  A
protector u is a savior of Q when at most 3 of its colours could keep
Q's lists "bad"; those colours are avoided when u is coloured.  Rule
(R1) meanwhile colours component vertices that no longer see uncoloured
V2, keeping every remainder connected.  When V2 is exhausted every
component that became free extends greedily; the run either returns a
verified colouring or a structured failure trace.

Freeness and savior oracles enumerate the proper list-respecting
assignments of the component's uncoloured V2 neighbourhood.  Badness
forces every such neighbour to remove a fresh colour from each adjacent
remainder list (the lists are exactly degree-sized otherwise), which
prunes the search to the point of being cheap at desk scale.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Optional, Sequence

from .blocks import articulation_points, connectivity_at_least
from .choosability import (
    ListAssignment,
    PartialColoring,
    gallai_bad_certificate_adjacency,
    is_gallai_tree_adjacency,
    solve_list_coloring,
)
from .io import format_avoid
from .plane import (
    FaceSet,
    GraphError,
    InvariantError,
    PlaneGraph,
    SubgraphFaces,
    adjacency_components,
    cycle_region,
    induced_adjacency,
    subgraph_faces,
    trace_faces,
)
from .theta import VeryNiceSubgraph

DEFAULT_ORACLE_CAP = 10_000_000


class OracleCapExceeded(RuntimeError):
    """A freeness/savior enumeration exceeded its node budget."""


class PartitionError(GraphError):
    """The degree partition violates the theorem's hypotheses."""


class Freeness(Enum):
    FREE = "free"
    NOT_FREE = "not_free"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class TruncPartition:
    """Degree partition with the face assignment of each component."""

    k: int
    v1: frozenset[int]
    v2: frozenset[int]
    components: tuple[frozenset[int], ...]
    theta_q: tuple[int, ...]
    c_q: tuple[Optional[tuple[int, ...]], ...]
    faces: FaceSet
    subfaces: SubgraphFaces

    def boundary(self, comp: int) -> frozenset[int]:
        return self.subfaces.face_vertices[self.theta_q[comp]]


def partition_by_degree(
    g: PlaneGraph, k: int = 12, faces: Optional[FaceSet] = None
) -> TruncPartition:
    """Split vertices by degree around k and locate each low-degree
    component inside a face of the high-degree subgraph."""
    if not g.has_rotation:
        raise GraphError("partition requires an embedded graph")
    if not g.is_connected():
        raise GraphError("partition requires a connected graph")
    if faces is None:
        faces = trace_faces(g)
    v1 = frozenset(v for v in range(g.n) if g.degree(v) <= k - 1)
    v2 = frozenset(range(g.n)) - v1
    if not v2:
        raise PartitionError(
            f"no vertex has degree >= {k}; the instance is below the regime"
        )
    sub = subgraph_faces(g, faces, keep_vertices=v2)
    comps = tuple(sorted(adjacency_components(induced_adjacency(g, v1)), key=min))
    theta: list[int] = []
    for comp in comps:
        classes = {
            sub.face_of_host(f) for v in comp for f in faces.vertex_faces[v]
        }
        if len(classes) != 1:
            raise InvariantError(f"component {sorted(comp)} spans several faces")
        theta.append(classes.pop())
    clashes = [t for t, cnt in _counts(theta).items() if cnt > 1]
    if clashes:
        raise PartitionError(
            f"faces {clashes} of the high-degree subgraph hold several components"
        )
    c_q: list[Optional[tuple[int, ...]]] = []
    for t in theta:
        cyc = None
        if t != sub.infinite_face:
            walks = sub.face_walks(t)
            if len(walks) == 1 and len(set(walks[0])) == len(walks[0]) >= 3:
                cyc = walks[0]
        c_q.append(cyc)
    return TruncPartition(
        k=k,
        v1=v1,
        v2=v2,
        components=comps,
        theta_q=tuple(theta),
        c_q=tuple(c_q),
        faces=faces,
        subfaces=sub,
    )


def _counts(xs: Iterable[int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for x in xs:
        out[x] = out.get(x, 0) + 1
    return out


@dataclass
class ComponentVerdict:
    component: int
    p1_ok: bool
    p1_missing: tuple[int, ...]
    p2_ok: Optional[bool]  # None when the cycle enumeration was capped
    cycles_checked: int
    shortcut_used: bool

    @property
    def ok(self) -> bool:
        return self.p1_ok and self.p2_ok is True


def _simple_cycles(adj: Mapping[int, Sequence[int]], cap: int) -> list[tuple[int, ...]]:
    """All simple cycles, each reported once (smallest vertex first,
    orientation fixed).  Raises when more than ``cap`` are found."""
    cycles: list[tuple[int, ...]] = []
    verts = sorted(adj)
    for s in verts:
        path = [s]
        on_path = {s}

        def extend(v: int) -> None:
            for w in adj[v]:
                if w == s and len(path) >= 3 and path[1] < path[-1]:
                    cycles.append(tuple(path))
                    if len(cycles) > cap:
                        raise OracleCapExceeded(
                            f"more than {cap} cycles in the boundary subgraph"
                        )
                elif w > s and w not in on_path:
                    path.append(w)
                    on_path.add(w)
                    extend(w)
                    path.pop()
                    on_path.discard(w)

        extend(s)
    return cycles


def _fan_count(
    adj: Mapping[int, Sequence[int]],
    inside: set[int],
    v: int,
    targets: set[int],
    want: int,
) -> int:
    """Number of internally disjoint paths from v to distinct targets
    staying inside ``inside`` (unit vertex capacities), up to ``want``.

    Standard vertex-split max-flow: every non-source, non-target vertex
    becomes in->out with capacity 1; targets absorb at their in-node;
    BFS augmentation over the residual capacities.
    """
    source = ("out", v)
    sink = ("sink", -1)
    cap: dict[tuple, dict[tuple, int]] = {}

    def add(a, b, c):
        cap.setdefault(a, {})[b] = cap.setdefault(a, {}).get(b, 0) + c
        cap.setdefault(b, {}).setdefault(a, 0)

    for x in inside:
        if x == v:
            continue
        if x in targets:
            add(("in", x), sink, 1)
        else:
            add(("in", x), ("out", x), 1)
    for x in inside:
        if x in targets and x != v:
            continue  # paths stop at targets
        for y in adj[x]:
            if y in inside and y != v:
                add(("out", x), ("in", y), 1)

    flow = 0
    while flow < want:
        prev: dict[tuple, tuple] = {source: source}
        queue = [source]
        while queue and sink not in prev:
            a = queue.pop(0)
            for b, c in cap.get(a, {}).items():
                if c > 0 and b not in prev:
                    prev[b] = a
                    queue.append(b)
        if sink not in prev:
            break
        b = sink
        while b != source:
            a = prev[b]
            cap[a][b] -= 1
            cap[b][a] += 1
            b = a
        flow += 1
    return flow


def check_properly_connected(
    g: PlaneGraph,
    part: TruncPartition,
    shortcut: Optional[bool] = None,
    cycle_cap: int = 100_000,
) -> list[ComponentVerdict]:
    """Per-component verdicts for the two connection conditions.

    Condition one: every boundary vertex of the component's face is
    adjacent to the component.  Condition two: for every cycle of the
    boundary-induced subgraph enclosing the component, every component
    vertex has a 3-fan to the cycle inside it.  3-connectivity of the
    whole graph implies condition two; ``shortcut=None`` tests it and
    uses the implication when available.
    """
    if shortcut is None:
        shortcut = connectivity_at_least(g, 3)
    verdicts = []
    for qi, comp in enumerate(part.components):
        boundary = part.boundary(qi)
        missing = tuple(
            sorted(
                w
                for w in boundary
                if not any(u in comp for u in g.adjacency[w])
            )
        )
        p1 = not missing
        p2: Optional[bool] = True
        checked = 0
        if not shortcut:
            adj_b = induced_adjacency(g, boundary)
            try:
                cycles = _simple_cycles(adj_b, cycle_cap)
            except OracleCapExceeded:
                cycles = None
            if cycles is None:
                p2 = None
            else:
                for cyc in cycles:
                    region = cycle_region(g, part.faces, cyc)
                    if not comp <= region.interior:
                        continue
                    checked += 1
                    inside = set(region.interior) | set(cyc)
                    adj_in = induced_adjacency(g, inside)
                    for v in sorted(comp):
                        if _fan_count(adj_in, inside, v, set(cyc), 3) < 3:
                            p2 = False
                            break
                    if p2 is False:
                        break
        verdicts.append(
            ComponentVerdict(
                component=qi,
                p1_ok=p1,
                p1_missing=missing,
                p2_ok=p2,
                cycles_checked=checked,
                shortcut_used=shortcut,
            )
        )
    return verdicts


def build_order(g: PlaneGraph, part: TruncPartition, v_star: int) -> tuple[int, ...]:
    """Reverse-degeneracy order of the high-degree set, v_star first;
    every vertex has at most 5 neighbours preceding it."""
    if v_star not in part.v2:
        raise GraphError("v_star must belong to the high-degree set")
    alive = {v: set(u for u in g.adjacency[v] if u in part.v2) for v in part.v2}
    removal: list[int] = []
    while len(alive) > 1:
        v = min(
            (v for v in alive if v != v_star),
            key=lambda v: (len(alive[v]), v),
        )
        if len(alive[v]) > 5:
            raise InvariantError("minimum degree above 5 in a planar subgraph")
        for u in alive[v]:
            alive[u].discard(v)
        del alive[v]
        removal.append(v)
    removal.append(v_star)
    return tuple(reversed(removal))


# ---------------------------------------------------------------------------
# local extension oracles
# ---------------------------------------------------------------------------


@dataclass
class _LocalContext:
    comp: frozenset[int]
    rem: frozenset[int]  # component minus coloured
    rem_adj: dict[int, tuple[int, ...]]
    res_q: dict[int, frozenset[int]]
    s_verts: tuple[int, ...]  # uncoloured V2 neighbours of the remainder
    res_s: dict[int, frozenset[int]]
    q_nbrs: dict[int, tuple[int, ...]]  # s vertex -> remainder neighbours
    s_edges: dict[int, tuple[int, ...]]


def _local_context(
    g: PlaneGraph,
    part: TruncPartition,
    coloring: Mapping[int, int],
    L: ListAssignment,
    comp_idx: int,
    extra: Iterable[int] = (),
) -> _LocalContext:
    comp = part.components[comp_idx]
    rem = frozenset(v for v in comp if v not in coloring)
    rem_adj = {
        v: tuple(u for u in g.adjacency[v] if u in rem) for v in rem
    }
    res_q = {
        v: L.lists[v]
        - {coloring[u] for u in g.adjacency[v] if u in coloring}
        for v in rem
    }
    s_set = {
        u
        for v in rem
        for u in g.adjacency[v]
        if u in part.v2 and u not in coloring
    }
    s_set |= {u for u in extra if u not in coloring}
    s_verts = tuple(sorted(s_set))
    res_s = {
        u: L.lists[u]
        - {coloring[w] for w in g.adjacency[u] if w in coloring}
        for u in s_verts
    }
    q_nbrs = {
        u: tuple(v for v in g.adjacency[u] if v in rem) for u in s_verts
    }
    s_edges = {
        u: tuple(w for w in g.adjacency[u] if w in s_set) for u in s_verts
    }
    return _LocalContext(
        comp=comp,
        rem=rem,
        rem_adj=rem_adj,
        res_q=res_q,
        s_verts=s_verts,
        res_s=res_s,
        q_nbrs=q_nbrs,
        s_edges=s_edges,
    )


class _Budget:
    def __init__(self, cap: int) -> None:
        self.cap = cap
        self.used = 0

    def spend(self, amount: int = 1) -> None:
        self.used += amount
        if self.used > self.cap:
            raise OracleCapExceeded(f"oracle budget {self.cap} exhausted")


def _is_bad_profile(ctx: _LocalContext, removed: Mapping[int, set[int]]) -> bool:
    lists = {v: ctx.res_q[v] - frozenset(removed[v]) for v in ctx.rem}
    if any(len(lists[v]) != len(ctx.rem_adj[v]) for v in ctx.rem):
        return False
    cert = gallai_bad_certificate_adjacency(ctx.rem_adj, lists)
    return cert is not None


def _bad_extension_search(
    ctx: _LocalContext,
    fixed: Mapping[int, int],
    budget: _Budget,
) -> Optional[dict[int, int]]:
    """A proper local assignment of the uncoloured V2 neighbourhood whose
    induced residuals on the remainder are a bad list assignment, or
    None.  Prunes on the exact-tightness requirement of badness."""
    rem = ctx.rem
    if not rem:
        return None
    if not is_gallai_tree_adjacency(ctx.rem_adj):
        return None
    slack: dict[int, int] = {}
    for v in rem:
        s = len(ctx.res_q[v]) - len(ctx.rem_adj[v])
        if s < 0:
            return None  # sub-degree list: badness is impossible by definition
        if s > sum(1 for u in ctx.s_verts if v in ctx.q_nbrs[u]):
            return None  # list too large to ever tighten to the degree
        slack[v] = s

    remaining = {
        v: sum(1 for u in ctx.s_verts if v in ctx.q_nbrs[u]) for v in rem
    }
    removed: dict[int, set[int]] = {v: set() for v in rem}
    assignment: dict[int, int] = {}
    order = sorted(
        ctx.s_verts, key=lambda u: (-len(ctx.q_nbrs[u]), u)
    )

    def rec(idx: int) -> bool:
        if idx == len(order):
            return _is_bad_profile(ctx, removed)
        u = order[idx]
        if u in fixed:
            candidates: Iterable[int] = (
                [fixed[u]] if fixed[u] in ctx.res_s[u] else []
            )
        else:
            candidates = sorted(ctx.res_s[u])
        for c in candidates:
            budget.spend()
            if any(assignment.get(w) == c for w in ctx.s_edges[u]):
                continue
            ok = True
            hits = []
            for v in ctx.q_nbrs[u]:
                if c in ctx.res_q[v] and c not in removed[v]:
                    hits.append(v)
                elif len(removed[v]) + (remaining[v] - 1) < slack[v]:
                    ok = False
                    break
            if ok:
                # every neighbour with a miss must still be coverable
                for v in ctx.q_nbrs[u]:
                    if v not in hits and len(removed[v]) + remaining[v] - 1 < slack[v]:
                        ok = False
                        break
            if ok:
                # only remove up to the slack; over-removal kills badness
                over = [v for v in hits if len(removed[v]) >= slack[v]]
                if over:
                    ok = False
            if not ok:
                continue
            assignment[u] = c
            for v in ctx.q_nbrs[u]:
                remaining[v] -= 1
            for v in hits:
                removed[v].add(c)
            if rec(idx + 1):
                return True
            for v in hits:
                removed[v].discard(c)
            for v in ctx.q_nbrs[u]:
                remaining[v] += 1
            del assignment[u]
        return False

    if rec(0):
        return dict(assignment)
    return None


def _fast_free_paths(
    g: PlaneGraph, part: TruncPartition, ctx: _LocalContext, coloring: Mapping[int, int]
) -> Optional[str]:
    """The two cheap sufficient conditions for freeness (or a non-Gallai
    remainder); returns a tag naming the path that fired."""
    if not ctx.rem:
        return "empty"
    if not is_gallai_tree_adjacency(ctx.rem_adj):
        return "not-gallai"
    for v in ctx.rem:
        deg_gx = len(ctx.rem_adj[v]) + sum(
            1 for u in g.adjacency[v] if u in part.v2 and u not in coloring
        )
        if len(ctx.res_q[v]) > deg_gx:
            return "surplus-list"
    from .blocks import block_cut_tree_from_adjacency

    bct = block_cut_tree_from_adjacency(ctx.rem_adj)
    for b in bct.blocks:
        non_cut = [v for v in b if v not in bct.cut_vertices]
        for v, w in itertools.combinations(sorted(non_cut), 2):
            if ctx.res_q[v] != ctx.res_q[w]:
                nv = {u for u in g.adjacency[v] if u in part.v2 and u not in coloring}
                nw = {u for u in g.adjacency[w] if u in part.v2 and u not in coloring}
                if nv == nw:
                    return "twin-lists"
    return None


def _freeness(
    g: PlaneGraph,
    part: TruncPartition,
    coloring: Mapping[int, int],
    L: ListAssignment,
    comp_idx: int,
    budget: _Budget,
    cross_check: bool = False,
) -> Freeness:
    ctx = _local_context(g, part, coloring, L, comp_idx)
    fast = _fast_free_paths(g, part, ctx, coloring)
    if fast is not None and not cross_check:
        return Freeness.FREE
    bounds_ok = all(
        len(ctx.res_q[v])
        >= len(ctx.rem_adj[v])
        + sum(1 for u in ctx.s_verts if v in ctx.q_nbrs[u])
        for v in ctx.rem
    ) and all(v in ctx.res_q for v in ctx.rem)
    try:
        if bounds_ok:
            witness = _bad_extension_search(ctx, {}, budget)
            exact = Freeness.NOT_FREE if witness is not None else Freeness.FREE
        else:
            exact = _freeness_by_enumeration(ctx, budget)
    except OracleCapExceeded:
        if fast is not None:
            return Freeness.FREE
        return Freeness.UNKNOWN
    if fast is not None and exact is not Freeness.FREE:
        raise InvariantError(
            f"fast freeness path '{fast}' disagrees with the exact oracle"
        )
    return exact


def _freeness_by_enumeration(ctx: _LocalContext, budget: _Budget) -> Freeness:
    """Exact freeness by full local enumeration plus a colourability
    check per assignment (used when residuals fall below the usual
    degree bounds and badness no longer captures colourability)."""
    order = sorted(ctx.s_verts)
    assignment: dict[int, int] = {}

    def colorable_now() -> bool:
        lists = {
            v: ctx.res_q[v]
            - {assignment[u] for u in ctx.s_verts if u in assignment and v in ctx.q_nbrs[u]}
            for v in ctx.rem
        }
        return _solve_adjacency(ctx.rem_adj, lists) is not None

    def rec(idx: int) -> bool:  # True when some extension defeats the lists
        if idx == len(order):
            return not colorable_now()
        u = order[idx]
        for c in sorted(ctx.res_s[u]):
            budget.spend()
            if any(assignment.get(w) == c for w in ctx.s_edges[u]):
                continue
            assignment[u] = c
            if rec(idx + 1):
                return True
            del assignment[u]
        return False

    return Freeness.NOT_FREE if rec(0) else Freeness.FREE


def _solve_adjacency(
    adj: Mapping[int, Sequence[int]], lists: Mapping[int, frozenset[int]]
) -> Optional[dict[int, int]]:
    verts = sorted(adj)
    relabel = {v: i for i, v in enumerate(verts)}
    edges = [
        (relabel[u], relabel[v]) for u in verts for v in adj[u] if u < v
    ]
    sub = PlaneGraph.from_edges(len(verts), edges)
    universe = max((c for lst in lists.values() for c in lst), default=0) + 1
    L = ListAssignment(
        universe=universe, lists=tuple(lists[v] for v in verts)
    )
    sol = solve_list_coloring(sub, L)
    if sol is None:
        return None
    return {v: sol[relabel[v]] for v in verts}


def is_free(
    g: PlaneGraph,
    part: TruncPartition,
    comp_idx: int,
    pc: PartialColoring,
    L: ListAssignment,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
) -> Freeness:
    """Whether the component is guaranteed colourable under every
    completion of the high-degree colouring (exact under the local
    neighbourhood reading; UNKNOWN when the budget runs out)."""
    return _freeness(g, part, dict(pc.color), L, comp_idx, _Budget(oracle_cap))


@dataclass
class SaviorResult:
    vertex: int
    component: int
    cost_set: frozenset[int]
    is_savior: bool
    full_size: int


def _savior(
    g: PlaneGraph,
    part: TruncPartition,
    coloring: Mapping[int, int],
    L: ListAssignment,
    u: int,
    comp_idx: int,
    budget: _Budget,
) -> SaviorResult:
    if u in coloring or u not in part.v2:
        raise GraphError("savior vertex must be an uncoloured high-degree vertex")
    ctx = _local_context(g, part, coloring, L, comp_idx, extra=[u])
    dangerous: set[int] = set()
    for c in sorted(ctx.res_s[u]):
        if _bad_extension_search(ctx, {u: c}, budget) is not None:
            dangerous.add(c)
    return SaviorResult(
        vertex=u,
        component=comp_idx,
        cost_set=frozenset(dangerous),
        is_savior=len(dangerous) <= 3,
        full_size=len(dangerous),
    )


def savior_cost_set(
    g: PlaneGraph,
    part: TruncPartition,
    u: int,
    comp_idx: int,
    pc: PartialColoring,
    L: ListAssignment,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
) -> SaviorResult:
    """The set of colours of u that admit a defeating local extension of
    the component's lists; u is a savior when at most 3 exist."""
    return _savior(g, part, dict(pc.color), L, u, comp_idx, _Budget(oracle_cap))


def confined_colors(
    g: PlaneGraph,
    part: TruncPartition,
    w: int,
    comp_idx: int,
    pc: PartialColoring,
    L: ListAssignment,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
) -> dict[int, bool]:
    """Diagnostic: colours c of w such that defeating extensions exist
    and all of them put c on w (w is pinned to c)."""
    coloring = dict(pc.color)
    budget = _Budget(oracle_cap)
    ctx = _local_context(g, part, coloring, L, comp_idx, extra=[w])
    dangerous = {
        c
        for c in ctx.res_s[w]
        if _bad_extension_search(ctx, {w: c}, budget) is not None
    }
    out = {}
    for c in sorted(ctx.res_s[w]):
        pinned = dangerous == {c}
        if pinned:
            for v in ctx.q_nbrs[w]:
                if c not in ctx.res_q[v]:
                    raise InvariantError(
                        "pinned colour missing from a remainder neighbour list"
                    )
        out[c] = pinned
    return out


# ---------------------------------------------------------------------------
# the colouring process
# ---------------------------------------------------------------------------


@dataclass
class StepRecord:
    step: int
    rule: str
    vertex: int
    color: int
    avoid: frozenset[int]
    residual_size: int
    all_saviors: bool
    in_v2: bool


@dataclass
class FailureTrace:
    kind: str  # "empty-palette" or "completion-unsat"
    step: int
    vertex: Optional[int]
    component: Optional[int]
    residual: frozenset[int]
    cost_sets: dict[int, frozenset[int]]
    free_flags: dict[int, bool]

    def render(self) -> list[str]:
        lines = [
            f"FAIL kind={self.kind} step={self.step} vertex={self.vertex} "
            f"component={self.component} residual={format_avoid(self.residual)}"
        ]
        for q, s in sorted(self.cost_sets.items()):
            lines.append(f"FAIL-COST component={q} set={format_avoid(s)}")
        lines.append(
            "FAIL-FREE "
            + " ".join(f"{q}:{'free' if f else 'bound'}" for q, f in sorted(self.free_flags.items()))
        )
        return lines


@dataclass
class ProcedureState:
    order: tuple[int, ...]
    partial: PartialColoring
    step: int
    i_u: dict[int, int]
    protectors: dict[int, frozenset[int]]  # component -> protector vertices
    savior_cache: dict[tuple[int, int], SaviorResult]
    free_at: dict[int, int]  # component -> step it became free
    confined: dict[tuple[int, int], dict[int, bool]] = field(default_factory=dict)


@dataclass
class ProcedureResult:
    coloring: Optional[dict[int, int]]
    failure: Optional[FailureTrace]
    state: ProcedureState
    steps: list[StepRecord]
    trace_lines: list[str]

    @property
    def succeeded(self) -> bool:
        return self.coloring is not None


def derive_protectors(
    part: TruncPartition, vn: VeryNiceSubgraph, isolated_v_star: bool
) -> dict[int, frozenset[int]]:
    out = {}
    for qi, theta in enumerate(part.theta_q):
        prot = {
            u
            for (u, f) in vn.incidences
            if f == theta and not (u == vn.v_star and not isolated_v_star)
        }
        out[qi] = frozenset(prot)
    return out


def theorem_demand(
    g: PlaneGraph, part: TruncPartition, v_star: int
) -> dict[int, int]:
    """The demand the main theorem colours against: 12 on the
    high-degree side (1 at the designated start unless isolated there),
    degree on the low-degree side."""
    isolated = all(u not in part.v2 for u in g.adjacency[v_star])
    f = {}
    for v in range(g.n):
        if v in part.v1:
            f[v] = g.degree(v)
        elif v == v_star and not isolated:
            f[v] = 1
        else:
            f[v] = part.k
    return f


def run_procedure(
    g: PlaneGraph,
    part: TruncPartition,
    L: ListAssignment,
    vn: VeryNiceSubgraph,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
    strict: bool = True,
) -> ProcedureResult:
    """Run the guarded colouring process to completion or failure.

    ``vn`` must be a very nice subgraph of the vertex-face incidences of
    the high-degree subgraph (its face ids match ``part.subfaces``).
    In strict mode every invariant of the process is re-checked at every
    step; failures of those are bugs and raise, while a legitimately
    stuck run returns a failure trace.
    """
    v_star = vn.v_star
    isolated_v_star = all(u not in part.v2 for u in g.adjacency[v_star])
    demand = theorem_demand(g, part, v_star)
    for v in range(g.n):
        if len(L.lists[v]) < demand[v]:
            raise GraphError(
                f"list of {v} smaller than the demanded {demand[v]}"
            )

    order = build_order(g, part, v_star)
    protectors = derive_protectors(part, vn, isolated_v_star)
    n_comps = len(part.components)
    for qi in range(n_comps):
        non_prot = part.boundary(qi) - protectors[qi]
        if len(non_prot) > 2:
            raise InvariantError(
                f"component {qi} has {len(non_prot)} non-protectors"
            )
        if part.theta_q[qi] == part.subfaces.infinite_face:
            if non_prot - {v_star}:
                raise InvariantError(
                    "infinite face has a non-protector besides the start vertex"
                )
    prot_load: dict[int, int] = {}
    for qi in range(n_comps):
        for u in protectors[qi]:
            prot_load[u] = prot_load.get(u, 0) + 1
    if any(c > 2 for c in prot_load.values()):
        raise InvariantError("a vertex protects more than two components")

    coloring: dict[int, int] = {}
    i_u: dict[int, int] = {}
    free_at: dict[int, int] = {}
    savior_cache: dict[tuple[int, int], SaviorResult] = {}
    steps: list[StepRecord] = []
    trace: list[str] = []
    budget = _Budget(oracle_cap)
    v2_pending = list(order)

    def residual(v: int) -> frozenset[int]:
        return L.lists[v] - {
            coloring[u] for u in g.adjacency[v] if u in coloring
        }

    def refresh_freeness(step: int) -> None:
        for qi in range(n_comps):
            if qi in free_at:
                if strict:
                    f = _freeness(g, part, coloring, L, qi, budget)
                    if f is Freeness.NOT_FREE:
                        raise InvariantError(
                            f"component {qi} became free and then bound again"
                        )
                continue
            f = _freeness(g, part, coloring, L, qi, budget, cross_check=strict)
            if f is Freeness.FREE:
                free_at[qi] = step
                trace.append(f"FREE {qi} AT {step}")

    def check_valid() -> None:
        for qi, comp in enumerate(part.components):
            rem = [v for v in comp if v not in coloring]
            if rem:
                adj = induced_adjacency(g, rem)
                if len(adjacency_components(adj)) != 1:
                    raise InvariantError(f"remainder of component {qi} disconnected")
            for v in comp:
                if v in coloring:
                    for u in g.adjacency[v]:
                        if u in part.v2 and u not in coloring:
                            raise InvariantError(
                                f"coloured low vertex {v} sees uncoloured {u}"
                            )
            for v in comp:
                if v not in coloring:
                    deg_rem = sum(
                        1 for u in g.adjacency[v] if u not in coloring
                    )
                    if len(residual(v)) < deg_rem:
                        raise InvariantError(
                            f"residual of {v} fell below its remaining degree"
                        )
        for u in part.v2:
            if u not in coloring:
                colored_high = sum(
                    1
                    for w in g.adjacency[u]
                    if w in part.v2 and w in coloring
                )
                if len(residual(u)) < demand[u] - colored_high:
                    raise InvariantError(
                        f"residual of high vertex {u} below its demand minus "
                        "coloured neighbours"
                    )

    step = 0
    refresh_freeness(step)
    while v2_pending:
        # (R1): colour a safe vertex of a still-bound component
        r1_vertex = None
        r1_comp = None
        for qi, comp in enumerate(part.components):
            if qi in free_at:
                continue
            rem = sorted(v for v in comp if v not in coloring)
            if len(rem) < 2:
                continue
            adj = induced_adjacency(g, rem)
            arts = articulation_points(adj)
            for v in rem:
                if v in arts:
                    continue
                if any(
                    u in part.v2 and u not in coloring
                    for u in g.adjacency[v]
                ):
                    continue
                if r1_vertex is None or v < r1_vertex:
                    r1_vertex = v
                    r1_comp = qi
                break
        if r1_vertex is not None:
            res = residual(r1_vertex)
            if not res:
                raise InvariantError("rule one found an empty residual")
            c = min(res)
            step += 1
            coloring[r1_vertex] = c
            steps.append(
                StepRecord(step, "R1", r1_vertex, c, frozenset(), len(res), True, False)
            )
            trace.append(
                f"STEP {step} RULE R1 VERTEX {r1_vertex} COLOR {c} AVOID -"
            )
            if strict:
                check_valid()
            refresh_freeness(step)
            continue

        # (R2): colour the next high-degree vertex
        u = v2_pending.pop(0)
        res = residual(u)
        cost_sets: dict[int, frozenset[int]] = {}
        all_saviors = True
        for qi in range(n_comps):
            if u not in protectors[qi] or qi in free_at:
                continue
            sr = _savior(g, part, coloring, L, u, qi, budget)
            savior_cache[(u, qi)] = sr
            if sr.is_savior:
                cost_sets[qi] = sr.cost_set
            else:
                all_saviors = False
                trace.append(f"NONSAVIOR {u} COMP {qi} SIZE {sr.full_size}")
        avoid = frozenset().union(*cost_sets.values()) if cost_sets else frozenset()
        palette = res - avoid
        step += 1
        i_u[u] = step
        if not palette:
            failure = FailureTrace(
                kind="empty-palette",
                step=step,
                vertex=u,
                component=None,
                residual=res,
                cost_sets=cost_sets,
                free_flags={qi: qi in free_at for qi in range(n_comps)},
            )
            trace.extend(failure.render())
            return ProcedureResult(
                coloring=None,
                failure=failure,
                state=ProcedureState(
                    order=order,
                    partial=PartialColoring(dict(coloring)),
                    step=step,
                    i_u=i_u,
                    protectors=protectors,
                    savior_cache=savior_cache,
                    free_at=free_at,
                ),
                steps=steps,
                trace_lines=trace,
            )
        c = min(palette)
        coloring[u] = c
        steps.append(
            StepRecord(step, "R2", u, c, avoid, len(res), all_saviors, True)
        )
        trace.append(
            f"STEP {step} RULE R2 VERTEX {u} COLOR {c} AVOID {format_avoid(avoid)}"
        )
        if strict:
            if part.k == 12 and all_saviors and (u != v_star or isolated_v_star):
                if len(res) < 7 or len(avoid) > 6:
                    raise InvariantError(
                        f"budget identity violated at step {step}: "
                        f"|res|={len(res)} |avoid|={len(avoid)}"
                    )
            check_valid()
        refresh_freeness(step)

    # completion: extend each remaining component from its residuals
    for qi, comp in enumerate(part.components):
        rem = sorted(v for v in comp if v not in coloring)
        if not rem:
            continue
        adj = induced_adjacency(g, rem)
        lists = {v: residual(v) for v in rem}
        sol = _solve_adjacency(adj, lists)
        if sol is None:
            failure = FailureTrace(
                kind="completion-unsat",
                step=step,
                vertex=None,
                component=qi,
                residual=frozenset(),
                cost_sets={},
                free_flags={q: q in free_at for q in range(n_comps)},
            )
            trace.extend(failure.render())
            return ProcedureResult(
                coloring=None,
                failure=failure,
                state=ProcedureState(
                    order=order,
                    partial=PartialColoring(dict(coloring)),
                    step=step,
                    i_u=i_u,
                    protectors=protectors,
                    savior_cache=savior_cache,
                    free_at=free_at,
                ),
                steps=steps,
                trace_lines=trace,
            )
        coloring.update(sol)

    # independent final check: proper and list-respecting everywhere
    for v in range(g.n):
        if v not in coloring:
            raise InvariantError(f"vertex {v} left uncoloured")
        if coloring[v] not in L.lists[v]:
            raise InvariantError(f"vertex {v} coloured outside its list")
        for u in g.adjacency[v]:
            if coloring[u] == coloring[v]:
                raise InvariantError(f"edge {v}-{u} monochromatic")

    return ProcedureResult(
        coloring=coloring,
        failure=None,
        state=ProcedureState(
            order=order,
            partial=PartialColoring(dict(coloring)),
            step=step,
            i_u=i_u,
            protectors=protectors,
            savior_cache=savior_cache,
            free_at=free_at,
        ),
        steps=steps,
        trace_lines=trace,
    )
