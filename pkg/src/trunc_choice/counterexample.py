"""The 24-vertex gadget, its 56-copy assembly, and the full verification.

Colour encoding: the eight "pole" colours a..h map to 0..7 and the
numeric colours 1..7 map to 8..14 (universe size 15).  Every report
embeds this legend.

The gadget is reconstructed from its seven induced K4s, the two
linking edges s5-s8 / t5-t8, and the attachments of x and y.  Beyond
the three/eight small-list attachments, x and y are each adjacent to
all of u1, u2, v1, v2: the base lists of those vertices contain both a
and b, and the forcing chain needs both removed once x and y are
coloured.  Every vertex with a list smaller than 8 then has list size
equal to its degree, and the whole construction is certified
computationally (planarity, 3-connectivity, non-completeness, demand
feasibility, and unsatisfiability of all 56 copies).
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from multiprocessing import Pool
from typing import Optional, Sequence

from .blocks import connectivity_at_least
from .choosability import (
    ListAssignment,
    SolveStats,
    enumerate_list_colorings,
    solve_list_coloring,
)
from .plane import GraphError, PlaneGraph, trace_faces
from .planarity import is_planar

POLE_COLORS = "abcdefgh"  # 0..7
NUM_COLOR_BASE = 7  # numeric colour i (1..7) encodes as 7 + i
UNIVERSE = 15

GADGET_NAMES = (
    ["x", "y", "u1", "u2", "v1", "v2", "w1", "w2"]
    + [f"s{i}" for i in range(1, 9)]
    + [f"t{i}" for i in range(1, 9)]
)
_ID = {name: i for i, name in enumerate(GADGET_NAMES)}

A, B = 0, 1  # symbolic a and b in the base gadget


def color_name(c: int) -> str:
    return POLE_COLORS[c] if c < 8 else str(c - NUM_COLOR_BASE)


def color_legend() -> list[str]:
    pole = " ".join(f"{POLE_COLORS[i]}={i}" for i in range(8))
    nums = " ".join(f"{i}={NUM_COLOR_BASE + i}" for i in range(1, 8))
    return [f"LEGEND pole-colours {pole}", f"LEGEND numeric-colours {nums}"]


def _nc(i: int) -> int:
    """Numeric colour i (1..7) as an integer colour."""
    return NUM_COLOR_BASE + i


_K4S = (
    ("u1", "v1", "w1", "w2"),
    ("u1", "u2", "s1", "s2"),
    ("u1", "s3", "s4", "s5"),
    ("u2", "s6", "s7", "s8"),
    ("v1", "v2", "t1", "t2"),
    ("v1", "t3", "t4", "t5"),
    ("v2", "t6", "t7", "t8"),
)
_X_SMALL = ("s1", "t1", "w1")
_Y_SMALL = ("s4", "s5", "s7", "s8", "t4", "t5", "t7", "t8")
_BIG = ("u1", "u2", "v1", "v2")


def _base_lists() -> dict[str, frozenset[int]]:
    n123 = frozenset({_nc(1), _nc(2), _nc(3)})
    n456 = frozenset({_nc(4), _nc(5), _nc(6)})
    big = frozenset({A, B}) | n123 | n456
    out = {
        "x": frozenset({A}),
        "y": frozenset({B}),
        "u1": big, "u2": big, "v1": big, "v2": big,
        "s1": n123 | {A}, "t1": n123 | {A}, "w1": n456 | {A},
        "s2": n123, "t2": n123, "s3": n123, "t3": n123,
        "w2": n456, "s6": n456, "t6": n456,
        "s4": n123 | {B}, "t4": n123 | {B},
        "s7": n456 | {B}, "t7": n456 | {B},
        "s5": n123 | {B, _nc(7)}, "t5": n123 | {B, _nc(7)},
        "s8": n456 | {B, _nc(7)}, "t8": n456 | {B, _nc(7)},
    }
    return out


def _gadget_edges() -> set[tuple[int, int]]:
    edges: set[tuple[int, int]] = set()

    def add(a: str, b: str) -> None:
        u, v = _ID[a], _ID[b]
        edges.add((min(u, v), max(u, v)))

    for quad in _K4S:
        for a, b in itertools.combinations(quad, 2):
            add(a, b)
    add("s5", "s8")
    add("t5", "t8")
    for z in _X_SMALL + _BIG:
        add("x", z)
    for z in _Y_SMALL + _BIG:
        add("y", z)
    return edges


@dataclass(frozen=True)
class GadgetH:
    """The gadget graph with its symbolic list assignment (a=0, b=1)."""

    graph: PlaneGraph
    lists: ListAssignment

    def vertex(self, name: str) -> int:
        return _ID[name]

    def substituted_lists(self, alpha: int, beta: int) -> ListAssignment:
        """Lists of a copy assigned poles (alpha, beta) in place of (a, b)."""
        if alpha == beta or not (0 <= alpha < 8 and 0 <= beta < 8):
            raise GraphError("pole colours must be distinct values in 0..7")
        sub = {A: alpha, B: beta}
        return ListAssignment(
            universe=UNIVERSE,
            lists=tuple(
                frozenset(sub.get(c, c) for c in lst) for lst in self.lists.lists
            ),
        )


def build_gadget() -> GadgetH:
    """Reconstruct the gadget and assert its structural invariants."""
    edges = _gadget_edges()
    lists_by_name = _base_lists()
    g = PlaneGraph.from_edges(24, edges, labels=GADGET_NAMES)
    if g.m != 63:
        raise GraphError(f"gadget has {g.m} edges, expected 63")
    for quad in _K4S:
        ids = [_ID[a] for a in quad]
        for a, b in itertools.combinations(ids, 2):
            if not g.has_edge(a, b):
                raise GraphError(f"missing K4 edge in {quad}")
    for name, nbrs in (("x", _X_SMALL + _BIG), ("y", _Y_SMALL + _BIG)):
        want = sorted(_ID[z] for z in nbrs)
        if list(g.adjacency[_ID[name]]) != want:
            raise GraphError(f"attachments of {name} are wrong")
    L = ListAssignment(
        universe=UNIVERSE, lists=tuple(lists_by_name[n] for n in GADGET_NAMES)
    )
    for name in GADGET_NAMES:
        v = _ID[name]
        if len(L.lists[v]) < 8 and name not in ("x", "y"):
            if len(L.lists[v]) != g.degree(v):
                raise GraphError(
                    f"|L({name})| = {len(L.lists[v])} != deg = {g.degree(v)}"
                )
    ok, rotation = is_planar(g)
    if not ok:
        raise GraphError("gadget is not planar")
    return GadgetH(graph=g.with_rotation(rotation), lists=L)


@dataclass
class CertLine:
    name: str
    passed: bool
    detail: str = ""

    def render(self) -> str:
        return f"CERT {self.name} {'PASS' if self.passed else 'FAIL'} {self.detail}".rstrip()


@dataclass
class GadgetVerification:
    alpha: int
    beta: int
    certs: list[CertLine]
    nodes: int
    seconds: float

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.certs)

    def report_lines(self) -> list[str]:
        return color_legend() + [c.render() for c in self.certs]


def _forcing_check(
    h: GadgetH,
    quad: Sequence[str],
    lists: dict[str, frozenset[int]],
    predicate,
) -> bool:
    ids = sorted(_ID[a] for a in quad)
    relabel = {v: i for i, v in enumerate(ids)}
    sub_edges = [
        (relabel[u], relabel[v])
        for u, v in itertools.combinations(ids, 2)
        if h.graph.has_edge(u, v)
    ]
    sub = PlaneGraph.from_edges(4, sub_edges)
    L = ListAssignment(
        universe=UNIVERSE,
        lists=tuple(lists[GADGET_NAMES[v]] for v in ids),
    )
    colorings = list(enumerate_list_colorings(sub, L))
    if not colorings:
        return False
    by_name = [
        {name: phi[relabel[_ID[name]]] for name in quad} for phi in colorings
    ]
    return all(predicate(phi) for phi in by_name)


def verify_gadget_uncolorable(
    h: GadgetH, alpha: int = 0, beta: int = 1, extra_checks: bool = True
) -> GadgetVerification:
    """Exhaustively confirm the copy with poles (alpha, beta) has no
    proper list colouring, and replay the forcing chain as unit checks."""
    t0 = time.perf_counter()
    L = h.substituted_lists(alpha, beta)
    certs: list[CertLine] = []
    pre = {_ID["x"]: alpha, _ID["y"]: beta}

    stats = SolveStats()
    sol = solve_list_coloring(h.graph, L, precolored=pre, stats=stats)
    certs.append(
        CertLine(
            f"gadget-unsat[{color_name(alpha)}{color_name(beta)}]",
            sol is None,
            f"nodes={stats.nodes}",
        )
    )
    if sol is not None:
        raise GraphError(
            "gadget admits a colouring; the reconstruction is wrong"
        )
    alt = [(v * 5) % h.graph.n for v in range(h.graph.n)]
    stats2 = SolveStats()
    sol2 = solve_list_coloring(h.graph, L, precolored=pre, tie_rank=alt, stats=stats2)
    certs.append(
        CertLine(
            f"gadget-unsat-reordered[{color_name(alpha)}{color_name(beta)}]",
            sol2 is None,
            f"nodes={stats2.nodes}",
        )
    )

    if extra_checks:
        n123 = frozenset({_nc(1), _nc(2), _nc(3)})
        n456 = frozenset({_nc(4), _nc(5), _nc(6)})
        n16 = n123 | n456

        claim = _forcing_check(
            h,
            ("u1", "v1", "w1", "w2"),
            {"u1": n16, "v1": n16, "w1": n456, "w2": n456},
            lambda phi: phi["u1"] in n123 or phi["v1"] in n123,
        )
        certs.append(CertLine("claim-u1-or-v1-small", claim))

        f_u2 = _forcing_check(
            h,
            ("u1", "u2", "s1", "s2"),
            {"u1": n123, "u2": n16, "s1": n123, "s2": n123},
            lambda phi: phi["u2"] in n456,
        )
        certs.append(CertLine("forcing-u2-in-456", f_u2))

        f_s5 = _forcing_check(
            h,
            ("u1", "s3", "s4", "s5"),
            {"u1": n123, "s3": n123, "s4": n123, "s5": n123 | {_nc(7)}},
            lambda phi: phi["s5"] == _nc(7),
        )
        certs.append(CertLine("forcing-s5-is-7", f_s5))

        f_s8 = _forcing_check(
            h,
            ("u2", "s6", "s7", "s8"),
            {"u2": n456, "s6": n456, "s7": n456, "s8": n456 | {_nc(7)}},
            lambda phi: phi["s8"] == _nc(7),
        )
        certs.append(CertLine("forcing-s8-is-7", f_s8))

        # sanity inversions: the contradiction hinges on s5-s8 and on
        # the exact list of s5
        s5, s8 = _ID["s5"], _ID["s8"]
        pruned = [
            (u, v) for u, v in h.graph.edges() if {u, v} != {s5, s8}
        ]
        g_cut = PlaneGraph.from_edges(24, pruned)
        certs.append(
            CertLine(
                "sanity-without-s5s8-colorable",
                solve_list_coloring(g_cut, L, precolored=pre) is not None,
            )
        )
        bigger = list(L.lists)
        spare = next(c for c in range(2, 8) if c not in (alpha, beta))
        bigger[s5] = bigger[s5] | {spare}
        L_big = ListAssignment(universe=UNIVERSE, lists=tuple(bigger))
        certs.append(
            CertLine(
                "sanity-enlarged-s5-colorable",
                solve_list_coloring(h.graph, L_big, precolored=pre) is not None,
            )
        )

    return GadgetVerification(
        alpha=alpha,
        beta=beta,
        certs=certs,
        nodes=stats.nodes,
        seconds=time.perf_counter() - t0,
    )


def copy_pairs() -> list[tuple[int, int]]:
    """The 56 ordered pairs of distinct pole colours, one per copy."""
    return [(a, b) for a in range(8) for b in range(8) if a != b]


@dataclass(frozen=True)
class AssembledG:
    """56 gadget copies sharing x and y, chained through v2->u2 edges."""

    graph: PlaneGraph
    lists: ListAssignment
    legend: tuple[tuple[int, int], ...]
    copy_offset: int = 2
    copy_size: int = 22

    def copy_vertex(self, copy: int, name: str) -> int:
        if name == "x":
            return 0
        if name == "y":
            return 1
        return self.copy_offset + copy * self.copy_size + (_ID[name] - 2)


def assemble_G(check: bool = True) -> AssembledG:
    """Assemble the 1234-vertex graph and certify its invariants."""
    h = build_gadget()
    pairs = copy_pairs()
    n = 2 + 56 * 22
    edges: list[tuple[int, int]] = []
    labels = ["x", "y"] + [
        f"{name}#{i}" for i in range(56) for name in GADGET_NAMES[2:]
    ]

    def cv(copy: int, vid: int) -> int:
        if vid == _ID["x"]:
            return 0
        if vid == _ID["y"]:
            return 1
        return 2 + copy * 22 + (vid - 2)

    lists: list[frozenset[int]] = [frozenset(range(8)), frozenset(range(8))]
    for i, (a, b) in enumerate(pairs):
        subst = h.substituted_lists(a, b)
        for vid in range(2, 24):
            lists.append(subst.lists[vid])
        for u, v in h.graph.edges():
            edges.append((cv(i, u), cv(i, v)))
    for i in range(55):
        edges.append((cv(i, _ID["v2"]), cv(i + 1, _ID["u2"])))
    edges.append((0, 1))

    g = PlaneGraph.from_edges(n, edges, labels=labels)
    L = ListAssignment(universe=UNIVERSE, lists=tuple(lists))
    gg = AssembledG(graph=g, lists=L, legend=tuple(pairs))

    if check:
        ok, rotation = is_planar(g)
        if not ok:
            raise GraphError("assembled graph is not planar")
        gg = AssembledG(
            graph=g.with_rotation(rotation), lists=L, legend=tuple(pairs)
        )
        if not connectivity_at_least(g, 3):
            raise GraphError("assembled graph is not 3-connected")
        if g.m == g.n * (g.n - 1) // 2:
            raise GraphError("assembled graph is complete")
        bad = demand_violations(g, L, 8)
        if bad:
            raise GraphError(f"demand infeasible at vertices {bad[:5]}")
    return gg


def demand_violations(
    g: PlaneGraph, L: ListAssignment, k: int
) -> list[tuple[int, int, int]]:
    """Vertices whose list is smaller than the k-truncated demand."""
    out = []
    for v in range(g.n):
        need = min(g.degree(v), k)
        if len(L.lists[v]) < need:
            out.append((v, len(L.lists[v]), need))
    return out


@dataclass
class CopyStat:
    copy: int
    alpha: int
    beta: int
    unsat: bool
    nodes: int
    nodes_reordered: int
    seconds: float


@dataclass
class CounterexampleReport:
    certs: list[CertLine]
    copy_stats: list[CopyStat]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.certs)

    def report_lines(self) -> list[str]:
        lines = color_legend()
        lines += [c.render() for c in self.certs]
        for s in self.copy_stats:
            lines.append(
                f"COPY {s.copy} pair={color_name(s.alpha)}{color_name(s.beta)} "
                f"{'UNSAT' if s.unsat else 'SAT'} nodes={s.nodes} "
                f"nodes2={s.nodes_reordered} ms={s.seconds * 1000:.1f}"
            )
        return lines


def _copy_unsat(args: tuple[int, int, int]) -> CopyStat:
    copy, alpha, beta = args
    h = build_gadget()
    L = h.substituted_lists(alpha, beta)
    pre = {_ID["x"]: alpha, _ID["y"]: beta}
    t0 = time.perf_counter()
    st1 = SolveStats()
    sol1 = solve_list_coloring(h.graph, L, precolored=pre, stats=st1)
    st2 = SolveStats()
    sol2 = solve_list_coloring(
        h.graph,
        L,
        precolored=pre,
        tie_rank=[(v * 5) % h.graph.n for v in range(h.graph.n)],
        stats=st2,
    )
    return CopyStat(
        copy=copy,
        alpha=alpha,
        beta=beta,
        unsat=sol1 is None and sol2 is None,
        nodes=st1.nodes,
        nodes_reordered=st2.nodes,
        seconds=time.perf_counter() - t0,
    )


def verify_counterexample(gg: AssembledG, jobs: int = 1) -> CounterexampleReport:
    """Certify every claim about the assembly: structural certificates
    plus unsatisfiability of each of the 56 copies (each searched twice
    under different deterministic vertex orders)."""
    certs: list[CertLine] = []
    g = gg.graph

    if g.has_rotation:
        rotation: Optional[tuple] = g.rotation
        ok = True
    else:
        ok, rotation = is_planar(g)
    certs.append(CertLine("planar", ok, f"n={g.n} m={g.m}"))
    if ok and rotation is not None:
        fs = trace_faces(g if g.has_rotation else g.with_rotation(rotation))
        certs.append(
            CertLine(
                "euler",
                g.n - g.m + fs.num_faces == 2,
                f"f={fs.num_faces}",
            )
        )
    certs.append(CertLine("three-connected", connectivity_at_least(g, 3)))
    certs.append(CertLine("non-complete", g.m < g.n * (g.n - 1) // 2))
    bad = demand_violations(g, gg.lists, 8)
    certs.append(
        CertLine("demand-feasible", not bad, f"violations={len(bad)}")
    )
    exact = all(
        len(gg.lists.lists[v]) == min(g.degree(v), 8) for v in range(g.n)
    )
    certs.append(CertLine("demand-equality", exact, "|L(v)| == min(deg,8)"))

    tasks = [(i, a, b) for i, (a, b) in enumerate(gg.legend)]
    if jobs > 1:
        with Pool(jobs) as pool:
            stats = pool.map(_copy_unsat, tasks)
    else:
        stats = [_copy_unsat(t) for t in tasks]
    all_unsat = all(s.unsat for s in stats)
    certs.append(
        CertLine("copies-unsat", all_unsat, f"copies={len(stats)}")
    )
    nodesets = {s.nodes for s in stats} | {s.nodes_reordered for s in stats}
    certs.append(
        CertLine(
            "copy-node-symmetry",
            len({s.nodes for s in stats}) == 1,
            f"node-counts={sorted({s.nodes for s in stats})}",
        )
    )
    certs.append(
        CertLine(
            "not-degree-truncated-8-choosable",
            all_unsat and all(c.passed for c in certs[:6]),
        )
    )
    return CounterexampleReport(certs=certs, copy_stats=stats)
