"""Text file formats for graphs, colour lists, and colourings.

Graph file (UTF-8, ``#`` comments, 0-based ids)::

    g <n> <m>
    e <u> <v>                 one line per edge
    r <v> <n1> <n2> ...       optional cyclic counterclockwise rotation
    outer <v1> <v2> ...       optional infinite-face boundary walk

List file::

    u <universe-size>
    l <v> <c1> <c2> ...       one line per vertex with a non-empty list

Colouring output is one ``c <v> <color>`` line per vertex, or the
single token ``UNSAT`` when no colouring exists.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Optional, TextIO

from .choosability import ListAssignment
from .plane import GraphError, PlaneGraph


class FormatError(GraphError):
    """Malformed input file."""


def _tokens(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((lineno, line.split()))
    return out


def parse_graph(text: str) -> PlaneGraph:
    n = None
    m = None
    edges: list[tuple[int, int]] = []
    rotation: dict[int, tuple[int, ...]] = {}
    outer: Optional[tuple[int, ...]] = None
    for lineno, toks in _tokens(text):
        kind = toks[0]
        try:
            if kind == "g":
                if n is not None:
                    raise FormatError(f"line {lineno}: duplicate g line")
                n, m = int(toks[1]), int(toks[2])
            elif kind == "e":
                edges.append((int(toks[1]), int(toks[2])))
            elif kind == "r":
                v = int(toks[1])
                if v in rotation:
                    raise FormatError(f"line {lineno}: duplicate rotation for {v}")
                rotation[v] = tuple(int(t) for t in toks[2:])
            elif kind == "outer":
                outer = tuple(int(t) for t in toks[1:])
            else:
                raise FormatError(f"line {lineno}: unknown record '{kind}'")
        except (IndexError, ValueError) as exc:
            raise FormatError(f"line {lineno}: {exc}") from exc
    if n is None:
        raise FormatError("missing g line")
    if len(edges) != m:
        raise FormatError(f"g line declares {m} edges, found {len(edges)}")
    rot = None
    if rotation:
        missing = [v for v in range(n) if v not in rotation and _deg(edges, v)]
        if missing:
            raise FormatError(f"rotation missing for vertices {missing[:5]}")
        rot = [rotation.get(v, ()) for v in range(n)]
    try:
        return PlaneGraph.from_edges(n, edges, rotation=rot, outer_walk=outer)
    except GraphError as exc:
        raise FormatError(str(exc)) from exc


def _deg(edges: list[tuple[int, int]], v: int) -> int:
    return sum(1 for e in edges if v in e)


def write_graph(g: PlaneGraph, out: TextIO) -> None:
    out.write(f"g {g.n} {g.m}\n")
    for u, v in g.edges():
        out.write(f"e {u} {v}\n")
    if g.has_rotation:
        for v in range(g.n):
            if g.rotation[v]:
                out.write(f"r {v} " + " ".join(map(str, g.rotation[v])) + "\n")
    if g.outer_walk is not None:
        out.write("outer " + " ".join(map(str, g.outer_walk)) + "\n")


def parse_lists(text: str, n: int) -> ListAssignment:
    universe = None
    lists: dict[int, frozenset[int]] = {}
    for lineno, toks in _tokens(text):
        kind = toks[0]
        try:
            if kind == "u":
                if universe is not None:
                    raise FormatError(f"line {lineno}: duplicate u line")
                universe = int(toks[1])
            elif kind == "l":
                v = int(toks[1])
                if v in lists:
                    raise FormatError(f"line {lineno}: duplicate list for {v}")
                lists[v] = frozenset(int(t) for t in toks[2:])
            else:
                raise FormatError(f"line {lineno}: unknown record '{kind}'")
        except (IndexError, ValueError) as exc:
            raise FormatError(f"line {lineno}: {exc}") from exc
    if universe is None:
        raise FormatError("missing u line")
    for v in lists:
        if not 0 <= v < n:
            raise FormatError(f"list for out-of-range vertex {v}")
    full = tuple(lists.get(v, frozenset()) for v in range(n))
    try:
        return ListAssignment(universe=universe, lists=full)
    except GraphError as exc:
        raise FormatError(str(exc)) from exc


def write_lists(L: ListAssignment, out: TextIO) -> None:
    out.write(f"u {L.universe}\n")
    for v, lst in enumerate(L.lists):
        if lst:
            out.write(f"l {v} " + " ".join(map(str, sorted(lst))) + "\n")


def write_coloring(coloring: Optional[Mapping[int, int]], out: TextIO) -> None:
    if coloring is None:
        out.write("UNSAT\n")
        return
    for v in sorted(coloring):
        out.write(f"c {v} {coloring[v]}\n")


def format_avoid(colors: Iterable[int]) -> str:
    cs = sorted(colors)
    return ",".join(map(str, cs)) if cs else "-"
