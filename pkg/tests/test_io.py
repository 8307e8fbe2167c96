import io

import pytest

from trunc_choice.io import (
    FormatError,
    parse_graph,
    parse_lists,
    write_coloring,
    write_graph,
    write_lists,
)


GRAPH = """\
# a triangle with rotation and outer walk
g 3 3
e 0 1
e 1 2
e 0 2
r 0 1 2
r 1 2 0
r 2 0 1
outer 0 2 1
"""


def test_graph_round_trip():
    g = parse_graph(GRAPH)
    assert g.n == 3 and g.m == 3 and g.has_rotation
    assert g.outer_walk == (0, 2, 1)
    buf = io.StringIO()
    write_graph(g, buf)
    g2 = parse_graph(buf.getvalue())
    assert g2 == g


def test_graph_errors():
    with pytest.raises(FormatError):
        parse_graph("e 0 1\n")  # missing g line
    with pytest.raises(FormatError):
        parse_graph("g 2 2\ne 0 1\n")  # wrong edge count
    with pytest.raises(FormatError):
        parse_graph("g 2 1\ne 0 1\ne 0 1\n")
    with pytest.raises(FormatError):
        parse_graph("g 2 1\ne 0 0\n")
    with pytest.raises(FormatError):
        parse_graph("g 2 1\ne 0 1\nr 0 1\n")  # rotation missing for 1
    with pytest.raises(FormatError):
        parse_graph("g 2 1\nz 0 1\ne 0 1\n")


def test_lists_round_trip():
    text = "u 5\nl 0 0 2 4\nl 2 1\n"
    la = parse_lists(text, 3)
    assert la.universe == 5
    assert la.lists == (frozenset({0, 2, 4}), frozenset(), frozenset({1}))
    buf = io.StringIO()
    write_lists(la, buf)
    assert parse_lists(buf.getvalue(), 3) == la


def test_lists_errors():
    with pytest.raises(FormatError):
        parse_lists("l 0 1\n", 2)  # missing universe
    with pytest.raises(FormatError):
        parse_lists("u 2\nl 5 0\n", 2)  # vertex out of range
    with pytest.raises(FormatError):
        parse_lists("u 2\nl 0 7\n", 2)  # colour outside universe


def test_coloring_output():
    buf = io.StringIO()
    write_coloring({1: 4, 0: 2}, buf)
    assert buf.getvalue() == "c 0 2\nc 1 4\n"
    buf2 = io.StringIO()
    write_coloring(None, buf2)
    assert buf2.getvalue() == "UNSAT\n"
