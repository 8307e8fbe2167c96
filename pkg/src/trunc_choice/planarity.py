"""Planarity testing with an embedding witness."""

from __future__ import annotations

from typing import Optional

import networkx as nx

from .plane import PlaneGraph, trace_faces


def is_planar(g: PlaneGraph) -> tuple[bool, Optional[tuple[tuple[int, ...], ...]]]:
    """Test planarity; on success also return a witnessing rotation system.

    The returned rotation is stored counterclockwise by convention (a
    combinatorial embedding and its mirror are both genus-0, so the
    chirality is a pure convention).  For connected graphs the witness
    is certified by face tracing and Euler's formula.
    """
    if g.n == 0:
        return True, None
    nxg = nx.Graph()
    nxg.add_nodes_from(range(g.n))
    nxg.add_edges_from(g.edges())
    ok, embedding = nx.check_planarity(nxg)
    if not ok:
        return False, None
    data = embedding.get_data()
    rotation = tuple(tuple(reversed(data[v])) for v in range(g.n))
    witness = g.with_rotation(rotation)
    if witness.is_connected():
        trace_faces(witness)  # raises if the witness is not genus-0
    return True, rotation
