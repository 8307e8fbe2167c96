"""Degree-truncated list colouring of planar graphs.

A library and CLI around two artefacts: the machine-checked
construction of a 3-connected non-complete planar graph whose
degree-truncated 8-lists admit no colouring, and an executable form of
the guarded colouring process that succeeds with 12-truncated lists on
desk-scale instances.
"""

from .blocks import BlockCutTree, block_cut_tree, connectivity_at_least
from .choosability import (
    BadListCertificate,
    DemandFunction,
    ListAssignment,
    PartialColoring,
    enumerate_list_colorings,
    gallai_bad_certificate,
    is_f_choosable_tiny,
    is_gallai_tree,
    residual_lists,
    solve_list_coloring,
    truncated_assignment_demand,
)
from .counterexample import (
    AssembledG,
    GadgetH,
    assemble_G,
    build_gadget,
    demand_violations,
    verify_counterexample,
    verify_gadget_uncolorable,
)
from .plane import (
    CycleRegion,
    FaceSet,
    GraphError,
    InvariantError,
    PlaneGraph,
    SubgraphFaces,
    cycle_region,
    subgraph_faces,
    trace_faces,
)
from .planarity import is_planar
from .procedure import (
    Freeness,
    OracleCapExceeded,
    PartitionError,
    TruncPartition,
    build_order,
    check_properly_connected,
    confined_colors,
    is_free,
    partition_by_degree,
    run_procedure,
    savior_cost_set,
)
from .theta import (
    BipolarOrientation,
    ThetaGraph,
    VeryNiceSubgraph,
    bipolar_orient,
    build_theta,
    very_nice,
    very_nice_from_bipolar,
)

__version__ = "0.1.0"
