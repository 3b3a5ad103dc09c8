"""Deterministic distributed list coloring, simulated round by round.

The package simulates synchronous message passing (LOCAL and CONGEST),
builds generalized H-partitions, reduces list color spaces and combines
these into (deg+1)-list coloring for general graphs, graphs of bounded
neighborhood independence, edge coloring and bounded-arboricity graphs.
"""

from .bni import (
    WeakReductionOutcome,
    bni_deg_plus_one,
    bni_recursive_list_color,
    edge_list_color,
    per_class_neighborhood_bound,
    weak_reduction,
)
from .degplus1 import (
    FrameworkParams,
    PreconditionError,
    arboricity_list_color,
    deg_plus_one_list_color,
    half_degree_step,
)
from .engine import CONGEST, LOCAL, NodeProgram, RunMetrics, Runner, run, run_emulated
from .graph import (
    Graph,
    Orientation,
    build_graph,
    generate,
    induced_subgraph,
    line_graph,
    orient_by_degeneracy,
)
from .hpartition import HPartition, generalized_h_partition, h_partition_fixed_bound
from .listreduce import (
    ColorSpacePartition,
    InternalError,
    ListAssignment,
    ReductionOutcome,
    oriented_reduction,
    recursive_list_color,
)
from .primitives import (
    LINIAL_K,
    DefectiveColoring,
    ProperColoring,
    linial_coloring,
    low_degree_list_color,
    relative_defective_coloring,
)

__version__ = "0.1.0"

__all__ = [
    "CONGEST",
    "LINIAL_K",
    "LOCAL",
    "ColorSpacePartition",
    "DefectiveColoring",
    "FrameworkParams",
    "Graph",
    "HPartition",
    "InternalError",
    "ListAssignment",
    "NodeProgram",
    "Orientation",
    "PreconditionError",
    "ProperColoring",
    "ReductionOutcome",
    "RunMetrics",
    "Runner",
    "WeakReductionOutcome",
    "arboricity_list_color",
    "bni_deg_plus_one",
    "bni_recursive_list_color",
    "build_graph",
    "deg_plus_one_list_color",
    "edge_list_color",
    "generalized_h_partition",
    "generate",
    "h_partition_fixed_bound",
    "half_degree_step",
    "induced_subgraph",
    "line_graph",
    "linial_coloring",
    "low_degree_list_color",
    "orient_by_degeneracy",
    "oriented_reduction",
    "per_class_neighborhood_bound",
    "recursive_list_color",
    "relative_defective_coloring",
    "run",
    "run_emulated",
    "weak_reduction",
]
