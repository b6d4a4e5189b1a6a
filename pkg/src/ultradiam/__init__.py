"""Finite ultrametric spaces: diameters, diametrical pairs and graph chains."""

from .chains import (
    GraphChain,
    chain_from_ultrametric,
    realize_spectrum,
    ultrametric_from_chain,
    validate_chain,
)
from .core import (
    DistanceMatrix,
    Partition,
    UltrametricSpace,
    Violation,
    certify_ultrametric,
    diam,
    equiv_partition,
    format_scalar,
    parse_matrix,
    parse_scalar,
    restrict,
    spectrum,
    ultrametric,
)
from .dendro import (
    Leaf,
    Node,
    dendrogram_from_ultrametric,
    to_newick,
    ultrametric_from_dendrogram,
)
from .diamfn import (
    DiameterFunction,
    ball,
    check_axioms,
    check_ball_dichotomy,
    synthesize_ultrametric,
    tau_from_space,
)
from .dipgraph import (
    SimpleGraph,
    dip_graph,
    dip_report,
    extend_with_apex,
    is_complete_multipartite,
    multipartite_edge_bound,
    ultrametric_from_partition,
)

__version__ = "0.1.0"

__all__ = [
    "ball",
    "certify_ultrametric",
    "chain_from_ultrametric",
    "check_axioms",
    "check_ball_dichotomy",
    "dendrogram_from_ultrametric",
    "diam",
    "DiameterFunction",
    "dip_graph",
    "dip_report",
    "DistanceMatrix",
    "equiv_partition",
    "extend_with_apex",
    "format_scalar",
    "GraphChain",
    "is_complete_multipartite",
    "Leaf",
    "multipartite_edge_bound",
    "Node",
    "parse_matrix",
    "parse_scalar",
    "Partition",
    "realize_spectrum",
    "restrict",
    "SimpleGraph",
    "spectrum",
    "synthesize_ultrametric",
    "tau_from_space",
    "to_newick",
    "ultrametric",
    "ultrametric_from_chain",
    "ultrametric_from_dendrogram",
    "ultrametric_from_partition",
    "UltrametricSpace",
    "validate_chain",
    "Violation",
]
