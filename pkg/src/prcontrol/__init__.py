"""PageRank-family centralities and their parametric and structural control."""

from .graph import (
    DanglingPolicy,
    EdgeListError,
    Graph,
    TransitionMatrix,
    is_strongly_connected,
    parse_edge_list,
    read_edge_list,
    serialize_edge_list,
    transition_matrix,
)
from .solvers import (
    CentralityVector,
    ConvergenceError,
    Damping,
    NotStronglyConnectedError,
    eigenvector_centrality,
    mpr_pagerank,
    npr_pagerank,
    pagerank,
)

__version__ = "0.1.0"
