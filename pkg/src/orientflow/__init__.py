"""Flow-preserving bijection between feasible subgraphs and feasible orientations."""

from .bijection import InfeasibleInput, NotAnOrientation, NotASubgraph, RuleConflict, phi, phi_step, psi, psi_step
from .connectivity import PathSet, decompose_flow, k_disjoint_paths, st_demand, vertex_disjoint_paths, vertex_split
from .graph_core import (
    Arc,
    DirectedSubgraph,
    Kind,
    WeightedGraph,
    chi,
    classify,
    decode_orientation,
    decode_subgraph,
    encode_orientation,
    encode_subgraph,
    orient_insert,
    pair_insert,
    pair_remove,
    parse_graph,
    rev,
)
from .mcf_solver import Demand, IntegralFlow, LexCost, NoFeasibleFlow, feasible, lex_cost, min_cost_flow, parse_demand

__version__ = "0.1.0"
