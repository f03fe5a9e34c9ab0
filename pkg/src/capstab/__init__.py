"""Exact tools for stability of capacitated matching games: c-matching
solvers, alternating-walk machinery, the unit-capacity copy graph, vertex
stabilizers, core checks and instance generators."""

from .graph import CapacitatedGraph, Instance, InstanceError, edge_key, graph_from_edges, validate_instance
from .solvers import fractional_c_matching, is_stable_graph, max_weight_c_matching
from .stabilizer import m_vertex_stabilizer, m_vertex_stabilizer_relaxed

__all__ = [
    "CapacitatedGraph", "Instance", "InstanceError", "edge_key", "graph_from_edges", "validate_instance",
    "fractional_c_matching", "is_stable_graph", "max_weight_c_matching",
    "m_vertex_stabilizer", "m_vertex_stabilizer_relaxed",
]
