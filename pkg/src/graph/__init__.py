"""
Finite weighted graphs: construction, parsing, structural sets, depths and branches.
"""
from .weighted_graph import Branch, ParsedGraph, WeightedGraph, load_graph, parse_graph, serialize_graph
from .structure import (
    DepthAssignment,
    StructuralVerdict,
    compute_depths,
    enumerate_branches,
    interior_digraph,
    is_structural_set,
    require_structural,
)

__all__ = [
    "Branch",
    "DepthAssignment",
    "ParsedGraph",
    "StructuralVerdict",
    "WeightedGraph",
    "compute_depths",
    "enumerate_branches",
    "interior_digraph",
    "is_structural_set",
    "load_graph",
    "parse_graph",
    "require_structural",
    "serialize_graph",
]
