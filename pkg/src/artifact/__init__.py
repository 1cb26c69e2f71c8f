"""Planar graph covers: search engine, gadget lab, and NP-hardness reductions."""

from .graph import Graph, named, parse_graph, planarity_check, serialize_graph
from .cover import check_cover, enumerate_covers, solve_cover, solve_dumbbell
from .arrangement import SegmentArrangement, compute_crossings, intersection_graph
from .sat24 import Formula24, brute_force_sat
from .gadgets import load_catalog, verify_contract
from .reductions import (extract_assignment, extract_coloring, lift_assignment, lift_coloring,
                         reduce_sat, reduce_segments)

__all__ = [
    "Graph", "named", "parse_graph", "planarity_check", "serialize_graph",
    "check_cover", "enumerate_covers", "solve_cover", "solve_dumbbell",
    "SegmentArrangement", "compute_crossings", "intersection_graph",
    "Formula24", "brute_force_sat", "load_catalog", "verify_contract",
    "extract_assignment", "extract_coloring", "lift_assignment", "lift_coloring",
    "reduce_sat", "reduce_segments",
]

__version__ = "0.1.0"
