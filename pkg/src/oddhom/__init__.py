"""Odd-cycle homomorphism thresholds: constructions, searches and certificates."""

__version__ = "0.1.0"

from .budget import BudgetExceeded
from .graph import Graph, GraphFormatError, blow_up, decode, encode, make_graph, min_degree_ratio

__all__ = [
    "BudgetExceeded",
    "Graph",
    "GraphFormatError",
    "blow_up",
    "decode",
    "encode",
    "make_graph",
    "min_degree_ratio",
]
