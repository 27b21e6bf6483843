"""Exact dimer-model computations on bipartite graphs in the torus."""
from .errors import DimerError
from .exactalg import Jet, LaurentPoly2
from .torusgraph import TorusGraph, load_graph, parse_graph, serialize_graph, validate

__version__ = "0.1.0"

__all__ = [
    "DimerError",
    "Jet",
    "LaurentPoly2",
    "TorusGraph",
    "load_graph",
    "parse_graph",
    "serialize_graph",
    "validate",
    "__version__",
]
