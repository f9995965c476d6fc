"""Exact arithmetic for star-products on g*, admissible graphs and Duflo-type identities."""
from . import cbh, cones, duflo, envelope, graphs, lie, star
from .errors import KvStarError
from .lie import LieAlgebra, bundled, load_algebra

__all__ = [
    "KvStarError",
    "LieAlgebra",
    "bundled",
    "cbh",
    "cones",
    "duflo",
    "envelope",
    "graphs",
    "lie",
    "load_algebra",
    "star",
]
__version__ = "0.1.0"
