"""Exact Hochschild cohomology, its Gerstenhaber structure, and the 2-algebra bracket."""

from .algebra import AlgebraSpec, sample_library
from .cochain import Cochain, cohomology, differential, is_coboundary, signed_differential
from .gerst import bracket_signed, circle, cup, signed_cup

__version__ = "0.1.0"

__all__ = [
    "AlgebraSpec",
    "Cochain",
    "bracket_signed",
    "circle",
    "cohomology",
    "cup",
    "differential",
    "is_coboundary",
    "sample_library",
    "signed_cup",
    "signed_differential",
]
