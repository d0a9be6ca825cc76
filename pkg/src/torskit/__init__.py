"""torskit: exact torsion-class lattices for small quiver algebras."""

from . import errors
from .algebra import AlgebraSpec, parse_algebra
from .lattice import Lattice, build_lattice, build_lattice_from_leq

__all__ = [
    "errors",
    "AlgebraSpec",
    "parse_algebra",
    "Lattice",
    "build_lattice",
    "build_lattice_from_leq",
]
