"""Exact computations on hypercomplex Lie algebras and their quaternionic Dolbeault complexes."""

from .scalars import GaussianRational, parse_scalar

__version__ = "0.1.0"

__all__ = ["GaussianRational", "parse_scalar", "__version__"]
