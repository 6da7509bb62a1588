"""Verification toolkit for matrix groups over small local algebras,
ramification profiles, height bounds, and modular-form eligibility data."""

__version__ = "0.1.0"

from .finite_algebra import (LocalAlgebraSpec, ProductAlgebra, make_algebra,
                             parse_algebra)

__all__ = ["LocalAlgebraSpec", "ProductAlgebra", "make_algebra",
           "parse_algebra", "__version__"]
