"""Exact symbolic and numerical tools for the single-mode real
skew-hermitian Weyl algebra: brackets, Lie closures, finiteness decisions,
subalgebra enumeration and classification, leading-coefficient infiniteness
certificates, and product-of-exponentials factorization of the induced
dynamics with Fock-space verification."""

from .weyl_core import (
    GaussianRational,
    SkewPoly,
    WeylPoly,
    number_op,
    schrodinger_monomials,
    skew_from_json,
    skew_to_json,
    unit_i,
)
from .lie_engine import Budget, ClosureOutcome, LieSpan, bracket, lie_closure

__version__ = "0.1.0"

__all__ = [
    "Budget",
    "ClosureOutcome",
    "GaussianRational",
    "LieSpan",
    "SkewPoly",
    "WeylPoly",
    "bracket",
    "lie_closure",
    "number_op",
    "schrodinger_monomials",
    "skew_from_json",
    "skew_to_json",
    "unit_i",
]
