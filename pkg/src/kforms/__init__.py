"""Exact computations with graded algebras defined by multilinear forms."""
from .scalar import FieldSpec, Scalar, QQ, field_arith, nth_root_of_unity
from .tensor import MultilinearForm, Subspace

__all__ = ["FieldSpec", "Scalar", "QQ", "field_arith", "nth_root_of_unity", "MultilinearForm", "Subspace"]
