"""Exact linear algebra over the Gaussian rationals."""

from .filtration import IncFiltration, dual_filtration, induced
from .matrix import Matrix, jordan_nilpotent, shift_matrix
from .scalar import I, Gauss, conj, make, to_scalar
from .subspace import Quotient, Subspace, image, intersect_all, is_direct_sum, kernel, sum_all, transport

__all__ = [
    "Gauss", "I", "IncFiltration", "Matrix", "Quotient", "Subspace", "conj", "dual_filtration",
    "image", "induced", "intersect_all", "is_direct_sum", "jordan_nilpotent", "kernel", "make",
    "shift_matrix", "sum_all", "to_scalar", "transport",
]
