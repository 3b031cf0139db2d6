"""Exact linear algebra of degenerating variations of mixed Hodge structure."""

from .exactlin import Gauss, I, IncFiltration, Matrix, Quotient, Subspace
from .monodromy import MonodromyFamily, NilpotentFamily, quasi_unipotence, unipotent_log
from .report import InternalInvariantError, Report

__version__ = "0.1.0"

__all__ = [
    "Gauss", "I", "IncFiltration", "InternalInvariantError", "Matrix", "MonodromyFamily",
    "NilpotentFamily", "Quotient", "Report", "Subspace", "quasi_unipotence", "unipotent_log",
]
