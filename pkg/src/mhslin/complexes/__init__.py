"""Cube complexes, filtered complexes and their spectral sequences."""

from .chain import (ChainComplex, FilteredComplex, cube, graded_check, graded_complex, ic,
                    is_subcomplex, koszul, koszul_sign, omega_partial, pq_spaces, weight_on_koszul,
                    wj_all)
from .diagonal import diagonal_image, diagonal_lemma_check
from .limit import limit_object_validate
from .spectral import (SpectralSequence, cohomology_mhs, fmhc_lmhc_validate, spectral_sequence,
                       subquotient_complex)

__all__ = [
    "ChainComplex", "FilteredComplex", "SpectralSequence", "cohomology_mhs", "cube",
    "diagonal_image", "diagonal_lemma_check", "fmhc_lmhc_validate", "graded_check",
    "graded_complex", "ic", "is_subcomplex", "koszul", "koszul_sign", "limit_object_validate",
    "omega_partial", "pq_spaces", "spectral_sequence", "subquotient_complex", "weight_on_koszul",
    "wj_all",
]
