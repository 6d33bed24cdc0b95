"""
Isospectral reduction of finite graphs.
"""
from .finite import (
    ReducedEvaluation,
    branch_weight,
    check_outside_sigma,
    reduce_branches,
    reduce_linear_solve,
    reduced_derivative,
)
from .spectrum import (
    ReducedEigenvalue,
    SpectrumReport,
    find_reduced_roots,
    match_sets,
    order_eigenvalues,
    reduced_determinant,
    reduced_spectrum,
)
from .eigenvectors import is_representable, reconstruct_eigenvector, restrict_eigenvector

__all__ = [
    "ReducedEigenvalue",
    "ReducedEvaluation",
    "SpectrumReport",
    "branch_weight",
    "check_outside_sigma",
    "find_reduced_roots",
    "is_representable",
    "match_sets",
    "order_eigenvalues",
    "reconstruct_eigenvector",
    "reduce_branches",
    "reduce_linear_solve",
    "reduced_derivative",
    "reduced_determinant",
    "reduced_spectrum",
    "restrict_eigenvector",
]
