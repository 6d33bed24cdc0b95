"""
Countable graphs: oracles, certificates, series reduction and reconstruction.
"""
from .countable_graph import CountableGraph, TruncationReport, one_inf_norm_gap
from .certificates import (
    DepthSets,
    TypeACertificate,
    TypeAQuasiBCertificate,
    TypeBCertificate,
    Violation,
    check_type_A,
    check_type_A_quasi_B,
    check_type_B,
    depth_sets,
    taboo_profile,
    taboo_weight,
)
from .series import interior_residual, reconstruct_by_depth, reconstruct_fixed_point, reduced_series
from .algorithm import EigenpairApproximation, approximate_eigenpair, kth_window_eigenvalue

__all__ = [
    "CountableGraph",
    "DepthSets",
    "EigenpairApproximation",
    "TruncationReport",
    "TypeACertificate",
    "TypeAQuasiBCertificate",
    "TypeBCertificate",
    "Violation",
    "approximate_eigenpair",
    "check_type_A",
    "check_type_A_quasi_B",
    "check_type_B",
    "depth_sets",
    "interior_residual",
    "kth_window_eigenvalue",
    "one_inf_norm_gap",
    "reconstruct_by_depth",
    "reconstruct_fixed_point",
    "reduced_series",
    "taboo_profile",
    "taboo_weight",
]
