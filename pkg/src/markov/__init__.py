"""
The two-sequence Markov family: transition weights, truncations and stationary measures.
"""
from .family import (
    STRUCTURAL_SET,
    FamilyParams,
    GeometricA,
    GeometricB,
    family_graph,
    family_weight,
    geometric_params,
    load_params,
    reference_params,
    reference_type_A_bound,
    superexponential_diagnostic,
    truncated_graph,
    truncated_weight,
    validate,
)
from .stationary import (
    ConvergenceRow,
    ConvergenceTable,
    StationaryMeasure,
    folded_matrix,
    reduced_2x2,
    stationary_closed_form,
    stationary_power_iteration,
    total_variation,
    truncated_stationary,
    truncation_convergence,
)
from .simulation import EmpiricalDistribution, merge, monte_carlo_stationary, simulate_many, spawn_seeds

__all__ = [
    "STRUCTURAL_SET",
    "ConvergenceRow",
    "ConvergenceTable",
    "EmpiricalDistribution",
    "FamilyParams",
    "GeometricA",
    "GeometricB",
    "StationaryMeasure",
    "family_graph",
    "family_weight",
    "folded_matrix",
    "geometric_params",
    "load_params",
    "merge",
    "monte_carlo_stationary",
    "reduced_2x2",
    "reference_params",
    "reference_type_A_bound",
    "simulate_many",
    "spawn_seeds",
    "stationary_closed_form",
    "stationary_power_iteration",
    "superexponential_diagnostic",
    "total_variation",
    "truncated_graph",
    "truncated_stationary",
    "truncated_weight",
    "truncation_convergence",
    "validate",
]
