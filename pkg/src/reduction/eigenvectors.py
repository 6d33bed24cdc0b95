"""
Restriction of eigenvectors to a structural set and reconstruction from it.
"""
import logging
from typing import Iterable, Sequence

import numpy as np

from src.core.config import config
from src.graph.structure import compute_depths
from src.graph.weighted_graph import WeightedGraph
from src.reduction.finite import check_outside_sigma

logger = logging.getLogger(__name__)


def restrict_eigenvector(u: Sequence[complex], S: Iterable[int]) -> np.ndarray:
    """Entries of u (indexed from vertex 1) at the vertices of S, in S's order."""
    u = np.asarray(u, dtype=complex)
    return np.array([u[v - 1] for v in S], dtype=complex)


def is_representable(u: Sequence[complex], S: Iterable[int], threshold: float = None) -> bool:
    """False when the restriction of u to S is numerically null."""
    threshold = float(config.get("tolerances.representable", 1e-10)) if threshold is None else threshold
    u = np.asarray(u, dtype=complex)
    return bool(np.linalg.norm(restrict_eigenvector(u, S)) > threshold * np.linalg.norm(u))


def reconstruct_eigenvector(g: WeightedGraph, S: Iterable[int], lam0: complex, v: Sequence[complex]) -> np.ndarray:
    """
    Extend v from S to the whole vertex set at lambda0.

    Interior vertices are filled in increasing depth, each from its already
    known successors:

        u(l) = sum_j w(l, j) u(j) / (lambda0 - w(l, l))

    Raises:
        NotStructuralError: S is not structural
        SigmaProximityError: lambda0 lies in Sigma
    """
    depths = compute_depths(g, S)
    S = depths.S
    lam0 = complex(lam0)
    check_outside_sigma(g, S, lam0)

    v = np.asarray(v, dtype=complex)
    if v.shape != (len(S),):
        raise ValueError(f"expected a vector of length {len(S)}, got shape {v.shape}")

    u = np.zeros(g.n, dtype=complex)
    for vertex, value in zip(S, v):
        u[vertex - 1] = value

    for vertex in depths.order():
        if depths.depth[vertex] == 0:
            continue
        total = sum((g.weight(vertex, j) * u[j - 1] for j in g.successors(vertex) if j != vertex), 0j)
        u[vertex - 1] = total / (lam0 - g.diagonal(vertex))
    return u
