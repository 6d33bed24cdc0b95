"""
Reduced operator R_S(lambda) of a finite graph, by branch sums and by a linear solve.
"""
import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from src.core.config import config
from src.core.errors import SigmaProximityError, SingularInteriorError
from src.graph.structure import enumerate_branches, require_structural
from src.graph.weighted_graph import Branch, WeightedGraph

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReducedEvaluation:
    """The matrix of R_S(lambda) on S, rows and columns in the order of S."""

    S: Tuple[int, ...]
    lam: complex
    entries: np.ndarray
    method: str

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    def entry(self, i: int, j: int) -> complex:
        return complex(self.entries[self.S.index(i), self.S.index(j)])

    def characteristic(self) -> complex:
        """det(R_S(lambda) - lambda I)."""
        size = len(self.S)
        return complex(np.linalg.det(self.entries - self.lam * np.eye(size)))


def sigma_tolerance(g: WeightedGraph) -> float:
    return float(config.get("tolerances.sigma", 1e-9)) * g.scale()


def nearest_sigma(sigma: Sequence[complex], lam: complex) -> Optional[complex]:
    if not sigma:
        return None
    return min(sigma, key=lambda s: abs(lam - s))


def check_outside_sigma(g: WeightedGraph, S: Iterable[int], lam: complex, tol: float = None):
    """
    Raise SigmaProximityError when lambda is within tol of an interior diagonal value.
    """
    tol = sigma_tolerance(g) if tol is None else tol
    closest = nearest_sigma(g.sigma(S), lam)
    if closest is not None and abs(lam - closest) <= tol:
        raise SigmaProximityError(lam, closest)


def branch_weight(b: Branch, lam: complex, g: WeightedGraph) -> complex:
    """
    lambda-weight of a branch: w(i0, i1) times w(il, il+1) / (lambda - w(il, il))
    over the inner vertices.

    Raises:
        SigmaProximityError: lambda hits the diagonal value of an inner vertex
    """
    pole_tol = float(config.get("tolerances.pole", 1e-12))
    path = b.vertices
    value = g.weight(path[0], path[1])
    for z, nxt in zip(path[1:-1], path[2:]):
        d = g.diagonal(z)
        if abs(lam - d) <= pole_tol:
            raise SigmaProximityError(lam, d)
        value *= g.weight(z, nxt) / (lam - d)
    return value


def reduce_branches(g: WeightedGraph, S: Iterable[int], lam: complex) -> ReducedEvaluation:
    """
    Evaluate R_S(lambda) entrywise as the sum of branch weights.

    Exponential in the worst case; the reference semantics for small graphs.
    """
    S = require_structural(g, S)
    lam = complex(lam)
    check_outside_sigma(g, S, lam)

    entries = np.zeros((len(S), len(S)), dtype=complex)
    for a, i in enumerate(S):
        for b, j in enumerate(S):
            entries[a, b] = sum((branch_weight(br, lam, g) for br in enumerate_branches(g, S, i, j)), 0j)
    return ReducedEvaluation(S, lam, entries, "branches")


def _blocks(g: WeightedGraph, S: Sequence[int]):
    A = g.adjacency()
    s_idx = np.array([v - 1 for v in S], dtype=int)
    i_idx = np.array([v - 1 for v in g.interior(S)], dtype=int)
    return A, s_idx, i_idx


def _interior_resolvent_apply(A_II: np.ndarray, lam: complex, rhs: np.ndarray) -> np.ndarray:
    """Solve (lambda I - A_II) X = rhs."""
    M = lam * np.eye(A_II.shape[0]) - A_II
    try:
        return scipy.linalg.solve(M, rhs, check_finite=False)
    except (scipy.linalg.LinAlgError, ValueError) as e:
        raise SingularInteriorError(f"interior solve failed at lambda={lam}: {e}")


def reduce_linear_solve(g: WeightedGraph, S: Iterable[int], lam: complex) -> ReducedEvaluation:
    """
    Evaluate R_S(lambda) = A[S,S] + A[S,I] (lambda I - A[I,I])^-1 A[I,S], I = V minus S.
    """
    S = require_structural(g, S)
    lam = complex(lam)
    check_outside_sigma(g, S, lam)

    A, s_idx, i_idx = _blocks(g, S)
    entries = A[np.ix_(s_idx, s_idx)].copy()
    if i_idx.size:
        X = _interior_resolvent_apply(A[np.ix_(i_idx, i_idx)], lam, A[np.ix_(i_idx, s_idx)])
        entries += A[np.ix_(s_idx, i_idx)] @ X
    return ReducedEvaluation(S, lam, entries, "solve")


def reduced_derivative(g: WeightedGraph, S: Iterable[int], lam: complex) -> np.ndarray:
    """
    d/dlambda R_S(lambda) = -A[S,I] (lambda I - A[I,I])^-2 A[I,S].
    """
    S = require_structural(g, S)
    lam = complex(lam)
    check_outside_sigma(g, S, lam)

    A, s_idx, i_idx = _blocks(g, S)
    if not i_idx.size:
        return np.zeros((len(S), len(S)), dtype=complex)
    A_II = A[np.ix_(i_idx, i_idx)]
    X = _interior_resolvent_apply(A_II, lam, A[np.ix_(i_idx, s_idx)])
    X = _interior_resolvent_apply(A_II, lam, X)
    return -A[np.ix_(s_idx, i_idx)] @ X
