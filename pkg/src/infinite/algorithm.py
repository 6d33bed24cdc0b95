"""
Approximate eigenpairs of a countable graph through a finite structural set.

Pick an eigenvalue of the windowed matrix outside Sigma_d, take the matching
eigenvector of the reduced matrix from the kernel series, then extend it to
the window by fixed-point reconstruction.
"""
import logging
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
import scipy.linalg

from src.core.config import config
from src.core.errors import EigensolverError, NotAnEigenvalueError
from src.infinite.countable_graph import CountableGraph, TruncationReport
from src.infinite.series import interior_residual, reconstruct_fixed_point, reduced_series
from src.reduction.finite import nearest_sigma
from src.reduction.spectrum import order_eigenvalues

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EigenpairApproximation:
    lam: complex
    v: np.ndarray
    u: np.ndarray
    reduced_residual: float
    interior_residual: float
    series_report: TruncationReport
    reconstruction_report: TruncationReport


def _normalize(x: np.ndarray) -> np.ndarray:
    """Scale so the entry of largest modulus equals 1."""
    pivot = x[int(np.argmax(np.abs(x)))]
    return x / pivot if pivot != 0 else x


def kth_window_eigenvalue(g: CountableGraph, S: Iterable[int], k: int, window: int) -> complex:
    """
    The k-th (1-based) eigenvalue of the windowed matrix outside Sigma_d, in
    descending modulus order.
    """
    try:
        eigenvalues = scipy.linalg.eigvals(g.dense(window))
    except (scipy.linalg.LinAlgError, ValueError) as e:
        raise EigensolverError(f"eigenvalue computation failed: {e}")

    sigma = g.sigma_d(S, window)
    tol = float(config.get("tolerances.sigma", 1e-9)) * max(1.0, g.probe_norm(window))
    candidates = []
    for lam in order_eigenvalues(eigenvalues):
        closest = nearest_sigma(sigma, lam)
        if closest is None or abs(lam - closest) > tol:
            candidates.append(lam)
    if not 1 <= k <= len(candidates):
        raise NotAnEigenvalueError(f"only {len(candidates)} eigenvalues outside Sigma_d on window {window}, asked for k={k}")
    return candidates[k - 1]


def approximate_eigenpair(
    g: CountableGraph,
    S: Iterable[int],
    k: int = 1,
    window: int = None,
    lam: Optional[complex] = None,
    tol: float = None,
    residual_tol: float = 1e-6,
) -> EigenpairApproximation:
    """
    Run the countable reduction end to end.

    Args:
        g: the (typically truncated) countable graph
        S: finite structural set
        k: eigenvalue index on the window, ignored when lam is given
        window: probed vertices
        lam: eigenvalue to use instead of the k-th window eigenvalue
        tol: series and fixed-point tolerance
        residual_tol: largest accepted smallest singular value of R_S(lam) - lam I,
            relative to max(1, ||R||)

    Raises:
        NotAnEigenvalueError: lam is not an eigenvalue of the reduced matrix
    """
    window = int(config.get("series.window", 40)) if window is None else window
    S = tuple(sorted(set(S)))
    lam = kth_window_eigenvalue(g, S, k, window) if lam is None else complex(lam)

    reduced, series_report = reduced_series(g, S, lam, tol=tol, window=window)
    shifted = reduced.entries - lam * np.eye(len(S))
    _, singular, vh = scipy.linalg.svd(shifted)
    scale = max(1.0, float(np.abs(reduced.entries).sum(axis=0).max()))
    if singular[-1] > residual_tol * scale:
        raise NotAnEigenvalueError(f"{lam} is not an eigenvalue of the reduced matrix (smallest singular value {singular[-1]:.3e})")

    v = _normalize(vh[-1].conj())
    u, reconstruction_report = reconstruct_fixed_point(g, S, lam, v, tol=tol, window=window)
    residual = interior_residual(g, S, lam, u, window=window)
    logger.info(f"Eigenpair at lambda={lam}: reduced residual {singular[-1]:.3e}, interior residual {residual:.3e}")
    return EigenpairApproximation(lam, v, u, float(singular[-1]), residual, series_report, reconstruction_report)
