"""
Stationary measure of the family: closed form through the 2x2 reduced matrix
on S = {1, 2}, power iteration on a folded finite surrogate, and convergence of
the truncations w_n.
"""
import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from src.core.config import config
from src.core.errors import ConsistencyError, ConvergenceError, WindowTooSmallError
from src.infinite.countable_graph import TruncationReport, one_inf_norm_gap
from src.infinite.series import reconstruct_fixed_point, reduced_series
from src.markov.family import (
    STRUCTURAL_SET,
    FamilyParams,
    family_graph,
    family_weight,
    truncated_graph,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StationaryMeasure:
    window: int
    q: np.ndarray
    tail_bound: float
    u: np.ndarray
    v: Tuple[float, float]
    reduced: np.ndarray
    report: TruncationReport

    @property
    def mass(self) -> float:
        return float(self.q.sum())


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    gap: float
    gap_expected: float
    gap_bound: float
    tv_distance: float


@dataclass(frozen=True)
class ConvergenceTable:
    rows: Tuple[ConvergenceRow, ...]
    window: int
    monotone: bool


def total_variation(p: Sequence[float], q: Sequence[float]) -> float:
    """Half the l1 distance, shorter vector padded with zeros."""
    p, q = np.asarray(p, dtype=float), np.asarray(q, dtype=float)
    size = max(len(p), len(q))
    p = np.pad(p, (0, size - len(p)))
    q = np.pad(q, (0, size - len(q)))
    return 0.5 * float(np.abs(p - q).sum())


def _tol(tol):
    return float(config.get("markov.tol", 1e-12)) if tol is None else tol


def reduced_2x2(p: FamilyParams, tol: float = None, max_terms: int = None) -> Tuple[np.ndarray, TruncationReport]:
    """
    R = [[1 - s, b_1], [s, 1 - b_1]] with s = sum_l (prod_{k=1}^{l} b_{k+1}) a_{l+2}.

    The sum stops at the first L whose product drops below tol; the
    remainder is at most that product.

    Raises:
        ConvergenceError: the products never drop below tol within max_terms
    """
    tol = _tol(tol)
    max_terms = int(config.get("markov.max_terms", 10_000)) if max_terms is None else max_terms

    s = 0.0
    product = 1.0
    term = 0.0
    for ell in range(max_terms):
        term = product * p.a(ell + 2)
        s += term
        product *= p.b(ell + 2)
        if product < tol:
            terms = ell + 1
            break
    else:
        raise ConvergenceError(f"step-down products stay above {tol} after {max_terms} terms")

    b1 = p.b(1)
    R = np.array([[1.0 - s, b1], [s, 1.0 - b1]])
    return R, TruncationReport(terms, term, terms + 2, product)


def _u_tail(p: FamilyParams, i: int, tol: float) -> float:
    """sum_k (prod_{l=0}^{k-2} b_{i+l}) a_{i+k-1}, stopped once the product is below tol."""
    total = 0.0
    product = 1.0
    k = 1
    while product >= tol:
        total += product * p.a(i + k - 1)
        product *= p.b(i + k - 1)
        k += 1
    return total


def stationary_closed_form(p: FamilyParams, tol: float = None, window: int = None) -> StationaryMeasure:
    """
    Normalized stationary measure q on 1..window.

    u(1) = b_1, u(2) = s and u(i) = b_1 * sum_k (prod b) a for i >= 3; the
    mass beyond the window is bounded by
    b_1 (A(W + 1) + A(W + 2) C rho^(W + 1) / (1 - rho)) with A the a-tail.

    Raises:
        WindowTooSmallError: the tail bound exceeds tol relative to the mass
        ConsistencyError: (R - I) v is not small, or some u(i) is negative
    """
    tol = _tol(tol)
    window = int(config.get("markov.window", 40)) if window is None else window
    if window < 3:
        raise WindowTooSmallError(f"window must be at least 3, got {window}")

    R, report = reduced_2x2(p, tol)
    v = np.array([p.b(1), R[1, 0]])
    residual = float(np.abs((R - np.eye(2)) @ v).sum())
    if residual > 10 * tol:
        raise ConsistencyError(f"(R - I) v has l1 norm {residual}")

    u = np.empty(window)
    u[0], u[1] = v
    inner_tol = tol / window
    for i in range(3, window + 1):
        u[i - 1] = v[0] * _u_tail(p, i, inner_tol)
    if (u < 0).any():
        raise ConsistencyError("negative stationary weight")

    W = window
    tail = v[0] * (p.a_tail_bound(W + 1) + p.a_tail_bound(W + 2) * p.C * p.rho ** (W + 1) / (1 - p.rho))
    total = float(u.sum()) + tail
    if tail / total > tol:
        raise WindowTooSmallError(f"tail mass {tail / total:.3e} above window {window} exceeds tol {tol:.1e}")

    q = u / total
    return StationaryMeasure(window, q, tail / total, u, (float(v[0]), float(v[1])), R, report)


def folded_matrix(p: FamilyParams, n_states: int) -> np.ndarray:
    """Column-stochastic W on 1..n_states; mass sent above n_states goes to state 1."""
    W = np.array([[family_weight(p, i, j) for j in range(1, n_states + 1)] for i in range(1, n_states + 1)])
    W[0] += 1.0 - W.sum(axis=0)
    return W


def stationary_power_iteration(p: FamilyParams, n_states: int, tol: float = None, max_iter: int = None) -> np.ndarray:
    """
    Iterate x <- W x from the uniform vector on the folded surrogate until
    successive iterates differ by less than tol in l1.

    Raises:
        ConvergenceError: no convergence within max_iter
    """
    tol = _tol(tol)
    max_iter = int(config.get("markov.max_iter", 200_000)) if max_iter is None else max_iter
    if n_states < 3:
        raise ValueError(f"need at least 3 states, got {n_states}")

    W = folded_matrix(p, n_states)
    x = np.full(n_states, 1.0 / n_states)
    for iteration in range(1, max_iter + 1):
        nxt = W @ x
        change = float(np.abs(nxt - x).sum())
        x = nxt
        if change < tol:
            logger.debug(f"Power iteration converged after {iteration} steps")
            return x / x.sum()
    raise ConvergenceError(f"power iteration did not converge in {max_iter} steps (last change {change:.3e})")


def truncated_stationary(p: FamilyParams, n: int, window: int, tol: float = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    q_n on 1..window for the truncation w_n, via the series reduction at
    lambda = 1 and fixed-point reconstruction.

    Returns:
        (q_n, unnormalized u_n)
    """
    tol = _tol(tol)
    g_n = truncated_graph(p, n)
    reduced, _ = reduced_series(g_n, STRUCTURAL_SET, 1.0, tol=tol, window=window)
    R = reduced.entries.real
    # row 2 of w_n is finite, so the second equation of (R - I) v = 0 is exact
    v = np.array([1.0 - R[1, 1], R[1, 0]])
    u, _ = reconstruct_fixed_point(g_n, STRUCTURAL_SET, 1.0, v, tol=tol, window=window)
    u = u.real
    if (u < -tol).any():
        raise ConsistencyError(f"negative reconstructed weight for n={n}")
    tail = v[0] * p.a_tail_bound(window + 1)
    return u / (u.sum() + tail), u


def truncation_convergence(p: FamilyParams, n_values: Sequence[int], tol: float = None, window: int = None) -> ConvergenceTable:
    """
    For each n: the (1, inf) gap between w and w_n, its expected value
    2 max_{i >= n} b_i (over the window), the bound 2 C rho^n, and the total
    variation between q_n and the closed-form q.

    Raises:
        ConsistencyError: a measured gap differs from 2 max b_i by more than 1e-12
    """
    tol = _tol(tol)
    window = int(config.get("markov.window", 40)) if window is None else window
    n_values = sorted(set(n_values))
    W = max([window] + [n + 5 for n in n_values])

    q = stationary_closed_form(p, tol, W).q
    full = family_graph(p)
    rows: List[ConvergenceRow] = []
    for n in n_values:
        gap = one_inf_norm_gap(full, truncated_graph(p, n), W)
        expected = 2.0 * p.b_tail_max(n, W - 1)
        if abs(gap - expected) > 1e-12:
            raise ConsistencyError(f"gap {gap} for n={n} differs from 2 max b_i = {expected}")
        q_n, _ = truncated_stationary(p, n, W, tol)
        rows.append(ConvergenceRow(n, gap, expected, 2.0 * p.C * p.rho ** n, total_variation(q_n, q)))
        logger.debug(f"n={n}: gap {gap:.3e}, tv {rows[-1].tv_distance:.3e}")

    monotone = all(cur.tv_distance <= prev.tv_distance + 1e-12 for prev, cur in zip(rows, rows[1:]))
    if not monotone:
        logger.warning("total variation to q is not monotone across the sweep")
    return ConvergenceTable(tuple(rows), W, monotone)
