"""
Series evaluation of the reduced operator on a finite S of a countable graph
and reconstruction by fixed-point iteration.

The diagonal d(z) = w(z, z) is split off the weight function; K is the
off-diagonal part, and every interior step of a path is divided by
lambda - d(z).
"""
import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from src.core.config import config
from src.core.errors import ConvergenceError, SigmaProximityError, WindowTooSmallError
from src.infinite.certificates import depth_sets
from src.infinite.countable_graph import CountableGraph, TruncationReport
from src.reduction.finite import ReducedEvaluation, nearest_sigma

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WindowOperator:
    """Off-diagonal part K of w on 1..window as a CSR matrix, plus the diagonal."""

    K: sp.csr_matrix
    d: np.ndarray
    incomplete_rows: Tuple[int, ...]

    @classmethod
    def build(cls, g: CountableGraph, window: int, rows: Optional[Iterable[int]] = None) -> "WindowOperator":
        rows = range(1, window + 1) if rows is None else rows
        data, row_idx, col_idx = [], [], []
        incomplete = []
        d = np.zeros(window, dtype=complex)
        for i in rows:
            d[i - 1] = g.diagonal(i)
            for j, w in g.row(i, window).items():
                if j != i:
                    data.append(w)
                    row_idx.append(i - 1)
                    col_idx.append(j - 1)
            if not g.row_is_complete(i, window):
                incomplete.append(i)
        K = sp.csr_matrix((np.array(data, dtype=complex), (row_idx, col_idx)), shape=(window, window))
        return cls(K, d, tuple(incomplete))


def _check_window(S: Sequence[int], window: int):
    if max(S) > window:
        raise WindowTooSmallError(f"window {window} does not contain S (max {max(S)})")


def _scale(g: CountableGraph, window: int) -> float:
    norm = g.norm_bound if np.isfinite(g.norm_bound) else g.probe_norm(window)
    return max(1.0, float(norm))


def check_outside_sigma_d(g: CountableGraph, S: Sequence[int], lam: complex, window: int):
    """
    Raises:
        SigmaProximityError: lambda within the relative Sigma tolerance of Sigma_d
    """
    tol = float(config.get("tolerances.sigma", 1e-9)) * _scale(g, window)
    closest = nearest_sigma(g.sigma_d(S, window), lam)
    if closest is not None and abs(lam - closest) <= tol:
        raise SigmaProximityError(lam, closest)


def _boundary_warnings(op: WindowOperator, window: int) -> List[str]:
    if not op.incomplete_rows:
        return []
    shown = ", ".join(str(i) for i in op.incomplete_rows[:8])
    more = "" if len(op.incomplete_rows) <= 8 else f" (+{len(op.incomplete_rows) - 8} more)"
    return [f"rows {shown}{more} extend beyond window {window}"]


def reduced_series(
    g: CountableGraph,
    S: Iterable[int],
    lam: complex,
    tol: float = None,
    n_max: int = None,
    window: int = None,
    tail_bound: float = None,
) -> Tuple[ReducedEvaluation, TruncationReport]:
    """
    Sum the kernel series for R_S(lambda) over the window.

    With S-rows G_1 = K[S, I] D, term_1 = K[S, S], and for n >= 2
    term_n = G_{n-1} K[I, S], G_n = G_{n-1} K[I, I] D, the entries are
    d(i)[i = j] + sum_n term_n. The sum stops once the frontier G_n is empty,
    or once both max|term_n| and the frontier mass times the norm bound drop
    below tol.

    Args:
        g: the countable graph
        S: finite vertex set inside the window
        lam: evaluation point outside Sigma_d
        tol: stopping tolerance (config series.tol)
        n_max: term budget (config series.n_max); reaching it adds a warning
        window: probed vertices 1..window (config series.window)
        tail_bound: declared bound on the mass lost beyond the window

    Returns:
        (evaluation, truncation report)
    """
    tol = float(config.get("series.tol", 1e-12)) if tol is None else tol
    n_max = int(config.get("series.n_max", 200)) if n_max is None else n_max
    window = int(config.get("series.window", 40)) if window is None else window
    S = tuple(sorted(set(S)))
    _check_window(S, window)
    lam = complex(lam)
    check_outside_sigma_d(g, S, lam, window)

    op = WindowOperator.build(g, window)
    s_idx = np.array([v - 1 for v in S], dtype=int)
    members = set(S)
    i_idx = np.array([v - 1 for v in range(1, window + 1) if v not in members], dtype=int)
    scale = _scale(g, window)

    K = op.K
    K_SS = K[s_idx][:, s_idx].toarray()
    entries = K_SS + np.diag(op.d[s_idx])
    warnings = _boundary_warnings(op, window)

    if i_idx.size == 0:
        report = TruncationReport(1, float(np.abs(K_SS).max(initial=0.0)), window, tail_bound, tuple(warnings))
        return ReducedEvaluation(S, lam, entries, "series"), report

    D = sp.diags(1.0 / (lam - op.d[i_idx]))
    K_SI = K[s_idx][:, i_idx]
    K_IS = K[i_idx][:, s_idx]
    K_II_D = (K[i_idx][:, i_idx] @ D).tocsr()

    frontier = (K_SI @ D).tocsr()
    last_norm = float(np.abs(K_SS).max(initial=0.0))
    terms_used = 1
    converged = frontier.count_nonzero() == 0
    while not converged and terms_used < n_max:
        term = (frontier @ K_IS).toarray()
        entries += term
        terms_used += 1
        last_norm = float(np.abs(term).max(initial=0.0))
        frontier = (frontier @ K_II_D).tocsr()
        frontier.eliminate_zeros()
        frontier_mass = float(np.abs(frontier.data).sum()) if frontier.nnz else 0.0
        if frontier_mass == 0.0:
            converged = True
        elif last_norm < tol and frontier_mass * scale < tol:
            converged = True

    if not converged:
        message = f"series not converged after {n_max} terms (last term {last_norm:.3e})"
        logger.warning(message)
        warnings.append(message)

    report = TruncationReport(terms_used, last_norm, window, tail_bound, tuple(warnings))
    logger.debug(f"reduced_series: {terms_used} terms on window {window}")
    return ReducedEvaluation(S, lam, entries, "series"), report


def _lift(S: Sequence[int], values: Sequence[complex], window: int) -> np.ndarray:
    out = np.zeros(window, dtype=complex)
    values = np.asarray(values, dtype=complex)
    if values.shape != (len(S),):
        raise ValueError(f"expected a vector of length {len(S)}, got shape {values.shape}")
    for v, x in zip(S, values):
        out[v - 1] = x
    return out


def reconstruct_fixed_point(
    g: CountableGraph,
    S: Iterable[int],
    lam0: complex,
    v: Sequence[complex],
    f: Optional[Sequence[complex]] = None,
    tol: float = None,
    window: int = None,
) -> Tuple[np.ndarray, TruncationReport]:
    """
    Solve u = (v_bar - D f) + D Q u on the window by Neumann iteration.

    (D h)(z) = h(z) / (lambda0 - d(z)) off S and 0 on S; Q is the action of
    the off-diagonal weights. With f = 0 the result extends v from S.

    Returns:
        (u on 1..window, truncation report)

    Raises:
        ConvergenceError: no contraction within budget_factor * window iterations
    """
    tol = float(config.get("series.tol", 1e-12)) if tol is None else tol
    window = int(config.get("series.window", 40)) if window is None else window
    S = tuple(sorted(set(S)))
    _check_window(S, window)
    lam0 = complex(lam0)
    check_outside_sigma_d(g, S, lam0, window)

    members = set(S)
    interior = [z for z in range(1, window + 1) if z not in members]
    op = WindowOperator.build(g, window, rows=interior)

    inv = np.zeros(window, dtype=complex)
    for z in interior:
        inv[z - 1] = 1.0 / (lam0 - op.d[z - 1])
    DQ = (sp.diags(inv) @ op.K).tocsr()

    f = np.zeros(window, dtype=complex) if f is None else np.asarray(f, dtype=complex)
    if f.shape != (window,):
        raise ValueError(f"f must have length {window}, got shape {f.shape}")
    base = _lift(S, v, window) - inv * f

    budget = int(config.get("fixed_point.budget_factor", 10)) * window
    u = base.copy()
    change = np.inf
    iterations = 0
    while iterations < budget:
        nxt = base + DQ @ u
        change = float(np.abs(nxt - u).sum())
        u = nxt
        iterations += 1
        if change < tol:
            break
    else:
        raise ConvergenceError(f"fixed point did not contract within {budget} iterations (last change {change:.3e})")

    report = TruncationReport(iterations, change, window, None, tuple(_boundary_warnings(op, window)))
    return u, report


def reconstruct_by_depth(
    g: CountableGraph,
    S: Iterable[int],
    lam0: complex,
    v: Sequence[complex],
    window: int = None,
) -> Tuple[np.ndarray, Tuple[int, ...]]:
    """
    Extend v level by level over the depth sets instead of iterating.

    Returns:
        (u on 1..window with NaN at unabsorbed vertices, the unabsorbed vertices)
    """
    window = int(config.get("series.window", 40)) if window is None else window
    S = tuple(sorted(set(S)))
    _check_window(S, window)
    lam0 = complex(lam0)
    check_outside_sigma_d(g, S, lam0, window)

    levels = depth_sets(g, S, window)
    u = np.full(window, np.nan, dtype=complex)
    u[[x - 1 for x in S]] = np.asarray(v, dtype=complex)
    for previous, current in zip(levels.levels, levels.levels[1:]):
        for z in sorted(set(current) - set(previous)):
            total = sum((w * u[j - 1] for j, w in g.row(z, window).items() if j != z), 0j)
            u[z - 1] = total / (lam0 - g.diagonal(z))
    return u, levels.unknown


def interior_residual(
    g: CountableGraph,
    S: Iterable[int],
    lam0: complex,
    u: Sequence[complex],
    f: Optional[Sequence[complex]] = None,
    window: int = None,
) -> float:
    """
    max |((A - lambda0) u)(z) - f(z)| over interior z whose rows lie inside the window.
    """
    window = len(u) if window is None else window
    u = np.asarray(u, dtype=complex)
    f = np.zeros(window, dtype=complex) if f is None else np.asarray(f, dtype=complex)
    members = set(S)
    worst = 0.0
    for z in range(1, window + 1):
        if z in members or not g.row_is_complete(z, window):
            continue
        action = sum((w * u[j - 1] for j, w in g.row(z, window).items()), 0j)
        worst = max(worst, abs(action - lam0 * u[z - 1] - f[z - 1]))
    return float(worst)

