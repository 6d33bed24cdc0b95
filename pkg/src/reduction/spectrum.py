"""
Spectrum of a finite graph and of its reduced family R_S(lambda).

The primary path takes eigenvalues of the full adjacency matrix and checks each
one outside Sigma against det(R_S(lambda) - lambda I). A secondary path finds
the zeros of that determinant directly with grid-seeded Newton iteration.
"""
import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple

import numpy as np
import scipy.linalg

from src.core.config import config
from src.core.errors import EigensolverError, SigmaProximityError, SingularInteriorError
from src.graph.structure import require_structural
from src.graph.weighted_graph import WeightedGraph
from src.reduction.finite import nearest_sigma, reduce_linear_solve, sigma_tolerance

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReducedEigenvalue:
    value: complex
    residual: float


@dataclass(frozen=True)
class SpectrumReport:
    full_spectrum: Tuple[complex, ...]
    sigma: Tuple[complex, ...]
    reduced_spectrum: Tuple[ReducedEigenvalue, ...]
    excluded: Tuple[complex, ...]
    roots: Tuple[complex, ...] = field(default=())

    @property
    def max_residual(self) -> float:
        return max((r.residual for r in self.reduced_spectrum), default=0.0)

    def values(self) -> Tuple[complex, ...]:
        return tuple(r.value for r in self.reduced_spectrum)


def _anchors(measures: Sequence[float], tol: float) -> List[float]:
    """Replace each measure by the largest one it chains to within tol, scanning downwards."""
    anchors = [0.0] * len(measures)
    anchor = None
    for k in sorted(range(len(measures)), key=lambda k: -measures[k]):
        if anchor is None or anchor - measures[k] > tol:
            anchor = measures[k]
        anchors[k] = anchor
    return anchors


def order_eigenvalues(values: Iterable[complex], tol: float = None) -> List[complex]:
    """
    Descending modulus, then descending real part, then descending imaginary part.

    Moduli and real parts within tol of each other count as equal, so the
    tie-breaks apply to computed spectra. tol defaults to the cluster tolerance
    scaled by max(1, largest modulus).
    """
    values = [complex(v) for v in values]
    if tol is None:
        tol = float(config.get("tolerances.cluster", 1e-7)) * max([1.0] + [abs(z) for z in values])
    moduli = _anchors([abs(z) for z in values], tol)
    reals = _anchors([z.real for z in values], tol)
    order = sorted(range(len(values)), key=lambda k: (-moduli[k], -reals[k], -values[k].imag))
    return [values[k] for k in order]


def cluster_tolerance(g: WeightedGraph) -> float:
    return float(config.get("tolerances.cluster", 1e-7)) * g.scale()


def match_sets(left: Sequence[complex], right: Sequence[complex], tol: float) -> Tuple[bool, List[Tuple[complex, complex]]]:
    """
    Compare two sets of complex values up to clustering.

    Every value must lie within tol of some value of the other side; multiplicity
    is ignored. Returns (equal, pairs) where pairs are the greedy nearest matches
    from left to right.
    """
    pairs = []
    for z in left:
        if not right:
            return False, pairs
        nearest = min(right, key=lambda w: abs(w - z))
        pairs.append((z, nearest))
    covered = all(abs(w - z) <= tol for z, w in pairs)
    reverse = all(any(abs(w - z) <= tol for z in left) for w in right)
    return covered and reverse, pairs


def reduced_determinant(g: WeightedGraph, S: Iterable[int], lam: complex) -> complex:
    """det(R_S(lambda) - lambda I), evaluated through reduce_linear_solve."""
    return reduce_linear_solve(g, S, lam).characteristic()


def reduced_spectrum(g: WeightedGraph, S: Iterable[int], with_roots: bool = False) -> SpectrumReport:
    """
    Eigenvalues of the adjacency matrix split by membership in Sigma, with the
    reduced-determinant residual recorded for each one outside it.

    Args:
        g: the graph
        S: a structural set
        with_roots: also run find_reduced_roots and attach its zeros

    Raises:
        NotStructuralError: S is not structural
        EigensolverError: the dense eigensolver did not converge
    """
    S = require_structural(g, S)
    try:
        eigenvalues = scipy.linalg.eigvals(g.adjacency())
    except (scipy.linalg.LinAlgError, ValueError) as e:
        raise EigensolverError(f"eigenvalue computation failed: {e}")
    full = tuple(order_eigenvalues(eigenvalues, cluster_tolerance(g)))

    sigma = g.sigma(S)
    tol = sigma_tolerance(g)
    reduced: List[ReducedEigenvalue] = []
    excluded: List[complex] = []
    for lam in full:
        closest = nearest_sigma(sigma, lam)
        if closest is not None and abs(lam - closest) <= tol:
            excluded.append(lam)
            continue
        residual = abs(reduced_determinant(g, S, lam))
        reduced.append(ReducedEigenvalue(lam, residual))

    roots = tuple(find_reduced_roots(g, S)) if with_roots else ()
    logger.info(f"Spectrum: {len(full)} eigenvalues, {len(reduced)} outside Sigma, {len(excluded)} excluded")
    return SpectrumReport(full, sigma, tuple(reduced), tuple(excluded), roots)


def _numerical_derivative(f, lam: complex, h: float) -> complex:
    return (f(lam + h) - f(lam - h)) / (2 * h)


def _seed_radius(g: WeightedGraph) -> float:
    # eigenvalues lie in the disc of radius ||A||_inf
    return g.norm_inf() * 1.05 + 0.1


def _grid_seeds(g: WeightedGraph, size: int) -> List[complex]:
    radius = _seed_radius(g)
    axis = np.linspace(-radius, radius, size)
    return [complex(x, y) for x in axis for y in axis if abs(complex(x, y)) <= radius]


def find_reduced_roots(g: WeightedGraph, S: Iterable[int]) -> List[complex]:
    """
    Zeros of det(R_S(lambda) - lambda I) outside Sigma by Newton iteration.

    Seeds come from a square grid covering the disc of radius ||A||_inf. Each
    root found is deflated out of the determinant before the next search, so
    a seed attracted to a known root moves on to another one.
    """
    S = require_structural(g, S)
    grid_size = int(config.get("spectrum.grid_size", 16))
    max_iter = int(config.get("spectrum.newton_max_iter", 100))
    sigma = g.sigma(S)
    sigma_tol = sigma_tolerance(g)
    cluster_tol = cluster_tolerance(g)
    radius = _seed_radius(g)
    bound = 1e-6 * g.scale() ** len(S)
    roots: List[complex] = []

    def deflated(lam: complex) -> complex:
        value = reduced_determinant(g, S, lam)
        for r in roots:
            value /= lam - r
        return value

    for seed in _grid_seeds(g, grid_size):
        lam = seed
        converged = False
        for _ in range(max_iter):
            closest = nearest_sigma(sigma, lam)
            if closest is not None and abs(lam - closest) <= 10 * sigma_tol:
                break
            if any(abs(lam - r) <= cluster_tol for r in roots):
                break
            h = 1e-6 * max(1.0, abs(lam))
            try:
                f = deflated(lam)
                df = _numerical_derivative(deflated, lam, h)
            except (SigmaProximityError, SingularInteriorError):
                break
            if df == 0 or not np.isfinite(df):
                break
            step = f / df
            if not np.isfinite(step):
                break
            lam = lam - step
            if not np.isfinite(lam) or abs(lam) > 2 * radius:
                break
            if abs(step) <= 1e-13 * max(1.0, abs(lam)):
                converged = True
                break
        if not converged or abs(lam) > radius:
            continue
        try:
            residual = abs(reduced_determinant(g, S, lam))
        except (SigmaProximityError, SingularInteriorError):
            continue
        if not residual <= bound:
            continue
        if any(abs(lam - r) <= cluster_tol for r in roots):
            continue
        logger.debug(f"Newton root {lam} from seed {seed}")
        roots.append(lam)

    return order_eigenvalues(roots, cluster_tol)
