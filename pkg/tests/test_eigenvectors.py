import numpy as np
import pytest
import scipy.linalg

from src.core.errors import SigmaProximityError
from src.graph import WeightedGraph
from src.reduction import (
    is_representable,
    reconstruct_eigenvector,
    reduce_linear_solve,
    restrict_eigenvector,
)


def test_restrict(two_cycle):
    assert restrict_eigenvector([1, 1], (1,)) == pytest.approx([1])
    assert restrict_eigenvector([1, 2, 3], (3, 1)) == pytest.approx([3, 1])


def test_reconstruct_two_cycle(two_cycle):
    u = reconstruct_eigenvector(*two_cycle, 1, [1])
    assert u == pytest.approx([1, 1])


def test_reconstruct_uses_depth_order(chain):
    g, S = chain
    lam0 = 2.0
    u = reconstruct_eigenvector(g, S, lam0, [1])
    # u(2) = w(2,1) u(1) / lam0, u(3) = w(3,2) u(2) / lam0
    assert u == pytest.approx([1, 1, 1.5])


def test_reconstruct_divides_by_loop():
    g = WeightedGraph(2, {(1, 2): 1, (2, 1): 2, (2, 2): 0.5})
    u = reconstruct_eigenvector(g, (1,), 3.0, [1])
    assert u[1] == pytest.approx(2 / (3.0 - 0.5))


def test_reconstruct_rejects_sigma(two_cycle):
    with pytest.raises(SigmaProximityError):
        reconstruct_eigenvector(*two_cycle, 0, [1])


def test_reconstruct_checks_length(two_cycle):
    with pytest.raises(ValueError):
        reconstruct_eigenvector(*two_cycle, 1, [1, 2])


def test_not_representable():
    # u vanishes on S = {1}
    assert not is_representable([0, 1, 1], (1,))
    assert is_representable([1e-3, 1, 1], (1,))


def test_restriction_and_reconstruction_roundtrip(corpus):
    for g, S in corpus:
        A = g.adjacency()
        eigenvalues, vectors = scipy.linalg.eig(A)
        sigma = g.sigma(S)
        for lam0, u in zip(eigenvalues, vectors.T):
            if min((abs(lam0 - s) for s in sigma), default=np.inf) <= 1e-3:
                continue
            norm = np.linalg.norm(u)
            u_S = restrict_eigenvector(u, S)
            if np.linalg.norm(u_S) <= 1e-6 * norm:
                continue
            R = reduce_linear_solve(g, S, lam0).entries
            assert np.linalg.norm(R @ u_S - lam0 * u_S) <= 1e-8 * norm
            rebuilt = reconstruct_eigenvector(g, S, lam0, u_S)
            assert np.linalg.norm(A @ rebuilt - lam0 * rebuilt) <= 1e-7 * norm
            assert np.allclose(rebuilt, u, atol=1e-7 * norm)
