import math

import numpy as np
import pytest

from src.core.errors import (
    ConvergenceError,
    NotAnEigenvalueError,
    OracleError,
    SigmaProximityError,
    WindowTooSmallError,
)
from src.graph import WeightedGraph, compute_depths
from src.infinite import (
    CountableGraph,
    approximate_eigenpair,
    check_type_A,
    check_type_A_quasi_B,
    check_type_B,
    depth_sets,
    interior_residual,
    kth_window_eigenvalue,
    one_inf_norm_gap,
    reconstruct_by_depth,
    reconstruct_fixed_point,
    reduced_series,
    taboo_profile,
    taboo_weight,
)
from src.markov import (
    FamilyParams,
    GeometricA,
    family_graph,
    reference_type_A_bound,
    truncated_graph,
)
from src.reduction import reconstruct_eigenvector, reduce_linear_solve


def embed(g: WeightedGraph) -> CountableGraph:
    return CountableGraph.from_finite(g)


class TestCountableGraph:
    def test_from_finite_rows_and_columns(self, chain):
        g, _ = chain
        cg = embed(g)
        assert cg.row(3, 3) == {2: 3.0}
        assert cg.col(1, 3) == {2: 2.0}
        assert cg.row_is_complete(1, 3)
        assert cg.weight(4, 1) == 0
        assert cg.norm_bound == pytest.approx(3.0)

    def test_dense_and_to_finite(self, corpus):
        g, _ = corpus[0]
        cg = embed(g)
        assert np.array_equal(cg.dense(g.n), g.adjacency())
        assert dict(cg.to_finite(g.n).weights) == dict(g.weights)

    def test_verify_accepts_exact_oracles(self, reference):
        family_graph(reference).verify(30)
        truncated_graph(reference, 6).verify(30)

    def test_verify_rejects_wrong_support(self):
        bad = CountableGraph(lambda i, j: 1.0 if (i, j) == (1, 2) else 0.0, lambda i: (), lambda j: (), 2.0)
        with pytest.raises(OracleError):
            bad.verify(3)

    def test_verify_rejects_norm_bound(self):
        heavy = CountableGraph(lambda i, j: 2.0 if (i, j) == (1, 2) else 0.0, norm_bound=1.0)
        with pytest.raises(OracleError):
            heavy.verify(3)

    def test_sigma_d_includes_closure(self, reference):
        assert family_graph(reference).sigma_d((1, 2), 10) == (0j,)
        cg = CountableGraph(lambda i, j: 0.5 if i == j == 3 else 0.0, sigma_closure=(1.0,))
        assert cg.sigma_d((1,), 4) == (0j, 0.5, 1.0)


class TestNormGap:
    def test_identical_graphs(self, reference):
        assert one_inf_norm_gap(family_graph(reference), family_graph(reference), 30) == 0

    def test_single_difference(self):
        g1 = embed(WeightedGraph(2, {(1, 2): 1.0}))
        g2 = embed(WeightedGraph(2, {(1, 2): 1.0 - 0.25j}))
        assert one_inf_norm_gap(g1, g2, 2) == pytest.approx(0.25)

    def test_family_gap_is_twice_the_largest_tail_b(self, reference):
        full = family_graph(reference)
        for n in range(3, 21):
            gap = one_inf_norm_gap(full, truncated_graph(reference, n), 40)
            assert abs(gap - 2 * reference.b_tail_max(n, 39)) <= 1e-12
            assert gap <= 2 * reference.C * reference.rho ** n


class TestTaboo:
    def test_no_interior_paths(self):
        # interior vertices only point into S
        g = embed(WeightedGraph(4, {(1, 3): 1, (3, 1): 1, (4, 2): 1, (2, 4): 1}))
        for n in (3, 4, 5):
            for x in range(1, 5):
                for j in range(1, 5):
                    assert taboo_weight(g, (1, 2), n, x, j, window=4) == 0

    def test_two_step_matches_masked_product(self):
        weights = {(1, 2): 0.5, (2, 3): 2.0, (3, 4): -1.0, (4, 1): 0.25, (2, 2): 0.3, (3, 1): 1.5}
        g = WeightedGraph(4, weights)
        A = g.adjacency()
        S = (1,)
        mask = np.diag([0.0 if v in S else 1.0 for v in g.vertices])
        expected = A @ mask @ A
        cg = embed(g)
        for x in g.vertices:
            for j in g.vertices:
                assert taboo_weight(cg, S, 2, x, j, window=4) == pytest.approx(expected[x - 1, j - 1])

    def test_family_taboo_to_state_one(self, reference):
        cg = family_graph(reference)
        S = (1, 2)
        for i in (3, 4, 6):
            profile = taboo_profile(cg, S, i, 6, 40)
            for n in range(2, 7):
                expected = math.prod(reference.b(i + k) for k in range(n - 1)) * reference.a(i + n - 1)
                assert profile[n].get(1, 0) == pytest.approx(expected, rel=1e-12)

    def test_order_must_be_at_least_two(self, reference):
        with pytest.raises(ValueError):
            taboo_weight(family_graph(reference), (1, 2), 1, 3, 1)


class TestTypeB:
    def test_truncation_escape_times(self, reference):
        n, window = 8, 20
        g = truncated_graph(reference, n)
        cert = check_type_B(g, (1, 2), reference.b, window)
        assert cert
        for i in range(3, window + 1):
            assert cert.nS[i] == (n - i + 1 if i <= n else 1)
        assert cert.weighted_sum == pytest.approx(sum(cert.nS[i] * reference.b(i) for i in range(3, window + 1)))

    def test_interior_cycle_violates_condition_one(self):
        g = embed(WeightedGraph(4, {(1, 3): 1, (3, 4): 1, (4, 3): 1, (4, 1): 1}))
        verdict = check_type_B(g, (1,), lambda x: 1.0, 4)
        assert not verdict
        assert verdict.condition == "1"
        assert not verdict.inconclusive

    def test_bound_violation(self):
        g = embed(WeightedGraph(3, {(2, 3): 5.0, (3, 1): 1.0, (1, 2): 1.0}))
        verdict = check_type_B(g, (1,), lambda x: 1.0, 3)
        assert verdict.condition == "2"
        assert verdict.witness == (2, 3)

    def test_whole_window_is_vacuous(self, two_cycle):
        cert = check_type_B(embed(two_cycle[0]), (1, 2), lambda x: 1.0, 2)
        assert cert and cert.weighted_sum == 0

    def test_full_family_is_inconclusive(self, reference):
        verdict = check_type_B(family_graph(reference), (1, 2), reference.b, 10)
        assert not verdict and verdict.inconclusive

    def test_window_must_contain_s(self, reference):
        with pytest.raises(WindowTooSmallError):
            check_type_B(family_graph(reference), (1, 5), reference.b, 4)

    def test_agrees_with_structural_check_on_finite_graphs(self, make_planted_graph):
        rng = np.random.default_rng(5)
        for k in range(60):
            g, S = make_planted_graph(rng, loops=bool(k % 2))
            loop_free = all(g.diagonal(v) == 0 for v in g.interior(S))
            verdict = check_type_B(embed(g), S, lambda x: 1.0, g.n)
            assert bool(verdict) == loop_free


class TestTypeA:
    def test_family_passes_with_taboo_bound(self, reference):
        t, M = reference_type_A_bound(reference)
        cert = check_type_A(family_graph(reference), (1, 2), t, M, window=50, n_max=12)
        assert cert
        assert cert.worst_ratio <= 1

    def test_edgeless_interior(self):
        g = embed(WeightedGraph(3, {(1, 2): 1, (2, 1): 1}))
        assert check_type_A(g, (1, 2), lambda n: 0.0, lambda x, j: 1.0, window=3, n_max=5)

    def test_constant_step_down_violates_bound(self, reference):
        t, M = reference_type_A_bound(reference)
        flat = FamilyParams(GeometricA(0.5), lambda i: 0.9, reference.C, reference.rho, GeometricA(0.5).tail)
        verdict = check_type_A(family_graph(flat), (1, 2), t, M, window=30, n_max=12)
        assert not verdict
        assert verdict.condition == "bound"

    def test_slow_decay_fails_slope(self):
        g = embed(WeightedGraph(3, {(1, 2): 1, (2, 1): 1}))
        verdict = check_type_A(g, (1, 2), lambda n: 0.5 ** n, lambda x, j: 1.0, window=3, n_max=10)
        assert verdict.condition == "slope"

    def test_quasi_b_with_truncations(self, reference):
        t, M = reference_type_A_bound(reference)
        kernels = [truncated_graph(reference, n) for n in (4, 6, 8)]
        cert = check_type_A_quasi_B(
            family_graph(reference), kernels, (1, 2), t, M,
            [reference.b] * 3, window=30, n_max=8, gap_target=0.02,
        )
        assert cert
        assert list(cert.gaps) == sorted(cert.gaps, reverse=True)
        assert len(cert.type_b) == 3

    def test_quasi_b_rejects_growing_gaps(self, reference):
        t, M = reference_type_A_bound(reference)
        kernels = [truncated_graph(reference, n) for n in (8, 4)]
        verdict = check_type_A_quasi_B(
            family_graph(reference), kernels, (1, 2), t, M,
            [reference.b] * 2, window=30, n_max=8, gap_target=1.0,
        )
        assert verdict.condition == "gap"

    def test_quasi_b_needs_a_bound_per_kernel(self, reference):
        t, M = reference_type_A_bound(reference)
        kernels = [truncated_graph(reference, n) for n in (4, 6, 8)]
        with pytest.raises(ValueError, match="3 kernels but 2"):
            check_type_A_quasi_B(
                family_graph(reference), kernels, (1, 2), t, M,
                [reference.b] * 2, window=30, n_max=8, gap_target=0.02,
            )


class TestDepthSets:
    def test_whole_window(self, two_cycle):
        levels = depth_sets(embed(two_cycle[0]), (1, 2), 2)
        assert levels.levels == ((1, 2),)
        assert levels.unknown == ()

    def test_truncation_levels(self, reference):
        n, window = 6, 12
        levels = depth_sets(truncated_graph(reference, n), (1, 2), window)
        assert set(levels.levels[1]) - {1, 2} == set(range(n, window + 1))
        for i in range(3, n + 1):
            assert levels.depth(i) == n - i + 1
        assert levels.unknown == ()

    def test_full_family_leaves_unknowns(self, reference):
        levels = depth_sets(family_graph(reference), (1, 2), 10)
        assert levels.unknown == tuple(range(3, 11))

    def test_matches_finite_depths(self, corpus):
        for g, S in corpus[:60]:
            levels = depth_sets(embed(g), S, g.n)
            depths = compute_depths(g, S)
            for v in g.vertices:
                assert levels.depth(v) == depths.depth[v]


class TestSeries:
    def test_matches_linear_solve_on_corpus(self, corpus, away_from, rng_factory):
        rng = rng_factory(13)
        for g, S in corpus:
            cg = embed(g)
            for lam in away_from(g.sigma(S), 3, 0.1, rng):
                series, report = reduced_series(cg, S, lam, tol=1e-12, window=g.n)
                solved = reduce_linear_solve(g, S, lam).entries
                scale = max(1.0, float(np.abs(solved).max()))
                assert float(np.abs(series.entries - solved).max()) / scale <= 1e-10
                assert not report.warnings

    def test_terminates_after_two_terms(self):
        # interior vertices 2 and 3 only point back into S
        g = WeightedGraph(3, {(1, 2): 1, (1, 3): 2, (2, 1): 0.5, (3, 1): 0.25})
        series, report = reduced_series(embed(g), (1,), 2.0, window=3)
        assert report.terms_used == 2
        assert series.entry(1, 1) == pytest.approx((0.5 + 2 * 0.25) / 2.0)

    def test_family_converges_to_closed_form_matrix(self, reference):
        from src.markov import reduced_2x2

        R, _ = reduced_2x2(reference, tol=1e-14)
        series, report = reduced_series(family_graph(reference), (1, 2), 1.0, tol=1e-14, window=50)
        assert np.allclose(series.entries.real, R, atol=1e-10)
        assert np.abs(series.entries.imag).max() == 0
        assert report.warnings  # row 1 is infinite

    def test_more_terms_do_not_move_converged_entries(self, reference):
        g = family_graph(reference)
        coarse, _ = reduced_series(g, (1, 2), 1.0, tol=1e-10, window=40)
        fine, _ = reduced_series(g, (1, 2), 1.0, tol=1e-10, n_max=400, window=40)
        assert np.abs(coarse.entries - fine.entries).max() <= 1e-10

    def test_term_budget_adds_warning(self, reference):
        _, report = reduced_series(family_graph(reference), (1, 2), 1.0, n_max=2, window=30)
        assert report.terms_used == 2
        assert any("not converged" in w for w in report.warnings)

    def test_sigma_and_window_errors(self, reference):
        g = family_graph(reference)
        with pytest.raises(SigmaProximityError):
            reduced_series(g, (1, 2), 0.0, window=10)
        with pytest.raises(WindowTooSmallError):
            reduced_series(g, (1, 12), 1.0, window=10)


class TestFixedPoint:
    def test_empty_interior_returns_v(self, two_cycle):
        u, report = reconstruct_fixed_point(embed(two_cycle[0]), (1, 2), 1.0, [2.0, 3.0], window=2)
        assert u == pytest.approx([2.0, 3.0])
        assert report.terms_used == 1

    def test_matches_finite_reconstruction(self, corpus, away_from, rng_factory):
        rng = rng_factory(17)
        for g, S in corpus[:80]:
            [lam0] = away_from(g.sigma(S), 1, 0.5, rng)
            v = np.arange(1, len(S) + 1, dtype=complex)
            u, _ = reconstruct_fixed_point(embed(g), S, lam0, v, tol=1e-13, window=g.n)
            assert u == pytest.approx(reconstruct_eigenvector(g, S, lam0, v), abs=1e-10)
            rebuilt, unknown = reconstruct_by_depth(embed(g), S, lam0, v, window=g.n)
            assert unknown == ()
            assert rebuilt == pytest.approx(u, abs=1e-10)

    def test_keeps_v_on_s_and_solves_interior(self, corpus):
        g, S = corpus[1]
        v = np.ones(len(S))
        f = np.linspace(0, 1, g.n)
        u, _ = reconstruct_fixed_point(embed(g), S, 2.5, v, f=f, tol=1e-13, window=g.n)
        assert restrict(u, S) == pytest.approx(v)
        assert interior_residual(embed(g), S, 2.5, u, f=f) <= 1e-10

    def test_truncation_reproduces_finite_sums(self, reference):
        n, window = 10, 20
        g = truncated_graph(reference, n)
        series, _ = reduced_series(g, (1, 2), 1.0, window=window)
        v = np.array([1 - series.entry(2, 2), series.entry(2, 1)])
        u, _ = reconstruct_fixed_point(g, (1, 2), 1.0, v, window=window)
        for i in range(3, n):
            total = sum(
                math.prod(reference.b(i + l) for l in range(k - 1)) * reference.a(i + k - 1)
                for k in range(1, n - i + 2)
            )
            assert u[i - 1] == pytest.approx(total * v[0], abs=1e-12)
        for i in range(n, window + 1):
            assert u[i - 1] == pytest.approx(reference.a(i) * v[0], abs=1e-15)

    def test_budget_exhaustion(self):
        # |w / (lam0 - d)| = 2 along an interior cycle: no contraction
        g = CountableGraph(lambda i, j: 2.0 if (i, j) in ((2, 3), (3, 2), (1, 2), (2, 1)) else 0.0)
        with pytest.raises(ConvergenceError):
            reconstruct_fixed_point(g, (1,), 1.0, [1.0], window=3)


def restrict(u, S):
    return np.array([u[v - 1] for v in S])


class TestAlgorithm:
    def test_window_eigenvalue_skips_sigma(self, two_cycle):
        cg = embed(two_cycle[0])
        assert kth_window_eigenvalue(cg, (1,), 1, 2) == pytest.approx(1)
        assert kth_window_eigenvalue(cg, (1,), 2, 2) == pytest.approx(-1)
        with pytest.raises(NotAnEigenvalueError):
            kth_window_eigenvalue(cg, (1,), 3, 2)

    def test_family_truncation_has_stationary_pair(self, reference):
        from src.markov import reduced_2x2

        g = truncated_graph(reference, 8)
        pair = approximate_eigenpair(g, (1, 2), window=30, lam=1.0)
        u = pair.u.real
        assert pair.interior_residual < 1e-10
        assert np.all(u >= -1e-14)
        # v is proportional to (b_1, s)
        R, _ = reduced_2x2(reference)
        assert (pair.v[1] / pair.v[0]).real == pytest.approx(R[1, 0] / reference.b(1), rel=1e-8)

    def test_finite_embedding_recovers_eigenvector(self, corpus):
        for g, S in corpus[:20]:
            cg = embed(g)
            try:
                pair = approximate_eigenpair(cg, S, k=1, window=g.n)
            except NotAnEigenvalueError:
                continue
            A = g.adjacency()
            assert np.linalg.norm(A @ pair.u - pair.lam * pair.u) <= 1e-6 * np.linalg.norm(pair.u)

    def test_rejects_non_eigenvalue(self, two_cycle):
        with pytest.raises(NotAnEigenvalueError):
            approximate_eigenpair(embed(two_cycle[0]), (1,), window=2, lam=3.0)
