import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from src.core.errors import NotStructuralError, SigmaProximityError
from src.graph import WeightedGraph, enumerate_branches
from src.reduction import (
    branch_weight,
    check_outside_sigma,
    reduce_branches,
    reduce_linear_solve,
    reduced_derivative,
)

REL_TOLERANCE = 1e-10


def relative_gap(x: np.ndarray, y: np.ndarray) -> float:
    return float(np.abs(x - y).max(initial=0.0)) / max(1.0, float(np.abs(x).max(initial=0.0)))


class TestHandExamples:
    def test_two_cycle_is_one_over_lambda(self, two_cycle):
        g, S = two_cycle
        for lam in (2, 0.5j, -3 + 1j):
            R = reduce_branches(g, S, lam)
            assert R.entries.shape == (1, 1)
            assert R.entry(1, 1) == pytest.approx(1 / lam)

    def test_two_cycle_solve_at_two(self, two_cycle):
        R = reduce_linear_solve(*two_cycle, 2)
        assert R.entries[0, 0] == pytest.approx(0.5)
        assert R.method == "solve"

    def test_edgeless_gives_zero(self, edgeless):
        g, S = edgeless
        assert np.all(reduce_branches(g, S, 1.0).entries == 0)
        assert np.all(reduce_linear_solve(g, S, 1.0).entries == 0)

    def test_chain(self, chain):
        g, S = chain
        lam = 2.0
        # 1 -> 3 -> 2 -> 1: 0.5 * 3 / lam * 2 / lam
        assert reduce_branches(g, S, lam).entry(1, 1) == pytest.approx(0.5 * 3 * 2 / lam ** 2)

    def test_branch_weight_divides_by_inner_loops(self):
        g = WeightedGraph(2, {(1, 2): 2, (2, 2): 0.5, (2, 1): 3})
        [b] = enumerate_branches(g, (1,), 1, 1)
        assert branch_weight(b, 1.5, g) == pytest.approx(2 * 3 / (1.5 - 0.5))

    def test_entries_are_read_only(self, two_cycle):
        R = reduce_linear_solve(*two_cycle, 2)
        with pytest.raises(ValueError):
            R.entries[0, 0] = 1


class TestErrors:
    def test_lambda_in_sigma(self, two_cycle):
        g, S = two_cycle
        with pytest.raises(SigmaProximityError) as info:
            reduce_linear_solve(g, S, 0)
        assert info.value.sigma == 0
        with pytest.raises(SigmaProximityError):
            reduce_branches(g, S, 1e-12)

    def test_outside_sigma_passes(self, two_cycle):
        check_outside_sigma(*two_cycle, 0.5)

    def test_not_structural(self):
        g = WeightedGraph(3, {(2, 3): 1, (3, 2): 1})
        with pytest.raises(NotStructuralError):
            reduce_linear_solve(g, (1,), 1.0)
        with pytest.raises(NotStructuralError):
            reduce_branches(g, (1,), 1.0)


class TestOracleEquivalence:
    def test_branches_match_solve_on_corpus(self, corpus, away_from, rng_factory):
        rng = rng_factory(7)
        worst = 0.0
        for g, S in corpus:
            for lam in away_from(g.sigma(S), 20, 0.1, rng):
                solved = reduce_linear_solve(g, S, lam).entries
                branched = reduce_branches(g, S, lam).entries
                worst = max(worst, relative_gap(solved, branched))
        assert worst < REL_TOLERANCE

    def test_full_set_reduces_to_adjacency(self, corpus):
        for g, _ in corpus[:20]:
            S = tuple(g.vertices)
            assert np.array_equal(reduce_linear_solve(g, S, 0.3).entries, g.adjacency())

    @seed(11)
    @settings(max_examples=60, deadline=None)
    @given(
        graph_seed=st.integers(min_value=0, max_value=2**31 - 1),
        re=st.floats(min_value=-3, max_value=3),
        im=st.floats(min_value=-3, max_value=3),
    )
    def test_branches_match_solve_property(self, make_planted_graph, graph_seed, re, im):
        g, S = make_planted_graph(np.random.default_rng(graph_seed))
        lam = complex(re, im)
        if any(abs(lam - s) < 0.1 for s in g.sigma(S)):
            return
        assert relative_gap(reduce_linear_solve(g, S, lam).entries, reduce_branches(g, S, lam).entries) < REL_TOLERANCE


class TestAnalyticity:
    def test_derivative_of_two_cycle(self, two_cycle):
        lam = 2 + 1j
        assert reduced_derivative(*two_cycle, lam)[0, 0] == pytest.approx(-1 / lam ** 2)

    def test_central_differences_converge_at_second_order(self, corpus, away_from, rng_factory):
        rng = rng_factory(3)
        ratios = []
        for g, S in corpus[:20]:
            for lam in away_from(g.sigma(S), 10, 0.5, rng):
                exact = reduced_derivative(g, S, lam)

                def central(h):
                    ahead = reduce_linear_solve(g, S, lam + h).entries
                    behind = reduce_linear_solve(g, S, lam - h).entries
                    return (ahead - behind) / (2 * h)

                coarse = float(np.abs(central(0.02) - exact).max())
                fine = float(np.abs(central(0.01) - exact).max())
                if coarse < 1e-8:
                    continue
                ratios.append(coarse / fine)
        assert ratios
        assert all(3.2 <= r <= 4.8 for r in ratios)


def column_stochastic(g: WeightedGraph, S) -> WeightedGraph:
    """Nonnegative weights scaled so every column sums to 1; empty columns jump to S."""
    weights = {edge: abs(w) for edge, w in g.weights.items()}
    for j in g.vertices:
        column = {i: w for (i, k), w in weights.items() if k == j}
        total = sum(column.values())
        if total == 0:
            weights[(S[0], j)] = 1.0
            continue
        for i, w in column.items():
            weights[(i, j)] = w / total
    return WeightedGraph(g.n, weights)


class TestStochasticity:
    def test_reduction_at_one_is_column_stochastic(self, make_planted_graph, rng_factory):
        rng = rng_factory(23)
        for _ in range(40):
            g, S = make_planted_graph(rng, loops=False)
            R = reduce_linear_solve(column_stochastic(g, S), S, 1.0).entries
            assert np.all(R.real >= -1e-12)
            assert R.sum(axis=0) == pytest.approx(np.ones(len(S)), abs=1e-10)
