"""
Shared fixtures: an isolated config home, a seeded corpus of random graphs
with planted structural sets, small hand-checkable graphs and the reference
Markov parameters.
"""
import os
import tempfile

# must precede the first import of src.core.config
os.environ.setdefault("ISOREDUCE_HOME", tempfile.mkdtemp(prefix="isoreduce-test-"))

import numpy as np
import pytest

from src.graph import WeightedGraph
from src.markov import geometric_params, reference_params

CORPUS_SEED = 20240611
CORPUS_SIZE = 200


def _unit_disk(rng: np.random.Generator) -> complex:
    radius = np.sqrt(rng.random())
    angle = rng.random() * 2 * np.pi
    return complex(radius * np.cos(angle), radius * np.sin(angle))


def planted_graph(rng: np.random.Generator, n: int = None, loops: bool = True, density: float = 0.35):
    """
    Random graph on n <= 12 vertices whose interior is acyclic apart from loops.

    Interior edges only run forward in a random order of the interior; edges
    touching S are unrestricted. Weights lie in the unit disk.
    """
    n = int(rng.integers(3, 13)) if n is None else n
    size = int(rng.integers(1, min(3, n - 1) + 1))
    S = tuple(sorted(int(v) for v in rng.choice(np.arange(1, n + 1), size=size, replace=False)))
    interior = [v for v in range(1, n + 1) if v not in S]
    order = {v: k for k, v in enumerate(rng.permutation(interior).tolist())}

    weights = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                if i in order and loops and rng.random() < 0.5:
                    weights[(i, j)] = _unit_disk(rng)
                elif i not in order and rng.random() < 0.3:
                    weights[(i, j)] = _unit_disk(rng)
                continue
            if i in order and j in order and order[i] > order[j]:
                continue
            if rng.random() < density:
                weights[(i, j)] = _unit_disk(rng)
    return WeightedGraph(n, weights), S


@pytest.fixture(scope="session")
def make_planted_graph():
    return planted_graph


@pytest.fixture(scope="session")
def corpus():
    rng = np.random.default_rng(CORPUS_SEED)
    return [planted_graph(rng) for _ in range(CORPUS_SIZE)]


@pytest.fixture(scope="session")
def rng_factory():
    def make(seed: int) -> np.random.Generator:
        return np.random.default_rng(seed)
    return make


def lambdas_away_from(sigma, count: int, distance: float, rng: np.random.Generator, radius: float = 3.0):
    """`count` random complex points at least `distance` from every value of sigma."""
    points = []
    while len(points) < count:
        z = complex(rng.uniform(-radius, radius), rng.uniform(-radius, radius))
        if all(abs(z - s) >= distance for s in sigma):
            points.append(z)
    return points


@pytest.fixture(scope="session")
def away_from():
    return lambdas_away_from


@pytest.fixture
def two_cycle():
    """w(1,2) = w(2,1) = 1, S = {1}."""
    return WeightedGraph(2, {(1, 2): 1, (2, 1): 1}), (1,)


@pytest.fixture
def edgeless():
    return WeightedGraph(2, {}), (1,)


@pytest.fixture
def chain():
    """S = {1}, w(2,1) = 2, w(3,2) = 3, w(1,3) = 0.5."""
    return WeightedGraph(3, {(2, 1): 2.0, (3, 2): 3.0, (1, 3): 0.5}), (1,)


@pytest.fixture
def reference():
    """a_i = 2^-i, b_i = 0.5 * 0.6^i."""
    return reference_params()


@pytest.fixture
def halving():
    """a_i = b_i = 2^-i."""
    return geometric_params(0.5, 1.0, 0.5, 1.01)


GRAPH_TWO_CYCLE = "n 2\nS 1\ne 1 2 1 0\ne 2 1 1 0\n"
GRAPH_EDGELESS = "n 2\nS 1\n"
GRAPH_INTERIOR_CYCLE = "n 3\nS 1\ne 1 2 1\ne 2 3 1\ne 3 2 1\ne 3 1 1\n"
PARAMS_REFERENCE = "family = geometric\nalpha = 0.5\nbeta = 0.5\nrho = 0.6\nC = 1.01\n"


@pytest.fixture
def write_file(tmp_path):
    def write(name: str, text: str) -> str:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return write


@pytest.fixture
def graph_files(write_file):
    return {
        "two_cycle": write_file("two_cycle.graph", GRAPH_TWO_CYCLE),
        "edgeless": write_file("edgeless.graph", GRAPH_EDGELESS),
        "interior_cycle": write_file("interior_cycle.graph", GRAPH_INTERIOR_CYCLE),
    }


@pytest.fixture
def params_file(write_file):
    return write_file("reference.params", PARAMS_REFERENCE)
