"""
Structural sets, vertex depths and branch enumeration on finite graphs.
"""
import logging
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, List, Mapping, Optional, Tuple

import networkx as nx

from src.core.errors import EmptyStructuralSetError, NotStructuralError
from src.graph.weighted_graph import Branch, WeightedGraph

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StructuralVerdict:
    """Outcome of a structural-set check; `witness` is a closed interior cycle."""

    is_structural: bool
    witness: Optional[Tuple[int, ...]] = None

    def __bool__(self) -> bool:
        return self.is_structural


@dataclass(frozen=True)
class DepthAssignment:
    """Depth of every vertex relative to a structural set S."""

    S: Tuple[int, ...]
    depth: Mapping[int, int]
    sigma: Tuple[complex, ...]

    @property
    def max_depth(self) -> int:
        return max(self.depth.values())

    def level(self, m: int) -> Tuple[int, ...]:
        """Vertices of depth exactly m."""
        return tuple(v for v, d in sorted(self.depth.items()) if d == m)

    def within(self, m: int) -> Tuple[int, ...]:
        """The set S_m of vertices of depth <= m."""
        return tuple(v for v, d in sorted(self.depth.items()) if d <= m)

    def order(self) -> Tuple[int, ...]:
        """All vertices by increasing depth, ties by label."""
        return tuple(sorted(self.depth, key=lambda v: (self.depth[v], v)))


def _normalize_set(g: WeightedGraph, S: Iterable[int]) -> Tuple[int, ...]:
    S = tuple(sorted(set(S)))
    if not S:
        raise EmptyStructuralSetError("structural set must be nonempty")
    bad = [v for v in S if not 1 <= v <= g.n]
    if bad:
        raise ValueError(f"vertices {bad} outside 1..{g.n}")
    return S


def interior_digraph(g: WeightedGraph, S: Iterable[int]) -> nx.DiGraph:
    """Subgraph induced on V minus S with loops removed."""
    S = set(S)
    graph = nx.DiGraph()
    interior = [v for v in g.vertices if v not in S]
    graph.add_nodes_from(interior)
    for i in interior:
        for j in g.successors(i):
            if j != i and j not in S:
                graph.add_edge(i, j)
    return graph


def is_structural_set(g: WeightedGraph, S: Iterable[int]) -> StructuralVerdict:
    """
    Check that every non-loop cycle of g meets S.

    Equivalently, the loop-free subgraph induced on the complement of S is
    acyclic. When it is not, the first cycle found by a depth-first search in
    ascending vertex order is returned as witness, closed (first vertex repeated).

    Raises:
        EmptyStructuralSetError: S is empty
    """
    S = _normalize_set(g, S)
    interior = interior_digraph(g, S)
    if interior.number_of_edges() == 0:
        return StructuralVerdict(True)
    try:
        cycle = nx.find_cycle(interior, source=sorted(interior.nodes))
    except nx.NetworkXNoCycle:
        return StructuralVerdict(True)

    witness = tuple(edge[0] for edge in cycle) + (cycle[0][0],)
    logger.debug(f"S={S} is not structural, witness cycle {witness}")
    return StructuralVerdict(False, witness)


def require_structural(g: WeightedGraph, S: Iterable[int]) -> Tuple[int, ...]:
    """Normalize S and raise NotStructuralError unless it is structural."""
    S = _normalize_set(g, S)
    verdict = is_structural_set(g, S)
    if not verdict:
        raise NotStructuralError(verdict.witness)
    return S


def compute_depths(g: WeightedGraph, S: Iterable[int]) -> DepthAssignment:
    """
    Assign each vertex its depth: 0 on S, and for an interior vertex one more
    than the largest depth among its successors (its own loop excluded).

    Raises:
        NotStructuralError: the interior carries a non-loop cycle
    """
    S = require_structural(g, S)
    interior = interior_digraph(g, S)

    depth = {v: 0 for v in S}
    # successors come later in a topological order, so walk it backwards
    for v in reversed(list(nx.lexicographical_topological_sort(interior))):
        successors = [j for j in g.successors(v) if j != v]
        depth[v] = 1 + max((depth[j] for j in successors), default=0)

    return DepthAssignment(S, MappingProxyType(dict(sorted(depth.items()))), g.sigma(S))


def enumerate_branches(g: WeightedGraph, S: Iterable[int], i: int, j: int) -> List[Branch]:
    """
    All branches from i to j: simple paths with nonzero weights whose inner
    vertices lie outside S. Returned in lexicographic order.

    Raises:
        NotStructuralError: S is not structural (the enumeration might not end)
    """
    S = set(require_structural(g, S))
    branches: List[Branch] = []

    def extend(path: List[int]):
        for z in g.successors(path[-1]):
            if z == j:
                branches.append(Branch(tuple(path) + (j,)))
            elif z not in S and z not in path:
                path.append(z)
                extend(path)
                path.pop()

    extend([i])
    branches.sort(key=lambda b: b.vertices)
    return branches
