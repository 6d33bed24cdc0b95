"""
Finite weighted directed graphs and the edge-list graph file format.
"""
import cmath
import logging
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, NamedTuple, Sequence, Tuple

import numpy as np

from src.core.errors import GraphFormatError
from src.utils.numbers import format_real

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


@dataclass(frozen=True)
class WeightedGraph:
    """
    Directed graph on vertices 1..n with complex weights.

    Absent pairs have weight 0; zero weights are never stored.
    """

    n: int
    weights: Mapping[Edge, complex] = field(default_factory=dict)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"vertex count must be a positive integer, got {self.n!r}")

        cleaned: Dict[Edge, complex] = {}
        for (i, j), w in self.weights.items():
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ValueError(f"edge ({i}, {j}) outside vertex range 1..{self.n}")
            w = complex(w)
            if not cmath.isfinite(w):
                raise ValueError(f"non-finite weight on edge ({i}, {j})")
            if w != 0:
                cleaned[(i, j)] = w

        successors: Dict[int, List[int]] = {v: [] for v in self.vertices}
        predecessors: Dict[int, List[int]] = {v: [] for v in self.vertices}
        for (i, j) in sorted(cleaned):
            successors[i].append(j)
            predecessors[j].append(i)

        object.__setattr__(self, "weights", MappingProxyType(cleaned))
        object.__setattr__(self, "_successors", {v: tuple(s) for v, s in successors.items()})
        object.__setattr__(self, "_predecessors", {v: tuple(p) for v, p in predecessors.items()})

    @classmethod
    def from_dense(cls, matrix) -> "WeightedGraph":
        """Build a graph from a square matrix; entry [i-1, j-1] is w(i, j)."""
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {matrix.shape}")
        rows, cols = np.nonzero(matrix)
        weights = {(int(r) + 1, int(c) + 1): complex(matrix[r, c]) for r, c in zip(rows, cols)}
        return cls(matrix.shape[0], weights)

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def weight(self, i: int, j: int) -> complex:
        return self.weights.get((i, j), 0j)

    def diagonal(self, i: int) -> complex:
        return self.weights.get((i, i), 0j)

    def successors(self, i: int) -> Tuple[int, ...]:
        """Vertices j with w(i, j) != 0, ascending."""
        return self._successors[i]

    def predecessors(self, j: int) -> Tuple[int, ...]:
        """Vertices i with w(i, j) != 0, ascending."""
        return self._predecessors[j]

    def adjacency(self) -> np.ndarray:
        """Dense matrix A with A[i-1, j-1] = w(i, j)."""
        A = np.zeros((self.n, self.n), dtype=complex)
        for (i, j), w in self.weights.items():
            A[i - 1, j - 1] = w
        return A

    def norm_inf(self) -> float:
        """Maximum absolute row sum of A."""
        rows = np.zeros(self.n)
        for (i, _), w in self.weights.items():
            rows[i - 1] += abs(w)
        return float(rows.max())

    def scale(self) -> float:
        """max(1, ||A||_inf), the reference magnitude for relative tolerances."""
        return max(1.0, self.norm_inf())

    def interior(self, S: Iterable[int]) -> Tuple[int, ...]:
        S = set(S)
        return tuple(v for v in self.vertices if v not in S)

    def sigma(self, S: Iterable[int]) -> Tuple[complex, ...]:
        """Distinct diagonal values w(i, i) over i outside S, in first-seen vertex order."""
        seen: List[complex] = []
        for i in self.interior(S):
            d = self.diagonal(i)
            if d not in seen:
                seen.append(d)
        return tuple(seen)


@dataclass(frozen=True)
class Branch:
    """A path (i_0, ..., i_p), p >= 1, whose interior vertices avoid S."""

    vertices: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        if len(self.vertices) < 2:
            raise ValueError("a branch has at least one edge")

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    @property
    def inner(self) -> Tuple[int, ...]:
        return self.vertices[1:-1]

    def is_valid(self, g: WeightedGraph, S: Iterable[int]) -> bool:
        """Re-check the branch conditions against g and S."""
        S = set(S)
        path = self.vertices
        if any(g.weight(a, b) == 0 for a, b in zip(path, path[1:])):
            return False
        if len(set(path[:-1])) != len(path) - 1:
            return False
        return all(z not in S for z in self.inner)


class ParsedGraph(NamedTuple):
    graph: WeightedGraph
    structural_set: Tuple[int, ...]


def _parse_int(token: str, line_no: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphFormatError(f"{what} must be an integer, got {token!r}", line_no)


def _parse_float(token: str, line_no: int, what: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise GraphFormatError(f"{what} must be a number, got {token!r}", line_no)
    if not np.isfinite(value):
        raise GraphFormatError(f"{what} must be finite", line_no)
    return value


def parse_graph(text: str) -> ParsedGraph:
    """
    Parse the edge-list graph format.

    Directives, one per line: `# comment`, `n <count>`, `S <v1> <v2> ...`,
    `e <i> <j> <re> [<im>]`. Exactly one `n` line (before any `e`) and exactly
    one nonempty `S` line.

    Raises:
        GraphFormatError: on any violation, with the offending line number
    """
    n = None
    S = None
    weights: Dict[Edge, complex] = {}
    declared = set()
    s_line = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        directive, args = tokens[0], tokens[1:]

        if directive == "n":
            if n is not None:
                raise GraphFormatError("duplicate 'n' directive", line_no)
            if len(args) != 1:
                raise GraphFormatError("'n' takes exactly one argument", line_no)
            n = _parse_int(args[0], line_no, "vertex count")
            if n < 1:
                raise GraphFormatError("vertex count must be at least 1", line_no)

        elif directive == "S":
            if S is not None:
                raise GraphFormatError("duplicate 'S' directive", line_no)
            if not args:
                raise GraphFormatError("structural set is empty", line_no)
            S = [_parse_int(a, line_no, "vertex") for a in args]
            s_line = line_no
            if len(set(S)) != len(S):
                raise GraphFormatError("repeated vertex in 'S'", line_no)

        elif directive == "e":
            if n is None:
                raise GraphFormatError("'e' before 'n'", line_no)
            if len(args) not in (3, 4):
                raise GraphFormatError("'e' takes i j re [im]", line_no)
            i = _parse_int(args[0], line_no, "vertex")
            j = _parse_int(args[1], line_no, "vertex")
            for v in (i, j):
                if not 1 <= v <= n:
                    raise GraphFormatError(f"vertex {v} outside 1..{n}", line_no)
            if (i, j) in declared:
                raise GraphFormatError(f"duplicate edge ({i}, {j})", line_no)
            declared.add((i, j))
            re_part = _parse_float(args[2], line_no, "real part")
            im_part = _parse_float(args[3], line_no, "imaginary part") if len(args) == 4 else 0.0
            weights[(i, j)] = complex(re_part, im_part)

        else:
            raise GraphFormatError(f"unknown directive {directive!r}", line_no)

    if n is None:
        raise GraphFormatError("missing 'n' directive")
    if S is None:
        raise GraphFormatError("missing 'S' directive")
    for v in S:
        if not 1 <= v <= n:
            raise GraphFormatError(f"structural vertex {v} outside 1..{n}", s_line)

    graph = WeightedGraph(n, weights)
    logger.debug(f"Parsed graph with {n} vertices, {len(graph.weights)} edges, |S|={len(S)}")
    return ParsedGraph(graph, tuple(sorted(S)))


def load_graph(path) -> ParsedGraph:
    """
    Read and parse a graph file.

    Raises:
        OSError: the file cannot be read
        GraphFormatError: the file is not UTF-8 text or is malformed
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise GraphFormatError(f"{path} is not UTF-8 text: {e.reason} at byte {e.start}")
    return parse_graph(text)


def serialize_graph(g: WeightedGraph, S: Sequence[int]) -> str:
    """Inverse of parse_graph on the sparse weight map."""
    lines = [f"n {g.n}", "S " + " ".join(str(v) for v in sorted(S))]
    for (i, j), w in sorted(g.weights.items()):
        if w.imag == 0:
            lines.append(f"e {i} {j} {format_real(w.real, 17)}")
        else:
            lines.append(f"e {i} {j} {format_real(w.real, 17)} {format_real(w.imag, 17)}")
    return "\n".join(lines) + "\n"
