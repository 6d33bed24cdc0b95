"""
Countable graphs on vertices 1, 2, 3, ... given by weight and support oracles.

Every computation here is windowed: it looks at vertices 1..window only and
says so in a TruncationReport.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Tuple

import numpy as np

from src.core.errors import OracleError
from src.graph.weighted_graph import WeightedGraph
from src.utils.numbers import format_real

logger = logging.getLogger(__name__)

WeightOracle = Callable[[int, int], complex]
# returns the support as a finite iterable, or None when it is infinite
SupportOracle = Callable[[int], Optional[Iterable[int]]]


@dataclass(frozen=True)
class TruncationReport:
    """How a windowed computation was cut off."""

    terms_used: int
    last_term_norm: float
    window: int
    tail_bound: Optional[float] = None
    warnings: Tuple[str, ...] = ()

    def to_dict(self) -> Dict:
        return {
            "terms_used": self.terms_used,
            "last_term_norm": self.last_term_norm,
            "tail_bound": self.tail_bound,
            "window": self.window,
            "warnings": list(self.warnings),
        }

    def to_text(self) -> str:
        lines = [
            f"terms_used = {self.terms_used}",
            f"last_term_norm = {format_real(self.last_term_norm)}",
        ]
        if self.tail_bound is not None:
            lines.append(f"tail_bound = {format_real(self.tail_bound)}")
        lines.append(f"window = {self.window}")
        lines.append("warnings = " + ("; ".join(self.warnings) if self.warnings else "none"))
        return "\n".join(lines)


@dataclass(frozen=True)
class CountableGraph:
    """
    A weight function w on a countable vertex set with declared supports.

    Attributes:
        weight: oracle (i, j) -> w(i, j)
        row_support: oracle i -> {j : w(i, j) != 0}, None when infinite;
            when the oracle itself is missing every row is scanned over the window
        col_support: oracle j -> {i : w(i, j) != 0}, same conventions
        norm_bound: declared upper bound for the (1, inf)-norm (largest column mass)
        sigma_closure: declared limit points of the interior diagonal values
        name: label used in logs and reports
    """

    weight: WeightOracle
    row_support: Optional[SupportOracle] = None
    col_support: Optional[SupportOracle] = None
    norm_bound: float = math.inf
    sigma_closure: Tuple[complex, ...] = ()
    name: str = ""

    @classmethod
    def from_finite(cls, g: WeightedGraph, name: str = "finite") -> "CountableGraph":
        """Embed a finite graph; vertices above g.n are isolated."""
        def weight(i: int, j: int) -> complex:
            if 1 <= i <= g.n and 1 <= j <= g.n:
                return g.weight(i, j)
            return 0j

        def rows(i: int) -> Tuple[int, ...]:
            return g.successors(i) if 1 <= i <= g.n else ()

        def cols(j: int) -> Tuple[int, ...]:
            return g.predecessors(j) if 1 <= j <= g.n else ()

        column_mass = [0.0] * (g.n + 1)
        for (_, j), w in g.weights.items():
            column_mass[j] += abs(w)
        return cls(weight, rows, cols, max(column_mass), (), name)

    def _support(self, oracle: Optional[SupportOracle], k: int) -> Optional[Tuple[int, ...]]:
        if oracle is None:
            return None
        support = oracle(k)
        return None if support is None else tuple(sorted(set(support)))

    def row_is_complete(self, i: int, window: int) -> bool:
        """True when every j with w(i, j) != 0 lies in 1..window."""
        support = self._support(self.row_support, i)
        return support is not None and all(j <= window for j in support)

    def row(self, i: int, window: int) -> Dict[int, complex]:
        """Nonzero weights w(i, j) for j in 1..window, ascending j."""
        support = self._support(self.row_support, i)
        candidates = range(1, window + 1) if support is None else (j for j in support if 1 <= j <= window)
        entries = {}
        for j in candidates:
            w = complex(self.weight(i, j))
            if w != 0:
                entries[j] = w
        return entries

    def col(self, j: int, window: int) -> Dict[int, complex]:
        """Nonzero weights w(i, j) for i in 1..window, ascending i."""
        support = self._support(self.col_support, j)
        candidates = range(1, window + 1) if support is None else (i for i in support if 1 <= i <= window)
        entries = {}
        for i in candidates:
            w = complex(self.weight(i, j))
            if w != 0:
                entries[i] = w
        return entries

    def column_mass(self, j: int, window: int) -> float:
        """
        sum_i |w(i, j)|: over the whole column when its support is finite,
        otherwise over i in 1..window.
        """
        support = self._support(self.col_support, j)
        if support is None:
            return float(sum(abs(w) for w in self.col(j, window).values()))
        return float(sum(abs(complex(self.weight(i, j))) for i in support))

    def probe_norm(self, window: int) -> float:
        """Largest column mass over columns 1..window."""
        return max(self.column_mass(j, window) for j in range(1, window + 1))

    def verify(self, window: int, slack: float = 1e-12):
        """
        Check the declared norm bound and the support oracles on the window.

        Raises:
            OracleError: a probed column exceeds norm_bound, or a nonzero weight
                is missing from a finite declared support
        """
        for j in range(1, window + 1):
            mass = self.column_mass(j, window)
            if mass > self.norm_bound * (1 + slack) + slack:
                raise OracleError(f"{self.name or 'graph'}: column {j} has mass {mass} above declared bound {self.norm_bound}")

        rows = {i: self._support(self.row_support, i) for i in range(1, window + 1)}
        cols = {j: self._support(self.col_support, j) for j in range(1, window + 1)}
        for i in range(1, window + 1):
            for j in range(1, window + 1):
                if complex(self.weight(i, j)) == 0:
                    continue
                if rows[i] is not None and j not in rows[i]:
                    raise OracleError(f"w({i}, {j}) != 0 but {j} is not in the row support of {i}")
                if cols[j] is not None and i not in cols[j]:
                    raise OracleError(f"w({i}, {j}) != 0 but {i} is not in the column support of {j}")
        logger.debug(f"Verified oracle {self.name!r} on window {window}")

    def dense(self, window: int) -> np.ndarray:
        """The window x window matrix M[i-1, j-1] = w(i, j)."""
        M = np.zeros((window, window), dtype=complex)
        for i in range(1, window + 1):
            for j, w in self.row(i, window).items():
                M[i - 1, j - 1] = w
        return M

    def diagonal(self, i: int) -> complex:
        return complex(self.weight(i, i))

    def sigma_d(self, S: Iterable[int], window: int) -> Tuple[complex, ...]:
        """Distinct interior diagonal values on the window plus the declared closure points."""
        S = set(S)
        values: List[complex] = []
        for z in range(1, window + 1):
            if z in S:
                continue
            d = self.diagonal(z)
            if d not in values:
                values.append(d)
        for d in self.sigma_closure:
            d = complex(d)
            if d not in values:
                values.append(d)
        return tuple(values)

    def to_finite(self, window: int) -> WeightedGraph:
        """The induced finite graph on 1..window."""
        return WeightedGraph.from_dense(self.dense(window))


def _column_rows(g: CountableGraph, j: int) -> Optional[set]:
    support = g._support(g.col_support, j)
    return None if support is None else set(support)


def one_inf_norm_gap(g1: CountableGraph, g2: CountableGraph, window: int) -> float:
    """
    sup over columns j <= window of sum_i |w1(i, j) - w2(i, j)|.

    i ranges over the union of both column supports; an infinite column is
    restricted to 1..window.
    """
    gap = 0.0
    for j in range(1, window + 1):
        first, second = _column_rows(g1, j), _column_rows(g2, j)
        if first is None or second is None:
            rows = set(range(1, window + 1)) | (first or set()) | (second or set())
        else:
            rows = first | second
        total = sum(abs(complex(g1.weight(i, j)) - complex(g2.weight(i, j))) for i in rows)
        gap = max(gap, float(total))
    return gap
