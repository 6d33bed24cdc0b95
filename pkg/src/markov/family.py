"""
The two-sequence family of countable Markov chains and its truncations.

w(i, j) is the probability of moving from state j to state i (columns sum to 1):

    w(i, 1) = a_i                    from 1, jump anywhere
    w(2, 2) = 1 - b_1                2 holds
    w(i - 1, i) = b_{i-1}, i >= 2    step down
    w(1, i) = 1 - b_{i-1}, i >= 3    fall back to 1

The truncation w_n keeps the step down only for i <= n and sends every state
above n straight back to 1.
"""
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, Optional, Tuple

from src.core.errors import InvalidParamsError, ParamsFormatError
from src.infinite.countable_graph import CountableGraph

logger = logging.getLogger(__name__)

STRUCTURAL_SET = (1, 2)


@dataclass(frozen=True)
class GeometricA:
    """a_i = (1 - alpha) alpha^(i - 1); sums to 1."""

    alpha: float

    def __call__(self, i: int) -> float:
        return (1.0 - self.alpha) * self.alpha ** (i - 1)

    def tail(self, N: int) -> float:
        """sum_{i >= N} a_i"""
        return self.alpha ** (max(N, 1) - 1)


@dataclass(frozen=True)
class GeometricB:
    """b_i = beta rho^i."""

    beta: float
    rho: float

    def __call__(self, i: int) -> float:
        return self.beta * self.rho ** i


@dataclass(frozen=True)
class FamilyParams:
    """
    Sequences a (jump law from state 1) and b (step-down probabilities) with
    the constants of the decay condition b_i < C rho^i.
    """

    a: Callable[[int], float]
    b: Callable[[int], float]
    C: float
    rho: float
    a_tail_bound: Callable[[int], float]
    family: str = "custom"
    settings: Dict[str, float] = field(default_factory=dict, compare=False)

    def b_tail_max(self, n: int, upto: int) -> float:
        """max b_i over n <= i <= upto."""
        return max(self.b(i) for i in range(n, upto + 1))


def geometric_params(alpha: float, beta: float, rho: float, C: float) -> FamilyParams:
    """The built-in geometric family."""
    settings = {"alpha": alpha, "beta": beta, "rho": rho, "C": C}
    a = GeometricA(alpha)
    return FamilyParams(a, GeometricB(beta, rho), C, rho, a.tail, "geometric", settings)


def reference_params() -> FamilyParams:
    """a_i = 2^-i, b_i = 0.5 * 0.6^i, C = 1.01, rho = 0.6."""
    return geometric_params(0.5, 0.5, 0.6, 1.01)


def validate(p: FamilyParams, probe: int = 200, eps: float = 1e-9):
    """
    Check the family conditions on indices 1..probe.

    B1: 0 < a_i < 1 and sum a_i + tail(probe + 1) = 1 within eps.
    B2: 0 < b_i < 1, C > 1, 0 < rho < 1 and b_i < C rho^i.

    Once tail(i) or C rho^i drops below the smallest normal float, the
    corresponding term may underflow to 0 and only 0 <= term <= bound is checked.

    Raises:
        InvalidParamsError: naming the violated condition
    """
    if not p.C > 1:
        raise InvalidParamsError("B2", f"C must exceed 1, got {p.C}")
    if not 0 < p.rho < 1:
        raise InvalidParamsError("B2", f"rho must lie in (0, 1), got {p.rho}")

    tiny = sys.float_info.min
    total = 0.0
    for i in range(1, probe + 1):
        a_i, b_i = p.a(i), p.b(i)
        a_bound = p.a_tail_bound(i)
        if a_bound >= tiny:
            if not 0 < a_i < 1:
                raise InvalidParamsError("B1", f"a_{i} = {a_i} is not in (0, 1)")
        elif not 0 <= a_i <= a_bound:
            raise InvalidParamsError("B1", f"a_{i} = {a_i} exceeds its tail bound {a_bound}")

        b_bound = p.C * p.rho ** i
        if b_bound >= tiny:
            if not 0 < b_i < 1:
                raise InvalidParamsError("B2", f"b_{i} = {b_i} is not in (0, 1)")
            if not b_i < b_bound:
                raise InvalidParamsError("B2", f"b_{i} = {b_i} is not below C rho^{i} = {b_bound}")
        elif not 0 <= b_i <= b_bound:
            raise InvalidParamsError("B2", f"b_{i} = {b_i} is not below C rho^{i} = {b_bound}")
        total += a_i

    total += p.a_tail_bound(probe + 1)
    if abs(total - 1.0) > eps:
        raise InvalidParamsError("B1", f"a sums to {total}, not 1")


def family_weight(p: FamilyParams, i: int, j: int) -> float:
    """Transition probability from j to i in the full chain."""
    if j == 1:
        return p.a(i)
    if i == 2 and j == 2:
        return 1.0 - p.b(1)
    if i == j - 1:
        return p.b(i)
    if i == 1 and j >= 3:
        return 1.0 - p.b(j - 1)
    return 0.0


def truncated_weight(p: FamilyParams, n: int, i: int, j: int) -> float:
    """Transition probability from j to i in the truncation w_n."""
    if n < 2:
        raise ValueError(f"truncation order must be at least 2, got {n}")
    if j == 1:
        return p.a(i)
    if i == 2 and j == 2:
        return 1.0 - p.b(1)
    if i == j - 1 and j <= n:
        return p.b(i)
    if i == 1 and j >= 3:
        return 1.0 - p.b(j - 1) if j <= n else 1.0
    return 0.0


def _rows(weight: Callable[[int, int], float]):
    def row_support(i: int) -> Optional[Tuple[int, ...]]:
        if i == 1:
            return None
        return tuple(j for j in (1, i, i + 1) if weight(i, j) != 0)
    return row_support


def _cols(weight: Callable[[int, int], float]):
    def col_support(j: int) -> Optional[Tuple[int, ...]]:
        if j == 1:
            return None
        return tuple(i for i in (1, j - 1, j) if i >= 1 and weight(i, j) != 0)
    return col_support


def family_graph(p: FamilyParams) -> CountableGraph:
    """The full chain w as a countable graph with exact supports."""
    def weight(i: int, j: int) -> float:
        return family_weight(p, i, j)
    return CountableGraph(weight, _rows(weight), _cols(weight), 1.0, (0j,), f"{p.family}")


def truncated_graph(p: FamilyParams, n: int) -> CountableGraph:
    """The truncation w_n as a countable graph with exact supports."""
    if n < 2:
        raise ValueError(f"truncation order must be at least 2, got {n}")

    def weight(i: int, j: int) -> float:
        return truncated_weight(p, n, i, j)
    return CountableGraph(weight, _rows(weight), _cols(weight), 1.0, (0j,), f"{p.family}[n={n}]")


def superexponential_diagnostic(p: FamilyParams, n: int) -> float:
    """(1/n) log prod_{i < n} b_i."""
    return sum(math.log(p.b(i)) for i in range(1, n)) / n


def reference_type_A_bound(p: FamilyParams):
    """
    t_n = C^2 (rho^3 + rho^(n+1) / (1 - rho)) prod_{k=1}^{n-3} C rho^k and
    M(i, j) = rho^(i-1), the taboo bounds of the family.
    """
    C, rho = p.C, p.rho

    def t(n: int) -> float:
        product = math.prod(C * rho ** k for k in range(1, n - 2))
        return C ** 2 * (rho ** 3 + rho ** (n + 1) / (1 - rho)) * product

    def M(i: int, j: int) -> float:
        return rho ** (i - 1)

    return t, M


def parse_params_text(text: str) -> Dict[str, str]:
    """
    Parse `key = value` lines; `#` starts a comment.

    Raises:
        ParamsFormatError: malformed or duplicate lines, or no `family` key
    """
    entries: Dict[str, str] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParamsFormatError(f"line {line_no}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise ParamsFormatError(f"line {line_no}: empty key or value")
        if key in entries:
            raise ParamsFormatError(f"line {line_no}: duplicate key {key!r}")
        entries[key] = value
    if "family" not in entries:
        raise ParamsFormatError("missing 'family' key")
    return entries


def load_params(path, plugin_manager=None) -> FamilyParams:
    """
    Read a params file and build FamilyParams through the family registry.

    Raises:
        ParamsFormatError: unreadable file, bad syntax, unknown family or bad values
    """
    from src.plugins.plugin_manager import PluginManager

    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise ParamsFormatError(f"cannot read params file {path}: {e}")
    entries = parse_params_text(text)

    manager = plugin_manager or PluginManager.default()
    family = entries.pop("family")
    params = manager.build(family, entries)
    logger.info(f"Loaded {family} family parameters from {path}")
    return params
