"""
Finite-sample certificates that a finite S is a structural set of a countable
graph: taboo weights, type A (superexponential taboo decay), type B (finite
escape from the interior) and type A quasi-B, plus the depth sets S_0, S_1, ...

A certificate only speaks for the probed window and orders. Taboo weights use
the full weight function, interior loops included.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from src.core.config import config
from src.core.errors import NodeBudgetError, WindowTooSmallError
from src.infinite.countable_graph import CountableGraph, one_inf_norm_gap

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Violation:
    """
    A failed certificate check.

    `condition` names the failing requirement: "1", "2", "3" for type B,
    "bound" or "slope" for type A, "gap" for the quasi-B kernel sequence.
    Inconclusive reports mean the window ran out before a decision.
    """

    condition: str
    witness: Tuple
    message: str
    inconclusive: bool = False

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class TypeBCertificate:
    S: Tuple[int, ...]
    M: Dict[int, float]
    nS: Dict[int, int]
    weighted_sum: float
    window: int

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class TypeACertificate:
    S: Tuple[int, ...]
    t: Dict[int, float]
    M_bound: Callable[[int, int], float]
    slope_diagnostic: Dict[int, float]
    window: int
    n_max: int
    worst_ratio: float = 0.0

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class TypeAQuasiBCertificate:
    type_a: TypeACertificate
    gaps: Tuple[float, ...]
    type_b: Tuple[TypeBCertificate, ...]

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class DepthSets:
    """Nested sets S_0 = S, S_1, ... on the window, and the vertices never absorbed."""

    levels: Tuple[Tuple[int, ...], ...]
    unknown: Tuple[int, ...] = field(default=())

    def depth(self, x: int) -> Optional[int]:
        for m, level in enumerate(self.levels):
            if x in level:
                return m
        return None


def _interior_step(g: CountableGraph, S: frozenset, dist: Dict[int, complex], window: int, budget: List[int]) -> Dict[int, complex]:
    nxt: Dict[int, complex] = {}
    for z, mass in dist.items():
        for y, w in g.row(z, window).items():
            if y in S:
                continue
            nxt[y] = nxt.get(y, 0j) + mass * w
            budget[0] -= 1
    if budget[0] < 0:
        raise NodeBudgetError("taboo path enumeration exceeded its node budget; enlarge it or shrink the window")
    return {z: m for z, m in nxt.items() if m != 0}


def taboo_profile(g: CountableGraph, S: Sequence[int], x: int, n_max: int, window: int) -> Dict[int, Dict[int, complex]]:
    """
    Taboo weights tau_n(x, {j}) for every n in 2..n_max and every j in the window.

    Paths (x, z_1, ..., z_{n-1}, j) keep every z_k outside S.

    Raises:
        NodeBudgetError: more than taboo.node_budget edge relaxations
    """
    S = frozenset(S)
    budget = [int(config.get("taboo.node_budget", 2_000_000))]
    dist = {z: w for z, w in g.row(x, window).items() if z not in S}
    profile: Dict[int, Dict[int, complex]] = {}
    for n in range(2, n_max + 1):
        out: Dict[int, complex] = {}
        for z, mass in dist.items():
            for j, w in g.row(z, window).items():
                out[j] = out.get(j, 0j) + mass * w
                budget[0] -= 1
        profile[n] = {j: v for j, v in out.items() if v != 0}
        if n < n_max:
            dist = _interior_step(g, S, dist, window, budget)
    return profile


def taboo_weight(g: CountableGraph, S: Sequence[int], n: int, x: int, j: int, window: int = None) -> complex:
    """Total weight of length-n paths from x to j whose intermediate vertices avoid S."""
    if n < 2:
        raise ValueError("taboo weights start at n = 2")
    window = int(config.get("series.window", 40)) if window is None else window
    return taboo_profile(g, S, x, n, window)[n].get(j, 0j)


def _interior_successors(g: CountableGraph, S: frozenset, x: int, window: int) -> Optional[Tuple[int, ...]]:
    """phi(x) = interior part of the row support, or None if not known inside the window."""
    if not g.row_is_complete(x, window):
        return None
    return tuple(sorted(y for y in g.row(x, window) if y not in S))


def check_type_B(
    g: CountableGraph,
    S: Sequence[int],
    M: Callable[[int], float],
    window: int,
    tail_bound: float = 0.0,
) -> Union[TypeBCertificate, Violation]:
    """
    Check the type B conditions on the interior of 1..window.

    (1) every orbit x, phi(x), phi(phi(x)), ... of interior successors empties
        after n_S(x) steps; (2) |w(x, y)| <= M(x) for interior x, y;
        (3) sum n_S(x) M(x) plus the declared tail bound is finite.
    Interior loops keep an orbit alive, so they violate (1).
    """
    S = tuple(sorted(set(S)))
    if max(S) > window:
        raise WindowTooSmallError(f"window {window} does not contain S (max {max(S)})")
    members = frozenset(S)
    interior = [x for x in range(1, window + 1) if x not in members]

    steps: Dict[int, Optional[Tuple[int, ...]]] = {x: _interior_successors(g, members, x, window) for x in interior}
    nS: Dict[int, int] = {}
    for x in interior:
        frontier = {x}
        orbit = [(x,)]
        k = 0
        while frontier:
            if k > len(interior):
                return Violation("1", tuple(orbit[: len(interior) + 2]), f"orbit of {x} does not vanish (interior cycle)")
            nxt = set()
            for y in frontier:
                succ = steps.get(y)
                if succ is None:
                    return Violation("1", (x, y), f"orbit of {x} leaves the window at {y}", inconclusive=True)
                nxt.update(succ)
            frontier = nxt
            orbit.append(tuple(sorted(frontier)))
            k += 1
        nS[x] = k

    bounds: Dict[int, float] = {}
    for x in interior:
        bounds[x] = float(M(x))
        for y, w in g.row(x, window).items():
            if y not in members and abs(w) > bounds[x] * (1 + 1e-12):
                return Violation("2", (x, y), f"|w({x}, {y})| = {abs(w)} exceeds M({x}) = {bounds[x]}")

    weighted_sum = sum(nS[x] * bounds[x] for x in interior) + float(tail_bound)
    if not math.isfinite(weighted_sum):
        return Violation("3", (), "weighted sum of escape times is not finite")

    logger.debug(f"type B certificate for S={S} on window {window}: sum {weighted_sum}")
    return TypeBCertificate(S, bounds, nS, weighted_sum, window)


def _slope_decreasing(slopes: Dict[int, float]) -> Optional[int]:
    """First n in the last half of the range where (1/n) log t_n fails to decrease."""
    orders = sorted(slopes)
    tail = orders[len(orders) // 2:]
    for prev, cur in zip(tail, tail[1:]):
        if not slopes[cur] < slopes[prev] and slopes[prev] != -math.inf:
            return cur
    return None


def check_type_A(
    g: CountableGraph,
    S: Sequence[int],
    t: Callable[[int], float],
    M_bound: Callable[[int, int], float],
    window: int,
    n_max: int,
) -> Union[TypeACertificate, Violation]:
    """
    Check |tau_n(x, {j})| <= t_n M(x, j) for all x, j in the window and
    2 <= n <= n_max, and that (1/n) log t_n keeps decreasing over the upper
    half of the probed orders.
    """
    S = tuple(sorted(set(S)))
    if max(S) > window:
        raise WindowTooSmallError(f"window {window} does not contain S (max {max(S)})")
    t_values = {n: float(t(n)) for n in range(2, n_max + 1)}

    worst = 0.0
    for x in range(1, window + 1):
        profile = taboo_profile(g, S, x, n_max, window)
        for n, row in profile.items():
            for j, tau in row.items():
                bound = t_values[n] * float(M_bound(x, j))
                if abs(tau) > bound * (1 + 1e-9) + 1e-300:
                    return Violation("bound", (n, x, j), f"|tau_{n}({x}, {j})| = {abs(tau):.3e} exceeds {bound:.3e}")
                if bound > 0:
                    worst = max(worst, abs(tau) / bound)

    slopes = {n: (math.log(v) / n if v > 0 else -math.inf) for n, v in t_values.items()}
    bad = _slope_decreasing(slopes)
    if bad is not None:
        return Violation("slope", (bad,), f"(1/n) log t_n stops decreasing at n = {bad}")

    return TypeACertificate(S, t_values, M_bound, slopes, window, n_max, worst)


def check_type_A_quasi_B(
    g: CountableGraph,
    kernels: Sequence[CountableGraph],
    S: Sequence[int],
    t: Callable[[int], float],
    M_bound: Callable[[int, int], float],
    M_kernels: Sequence[Callable[[int], float]],
    window: int,
    n_max: int,
    gap_target: float,
) -> Union[TypeAQuasiBCertificate, Violation]:
    """
    Type A for g, type B for every kernel g_n, and ||g - g_n|| nonincreasing
    along the sequence and at most gap_target for the last kernel.

    Raises:
        ValueError: kernels and M_kernels differ in length
    """
    if len(kernels) != len(M_kernels):
        raise ValueError(f"{len(kernels)} kernels but {len(M_kernels)} interior bounds")
    type_a = check_type_A(g, S, t, M_bound, window, n_max)
    if not type_a:
        return type_a

    gaps = tuple(one_inf_norm_gap(g, k, window) for k in kernels)
    for index, (prev, cur) in enumerate(zip(gaps, gaps[1:]), start=1):
        if cur > prev * (1 + 1e-12):
            return Violation("gap", (index,), f"gap grows from {prev} to {cur} at kernel {index}")
    if gaps and gaps[-1] > gap_target:
        return Violation("gap", (len(gaps) - 1,), f"last gap {gaps[-1]} above target {gap_target}")

    certificates = []
    for k, M in zip(kernels, M_kernels):
        cert = check_type_B(k, S, M, window)
        if not cert:
            return cert
        certificates.append(cert)
    return TypeAQuasiBCertificate(type_a, gaps, tuple(certificates))


def depth_sets(g: CountableGraph, S: Sequence[int], window: int) -> DepthSets:
    """
    S_0 = S and S_n = S_{n-1} plus every x in the window whose off-diagonal
    row support lies in S_{n-1}, until nothing changes.
    """
    S = tuple(sorted(set(S)))
    supports: Dict[int, Optional[frozenset]] = {}
    for x in range(1, window + 1):
        if x in S:
            continue
        if g.row_is_complete(x, window):
            supports[x] = frozenset(j for j in g.row(x, window) if j != x)
        else:
            supports[x] = None

    levels = [S]
    current = set(S)
    while True:
        absorbed = [x for x, sup in supports.items() if x not in current and sup is not None and sup <= current]
        if not absorbed:
            break
        current.update(absorbed)
        levels.append(tuple(sorted(current)))

    unknown = tuple(x for x in range(1, window + 1) if x not in current)
    if unknown:
        logger.debug(f"{len(unknown)} vertices of unknown depth within window {window}")
    return DepthSets(tuple(levels), unknown)
