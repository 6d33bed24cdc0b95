"""
Monte Carlo estimate of the stationary measure by simulating the full chain.
"""
import bisect
import logging
from dataclasses import dataclass
from multiprocessing import Pool
from typing import List, Sequence

import numpy as np

from src.core.config import config
from src.markov.family import FamilyParams

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Occupation frequencies on 1..window; `above` is the share of steps spent beyond it."""

    frequencies: np.ndarray
    above: float
    steps: int
    seeds: tuple

    @property
    def window(self) -> int:
        return len(self.frequencies)


def _jump_table(p: FamilyParams, eps: float = 1e-16, max_size: int = 100_000) -> List[float]:
    """Cumulative a_1, a_1 + a_2, ... until the remaining tail is below eps."""
    cumulative = []
    total = 0.0
    i = 1
    while p.a_tail_bound(i) >= eps and i <= max_size:
        total += p.a(i)
        cumulative.append(total)
        i += 1
    return cumulative


def _jump(p: FamilyParams, table: List[float], r: float) -> int:
    """Inverse CDF of the jump law from state 1."""
    index = bisect.bisect_right(table, r)
    if index < len(table):
        return index + 1
    # r fell into the analytic tail; continue the sum past the table
    total = table[-1] if table else 0.0
    i = len(table) + 1
    while True:
        grown = total + p.a(i)
        if r < grown or grown == total:
            return i
        total = grown
        i += 1


def monte_carlo_stationary(p: FamilyParams, steps: int = None, seed: int = None, window: int = None, burn_in: int = None) -> EmpiricalDistribution:
    """
    Run the chain from state 1 for burn_in + steps transitions and count
    visits after the burn-in (default steps // 10). Deterministic per seed.
    """
    steps = int(config.get("markov.steps", 1_000_000)) if steps is None else steps
    seed = int(config.get("markov.seed", 7)) if seed is None else seed
    window = int(config.get("markov.window", 40)) if window is None else window
    burn_in = steps // 10 if burn_in is None else burn_in
    if steps < 1:
        raise ValueError("steps must be positive")

    rng = np.random.default_rng(seed)
    uniforms = rng.random(burn_in + steps).tolist()
    table = _jump_table(p)
    b_cache = {}

    def b(i: int) -> float:
        if i not in b_cache:
            b_cache[i] = p.b(i)
        return b_cache[i]

    counts = [0] * window
    above = 0
    state = 1
    for t, r in enumerate(uniforms):
        if state == 1:
            state = _jump(p, table, r)
        elif state == 2:
            state = 1 if r < b(1) else 2
        else:
            state = state - 1 if r < b(state - 1) else 1
        if t >= burn_in:
            if state <= window:
                counts[state - 1] += 1
            else:
                above += 1

    return EmpiricalDistribution(np.array(counts, dtype=float) / steps, above / steps, steps, (seed,))


def merge(results: Sequence[EmpiricalDistribution]) -> EmpiricalDistribution:
    """Step-weighted average of runs, in the given order."""
    total = sum(r.steps for r in results)
    window = max(r.window for r in results)
    frequencies = np.zeros(window)
    above = 0.0
    for r in results:
        frequencies[: r.window] += r.frequencies * r.steps
        above += r.above * r.steps
    seeds = tuple(s for r in results for s in r.seeds)
    return EmpiricalDistribution(frequencies / total, above / total, total, seeds)


def simulate_many(p: FamilyParams, steps: int, seeds: Sequence[int], window: int = None, workers: int = 1) -> EmpiricalDistribution:
    """
    Independent runs with the given seeds, optionally in worker processes,
    merged in seed order.
    """
    window = int(config.get("markov.window", 40)) if window is None else window
    args = [(p, steps, seed, window) for seed in seeds]
    if workers > 1 and len(args) > 1:
        with Pool(min(workers, len(args))) as pool:
            results: List[EmpiricalDistribution] = pool.starmap(monte_carlo_stationary, args)
    else:
        results = [monte_carlo_stationary(*a) for a in args]
    logger.info(f"Merged {len(results)} Monte Carlo runs of {steps} steps")
    return merge(results)


def spawn_seeds(root: int, count: int) -> List[int]:
    """Independent child seeds of `root` for parallel runs."""
    children = np.random.SeedSequence(root).spawn(count)
    return [int(child.generate_state(1)[0]) for child in children]
