"""Monte Carlo h-step-ahead forecasts under the reinforced semi-Markov law"""

from dataclasses import dataclass

import numpy as np
import pandas as pd

from smbs.common.errors import ModelError, ParameterError
from smbs.common.logger import get_logger
from smbs.core.counting import count_statistics
from smbs.core.paths import StateSequence
from smbs.core.state_space import StateSpace
from smbs.process.smbs import SmbsParams

logger = get_logger(__name__)

DEFAULT_BATCH_SIZE = 10_000

# Upper bound on cells of the per-batch block-length tally
MAX_TALLY_CELLS = 50_000_000


@dataclass(frozen=True, eq=False)
class PredictiveMatrix:
    """
    P_h(j) for h = 1..H

    ``probabilities[h - 1, k]`` is the probability of state ``space.states[k]``
    h steps after the prefix. ``n_sims`` is the number of simulated futures
    behind the estimate.
    """
    space: StateSpace
    probabilities: np.ndarray
    n_sims: int

    @property
    def horizon(self) -> int:
        return self.probabilities.shape[0]

    def row(self, h: int) -> np.ndarray:
        if h < 1 or h > self.horizon:
            raise ParameterError(f"Forecast step {h} outside [1, {self.horizon}]")
        return self.probabilities[h - 1]

    def probability(self, h: int, state: int) -> float:
        return float(self.row(h)[self.space.index(state)])

    def to_frame(self) -> pd.DataFrame:
        """Long format: one (h, state, probability) row per step and state"""
        horizon, n = self.probabilities.shape
        return pd.DataFrame({
            'h': np.repeat(np.arange(1, horizon + 1), n),
            'state': np.tile(np.array(self.space.states), horizon),
            'probability': self.probabilities.reshape(-1),
        })


@dataclass(frozen=True, eq=False)
class _KernelTables:
    """Prior-plus-prefix quantities of the kernel, indexed [state, holding age]"""
    a: np.ndarray
    b: np.ndarray
    fallback: np.ndarray
    jump_base: np.ndarray


def _kernel_tables(params: SmbsParams, prefix: StateSequence, max_age: int) -> _KernelTables:
    stats = count_statistics(prefix)
    n = params.space.size
    a = np.zeros((n, max_age + 1))
    b = np.zeros((n, max_age + 1))
    fallback = np.full((n, max_age + 1), np.nan)
    for k, prior in enumerate(params.priors):
        holding = prior.holding_prior
        blocks = stats.block_counts[k]
        for x in range(1, max_age + 1):
            a0, b0 = holding.beta_parameters(x)
            a[k, x] = a0 + blocks.at(x)
            b[k, x] = b0 + blocks.greater_than(x)
            if a[k, x] + b[k, x] == 0.0:
                try:
                    fallback[k, x] = holding.hazard(x)
                except ModelError:
                    pass
    jump_base = np.array([
        np.asarray(prior.jump_prior.masses) + np.asarray(counts)
        for prior, counts in zip(params.priors, stats.transitions)
    ])
    return _KernelTables(a, b, fallback, jump_base)


def _simulate_batch(tables: _KernelTables, start: int, start_age: int, horizon: int,
                    size: int, rng: np.random.Generator) -> np.ndarray:
    """
    Occupation counts [h, state] of ``size`` simulated futures

    Each future carries its own block-length tally ``at_least[sim, state, s]``
    (completed future blocks of length >= s) and transition tally, so the
    kernel reinforces along every simulated path.
    """
    n = tables.jump_base.shape[0]
    width = tables.a.shape[1] + 1
    rows = np.arange(size)
    lengths = np.arange(width)
    current = np.full(size, start, dtype=np.int64)
    age = np.full(size, start_age, dtype=np.int64)
    at_least = np.zeros((size, n, width), dtype=np.int32)
    moves = np.zeros((size, n, n), dtype=np.int32)
    occupation = np.zeros((horizon, n), dtype=np.int64)

    for h in range(horizon):
        beyond = at_least[rows, current, age + 1]
        at = at_least[rows, current, age] - beyond
        a = tables.a[current, age] + at
        b = tables.b[current, age] + beyond
        total = a + b
        zero = total == 0.0
        with np.errstate(invalid='ignore', divide='ignore'):
            stay = np.where(zero, 1.0 - tables.fallback[current, age], b / np.where(zero, 1.0, total))
        if np.isnan(stay).any():
            bad = int(np.flatnonzero(np.isnan(stay))[0])
            raise ModelError(
                f"No prior mass or observed block at or beyond holding age {int(age[bad])} "
                f"for state index {int(current[bad])}"
            )

        leaving = rng.random(size) >= stay
        movers = rows[leaving]
        if movers.size:
            origin = current[movers]
            weights = tables.jump_base[origin] + moves[movers, origin]
            cumulative = np.cumsum(weights, axis=1)
            cumulative = np.where(cumulative >= cumulative[:, -1:], 1.0, cumulative / cumulative[:, -1:])
            u = rng.random(movers.size)
            successor = (cumulative <= u[:, None]).sum(axis=1)
            completed = age[movers]
            at_least[movers, origin] += ((lengths >= 1) & (lengths <= completed[:, None])).astype(np.int32)
            moves[movers, origin, successor] += 1
            current[movers] = successor
            age[movers] = 0
        age += 1
        occupation[h] = np.bincount(current, minlength=n)
    return occupation


def h_step_predictive(params: SmbsParams, prefix: StateSequence, horizon: int, n_sims: int,
                      rng: np.random.Generator, batch_size: int = DEFAULT_BATCH_SIZE) -> PredictiveMatrix:
    """
    Estimate P_h(j) = P(S_{t+h} = j | S_{0:t}) for h = 1..horizon

    Futures are simulated from the predictive kernel with counts accumulating
    along each future. Simulations run in batches, each on its own spawned
    stream; batch results merge by adding occupation counts, so every row sums
    to exactly 1.

    Args:
        params: Prior parameters (the prefix is conditioned on here)
        prefix: Observed path s_0..s_t
        horizon: Number of steps to forecast
        n_sims: Number of simulated futures
        rng: Parent random stream
        batch_size: Futures simulated together in one vectorized pass

    Returns:
        PredictiveMatrix with ``horizon`` rows
    """
    if horizon < 1:
        raise ParameterError(f"Horizon must be >= 1, got {horizon}")
    if n_sims < 1:
        raise ParameterError(f"Number of simulations must be >= 1, got {n_sims}")
    if batch_size < 1:
        raise ParameterError(f"Batch size must be >= 1, got {batch_size}")

    space = params.space
    start = space.index(prefix.terminal_state)
    start_age = count_statistics(prefix).terminal_age + 1
    max_age = start_age + horizon
    tables = _kernel_tables(params, prefix, max_age)

    cells_per_sim = space.size * (max_age + 2)
    batch_size = max(1, min(batch_size, MAX_TALLY_CELLS // cells_per_sim))
    sizes = [batch_size] * (n_sims // batch_size)
    if n_sims % batch_size:
        sizes.append(n_sims % batch_size)

    occupation = np.zeros((horizon, space.size), dtype=np.int64)
    for k, (size, stream) in enumerate(zip(sizes, rng.spawn(len(sizes)))):
        occupation += _simulate_batch(tables, start, start_age, horizon, size, stream)
        logger.debug(f"Forecast batch {k + 1}/{len(sizes)}: {size} futures")

    logger.info(f"Forecast of {horizon} steps from {n_sims} simulated futures")
    return PredictiveMatrix(space, occupation / n_sims, n_sims)
