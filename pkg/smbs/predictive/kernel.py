"""One-step predictive kernels and the reinforced semi-Markov path sampler"""

import dataclasses
from dataclasses import dataclass
from typing import List

import numpy as np

from smbs.common.errors import ModelError, ParameterError, PathError
from smbs.core.counting import CountingStats, count_statistics
from smbs.core.paths import StateSequence
from smbs.process.smbs import SmbsParams
from smbs.process.variants import VariantBParams
from smbs.priors.beta_stacy import BetaStacyParams, checked_probability


@dataclass(frozen=True)
class PredictiveState:
    """Prior parameters plus the statistics of the observed prefix"""
    params: SmbsParams
    stats: CountingStats

    def __post_init__(self):
        if self.params.space != self.stats.space:
            raise PathError("Prefix statistics and prior use different state spaces")

    @classmethod
    def from_path(cls, params: SmbsParams, path: StateSequence) -> 'PredictiveState':
        return cls(params, count_statistics(path))

    @property
    def current(self) -> int:
        return self.stats.terminal_state

    @property
    def age_next(self) -> int:
        """x(t) = l(t) + 1"""
        return self.stats.terminal_age + 1


def _leave_probability(holding: BetaStacyParams, x: int, exact_at: int, exact_beyond: int):
    """
    (stay, leave) at holding age x in the printed ratio form

    ``exact_at`` and ``exact_beyond`` are the prefix counts N({x}) and
    N((x, +inf)) not yet absorbed into ``holding``.
    """
    a0, b0 = holding.beta_parameters(x)
    a = a0 + exact_at
    b = b0 + exact_beyond
    total = a + b
    if total == 0.0:
        # both prior masses underflowed or vanished; hazard() raises if F0 has no mass here
        h = holding.hazard(x)
        return 1.0 - h, h
    return b / total, a / total


def predictive_kernel(state: PredictiveState) -> np.ndarray:
    """
    P(S_{t+1} = . | S_{0:t}) as a pmf over the state space

    Staying has probability (c F0((x,inf)) + N((x,inf))) / (c F0([x,inf)) + N([x,inf)));
    moving to j has the complementary hazard times
    (m^i({j}) + M^{i,j}) / (m^i(E) + sum_h M^{i,h}).

    Raises:
        ModelError: If the holding prior of the current state and the prefix put
            no mass at or beyond the current holding age
    """
    params, stats = state.params, state.stats
    space = params.space
    i = space.index(state.current)
    x = state.age_next
    blocks = stats.block_counts[i]
    stay, leave = _leave_probability(params.priors[i].holding_prior, x,
                                     blocks.at(x), blocks.greater_than(x))

    masses = params.priors[i].jump_prior.masses
    counts = stats.transitions[i]
    denominator = sum(masses) + sum(counts)
    pmf = np.array([leave * (m + c) / denominator for m, c in zip(masses, counts)])
    pmf[i] = stay
    return pmf


def variant_b_kernel(params: VariantBParams, current: int, age_next: int) -> np.ndarray:
    """
    One-step predictive of the variant-B process from (posterior) parameters

    The prefix must already be absorbed by ``variant_b_posterior``; the next
    state is drawn from the row indexed by the current holding age.
    """
    if age_next < 1:
        raise ParameterError(f"Holding age must be >= 1, got {age_next}")
    space = params.space
    i = space.index(current)
    stay, leave = _leave_probability(params.holding_priors[i], age_next, 0, 0)
    row = params.jump_prior(current, age_next)
    total = row.total
    pmf = np.array([leave * m / total for m in row.masses])
    pmf[i] = stay
    return pmf


def update_stats_incremental(stats: CountingStats, current: int, age_next: int,
                             next_state: int) -> CountingStats:
    """
    Statistics of the path extended by one state

    A stay only ages the terminal block; a jump closes the current block with
    length ``age_next`` and records the transition.

    Raises:
        PathError: If ``current``/``age_next`` do not describe the terminal block
    """
    space = stats.space
    space.index(next_state)
    if current != stats.terminal_state or age_next != stats.terminal_age + 1:
        raise PathError(
            f"Inconsistent step: terminal block is ({stats.terminal_state}, age "
            f"{stats.terminal_age + 1}), got ({current}, {age_next})"
        )
    if next_state == current:
        return dataclasses.replace(stats, terminal_age=stats.terminal_age + 1)

    i, j = space.index(current), space.index(next_state)
    block_counts = list(stats.block_counts)
    block_counts[i] = block_counts[i].with_added(age_next)
    transitions = [list(row) for row in stats.transitions]
    transitions[i][j] += 1
    pairs = dict(stats.pair_block_counts)
    pairs[(current, next_state)] = stats.pair_blocks(current, next_state).with_added(age_next)
    return CountingStats(
        space=space,
        block_counts=tuple(block_counts),
        transitions=tuple(tuple(row) for row in transitions),
        pair_block_counts=pairs,
        terminal_state=next_state,
        terminal_age=0,
    )


def draw_index(pmf: np.ndarray, rng: np.random.Generator) -> int:
    """Inverse-cdf draw from a pmf; zero-probability entries are never returned"""
    cumulative = np.cumsum(pmf)
    # flat from the last positive entry on, so u < 1 never lands on the zero tail
    cumulative = np.where(cumulative >= cumulative[-1], 1.0, cumulative / cumulative[-1])
    return int(np.searchsorted(cumulative, rng.random(), side='right'))


def rsm_extend_path(params: SmbsParams, prefix: StateSequence, steps: int,
                    rng: np.random.Generator) -> StateSequence:
    """
    Extend a path by ``steps`` draws from the reinforced semi-Markov kernel

    Every draw conditions on the prefix and on everything generated so far.
    """
    if steps < 0:
        raise ParameterError(f"Steps must be non-negative, got {steps}")
    state = PredictiveState.from_path(params, prefix)
    space = params.space
    generated: List[int] = []
    for _ in range(steps):
        next_state = space.states[draw_index(predictive_kernel(state), rng)]
        stats = update_stats_incremental(state.stats, state.current, state.age_next, next_state)
        state = PredictiveState(params, stats)
        generated.append(next_state)
    return prefix.extended(generated)


def path_probability(params: SmbsParams, path: StateSequence) -> float:
    """Probability of s_1..s_t given s_0 under RSM(m, c, F0)"""
    space = params.space
    state = PredictiveState(params, CountingStats.empty(space, path.states[0]))
    probability = 1.0
    for next_state in path.states[1:]:
        probability *= predictive_kernel(state)[space.index(next_state)]
        if probability == 0.0:
            return 0.0
        stats = update_stats_incremental(state.stats, state.current, state.age_next, next_state)
        state = PredictiveState(params, stats)
    return checked_probability(probability, "path probability")
