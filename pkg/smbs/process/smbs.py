"""Semi-Markov beta-Stacy prior: parameters, conjugate updates and sampling"""

import dataclasses
from dataclasses import dataclass
from functools import reduce
from typing import Any, Dict, List, Mapping, Protocol, Sequence, Tuple, Union

import numpy as np

from smbs.common.errors import ConfigError, ParameterError, PathError
from smbs.common.logger import get_logger
from smbs.core.counting import CountingStats, count_statistics
from smbs.core.paths import StateSequence
from smbs.core.state_space import StateSpace
from smbs.priors.beta_stacy import (
    BetaStacyParams,
    bs_posterior_censored,
    bs_posterior_exact,
    bs_sample,
)
from smbs.priors.centering import CenteringDistribution, PrecisionFunction
from smbs.priors.dirichlet import DirichletParams, dir_posterior, dir_sample

logger = get_logger(__name__)


class HoldingLaw(Protocol):
    """Anything with a discrete hazard and survival on the positive integers"""

    def hazard(self, t: int) -> float: ...

    def survival(self, t: int) -> float: ...


@dataclass(frozen=True)
class StatePrior:
    """Prior for one state: Dir(m^i) for the jump row, BS(c^i, F0^i) for the holding time"""
    jump_prior: DirichletParams
    holding_prior: BetaStacyParams


def state_blocks(space: StateSpace, data: Mapping[str, Any]) -> Dict[int, Dict[str, Any]]:
    """
    Index the per-state blocks of a prior bundle by state id

    Raises:
        ConfigError: If a state is missing or listed twice
    """
    blocks: Dict[int, Dict[str, Any]] = {}
    for block in data.get('states', []):
        if 'state' not in block:
            raise ConfigError(f"Prior block without 'state': {block!r}")
        state = int(block['state'])
        space.index(state)
        if state in blocks:
            raise ConfigError(f"State {state} appears twice in the prior bundle")
        blocks[state] = block
    missing = [s for s in space.states if s not in blocks]
    if missing:
        raise ConfigError(f"Prior bundle has no block for states {missing}")
    return blocks


def holding_from_block(block: Mapping[str, Any]) -> BetaStacyParams:
    if 'centering' not in block:
        raise ConfigError(f"Prior block for state {block.get('state')} has no 'centering'")
    return BetaStacyParams(
        precision=PrecisionFunction.from_dict(block.get('precision', 1.0)),
        centering=CenteringDistribution.from_dict(block['centering']),
    )


@dataclass(frozen=True)
class SmbsParams:
    """Parameters (m, c, F0) of SMBS, one StatePrior per state"""
    space: StateSpace
    priors: Tuple[StatePrior, ...]

    def __post_init__(self):
        if len(self.priors) != self.space.size:
            raise ParameterError(f"Expected {self.space.size} state priors, got {len(self.priors)}")
        for state, prior in zip(self.space.states, self.priors):
            if prior.jump_prior.space != self.space:
                raise ParameterError(f"Jump prior of state {state} uses a different state space")
            if prior.jump_prior.mass(state) != 0:
                raise ParameterError(f"Jump prior of state {state} puts mass on itself")

    @classmethod
    def from_arrays(cls, space: StateSpace, jump_masses: Sequence[Sequence[float]],
                    precision: Union[PrecisionFunction, Sequence[PrecisionFunction]],
                    centering: Union[CenteringDistribution, Sequence[CenteringDistribution]]) -> 'SmbsParams':
        """
        Build from a jump-mass matrix and shared or per-state holding parameters

        Args:
            space: State space
            jump_masses: Row i holds m^i over the states, in state-space order
            precision: One precision function, or one per state
            centering: One centering distribution, or one per state
        """
        n = space.size
        precisions = [precision] * n if isinstance(precision, PrecisionFunction) else list(precision)
        centerings = [centering] * n if isinstance(centering, CenteringDistribution) else list(centering)
        priors = tuple(
            StatePrior(
                jump_prior=DirichletParams(space, tuple(jump_masses[k])),
                holding_prior=BetaStacyParams(precisions[k], centerings[k]),
            )
            for k in range(n)
        )
        return cls(space, priors)

    @classmethod
    def from_dict(cls, space: StateSpace, data: Mapping[str, Any]) -> 'SmbsParams':
        """Build from the JSON/YAML prior bundle"""
        blocks = state_blocks(space, data)
        priors = []
        for state in space.states:
            block = blocks[state]
            priors.append(StatePrior(
                jump_prior=DirichletParams.from_entries(space, block.get('jump_masses', [])),
                holding_prior=holding_from_block(block),
            ))
        return cls(space, tuple(priors))

    def prior(self, state: int) -> StatePrior:
        return self.priors[self.space.index(state)]

    def jump_prior(self, state: int) -> DirichletParams:
        return self.prior(state).jump_prior

    def holding_prior(self, state: int) -> BetaStacyParams:
        return self.prior(state).holding_prior

    def with_constant_precision(self, c: float) -> 'SmbsParams':
        """The same bundle with c^i(t) = c for every state and time"""
        precision = PrecisionFunction.constant(c)
        return dataclasses.replace(self, priors=tuple(
            dataclasses.replace(p, holding_prior=p.holding_prior.with_precision(precision))
            for p in self.priors
        ))


@dataclass(frozen=True, eq=False)
class CharacteristicCouple:
    """
    A transition matrix with zero diagonal and one holding-time law per state

    Holding laws are sampled survival functions for draws from SMBS, or fixed
    centering distributions for a known data-generating process.
    """
    space: StateSpace
    transition: np.ndarray
    holding: Tuple[HoldingLaw, ...]

    def __post_init__(self):
        transition = np.asarray(self.transition, dtype=float)
        n = self.space.size
        if transition.shape != (n, n):
            raise ParameterError(f"Transition matrix must be {n}x{n}, got {transition.shape}")
        if np.any(transition < 0):
            raise ParameterError("Transition probabilities must be non-negative")
        if np.any(np.abs(transition.sum(axis=1) - 1.0) > 1e-12):
            raise ParameterError("Transition matrix rows must sum to 1")
        if np.any(np.diag(transition) != 0):
            raise ParameterError("Transition matrix must have a zero diagonal")
        if len(self.holding) != n:
            raise ParameterError(f"Expected {n} holding laws, got {len(self.holding)}")
        object.__setattr__(self, 'transition', transition)

    def row(self, state: int) -> np.ndarray:
        return self.transition[self.space.index(state)]

    def holding_law(self, state: int) -> HoldingLaw:
        return self.holding[self.space.index(state)]


def smbs_posterior_from_stats(prior: SmbsParams, stats: CountingStats) -> SmbsParams:
    """
    Conjugate update from the sufficient statistics of a path

    Jump rows gain the transition counts; every holding prior absorbs its
    completed blocks as exact observations; the terminal state's holding prior
    also absorbs one observation censored at l(t) when l(t) > 0.

    Raises:
        PathError: If the statistics use a different state space
    """
    if stats.space != prior.space:
        raise PathError("Path and prior use different state spaces")
    priors: List[StatePrior] = []
    for k, (state, state_prior) in enumerate(zip(prior.space.states, prior.priors)):
        jump = dir_posterior(state_prior.jump_prior, stats.transitions[k])
        holding = bs_posterior_exact(state_prior.holding_prior, stats.block_counts[k])
        if state == stats.terminal_state and stats.terminal_age > 0:
            holding = bs_posterior_censored(holding, stats.terminal_age)
        priors.append(StatePrior(jump, holding))
    return SmbsParams(prior.space, tuple(priors))


def smbs_posterior(prior: SmbsParams, path: StateSequence) -> SmbsParams:
    """
    Posterior SMBS(m_*, c_*, F_*) given an observed path s_0..s_t

    Args:
        prior: Prior parameters
        path: Path over the prior's state space

    Returns:
        Posterior parameters
    """
    if path.space != prior.space:
        raise PathError("Path and prior use different state spaces")
    return smbs_posterior_from_stats(prior, count_statistics(path))


def smbs_posterior_multi(prior: SmbsParams, paths: Sequence[StateSequence]) -> SmbsParams:
    """Posterior given independent paths, applying the single-path update in turn"""
    posterior = reduce(smbs_posterior, paths, prior)
    logger.info(f"Posterior computed from {len(paths)} path(s)")
    return posterior


def smbs_sample(params: SmbsParams, rng: np.random.Generator) -> CharacteristicCouple:
    """
    Draw a characteristic couple (P, F) ~ SMBS(m, c, F0)

    Rows P^i ~ Dir(m^i) and laws F^i ~ BS(c^i, F0^i) are drawn independently,
    state by state.
    """
    rows = []
    holding = []
    for prior in params.priors:
        rows.append(dir_sample(prior.jump_prior, rng))
        holding.append(bs_sample(prior.holding_prior, rng))
    return CharacteristicCouple(params.space, np.vstack(rows), tuple(holding))
