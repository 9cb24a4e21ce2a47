"""
Generalizations where the holding time and the next state are coupled

PairParams: holding laws indexed by (state, next state), the next state
being drawn first. Its posterior is a mixture and is not computed here; the
scheme is simulated through its reinforced urn process.

VariantBParams: one holding law per state, the next state drawn from a
Dirichlet row indexed by (state, holding time). Conjugate.
"""

import dataclasses
from dataclasses import dataclass, field
from typing import Any, Dict, Mapping, Tuple

from smbs.common.errors import ConfigError, ParameterError, PathError
from smbs.common.logger import get_logger
from smbs.core.counting import CountingStats, count_statistics
from smbs.core.paths import StateSequence
from smbs.core.state_space import StateSpace
from smbs.priors.beta_stacy import BetaStacyParams, bs_posterior_censored, bs_posterior_exact
from smbs.priors.dirichlet import DirichletParams, dir_posterior
from smbs.process.smbs import SmbsParams, holding_from_block, state_blocks

logger = get_logger(__name__)


def _check_no_self_mass(state: int, prior: DirichletParams, what: str) -> None:
    if prior.mass(state) != 0:
        raise ParameterError(f"{what} of state {state} puts mass on itself")


@dataclass(frozen=True)
class PairParams:
    """Dir(m^i) jump rows and BS(c^{i,j}, F0^{i,j}) holding priors per allowed pair"""
    space: StateSpace
    jump_priors: Tuple[DirichletParams, ...]
    pair_holding_priors: Dict[Tuple[int, int], BetaStacyParams] = field(hash=False)

    def __post_init__(self):
        for state, prior in zip(self.space.states, self.jump_priors):
            _check_no_self_mass(state, prior, "Jump prior")
            for successor, mass in zip(self.space.states, prior.masses):
                if mass > 0 and (state, successor) not in self.pair_holding_priors:
                    raise ParameterError(f"No holding prior for allowed pair ({state}, {successor})")

    @classmethod
    def from_smbs(cls, params: SmbsParams) -> 'PairParams':
        """Every pair (i, j) starts from the holding prior of state i"""
        pairs = {
            (i, j): params.holding_prior(i)
            for i in params.space.states for j in params.space.states if i != j
        }
        return cls(params.space, tuple(p.jump_prior for p in params.priors), pairs)

    @classmethod
    def from_dict(cls, space: StateSpace, data: Mapping[str, Any]) -> 'PairParams':
        """
        Per-state ``pair_holding`` lists override the state's own holding prior

        ``{"to": j, "precision": ..., "centering": {...}}``
        """
        blocks = state_blocks(space, data)
        jump_priors = []
        pairs: Dict[Tuple[int, int], BetaStacyParams] = {}
        for state in space.states:
            block = blocks[state]
            jump_priors.append(DirichletParams.from_entries(space, block.get('jump_masses', [])))
            default = holding_from_block(block)
            for successor in space.states:
                if successor != state:
                    pairs[(state, successor)] = default
            for entry in block.get('pair_holding', []):
                if 'to' not in entry:
                    raise ConfigError(f"pair_holding entry without 'to': {entry!r}")
                successor = int(entry['to'])
                space.index(successor)
                pairs[(state, successor)] = holding_from_block({**entry, 'state': state})
        return cls(space, tuple(jump_priors), pairs)

    def jump_prior(self, state: int) -> DirichletParams:
        return self.jump_priors[self.space.index(state)]

    def holding_prior(self, state: int, successor: int) -> BetaStacyParams:
        return self.pair_holding_priors[(state, successor)]


@dataclass(frozen=True)
class VariantBParams:
    """
    Holding priors per state and jump priors per (state, holding time)

    Rows for holding times not listed in ``time_jump_priors`` fall back to the
    state's default row.
    """
    space: StateSpace
    holding_priors: Tuple[BetaStacyParams, ...]
    default_jump_priors: Tuple[DirichletParams, ...]
    time_jump_priors: Dict[Tuple[int, int], DirichletParams] = field(default_factory=dict, hash=False)

    def __post_init__(self):
        n = self.space.size
        if len(self.holding_priors) != n or len(self.default_jump_priors) != n:
            raise ParameterError(f"Expected {n} holding priors and {n} default jump priors")
        for state, prior in zip(self.space.states, self.default_jump_priors):
            _check_no_self_mass(state, prior, "Default jump prior")
        for (state, t), prior in self.time_jump_priors.items():
            if t < 1:
                raise ParameterError(f"Holding time {t} in jump prior key must be >= 1")
            _check_no_self_mass(state, prior, f"Jump prior at t={t}")

    @classmethod
    def from_smbs(cls, params: SmbsParams) -> 'VariantBParams':
        """Time-homogeneous start: every (i, t) row equals m^i"""
        return cls(
            space=params.space,
            holding_priors=tuple(p.holding_prior for p in params.priors),
            default_jump_priors=tuple(p.jump_prior for p in params.priors),
        )

    @classmethod
    def from_dict(cls, space: StateSpace, data: Mapping[str, Any]) -> 'VariantBParams':
        """
        Per-state blocks may add ``default_masses`` (defaults to ``jump_masses``)
        and ``time_indexed_jump_masses``: ``[{"t": 2, "masses": [{"state", "mass"}]}]``
        """
        blocks = state_blocks(space, data)
        holding, defaults = [], []
        timed: Dict[Tuple[int, int], DirichletParams] = {}
        for state in space.states:
            block = blocks[state]
            holding.append(holding_from_block(block))
            defaults.append(DirichletParams.from_entries(
                space, block.get('default_masses', block.get('jump_masses', []))
            ))
            for entry in block.get('time_indexed_jump_masses', []):
                if 't' not in entry or 'masses' not in entry:
                    raise ConfigError(f"time_indexed_jump_masses entry needs 't' and 'masses': {entry!r}")
                timed[(state, int(entry['t']))] = DirichletParams.from_entries(space, entry['masses'])
        return cls(space, tuple(holding), tuple(defaults), timed)

    def holding_prior(self, state: int) -> BetaStacyParams:
        return self.holding_priors[self.space.index(state)]

    def jump_prior(self, state: int, t: int) -> DirichletParams:
        """m^i_t"""
        return self.time_jump_priors.get((state, t), self.default_jump_priors[self.space.index(state)])


def variant_b_posterior_from_stats(prior: VariantBParams, stats: CountingStats) -> VariantBParams:
    """
    Conjugate update of VariantBParams from path statistics

    Holding priors update as in the time-homogeneous model; the row of
    (i, s) gains N^{i,j,t}({s}) at every successor j.
    """
    if stats.space != prior.space:
        raise PathError("Path and prior use different state spaces")
    space = prior.space
    holding = []
    for k, (state, holding_prior) in enumerate(zip(space.states, prior.holding_priors)):
        updated = bs_posterior_exact(holding_prior, stats.block_counts[k])
        if state == stats.terminal_state and stats.terminal_age > 0:
            updated = bs_posterior_censored(updated, stats.terminal_age)
        holding.append(updated)

    increments: Dict[Tuple[int, int], list] = {}
    for (state, successor), histogram in stats.pair_block_counts.items():
        for s, count in histogram.items():
            counts = increments.setdefault((state, s), [0] * space.size)
            counts[space.index(successor)] += count

    timed = dict(prior.time_jump_priors)
    for (state, s), counts in increments.items():
        timed[(state, s)] = dir_posterior(prior.jump_prior(state, s), counts)
    logger.debug(f"Updated {len(increments)} time-indexed jump row(s) from {stats.n_jumps} jumps")

    return dataclasses.replace(prior, holding_priors=tuple(holding), time_jump_priors=timed)


def variant_b_posterior(prior: VariantBParams, path: StateSequence) -> VariantBParams:
    """Posterior VariantBParams given an observed path"""
    if path.space != prior.space:
        raise PathError("Path and prior use different state spaces")
    return variant_b_posterior_from_stats(prior, count_statistics(path))
