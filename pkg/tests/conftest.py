"""Shared fixtures, hypothesis strategies and brute-force oracles"""

import itertools
import logging
import math
from typing import Iterator, Sequence

import numpy as np
import pytest
from hypothesis import strategies as st
from scipy.special import betaln, gammaln

from smbs.core.counting import count_statistics
from smbs.core.paths import StateSequence
from smbs.core.state_space import StateSpace
from smbs.priors.centering import DiscreteWeibull1, Geometric, PrecisionFunction, Tabulated
from smbs.process.smbs import SmbsParams

SPACE3 = StateSpace((0, 1, 2))


def uniform_jump_masses(n: int, mass: float = 1.0):
    return [[0.0 if i == j else mass for j in range(n)] for i in range(n)]


def geometric_prior(space: StateSpace, c: float = 1.0, p: float = 0.5) -> SmbsParams:
    """Constant precision, geometric centering and unit masses on every other state"""
    return SmbsParams.from_arrays(space, uniform_jump_masses(space.size),
                                  PrecisionFunction.constant(c), Geometric(p))


def mixed_prior(space: StateSpace = SPACE3) -> SmbsParams:
    """Three states with different centering families and precision functions"""
    return SmbsParams.from_arrays(
        space,
        [[0.0, 1.0, 2.0], [0.5, 0.0, 1.5], [1.0, 1.0, 0.0]],
        [PrecisionFunction.constant(2.0), PrecisionFunction((0.5, 3.0), 1.5), PrecisionFunction.constant(1.0)],
        [Geometric(0.4), DiscreteWeibull1(0.5, 0.7), Tabulated((0.2, 0.3), 0.5)],
    )


def all_paths(space: StateSpace, max_length: int) -> Iterator[StateSequence]:
    """Every path with 1..max_length states"""
    for length in range(1, max_length + 1):
        for states in itertools.product(space.states, repeat=length):
            yield StateSequence(space, states)


def paths(space: StateSpace, max_size: int = 40):
    """Hypothesis strategy for paths over a state space"""
    return st.lists(st.sampled_from(space.states), min_size=1, max_size=max_size).map(
        lambda states: StateSequence(space, tuple(states))
    )


def truncated_path_probability(path: StateSequence, pmf: Sequence[Sequence[float]],
                               precision: Sequence[float], jump_masses) -> float:
    """
    P(s_1..s_t | s_0) by integrating the likelihood against the prior

    Holding laws are supported on {1, 2}: U_1 ~ Beta(c p_1, c p_2) and U_2 = 1.
    Jump rows are Dirichlet. Each state's likelihood factors into
    U_1^(#length-1 blocks) (1 - U_1)^(#length-2 blocks + [terminal age >= 1])
    and Prod_j P_ij^(M_ij), whose prior expectations are Beta and Dirichlet
    moment ratios.
    """
    space = path.space
    stats = count_statistics(path)
    log_probability = 0.0
    for k, state in enumerate(space.states):
        blocks = stats.block_counts[k]
        ones, twos = blocks.at(1), blocks.at(2)
        if blocks.greater_than(2):
            return 0.0
        survivors = twos
        if state == stats.terminal_state:
            if stats.terminal_age >= 2:
                return 0.0
            survivors += stats.terminal_age
        alpha = precision[k] * pmf[k][0]
        beta = precision[k] * pmf[k][1]
        if ones or survivors:
            if (ones and alpha == 0.0) or (survivors and beta == 0.0):
                return 0.0
            log_probability += betaln(alpha + ones, beta + survivors) - betaln(alpha, beta)

        counts = np.array(stats.transitions[k], dtype=float)
        masses = np.array(jump_masses[k], dtype=float)
        if counts.sum():
            if np.any((counts > 0) & (masses == 0)):
                return 0.0
            used = masses > 0
            log_probability += (gammaln(masses.sum()) - gammaln(masses.sum() + counts.sum())
                                + np.sum(gammaln(masses[used] + counts[used]) - gammaln(masses[used])))
    return math.exp(log_probability)


def mc_band(estimate: float, expected: float, variance: float, n: int, width: float = 4.0) -> bool:
    """Whether a Monte Carlo mean lies within ``width`` standard errors"""
    return abs(estimate - expected) <= width * math.sqrt(variance / n) + 1e-12


class TopOfRange:
    """Stands in for a Generator whose uniform lands on the largest double below 1"""

    def random(self, size=None):
        top = 1.0 - 2.0 ** -53
        return top if size is None else np.full(size, top)


@pytest.fixture
def space3() -> StateSpace:
    return SPACE3


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def package_warnings(caplog):
    """caplog wired to the package logger, which does not propagate once configured"""
    package = logging.getLogger('smbs')
    package.addHandler(caplog.handler)
    caplog.set_level(logging.WARNING, logger='smbs')
    yield caplog
    package.removeHandler(caplog.handler)
