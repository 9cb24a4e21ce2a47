"""The factory-status simulation study: data-generating couple and long-run behaviour"""

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from scipy import linalg

from smbs.common.errors import ModelError, ParameterError
from smbs.common.logger import get_logger
from smbs.core.paths import StateSequence
from smbs.core.state_space import StateSpace
from smbs.priors.beta_stacy import DEFAULT_MAX_STEPS
from smbs.priors.centering import CenteringDistribution, DiscreteWeibull1, Geometric, PrecisionFunction
from smbs.process.simulate import sm_sample_path
from smbs.process.smbs import CharacteristicCouple, HoldingLaw, SmbsParams

logger = get_logger(__name__)

# Stop summing survival probabilities once an increment falls below this
DEFAULT_TAIL_TOL = 1e-12

STUDY_STATES = (1, 2, 3)
STUDY_LABELS = ('working', 'failed', 'repair')


def _study_transition() -> np.ndarray:
    return np.array([
        [0.0, 1.0, 0.0],
        [0.95, 0.0, 0.05],
        [1.0, 0.0, 0.0],
    ])


def _study_holding() -> Tuple[CenteringDistribution, ...]:
    return (Geometric(0.8), DiscreteWeibull1(0.3, 0.5), DiscreteWeibull1(0.6, 0.9))


@dataclass(frozen=True, eq=False)
class SimStudyTruth:
    """
    Data-generating semi-Markov process of the study

    State 1 always moves to 2, state 2 moves back to 1 with probability 0.95
    and to 3 otherwise, state 3 always returns to 1.
    """
    space: StateSpace = field(default_factory=lambda: StateSpace(STUDY_STATES, STUDY_LABELS))
    transition: np.ndarray = field(default_factory=_study_transition)
    holding: Tuple[CenteringDistribution, ...] = field(default_factory=_study_holding)
    start: int = 1
    horizon: int = 1000

    def __post_init__(self):
        if self.horizon < 0:
            raise ParameterError(f"Horizon must be non-negative, got {self.horizon}")
        self.space.index(self.start)

    def couple(self) -> CharacteristicCouple:
        return CharacteristicCouple(self.space, self.transition, self.holding)

    def holding_law(self, state: int) -> CenteringDistribution:
        return self.holding[self.space.index(state)]


def study_prior(c: float = 1.0, p: float = 0.3) -> SmbsParams:
    """
    Prior of the study: unit jump masses on the allowed moves, geometric(p)
    centering and constant precision c for every state
    """
    space = StateSpace(STUDY_STATES, STUDY_LABELS)
    jump_masses = [
        [0.0, 1.0, 0.0],
        [1.0, 0.0, 1.0],
        [1.0, 0.0, 0.0],
    ]
    return SmbsParams.from_arrays(space, jump_masses, PrecisionFunction.constant(c), Geometric(p))


def discrete_weibull_cdf(q: float, k: float, t: int) -> float:
    """
    F(t) = 1 - q^(t^k) of the first-type discrete Weibull; 0 at t = 0

    Raises:
        ParameterError: If q is outside (0, 1), k <= 0 or t < 0
    """
    if t < 0:
        raise ParameterError(f"t must be a non-negative integer, got {t}")
    return DiscreteWeibull1(q, k).cdf(t)


def simstudy_generate(seed: int, truth: Optional[SimStudyTruth] = None) -> StateSequence:
    """Sample s_0..s_horizon from the study's data-generating process"""
    truth = truth or SimStudyTruth()
    rng = np.random.default_rng(seed)
    path = sm_sample_path(truth.couple(), truth.start, truth.horizon, rng)
    logger.info(f"Generated study path of length {len(path)} (seed {seed})")
    return path


def stationary_distribution(transition: np.ndarray) -> np.ndarray:
    """
    Equilibrium e of the jump chain: e P = e, sum(e) = 1

    Raises:
        ModelError: If the chain has no unique equilibrium
    """
    transition = np.asarray(transition, dtype=float)
    n = transition.shape[0]
    kernel = linalg.null_space(transition.T - np.eye(n))
    if kernel.shape[1] != 1:
        raise ModelError(f"Jump chain has {kernel.shape[1]} equilibrium directions, expected 1")
    e = kernel[:, 0]
    e = e / e.sum()
    return np.clip(e, 0.0, None)


def mean_sojourn(law: HoldingLaw, tail_tol: float = DEFAULT_TAIL_TOL,
                 max_terms: int = DEFAULT_MAX_STEPS) -> float:
    """
    Mean holding time sum_{t >= 0} (1 - F(t)), truncated once a term drops below tail_tol

    Raises:
        ModelError: If the sum has not converged within max_terms terms
    """
    if not tail_tol > 0:
        raise ParameterError(f"Tail tolerance must be positive, got {tail_tol}")
    terms = []
    for t in range(max_terms):
        s = law.survival(t)
        terms.append(s)
        if s < tail_tol:
            return math.fsum(terms)
    raise ModelError(f"Mean holding time did not converge within {max_terms} terms")


def limiting_distribution(truth: SimStudyTruth, tail_tol: float = DEFAULT_TAIL_TOL) -> np.ndarray:
    """nu_j = e_j m_j / sum_i e_i m_i, the long-run share of time spent in each state"""
    e = stationary_distribution(truth.transition)
    m = np.array([mean_sojourn(law, tail_tol) for law in truth.holding])
    weights = e * m
    return weights / weights.sum()
