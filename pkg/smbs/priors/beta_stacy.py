"""Discrete-time beta-Stacy process: conjugate updates, moments and sampling"""

import dataclasses
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

import numpy as np

from smbs.common.errors import ModelError, ParameterError
from smbs.common.logger import get_logger
from smbs.core.histogram import Histogram
from smbs.priors.centering import CenteringDistribution, PrecisionFunction

logger = get_logger(__name__)

# Largest overshoot outside [0, 1] attributed to rounding
ROUNDOFF = 1e-14

# Beta(a, b) with a + b below this is drawn from its Bernoulli(a / (a + b)) limit
DEGENERATE_MASS = 1e-12

# Cap on sequential hazard draws for one holding time
DEFAULT_MAX_STEPS = 10 ** 6

Observations = Union[Iterable[int], Mapping[int, int], Histogram]


def checked_probability(value: float, what: str = "probability") -> float:
    """Clamp a probability that overshoots [0, 1] by rounding only"""
    if 0.0 <= value <= 1.0:
        return value
    if -ROUNDOFF < value < 0.0:
        return 0.0
    if 1.0 < value < 1.0 + ROUNDOFF:
        return 1.0
    raise ModelError(f"{what} {value!r} lies outside [0, 1]")


@dataclass(frozen=True)
class BetaStacyParams:
    """
    Parameters of BS(c, F0) together with the data absorbed by updates

    The posterior after exact observations ``exact`` and right-censored
    observations ``censored`` has independent hazards
    U_t ~ Beta(a(t), b(t)) with

        a(t) = c(t) F0({t}) + N({t})
        b(t) = c(t) F0((t, +inf)) + N((t, +inf)) + #{censored t* >= t}

    so that the posterior is again a beta-Stacy process, written in hazard form.
    """
    precision: PrecisionFunction
    centering: CenteringDistribution
    exact: Histogram = field(default_factory=Histogram)
    censored: Histogram = field(default_factory=Histogram)
    _survival: List[float] = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, '_survival', [1.0])

    @classmethod
    def from_dict(cls, data: Dict) -> 'BetaStacyParams':
        return cls(
            precision=PrecisionFunction.from_dict(data.get('precision', 1.0)),
            centering=CenteringDistribution.from_dict(data['centering']),
        )

    @property
    def is_prior(self) -> bool:
        """True when no observation has been absorbed"""
        return not self.exact and not self.censored

    @property
    def posterior_atoms(self) -> Dict[int, Tuple[int, int]]:
        """t -> (exact count N({t}), censored observations at t)"""
        times = sorted(set(t for t, _ in self.exact.items()) | set(t for t, _ in self.censored.items()))
        return {t: (self.exact.at(t), self.censored.at(t)) for t in times}

    def with_precision(self, precision: PrecisionFunction) -> 'BetaStacyParams':
        return dataclasses.replace(self, precision=precision)

    def beta_parameters(self, t: int) -> Tuple[float, float]:
        """(a(t), b(t)) of the hazard U_t"""
        if t < 1:
            raise ParameterError(f"Holding times are positive integers, got {t}")
        c = self.precision(t)
        a = c * self.centering.pmf(t) + self.exact.at(t)
        b = c * self.centering.survival(t) + self.exact.greater_than(t) + self.censored.at_least(t)
        return a, b

    def _has_counts(self, t: int) -> bool:
        return bool(self.exact.at_least(t) or self.censored.at_least(t))

    def hazard(self, t: int) -> float:
        """
        Posterior mean hazard E[U_t] = a(t) / (a(t) + b(t))

        With no data at or beyond t this is the centering hazard, evaluated in
        closed form so that underflowing prior masses do not matter.

        Raises:
            ModelError: If neither the centering nor the data put mass at or beyond t
        """
        if t < 1:
            raise ParameterError(f"Holding times are positive integers, got {t}")
        if not self._has_counts(t):
            return self.centering.hazard(t)
        a, b = self.beta_parameters(t)
        return checked_probability(a / (a + b), f"hazard at t={t}")

    def survival(self, t: int) -> float:
        """F_*((t, +inf)), the posterior mean survival"""
        if t <= 0:
            return 1.0
        if self.is_prior:
            return self.centering.survival(t)
        memo = self._survival
        while len(memo) <= t:
            s = len(memo)
            previous = memo[-1]
            memo.append(0.0 if previous == 0.0 else previous * (1.0 - self.hazard(s)))
        return memo[t]

    def pmf(self, t: int) -> float:
        """F_*({t})"""
        if t < 1:
            return 0.0
        at_risk = self.survival(t - 1)
        return 0.0 if at_risk == 0.0 else at_risk * self.hazard(t)

    def precision_star(self, t: int) -> float:
        """
        c_*(t) = b(t) / F_*((t, +inf)), the posterior precision

        Raises:
            ModelError: If F_*((t, +inf)) = 0, where c_* is undefined
        """
        tail = self.survival(t)
        if tail == 0.0:
            raise ModelError(f"Posterior precision undefined at t={t}: no mass beyond t")
        return self.beta_parameters(t)[1] / tail


def _as_histogram(observations: Observations) -> Histogram:
    if isinstance(observations, Histogram):
        histogram = observations
    elif isinstance(observations, Mapping):
        histogram = Histogram(observations)
    else:
        histogram = Histogram.from_lengths(observations)
    if any(t < 1 for t, _ in histogram.items()):
        raise ParameterError(f"Observations must be positive integers: {dict(histogram.items())}")
    return histogram


def bs_posterior_exact(prior: BetaStacyParams, observations: Observations) -> BetaStacyParams:
    """
    Absorb exact holding-time observations

    Args:
        prior: Current parameters (prior or an earlier posterior)
        observations: Multiset of positive integers, as an iterable or length -> count map

    Returns:
        Posterior parameters; ``prior`` itself when there is nothing to absorb
    """
    histogram = _as_histogram(observations)
    if not histogram:
        return prior
    return dataclasses.replace(prior, exact=prior.exact + histogram)


def bs_posterior_censored(prior: BetaStacyParams, t_star: int) -> BetaStacyParams:
    """
    Absorb one observation known only to exceed t_star

    Raises:
        ParameterError: If t_star < 1
    """
    if t_star < 1:
        raise ParameterError(f"Censoring time must be >= 1, got {t_star}")
    return dataclasses.replace(prior, censored=prior.censored.with_added(int(t_star)))


def bs_mean(params: BetaStacyParams, t: int) -> float:
    """E[F(t)]; equals F0(t) for a prior with no absorbed data"""
    if t < 1:
        raise ParameterError(f"Holding times are positive integers, got {t}")
    if params.is_prior:
        return params.centering.cdf(t)
    return 1.0 - params.survival(t)


def bs_variance(params: BetaStacyParams, t: int) -> float:
    """
    Var[F(t)] from the independent hazards

    F((t, +inf)) is a product of independent (1 - U_s), so its second moment is
    the product of E[(1 - U_s)^2] = b (b + 1) / ((a + b)(a + b + 1)).
    """
    if t < 1:
        raise ParameterError(f"Holding times are positive integers, got {t}")
    first = 1.0
    second = 1.0
    for s in range(1, t + 1):
        if first == 0.0:
            break
        a, b = params.beta_parameters(s)
        total = a + b
        if total < DEGENERATE_MASS:
            stay = 1.0 - params.hazard(s)
            first *= stay
            second *= stay
        else:
            first *= b / total
            second *= b * (b + 1.0) / (total * (total + 1.0))
    return max(second - first * first, 0.0)


class SampledSurvival:
    """
    One draw F ~ BS(c, F0), evaluated lazily

    Hazards U_1, U_2, ... are drawn in order from a private random stream the
    first time they are needed and cached, so every query on the same object
    sees the same realization.
    """

    def __init__(self, params: BetaStacyParams, rng: np.random.Generator):
        self.params = params
        self._rng = rng
        self._hazards: List[float] = []
        self._survival: List[float] = [1.0]

    def _extend(self, t: int) -> None:
        while len(self._hazards) < t:
            s = len(self._hazards) + 1
            if self._survival[-1] == 0.0:
                u = 1.0
            else:
                u = draw_hazard(self.params, s, self._rng)
            self._hazards.append(u)
            self._survival.append(self._survival[-1] * (1.0 - u))

    def hazard(self, t: int) -> float:
        """U_t"""
        if t < 1:
            raise ParameterError(f"Holding times are positive integers, got {t}")
        self._extend(t)
        return self._hazards[t - 1]

    def survival(self, t: int) -> float:
        """F((t, +inf)) = prod_{k <= t} (1 - U_k)"""
        if t <= 0:
            return 1.0
        self._extend(t)
        return self._survival[t]

    def cdf(self, t: int) -> float:
        return 1.0 - self.survival(t)

    def pmf(self, t: int) -> float:
        if t < 1:
            return 0.0
        return self.survival(t - 1) - self.survival(t)


def draw_hazard(params: BetaStacyParams, t: int, rng: np.random.Generator) -> float:
    """
    Draw U_t ~ Beta(a(t), b(t)) with the degenerate conventions

    Beta(0, b) is a point mass at 0, Beta(a, 0) a point mass at 1. When the two
    masses vanish together only through underflow, the Bernoulli limit with the
    closed-form hazard is used.

    Raises:
        ModelError: If the centering and the data put no mass at or beyond t
    """
    a, b = params.beta_parameters(t)
    if a + b < DEGENERATE_MASS:
        h = params.hazard(t)
        logger.warning(f"Degenerate Beta({a}, {b}) at t={t}; Bernoulli({h}) limit")
        return 1.0 if rng.random() < h else 0.0
    if a == 0.0:
        return 0.0
    if b == 0.0:
        return 1.0
    return float(rng.beta(a, b))


def bs_sample(params: BetaStacyParams, rng: np.random.Generator) -> SampledSurvival:
    """
    Draw a random survival function from BS(c_*, F_*)

    Args:
        params: Prior or posterior parameters
        rng: Parent stream; the sample gets its own spawned child stream

    Returns:
        Lazily evaluated SampledSurvival
    """
    return SampledSurvival(params, rng.spawn(1)[0])


def draw_holding_time(law, rng: np.random.Generator, max_steps: int = DEFAULT_MAX_STEPS,
                      limit: Optional[int] = None) -> Optional[int]:
    """
    Draw a holding time from a law exposing ``hazard(t)``, one step at a time

    Args:
        law: Anything with a ``hazard(t)`` method
        rng: Random stream, one uniform per step survived
        max_steps: Cap used when no limit is given
        limit: Stop after this many steps and return None instead of raising

    Raises:
        ModelError: If no limit is given and no holding time is reached within max_steps
    """
    steps = max_steps if limit is None else limit
    for t in range(1, steps + 1):
        h = law.hazard(t)
        if h >= 1.0 or rng.random() < h:
            return t
    if limit is not None:
        return None
    raise ModelError(f"Holding time exceeded {max_steps} steps")
