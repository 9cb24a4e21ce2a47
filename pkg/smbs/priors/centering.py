"""Centering distributions on the positive integers and precision functions"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, Tuple

import numpy as np

from smbs.common.errors import ModelError, ParameterError

# Total-mass tolerance for tabulated centering distributions
MASS_TOLERANCE = 1e-12


class CenteringDistribution(ABC):
    """
    Distribution F0 with support on the positive integers

    Subclasses provide survival and hazard in closed form; pmf and cdf are
    derived from them so that no value is obtained by subtracting two
    nearly equal survival probabilities.
    """

    family: str = ""

    @abstractmethod
    def log_survival(self, t: int) -> float:
        """log F0((t, +inf)); -inf when no mass lies beyond t"""

    @abstractmethod
    def hazard(self, t: int) -> float:
        """
        F0({t}) / F0([t, +inf)) for t >= 1

        Raises:
            ModelError: If F0 has no mass at or beyond t
        """

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        """JSON form"""

    def survival(self, t: int) -> float:
        """F0((t, +inf))"""
        if t <= 0:
            return 1.0
        return math.exp(self.log_survival(t))

    def cdf(self, t: int) -> float:
        """F0(t) = F0((-inf, t])"""
        if t <= 0:
            return 0.0
        return -math.expm1(self.log_survival(t))

    def pmf(self, t: int) -> float:
        """F0({t})"""
        if t <= 0:
            return 0.0
        at_risk = self.survival(t - 1)
        if at_risk == 0.0:
            return 0.0
        return at_risk * self.hazard(t)

    def _no_mass(self, t: int) -> ModelError:
        return ModelError(
            f"Centering distribution {self.to_dict()} has no mass at or beyond t={t}"
        )

    @staticmethod
    def from_dict(data: Dict[str, Any]) -> 'CenteringDistribution':
        """
        Build a centering distribution from its JSON form

        Raises:
            ParameterError: For unknown families or invalid parameters
        """
        if not isinstance(data, dict) or 'family' not in data:
            raise ParameterError(f"Centering distribution needs a 'family': {data!r}")
        family = data['family']
        try:
            if family == 'geometric':
                return Geometric(float(data['p']))
            if family in ('discrete_weibull1', 'discrete_weibull'):
                return DiscreteWeibull1(float(data['q']), float(data['k']))
            if family == 'uniform':
                return UniformSupport(int(data['K']))
            if family == 'table':
                return Tabulated(tuple(float(v) for v in data['pmf']),
                                 float(data.get('tail_rate', 1.0)))
        except KeyError as e:
            raise ParameterError(f"Centering family '{family}' is missing parameter {e}")
        raise ParameterError(f"Unknown centering family '{family}'")


@dataclass(frozen=True)
class Geometric(CenteringDistribution):
    """F0({t}) = p (1-p)^(t-1), constant hazard p"""
    p: float
    family = "geometric"

    def __post_init__(self):
        if not 0.0 < self.p <= 1.0:
            raise ParameterError(f"Geometric parameter must lie in (0, 1], got {self.p}")

    def log_survival(self, t: int) -> float:
        if t <= 0:
            return 0.0
        if self.p == 1.0:
            return -math.inf
        return t * math.log1p(-self.p)

    def hazard(self, t: int) -> float:
        if t > 1 and self.p == 1.0:
            raise self._no_mass(t)
        return self.p

    def to_dict(self) -> Dict[str, Any]:
        return {'family': self.family, 'p': self.p}


@dataclass(frozen=True)
class DiscreteWeibull1(CenteringDistribution):
    """First-type discrete Weibull: F0(t) = 1 - q^(t^k)"""
    q: float
    k: float
    family = "discrete_weibull1"

    def __post_init__(self):
        if not 0.0 < self.q < 1.0:
            raise ParameterError(f"Discrete Weibull q must lie in (0, 1), got {self.q}")
        if not self.k > 0.0:
            raise ParameterError(f"Discrete Weibull k must be positive, got {self.k}")

    def log_survival(self, t: int) -> float:
        if t <= 0:
            return 0.0
        return (t ** self.k) * math.log(self.q)

    def hazard(self, t: int) -> float:
        if t < 1:
            raise ParameterError(f"Hazard is defined for t >= 1, got {t}")
        increment = t ** self.k - (t - 1) ** self.k
        return -math.expm1(increment * math.log(self.q))

    def to_dict(self) -> Dict[str, Any]:
        return {'family': self.family, 'q': self.q, 'k': self.k}


@dataclass(frozen=True)
class UniformSupport(CenteringDistribution):
    """Uniform distribution on {1, ..., K}"""
    K: int
    family = "uniform"

    def __post_init__(self):
        if self.K < 1:
            raise ParameterError(f"Uniform support size must be >= 1, got {self.K}")

    def log_survival(self, t: int) -> float:
        if t <= 0:
            return 0.0
        if t >= self.K:
            return -math.inf
        return math.log((self.K - t) / self.K)

    def survival(self, t: int) -> float:
        if t <= 0:
            return 1.0
        return max(self.K - t, 0) / self.K

    def cdf(self, t: int) -> float:
        return 1.0 - self.survival(t)

    def hazard(self, t: int) -> float:
        if t < 1:
            raise ParameterError(f"Hazard is defined for t >= 1, got {t}")
        if t > self.K:
            raise self._no_mass(t)
        return 1.0 / (self.K - t + 1)

    def to_dict(self) -> Dict[str, Any]:
        return {'family': self.family, 'K': self.K}


@dataclass(frozen=True)
class Tabulated(CenteringDistribution):
    """
    Explicit pmf on {1, ..., n} followed by a geometric tail

    The mass left after the table, 1 - sum(pmf), is spread over n+1, n+2, ...
    as a geometric distribution with parameter ``tail_rate``.
    """
    pmf_table: Tuple[float, ...]
    tail_rate: float = 1.0
    family = "table"

    def __post_init__(self):
        table = tuple(float(v) for v in self.pmf_table)
        if any(v < 0 for v in table):
            raise ParameterError(f"Table pmf values must be non-negative: {list(table)}")
        total = math.fsum(table)
        if total > 1.0 + MASS_TOLERANCE:
            raise ParameterError(f"Table pmf sums to {total} > 1")
        if not 0.0 < self.tail_rate <= 1.0:
            raise ParameterError(f"Tail rate must lie in (0, 1], got {self.tail_rate}")
        remainder = 1.0 - total
        if remainder < MASS_TOLERANCE:
            remainder = 0.0
        # tail_after[t] = F0((t, +inf)) for t = 0..n, built from the right
        tail_after = [remainder]
        for value in reversed(table):
            tail_after.append(tail_after[-1] + value)
        tail_after.reverse()
        object.__setattr__(self, 'pmf_table', table)
        object.__setattr__(self, '_remainder', remainder)
        object.__setattr__(self, '_tail_after', tuple(tail_after))

    def _beyond_table(self, t: int) -> float:
        return self._remainder * (1.0 - self.tail_rate) ** (t - len(self.pmf_table))

    def survival(self, t: int) -> float:
        if t <= 0:
            return 1.0
        if t <= len(self.pmf_table):
            return self._tail_after[t]
        return self._beyond_table(t)

    def log_survival(self, t: int) -> float:
        value = self.survival(t)
        return math.log(value) if value > 0 else -math.inf

    def cdf(self, t: int) -> float:
        if t <= 0:
            return 0.0
        if t <= len(self.pmf_table):
            return math.fsum(self.pmf_table[:t])
        return 1.0 - self.survival(t)

    def pmf(self, t: int) -> float:
        if t <= 0:
            return 0.0
        if t <= len(self.pmf_table):
            return self.pmf_table[t - 1]
        return self._beyond_table(t - 1) * self.tail_rate

    def hazard(self, t: int) -> float:
        if t < 1:
            raise ParameterError(f"Hazard is defined for t >= 1, got {t}")
        if t <= len(self.pmf_table):
            at_risk = self._tail_after[t - 1]
            if at_risk == 0.0:
                raise self._no_mass(t)
            return self.pmf_table[t - 1] / at_risk
        if self._remainder == 0.0:
            raise self._no_mass(t)
        return self.tail_rate

    def to_dict(self) -> Dict[str, Any]:
        return {'family': self.family, 'pmf': list(self.pmf_table), 'tail_rate': self.tail_rate}


@dataclass(frozen=True)
class PrecisionFunction:
    """c(t): explicit values for t = 1..len(head), then ``tail`` for every later t"""
    head: Tuple[float, ...] = ()
    tail: float = 1.0

    def __post_init__(self):
        head = tuple(float(v) for v in self.head)
        if any(not v > 0 for v in head) or not self.tail > 0:
            raise ParameterError(f"Precision values must be positive: head={list(head)}, tail={self.tail}")
        object.__setattr__(self, 'head', head)
        object.__setattr__(self, 'tail', float(self.tail))

    @classmethod
    def constant(cls, c: float) -> 'PrecisionFunction':
        return cls((), c)

    @classmethod
    def from_dict(cls, data: Any) -> 'PrecisionFunction':
        """Accepts ``{"head": [...], "tail": x}`` or a bare positive number"""
        if isinstance(data, (int, float)):
            return cls.constant(float(data))
        if not isinstance(data, dict):
            raise ParameterError(f"Invalid precision specification: {data!r}")
        return cls(tuple(data.get('head', ())), float(data.get('tail', 1.0)))

    def __call__(self, t: int) -> float:
        if 1 <= t <= len(self.head):
            return self.head[t - 1]
        return self.tail
