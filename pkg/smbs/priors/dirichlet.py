"""Dirichlet process on a finite state space"""

import math
from dataclasses import dataclass
from typing import Any, Dict, Sequence, Tuple

import numpy as np

from smbs.common.errors import ParameterError
from smbs.core.state_space import StateSpace


@dataclass(frozen=True)
class DirichletParams:
    """Base measure m over a state space; Dir(m) has parameters m({j}), unnormalized"""
    space: StateSpace
    masses: Tuple[float, ...]

    def __post_init__(self):
        masses = tuple(float(m) for m in self.masses)
        if len(masses) != self.space.size:
            raise ParameterError(
                f"Expected {self.space.size} masses, got {len(masses)}"
            )
        if any(m < 0 or not math.isfinite(m) for m in masses):
            raise ParameterError(f"Masses must be finite and non-negative: {list(masses)}")
        if not math.fsum(masses) > 0:
            raise ParameterError("Base measure must have positive total mass")
        object.__setattr__(self, 'masses', masses)

    @classmethod
    def from_entries(cls, space: StateSpace, entries: Sequence[Dict[str, Any]]) -> 'DirichletParams':
        """Build from config entries ``[{"state": id, "mass": x}, ...]``"""
        masses = [0.0] * space.size
        for entry in entries:
            try:
                masses[space.index(int(entry['state']))] += float(entry['mass'])
            except KeyError as e:
                raise ParameterError(f"Mass entry missing {e}: {entry!r}")
        return cls(space, tuple(masses))

    @property
    def total(self) -> float:
        """m(E)"""
        return math.fsum(self.masses)

    def mass(self, state: int) -> float:
        return self.masses[self.space.index(state)]

    def as_array(self) -> np.ndarray:
        return np.array(self.masses, dtype=float)


def dir_posterior(prior: DirichletParams, counts: Sequence[int]) -> DirichletParams:
    """
    Add observed counts to the base measure: m_*({i}) = m({i}) + n_i

    Raises:
        ParameterError: For negative counts or a length mismatch
    """
    if len(counts) != prior.space.size:
        raise ParameterError(f"Expected {prior.space.size} counts, got {len(counts)}")
    if any(n < 0 for n in counts):
        raise ParameterError(f"Counts must be non-negative: {list(counts)}")
    if not any(counts):
        return prior
    return DirichletParams(prior.space, tuple(m + n for m, n in zip(prior.masses, counts)))


def dir_mean(params: DirichletParams, state: int) -> float:
    """E[P({j})] = m({j}) / m(E)"""
    return params.mass(state) / params.total


def dir_variance(params: DirichletParams, state: int) -> float:
    """Var[P({j})] of the Beta(m({j}), m(E) - m({j})) marginal"""
    total = params.total
    p = params.mass(state) / total
    return p * (1.0 - p) / (total + 1.0)


def dir_sample(params: DirichletParams, rng: np.random.Generator) -> np.ndarray:
    """
    Draw a pmf P ~ Dir(m)

    States with zero mass get exactly zero probability. The positive-mass
    coordinates go through ``Generator.dirichlet``, which switches to beta
    stick-breaking when every mass is small, so tiny masses keep the right
    marginals instead of underflowing.
    """
    masses = params.as_array()
    draws = np.zeros_like(masses)
    positive = masses > 0
    draws[positive] = rng.dirichlet(masses[positive])
    return draws
