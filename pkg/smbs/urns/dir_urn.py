"""Generalized Polya urns: Dir(m)-urns and draw records"""

from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np

from smbs.common.errors import ModelError
from smbs.core.state_space import StateSpace
from smbs.predictive.kernel import draw_index
from smbs.priors.dirichlet import DirichletParams


@dataclass(frozen=True)
class UrnDraw:
    """One draw from one urn, with the compositions before and after reinforcement"""
    urn_id: str
    color: Union[int, str]
    pre_masses: Tuple[float, ...]
    post_masses: Tuple[float, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'urn_id': self.urn_id,
            'color': self.color,
            'pre_masses': list(self.pre_masses),
            'post_masses': list(self.post_masses),
        }


Tracer = Callable[[UrnDraw], None]


class DirUrn:
    """
    Urn with real-valued ball masses over a state space

    A draw picks color j with probability composition(j) / total and puts the
    ball back with one more of the same color.
    """

    def __init__(self, space: StateSpace, masses: Sequence[float], urn_id: str = "U",
                 tracer: Optional[Tracer] = None):
        self.space = space
        self.urn_id = urn_id
        self.composition = np.array(masses, dtype=float)
        self.draw_count = 0
        self._tracer = tracer

    @classmethod
    def from_params(cls, params: DirichletParams, urn_id: str = "U",
                    tracer: Optional[Tracer] = None) -> 'DirUrn':
        return cls(params.space, params.masses, urn_id, tracer)

    @property
    def total(self) -> float:
        return float(self.composition.sum())

    def probabilities(self) -> np.ndarray:
        """Probability of each color on the next draw"""
        total = self.total
        if total <= 0.0:
            raise ModelError(f"Urn {self.urn_id} has no mass to draw from")
        return self.composition / total

    def sequence_probability(self, colors: Sequence[int]) -> float:
        """Probability that the next draws produce ``colors`` in order; the urn is not changed"""
        composition = self.composition.copy()
        probability = 1.0
        for color in colors:
            k = self.space.index(color)
            total = composition.sum()
            if total <= 0.0:
                raise ModelError(f"Urn {self.urn_id} has no mass to draw from")
            probability *= composition[k] / total
            composition[k] += 1.0
        return probability

    def reinforce(self, color: int) -> None:
        k = self.space.index(color)
        pre = tuple(self.composition.tolist())
        self.composition[k] += 1.0
        self.draw_count += 1
        if self._tracer is not None:
            self._tracer(UrnDraw(self.urn_id, color, pre, tuple(self.composition.tolist())))

    def draw(self, rng: np.random.Generator) -> int:
        """
        Draw a color and reinforce it

        Raises:
            ModelError: If the urn has zero total mass
        """
        color = self.space.states[draw_index(self.probabilities(), rng)]
        self.reinforce(color)
        return color

    def force(self, color: int) -> float:
        """
        Reinforce ``color`` as if it had been drawn

        Returns:
            Probability the draw had of producing ``color``

        Raises:
            ModelError: If ``color`` could not have been drawn
        """
        probability = float(self.probabilities()[self.space.index(color)])
        if probability == 0.0:
            raise ModelError(f"Urn {self.urn_id} holds no balls of color {color}")
        self.reinforce(color)
        return probability
