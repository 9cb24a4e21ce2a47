"""BS(c, F0)-systems: chains of black/white urns generating holding times"""

from typing import List, Optional, Tuple

import numpy as np

from smbs.common.errors import ModelError, ParameterError
from smbs.common.logger import get_logger
from smbs.priors.beta_stacy import DEFAULT_MAX_STEPS, BetaStacyParams
from smbs.urns.dir_urn import Tracer, UrnDraw

logger = get_logger(__name__)

BLACK = 'black'
WHITE = 'white'


class BsSystem:
    """
    Urns V_1, V_2, ... where V_t starts with c(t)F0({t}) black and
    c(t)F0((t, +inf)) white balls

    Urns are materialized on first visit. Starting from posterior parameters
    gives urns already holding the absorbed observations.
    """

    def __init__(self, params: BetaStacyParams, system_id: str = "V",
                 tracer: Optional[Tracer] = None):
        self.params = params
        self.system_id = system_id
        self._urns: List[List[float]] = []
        self._tracer = tracer

    @property
    def depth(self) -> int:
        """Number of urns materialized so far"""
        return len(self._urns)

    def _urn(self, t: int) -> List[float]:
        if t < 1:
            raise ParameterError(f"Urn index must be >= 1, got {t}")
        while len(self._urns) < t:
            black, white = self.params.beta_parameters(len(self._urns) + 1)
            self._urns.append([black, white])
        return self._urns[t - 1]

    def masses(self, t: int) -> Tuple[float, float]:
        """(black, white) composition of V_t"""
        black, white = self._urn(t)
        return black, white

    def black_probability(self, t: int) -> float:
        """
        Probability of a black ball from V_t

        An urn whose initial masses both underflowed draws from the centering
        hazard.

        Raises:
            ModelError: If V_t can never produce a ball
        """
        black, white = self._urn(t)
        total = black + white
        if total == 0.0:
            logger.warning(f"Urn {self.system_id},{t} is empty; drawing from the centering hazard")
            return self.params.hazard(t)
        return black / total

    def survival_probability(self, t: int) -> float:
        """P(T > t) for the next holding time, from the current compositions"""
        probability = 1.0
        for s in range(1, t + 1):
            probability *= 1.0 - self.black_probability(s)
            if probability == 0.0:
                break
        return probability

    def reinforce(self, t: int, black: bool) -> None:
        urn = self._urn(t)
        pre = tuple(urn)
        urn[0 if black else 1] += 1.0
        if self._tracer is not None:
            self._tracer(UrnDraw(f"{self.system_id},{t}", BLACK if black else WHITE, pre, tuple(urn)))

    def draw_at(self, t: int, rng: np.random.Generator) -> bool:
        """Draw one ball from V_t and reinforce it; True for black"""
        black = bool(rng.random() < self.black_probability(t))
        self.reinforce(t, black)
        return black

    def force_at(self, t: int, black: bool) -> float:
        """
        Reinforce V_t with a given color as if it had been drawn

        Returns:
            Probability the draw had of producing that color

        Raises:
            ModelError: If the color could not have been drawn
        """
        p = self.black_probability(t)
        probability = p if black else 1.0 - p
        if probability == 0.0:
            raise ModelError(
                f"Urn {self.system_id},{t} holds no {BLACK if black else WHITE} balls"
            )
        self.reinforce(t, black)
        return probability

    def draw(self, rng: np.random.Generator, max_iter: int = DEFAULT_MAX_STEPS) -> int:
        """
        Walk V_1, V_2, ... until a black ball and return its urn index

        Raises:
            ModelError: If no black ball is drawn within max_iter urns
        """
        for t in range(1, max_iter + 1):
            if self.draw_at(t, rng):
                return t
        raise ModelError(
            f"System {self.system_id} drew {max_iter} white balls in a row; "
            f"centering is close to defective"
        )
