"""Forward simulation of semi-Markov paths from a characteristic couple"""

from typing import List

import numpy as np

from smbs.common.errors import ParameterError
from smbs.core.paths import StateSequence
from smbs.priors.beta_stacy import draw_holding_time
from smbs.process.smbs import CharacteristicCouple


def sm_sample_path(couple: CharacteristicCouple, start: int, horizon: int,
                   rng: np.random.Generator) -> StateSequence:
    """
    Simulate s_0..s_horizon from SM(P, F) started at ``start``

    Each holding time is drawn one step at a time from the current state's
    hazards; the path is cut at the horizon, so the last holding time is only
    drawn as far as needed.
    """
    if horizon < 0:
        raise ParameterError(f"Horizon must be non-negative, got {horizon}")
    space = couple.space
    space.index(start)
    states: List[int] = []
    current = start
    length = horizon + 1
    while True:
        remaining = length - len(states)
        hold = draw_holding_time(couple.holding_law(current), rng, limit=remaining - 1)
        if hold is None:
            states.extend([current] * remaining)
            break
        states.extend([current] * hold)
        current = space.states[int(rng.choice(space.size, p=couple.row(current)))]
    return StateSequence(space, tuple(states))
