"""
Reinforced urn processes generating semi-Markov paths

Three schemes share one time-step walk:

  SMBS  one Dir-urn and one BS-system per state; the holding time is drawn
        first, then the next state.
  PAIR  one Dir-urn per state and one BS-system per (state, next state); the
        next state is drawn first and stays hidden until the block ends.
  TIME  one BS-system per state and one Dir-urn per (state, holding time);
        the next state is drawn from the urn of the realized holding time.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Hashable, List, Optional, Tuple

import numpy as np

from smbs.common.errors import ModelError, ParameterError
from smbs.common.logger import get_logger
from smbs.core.paths import PathDecomposition, StateSequence, compose_path
from smbs.core.state_space import StateSpace
from smbs.priors.beta_stacy import DEFAULT_MAX_STEPS, BetaStacyParams
from smbs.priors.dirichlet import DirichletParams
from smbs.process.smbs import SmbsParams
from smbs.process.variants import PairParams, VariantBParams
from smbs.urns.bs_system import BsSystem
from smbs.urns.dir_urn import DirUrn, Tracer

logger = get_logger(__name__)


class UrnScheme(str, Enum):
    SMBS = 'smbs'
    PAIR = 'pair'
    TIME = 'time'


@dataclass(frozen=True)
class RecurrenceDiagnostics:
    """Visits v_{i,n} per state and transition counts v_{i,j,n} per pair"""
    visits: Dict[int, int]
    transitions: Dict[Tuple[int, int], int]

    def unvisited(self) -> List[int]:
        return [state for state, count in self.visits.items() if count == 0]


class UrnProcess:
    """
    Mutable urn walk; one instance belongs to one generation run

    Every time step draws one ball from the BS-system urn at the current
    holding depth. A black ball closes the block, after which the next state
    comes from the relevant Dir-urn.
    """

    def __init__(self, space: StateSpace, scheme: UrnScheme, start: int,
                 jump_prior: Callable[[Hashable], DirichletParams],
                 holding_prior: Callable[[Hashable], BetaStacyParams],
                 tracer: Optional[Tracer] = None, max_steps: int = DEFAULT_MAX_STEPS):
        space.index(start)
        self.space = space
        self.scheme = UrnScheme(scheme)
        self.max_steps = max_steps
        self._jump_prior = jump_prior
        self._holding_prior = holding_prior
        self._tracer = tracer
        self._jump_urns: Dict[Hashable, DirUrn] = {}
        self._systems: Dict[Hashable, BsSystem] = {}

        self.current = start
        self.depth = 1
        self._pending: Optional[int] = None
        self._visited: List[int] = [start]
        self._holding: List[int] = []
        self._visits = {state: 0 for state in space.states}
        self._visits[start] = 1
        self._transitions: Dict[Tuple[int, int], int] = {}

    @classmethod
    def from_smbs(cls, params: SmbsParams, start: int, tracer: Optional[Tracer] = None,
                  max_steps: int = DEFAULT_MAX_STEPS) -> 'UrnProcess':
        return cls(params.space, UrnScheme.SMBS, start, params.jump_prior, params.holding_prior,
                   tracer, max_steps)

    @classmethod
    def from_pair(cls, params: PairParams, start: int, tracer: Optional[Tracer] = None,
                  max_steps: int = DEFAULT_MAX_STEPS) -> 'UrnProcess':
        return cls(params.space, UrnScheme.PAIR, start, params.jump_prior,
                   lambda key: params.holding_prior(*key), tracer, max_steps)

    @classmethod
    def from_variant_b(cls, params: VariantBParams, start: int, tracer: Optional[Tracer] = None,
                       max_steps: int = DEFAULT_MAX_STEPS) -> 'UrnProcess':
        return cls(params.space, UrnScheme.TIME, start, lambda key: params.jump_prior(*key),
                   params.holding_prior, tracer, max_steps)

    def _jump_urn(self, key: Hashable) -> DirUrn:
        urn = self._jump_urns.get(key)
        if urn is None:
            urn_id = "U" + (",".join(str(k) for k in key) if isinstance(key, tuple) else str(key))
            urn = DirUrn.from_params(self._jump_prior(key), urn_id, self._tracer)
            self._jump_urns[key] = urn
        return urn

    def _system(self, key: Hashable) -> BsSystem:
        system = self._systems.get(key)
        if system is None:
            system_id = "V" + ("-".join(str(k) for k in key) if isinstance(key, tuple) else str(key))
            system = BsSystem(self._holding_prior(key), system_id, self._tracer)
            self._systems[key] = system
        return system

    def _current_system(self) -> BsSystem:
        if self.scheme is UrnScheme.PAIR:
            return self._system((self.current, self._pending))
        return self._system(self.current)

    def _successor_urn(self) -> DirUrn:
        if self.scheme is UrnScheme.TIME:
            return self._jump_urn((self.current, self.depth))
        return self._jump_urn(self.current)

    def _jump(self, successor: int) -> None:
        pair = (self.current, successor)
        self._transitions[pair] = self._transitions.get(pair, 0) + 1
        self._visits[successor] += 1
        self._holding.append(self.depth)
        self._visited.append(successor)
        self.current = successor
        self.depth = 1
        self._pending = None

    def _stay(self) -> None:
        self.depth += 1
        if self.depth > self.max_steps:
            raise ModelError(
                f"Block in state {self.current} exceeded {self.max_steps} steps; "
                f"centering is close to defective"
            )

    def step(self, rng: np.random.Generator) -> int:
        """Advance one time step and return the new state"""
        if self.scheme is UrnScheme.PAIR and self._pending is None:
            self._pending = self._jump_urn(self.current).draw(rng)
        if not self._current_system().draw_at(self.depth, rng):
            self._stay()
        elif self.scheme is UrnScheme.PAIR:
            self._jump(self._pending)
        else:
            self._jump(self._successor_urn().draw(rng))
        return self.current

    def observe(self, next_state: int) -> float:
        """
        Force the next time step to land in ``next_state``

        Urns are reinforced exactly as a random draw with that outcome would
        reinforce them.

        Returns:
            Probability the step had of producing ``next_state``

        Raises:
            ModelError: For the PAIR scheme, whose next state is hidden, or
                when ``next_state`` could not have been reached
        """
        self.space.index(next_state)
        if self.scheme is UrnScheme.PAIR:
            raise ModelError("Pair scheme draws its hidden successor first; steps cannot be forced")
        system = self._current_system()
        if next_state == self.current:
            probability = system.force_at(self.depth, black=False)
            self._stay()
            return probability
        urn = self._successor_urn()
        if urn.probabilities()[self.space.index(next_state)] == 0.0:
            raise ModelError(f"Urn {urn.urn_id} holds no balls of color {next_state}")
        probability = system.force_at(self.depth, black=True)
        probability *= urn.force(next_state)
        self._jump(next_state)
        return probability

    def replay(self, path: StateSequence) -> float:
        """
        Observe s_1..s_t of a path starting at the current state

        Returns:
            Probability of the replayed steps
        """
        if path.states[0] != self.current:
            raise ParameterError(
                f"Path starts at {path.states[0]}, walk is at {self.current}"
            )
        probability = 1.0
        for state in path.states[1:]:
            probability *= self.observe(state)
        return probability

    def step_probabilities(self) -> np.ndarray:
        """
        Exact law of the next observed state from the current compositions

        For the PAIR scheme with a hidden successor already drawn, the law is
        conditional on that successor.
        """
        i = self.space.index(self.current)
        if self.scheme is UrnScheme.PAIR:
            if self._pending is not None:
                leave = self._current_system().black_probability(self.depth)
                pmf = np.zeros(self.space.size)
                pmf[self.space.index(self._pending)] = leave
                pmf[i] = 1.0 - leave
                return pmf
            weights = self._jump_urn(self.current).probabilities()
            pmf = np.zeros(self.space.size)
            for k, successor in enumerate(self.space.states):
                if weights[k] == 0.0:
                    continue
                leave = self._system((self.current, successor)).black_probability(self.depth)
                pmf[k] += weights[k] * leave
                pmf[i] += weights[k] * (1.0 - leave)
            return pmf

        system = self._current_system()
        black, white = system.masses(self.depth)
        total = black + white
        if total == 0.0:
            leave = system.black_probability(self.depth)
            stay = 1.0 - leave
        else:
            stay, leave = white / total, black / total
        urn = self._successor_urn()
        pmf = leave * urn.composition / urn.total
        pmf[i] = stay
        return pmf

    def generate(self, n_jumps: int, rng: np.random.Generator) -> PathDecomposition:
        """
        Walk until ``n_jumps`` more blocks have closed

        Returns:
            Jump form of everything generated so far, ending at the start of
            the newly entered block
        """
        if n_jumps < 0:
            raise ParameterError(f"Number of jumps must be non-negative, got {n_jumps}")
        target = len(self._holding) + n_jumps
        while len(self._holding) < target:
            self.step(rng)
        logger.debug(f"Urn walk ({self.scheme.value}) closed {n_jumps} blocks")
        return self.decomposition()

    def decomposition(self) -> PathDecomposition:
        return PathDecomposition(self.space, tuple(self._visited), tuple(self._holding), self.depth - 1)

    def path(self) -> StateSequence:
        jumps = self.decomposition()
        return compose_path(jumps, jumps.horizon)

    def recurrence_diagnostics(self) -> RecurrenceDiagnostics:
        return RecurrenceDiagnostics(dict(self._visits), dict(self._transitions))


def rup_generate(params: SmbsParams, start: int, n_jumps: int, rng: np.random.Generator,
                 tracer: Optional[Tracer] = None) -> PathDecomposition:
    """Generate (L_k, T_k) for k < n_jumps and L_{n_jumps} from fresh urns of SMBS(m, c, F0)"""
    return UrnProcess.from_smbs(params, start, tracer).generate(n_jumps, rng)
