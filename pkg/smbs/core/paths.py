"""Observed paths and their jump-form decomposition"""

from dataclasses import dataclass
from itertools import accumulate
from pathlib import Path
from typing import List, Sequence, Tuple

from smbs.common.errors import PathError
from smbs.common.records import atomic_writer, header_line, read_data_lines
from smbs.core.state_space import StateSpace


@dataclass(frozen=True)
class StateSequence:
    """An observed path s_0, ..., s_t over a state space"""
    space: StateSpace
    states: Tuple[int, ...]

    def __post_init__(self):
        states = tuple(int(s) for s in self.states)
        if not states:
            raise PathError("Path must contain at least one state")
        self.space.validate(states)
        object.__setattr__(self, 'states', states)

    @property
    def horizon(self) -> int:
        """Last observed time t"""
        return len(self.states) - 1

    @property
    def terminal_state(self) -> int:
        return self.states[-1]

    def prefix(self, t: int) -> 'StateSequence':
        """The sub-path s_0, ..., s_t"""
        if t < 0 or t > self.horizon:
            raise PathError(f"Prefix time {t} outside [0, {self.horizon}]")
        return StateSequence(self.space, self.states[:t + 1])

    def extended(self, states: Sequence[int]) -> 'StateSequence':
        return StateSequence(self.space, self.states + tuple(states))

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def __getitem__(self, item):
        return self.states[item]


@dataclass(frozen=True)
class PathDecomposition:
    """
    Jump form of a path: visited states, holding times and terminal age

    ``visited`` holds L_0..L_N, ``holding`` holds T_0..T_{N-1} and
    ``terminal_age`` is l(t), the number of steps already spent in the
    terminal block beyond its first.
    """
    space: StateSpace
    visited: Tuple[int, ...]
    holding: Tuple[int, ...]
    terminal_age: int

    def __post_init__(self):
        visited = tuple(int(s) for s in self.visited)
        holding = tuple(int(h) for h in self.holding)
        if not visited:
            raise PathError("Decomposition must visit at least one state")
        self.space.validate(visited)
        if len(holding) != len(visited) - 1:
            raise PathError(
                f"Expected {len(visited) - 1} holding times, got {len(holding)}"
            )
        if any(h < 1 for h in holding):
            raise PathError(f"Holding times must be positive: {list(holding)}")
        if any(a == b for a, b in zip(visited, visited[1:])):
            raise PathError("Consecutive visited states must differ")
        if self.terminal_age < 0:
            raise PathError(f"Terminal age must be non-negative, got {self.terminal_age}")
        object.__setattr__(self, 'visited', visited)
        object.__setattr__(self, 'holding', holding)

    @property
    def n_jumps(self) -> int:
        """N(t)"""
        return len(self.holding)

    @property
    def terminal_age_next(self) -> int:
        """x(t) = l(t) + 1"""
        return self.terminal_age + 1

    @property
    def jump_times(self) -> Tuple[int, ...]:
        """tau_1, ..., tau_N"""
        return tuple(accumulate(self.holding))

    @property
    def horizon(self) -> int:
        return sum(self.holding) + self.terminal_age


def decompose_path(path: StateSequence) -> PathDecomposition:
    """
    Convert a path to its jump form

    Args:
        path: Observed path

    Returns:
        PathDecomposition with N(t), L, T and l(t)
    """
    visited = [path.states[0]]
    holding: List[int] = []
    run = 1
    for previous, state in zip(path.states, path.states[1:]):
        if state == previous:
            run += 1
        else:
            holding.append(run)
            visited.append(state)
            run = 1
    return PathDecomposition(path.space, tuple(visited), tuple(holding), run - 1)


def compose_path(jumps: PathDecomposition, horizon: int) -> StateSequence:
    """
    Rebuild the path s_0..s_horizon from its jump form

    Raises:
        PathError: If the holding times and terminal age do not fill the horizon
    """
    if jumps.horizon != horizon:
        raise PathError(
            f"Decomposition covers times 0..{jumps.horizon}, requested horizon {horizon}"
        )
    states: List[int] = []
    for state, hold in zip(jumps.visited, jumps.holding):
        states.extend([state] * hold)
    states.extend([jumps.visited[-1]] * (jumps.terminal_age + 1))
    return StateSequence(jumps.space, tuple(states))


def parse_path(line: str, space: StateSpace) -> StateSequence:
    try:
        states = tuple(int(token) for token in line.split(','))
    except ValueError:
        raise PathError(f"Path line is not a comma-separated list of integers: {line!r}")
    return StateSequence(space, states)


def read_paths(filepath: Path, space: StateSpace) -> List[StateSequence]:
    """Read a path file: one path per line, comma-separated state ids"""
    return [parse_path(line, space) for line in read_data_lines(filepath)]


def write_paths(paths: Sequence[StateSequence], filepath: Path) -> Path:
    """Write paths in the path-file format"""
    with atomic_writer(filepath) as f:
        f.write(header_line('paths'))
        for path in paths:
            f.write(','.join(str(s) for s in path.states) + '\n')
    return Path(filepath)
