"""Sufficient statistics of an observed path"""

from dataclasses import dataclass, field
from typing import Dict, Tuple

from smbs.core.histogram import Histogram
from smbs.core.paths import StateSequence, decompose_path
from smbs.core.state_space import StateSpace


@dataclass(frozen=True)
class CountingStats:
    """
    Block and transition counts of a path s_0..s_t

    Attributes:
        space: State space the counts are indexed by
        block_counts: Per-state histogram of non-terminal block lengths (N^{i,t})
        transitions: Matrix of transition counts M^{i,j}(t), zero diagonal
        pair_block_counts: (i, j) -> histogram of non-terminal i-block lengths
            immediately followed by a j-block (N^{i,j,t}); only non-empty pairs
        terminal_state: State of the terminal block
        terminal_age: l(t)
    """
    space: StateSpace
    block_counts: Tuple[Histogram, ...]
    transitions: Tuple[Tuple[int, ...], ...]
    pair_block_counts: Dict[Tuple[int, int], Histogram] = field(hash=False)
    terminal_state: int
    terminal_age: int

    @classmethod
    def empty(cls, space: StateSpace, terminal_state: int, terminal_age: int = 0) -> 'CountingStats':
        """Statistics of a path that has stayed in one state for terminal_age + 1 steps"""
        space.index(terminal_state)
        n = space.size
        return cls(
            space=space,
            block_counts=tuple(Histogram() for _ in range(n)),
            transitions=tuple((0,) * n for _ in range(n)),
            pair_block_counts={},
            terminal_state=terminal_state,
            terminal_age=terminal_age,
        )

    def blocks(self, state: int) -> Histogram:
        """N^{i,t} for state i"""
        return self.block_counts[self.space.index(state)]

    def pair_blocks(self, state: int, successor: int) -> Histogram:
        """N^{i,j,t} for the pair (i, j)"""
        return self.pair_block_counts.get((state, successor), Histogram())

    def transition_count(self, state: int, successor: int) -> int:
        """M^{i,j}(t)"""
        return self.transitions[self.space.index(state)][self.space.index(successor)]

    @property
    def n_jumps(self) -> int:
        """N(t), the number of non-terminal blocks"""
        return sum(h.total for h in self.block_counts)

    @property
    def terminal_age_next(self) -> int:
        return self.terminal_age + 1


def count_statistics(path: StateSequence) -> CountingStats:
    """
    Compute N^{i,t}, N^{i,j,t}, M^{i,j}(t), the terminal state and l(t)

    Args:
        path: Observed path

    Returns:
        CountingStats of the path
    """
    space = path.space
    jumps = decompose_path(path)
    n = space.size

    lengths = [dict() for _ in range(n)]
    pairs: Dict[Tuple[int, int], Dict[int, int]] = {}
    transitions = [[0] * n for _ in range(n)]

    for state, hold, successor in zip(jumps.visited, jumps.holding, jumps.visited[1:]):
        i, j = space.index(state), space.index(successor)
        lengths[i][hold] = lengths[i].get(hold, 0) + 1
        pair = pairs.setdefault((state, successor), {})
        pair[hold] = pair.get(hold, 0) + 1
        transitions[i][j] += 1

    return CountingStats(
        space=space,
        block_counts=tuple(Histogram(counts) for counts in lengths),
        transitions=tuple(tuple(row) for row in transitions),
        pair_block_counts={key: Histogram(counts) for key, counts in pairs.items()},
        terminal_state=jumps.visited[-1],
        terminal_age=jumps.terminal_age,
    )
