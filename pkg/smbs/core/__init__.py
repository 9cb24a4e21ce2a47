"""State spaces, observed paths and their sufficient statistics"""

from smbs.core.state_space import StateSpace
from smbs.core.histogram import Histogram
from smbs.core.paths import (
    StateSequence,
    PathDecomposition,
    decompose_path,
    compose_path,
    read_paths,
    write_paths,
)
from smbs.core.counting import CountingStats, count_statistics

__all__ = [
    "StateSpace",
    "Histogram",
    "StateSequence",
    "PathDecomposition",
    "decompose_path",
    "compose_path",
    "read_paths",
    "write_paths",
    "CountingStats",
    "count_statistics",
]
