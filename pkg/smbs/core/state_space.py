"""Finite state spaces"""

from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from smbs.common.errors import ConfigError, PathError


@dataclass(frozen=True)
class StateSpace:
    """
    Ordered finite set of state identifiers

    Identifiers are small non-negative integers; every per-state vector or
    matrix in the package is indexed by position in ``states``.
    """
    states: Tuple[int, ...]
    labels: Tuple[Optional[str], ...] = ()
    _index: Dict[int, int] = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        states = tuple(int(s) for s in self.states)
        if not states:
            raise ConfigError("State space must not be empty")
        if len(set(states)) != len(states):
            raise ConfigError(f"State identifiers must be distinct: {list(states)}")
        if any(s < 0 for s in states):
            raise ConfigError(f"State identifiers must be non-negative: {list(states)}")
        labels = tuple(self.labels) if self.labels else (None,) * len(states)
        if len(labels) != len(states):
            raise ConfigError("One label per state is required")
        object.__setattr__(self, 'states', states)
        object.__setattr__(self, 'labels', labels)
        object.__setattr__(self, '_index', {s: k for k, s in enumerate(states)})

    @classmethod
    def of_size(cls, size: int) -> 'StateSpace':
        """State space {0, ..., size-1}"""
        return cls(tuple(range(size)))

    @classmethod
    def from_config(cls, data: Iterable[Any]) -> 'StateSpace':
        """
        Build from a config list

        Entries are either bare integer ids or ``{"id": 1, "label": "..."}``.
        """
        states: List[int] = []
        labels: List[Optional[str]] = []
        for entry in data:
            if isinstance(entry, dict):
                if 'id' not in entry:
                    raise ConfigError(f"State entry without 'id': {entry}")
                states.append(int(entry['id']))
                labels.append(entry.get('label'))
            else:
                states.append(int(entry))
                labels.append(None)
        return cls(tuple(states), tuple(labels))

    @property
    def size(self) -> int:
        return len(self.states)

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def __contains__(self, state: object) -> bool:
        return state in self._index

    def index(self, state: int) -> int:
        """Position of a state; raises PathError for unknown ids"""
        try:
            return self._index[state]
        except (KeyError, TypeError):
            raise PathError(f"Unknown state id {state!r} (known: {list(self.states)})")

    def label(self, state: int) -> str:
        label = self.labels[self.index(state)]
        return label if label is not None else str(state)

    def validate(self, states: Sequence[int]) -> None:
        for s in states:
            if s not in self._index:
                raise PathError(f"Unknown state id {s!r} (known: {list(self.states)})")
