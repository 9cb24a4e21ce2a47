"""Sparse histograms over block lengths"""

from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple

import numpy as np


class Histogram:
    """
    Immutable sparse map from positive lengths to counts

    Cumulative views follow the interval convention H((a, b]) = H(b) - H(a),
    where H(s) counts entries of length <= s. Sorted keys and prefix sums are
    built once, on the first cumulative query.
    """

    __slots__ = ('_counts', '_keys', '_cumulative', '_total')

    def __init__(self, counts: Optional[Mapping[int, int]] = None):
        clean: Dict[int, int] = {}
        for length, count in (counts or {}).items():
            length, count = int(length), int(count)
            if count < 0:
                raise ValueError(f"Negative count {count} at length {length}")
            if count:
                clean[length] = count
        self._counts = dict(sorted(clean.items()))
        self._keys: Optional[np.ndarray] = None
        self._cumulative: Optional[np.ndarray] = None
        self._total = sum(self._counts.values())

    @classmethod
    def from_lengths(cls, lengths: Iterable[int]) -> 'Histogram':
        counts: Dict[int, int] = {}
        for length in lengths:
            counts[int(length)] = counts.get(int(length), 0) + 1
        return cls(counts)

    def _prepare(self) -> None:
        if self._keys is None:
            self._keys = np.fromiter(self._counts.keys(), dtype=np.int64, count=len(self._counts))
            self._cumulative = np.cumsum(
                np.fromiter(self._counts.values(), dtype=np.int64, count=len(self._counts))
            )

    @property
    def total(self) -> int:
        return self._total

    def at(self, length: int) -> int:
        """H({s})"""
        return self._counts.get(length, 0)

    def at_most(self, length: int) -> int:
        """H(s) = H((-inf, s])"""
        if not self._counts:
            return 0
        self._prepare()
        pos = int(np.searchsorted(self._keys, length, side='right'))
        return int(self._cumulative[pos - 1]) if pos else 0

    def greater_than(self, length: int) -> int:
        """H((s, +inf))"""
        return self._total - self.at_most(length)

    def at_least(self, length: int) -> int:
        """H([s, +inf))"""
        return self._total - self.at_most(length - 1)

    def interval(self, a: int, b: int) -> int:
        """H((a, b])"""
        return self.at_most(b) - self.at_most(a)

    def with_added(self, length: int, count: int = 1) -> 'Histogram':
        counts = dict(self._counts)
        counts[length] = counts.get(length, 0) + count
        return Histogram(counts)

    def items(self) -> Iterator[Tuple[int, int]]:
        return iter(self._counts.items())

    def __add__(self, other: 'Histogram') -> 'Histogram':
        counts = dict(self._counts)
        for length, count in other.items():
            counts[length] = counts.get(length, 0) + count
        return Histogram(counts)

    def __bool__(self) -> bool:
        return bool(self._counts)

    def __len__(self) -> int:
        return len(self._counts)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Histogram):
            return NotImplemented
        return self._counts == other._counts

    def __hash__(self) -> int:
        return hash(tuple(self._counts.items()))

    def __repr__(self) -> str:
        return f"Histogram({self._counts})"
