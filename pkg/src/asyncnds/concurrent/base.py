"""Common interface of the thread-safe archives."""

from __future__ import annotations

import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass, fields
from typing import ClassVar, Sequence

import numpy as np

from ..core import UsageError, as_points
from ..inds import InvariantError, QueryResult, check_levels, levels_from_points
from ..level import Level
from .atomic import AtomicCounter


@dataclass
class ArchiveStats:
    insertions: int = 0
    removals: int = 0
    publications: int = 0
    cas_retries: int = 0
    fast_merges: int = 0
    slow_merges: int = 0
    reinsertions: int = 0
    trims: int = 0
    trimmed_points: int = 0
    precondition_violations: int = 0
    timestamp_misses: int = 0
    lock_order_violations: int = 0
    max_retries_per_insert: int = 0

    def as_dict(self) -> dict[str, int]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


class _StatsRecorder:
    def __init__(self):
        self._stats = ArchiveStats()
        self._lock = threading.Lock()

    def add(self, **deltas: int) -> None:
        with self._lock:
            for name, d in deltas.items():
                setattr(self._stats, name, getattr(self._stats, name) + d)

    def peak(self, name: str, value: int) -> None:
        with self._lock:
            if value > getattr(self._stats, name):
                setattr(self._stats, name, value)

    def snapshot(self) -> ArchiveStats:
        with self._lock:
            return ArchiveStats(**self._stats.as_dict())


class ConcurrentArchive(ABC):
    """A ranked population shared by many inserting threads.

    ``add_point`` may be called from any number of threads. ``query`` may
    run concurrently with insertions and returns a consistent but possibly
    stale view. ``levels``, ``check`` and ``trim`` expect quiescence.

    Args:
        levels: initial level snapshots (e.g. from :func:`levels_from_points`).
        capacity: target population size; ``None`` disables removal.
        next_ordinal: first ordinal handed to inserted points.
        debug: enable precondition and lock-order checking.
    """

    strategy: ClassVar[str]

    def __init__(self, levels: Sequence[Level], *, capacity: int | None = None,
                 next_ordinal: int | None = None, debug: bool = False):
        if not levels:
            raise UsageError("an archive needs a nonempty initial population")
        if capacity is not None and capacity < 1:
            raise UsageError("capacity must be positive")
        self.k = levels[0].k
        self.capacity = capacity
        self.debug = debug
        size = sum(len(lv) for lv in levels)
        top = max(int(lv.ordinals.max()) for lv in levels) + 1
        self._ordinal = AtomicCounter(top if next_ordinal is None else max(top, next_ordinal))
        self._size = AtomicCounter(size)
        self._stats = _StatsRecorder()

    @classmethod
    def from_points(cls, points, **kwargs) -> "ConcurrentArchive":
        pts = as_points(points)
        if pts.shape[0] == 0:
            raise UsageError("an archive needs a nonempty initial population")
        return cls(levels_from_points(pts, np.arange(pts.shape[0], dtype=np.int64)), **kwargs)

    def __len__(self) -> int:
        return self._size.value

    @property
    def stats(self) -> ArchiveStats:
        return self._stats.snapshot()

    def add_point(self, p) -> int:
        """Rank ``p`` into the archive, apply the capacity policy, return its ordinal."""
        arr = as_points([p], k=self.k)
        ordinal = self._ordinal.get_and_increment()
        self._add(arr, ordinal)
        return ordinal

    @abstractmethod
    def _add(self, p: np.ndarray, ordinal: int) -> None: ...

    @abstractmethod
    def levels(self) -> list[Level]:
        """Current level snapshots in rank order."""

    @abstractmethod
    def query(self, index: int) -> QueryResult: ...

    def trim(self) -> int:
        """Apply deferred deletions; strategies that delete eagerly do nothing."""
        return 0

    def check(self, *, oracle: bool = True) -> None:
        levels = self.levels()
        check_levels(levels, oracle=oracle)
        actual = sum(len(lv) for lv in levels)
        if actual != len(self):
            raise InvariantError(f"size counter {len(self)} but levels hold {actual} points")
