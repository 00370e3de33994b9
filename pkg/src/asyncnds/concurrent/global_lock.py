from __future__ import annotations

import threading

from ..inds import QueryResult, RankedPopulation
from ..level import Level
from .base import ConcurrentArchive


class GlobalLockArchive(ConcurrentArchive):
    """Every public operation runs the sequential structure under one lock."""

    strategy = "sync"

    def __init__(self, levels, **kwargs):
        super().__init__(levels, **kwargs)
        self._pop = RankedPopulation.from_levels(levels, self._ordinal.value)
        self._lock = threading.Lock()

    def _add(self, p, ordinal):
        with self._lock:
            self._pop.insert(p[0], ordinal)
            size = self._size.increment_and_get()
            removed = 0
            if self.capacity is not None and size > self.capacity:
                self._pop.remove_worst()
                self._size.increment_and_get(-1)
                removed = 1
        self._stats.add(insertions=1, removals=removed)

    def levels(self) -> list[Level]:
        with self._lock:
            return list(self._pop.levels)

    def query(self, index: int) -> QueryResult:
        with self._lock:
            return self._pop.query(index)
