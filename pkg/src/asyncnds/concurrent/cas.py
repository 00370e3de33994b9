"""Compare-and-set archives.

Each level lives in its own :class:`AtomicReference`. A thread merges its
moving set into a private copy of a level and publishes the copy only if
the reference still holds the snapshot it started from; otherwise it
re-reads the level and repeats the merge. Adding a level and removing the
last one happen under a single auxiliary lock.

A removed last level is first swapped for a tombstone so that a concurrent
merge into it fails instead of being lost. Removing points from the last
level can strip the only dominator of a point that is still moving towards
the next level; such points are detected through a removal counter and
re-inserted from scratch.
"""

from __future__ import annotations

import logging
import threading

import numpy as np

from .. import kernels
from ..inds import QueryResult, query_levels
from ..level import Level
from .atomic import AtomicCounter, AtomicReference
from .base import ConcurrentArchive

log = logging.getLogger(__name__)


class _Tombstone:
    def __repr__(self) -> str:
        return "<removed level>"


TOMBSTONE = _Tombstone()

DEFAULT_RETRY_WARNING = 10**6


class CASArchive(ConcurrentArchive):
    """Per-level compare-and-set with full two-antichain merges (CAS1).

    Args:
        retry_warning: failed publications within one insertion after which
            a livelock warning is logged; the insertion keeps going.
    """

    strategy = "cas1"
    timestamps = False

    def __init__(self, levels, *, retry_warning: int = DEFAULT_RETRY_WARNING, **kwargs):
        super().__init__(levels, **kwargs)
        self.retry_warning = retry_warning
        self._clock = AtomicCounter(max(lv.timestamp for lv in levels))
        self._cells = [AtomicReference(lv) for lv in levels]
        self._aux = threading.Lock()
        self._removals = AtomicCounter(0)

    def _tick(self) -> int:
        return self._clock.increment_and_get() if self.timestamps else 0

    def _add(self, p, ordinal):
        pending = [(p, np.array([ordinal], dtype=np.int64))]
        while pending:
            self._insert_one(*pending.pop(), pending)
        size = self._size.increment_and_get()
        removed = 0
        if self.capacity is not None and size > self.capacity:
            with self._aux:
                if self._size.value > self.capacity:
                    self._remove_worst_locked()
                    removed = 1
        self._stats.add(insertions=1, removals=removed)

    def _search(self, p: np.ndarray) -> int:
        cells = self._cells
        lo, hi = 0, len(cells)
        while lo < hi:
            mid = (lo + hi) // 2
            snap = cells[mid].get()
            if snap is not TOMBSTONE and snap.contains_dominator_of(p):
                lo = mid + 1
            else:
                hi = mid
        return lo

    def _insert_one(self, m_pts, m_ords, pending) -> None:
        tau = self._tick()
        seen_removals = self._removals.value
        i = self._search(m_pts[0])
        retries = published = fast_merges = slow_merges = violations = misses = 0
        while m_pts.shape[0]:
            cells = self._cells
            if i >= len(cells):
                m_pts, m_ords, i, appended = self._append(i, m_pts, m_ords, pending)
                published += appended
                continue
            cell = cells[i]
            snap = cell.get()
            if snap is TOMBSTONE:
                with self._aux:  # the remover drops the cell before releasing
                    pass
                continue
            removals = self._removals.value
            if removals != seen_removals:
                if i > 0:
                    prev = cells[i - 1].get()
                    if prev is TOMBSTONE:
                        with self._aux:
                            pass
                        continue
                    m_pts, m_ords = self._keep_supported(prev, m_pts, m_ords, pending)
                    if not m_pts.shape[0]:
                        break
                seen_removals = removals
            fast = self.timestamps and snap.timestamp < tau
            if fast and kernels.dominated_mask(snap.points, m_pts).any():
                misses += 1
                fast = False
            res = snap.absorb(m_pts, m_ords, full=not fast, timestamp=self._tick())
            if fast and self.debug and kernels.dominated_mask(res.level.points,
                                                              res.level.points).any():
                violations += 1
            if cell.compare_and_set(snap, res.level):
                published += 1
                if fast:
                    fast_merges += 1
                else:
                    slow_merges += 1
                m_pts, m_ords = res.moved_points, res.moved_ordinals
                i += 1
            else:
                retries += 1
                if retries == self.retry_warning:
                    log.warning("%s: %d failed publications for one insertion",
                                self.strategy, retries)
        self._stats.add(publications=published, cas_retries=retries, fast_merges=fast_merges,
                        slow_merges=slow_merges, precondition_violations=violations,
                        timestamp_misses=misses)
        self._stats.peak("max_retries_per_insert", retries)

    def _keep_supported(self, prev: Level, m_pts, m_ords, pending):
        supported = kernels.dominated_mask(prev.points, m_pts)
        if supported.all():
            return m_pts, m_ords
        lost = np.flatnonzero(~supported)
        for j in lost:
            pending.append((m_pts[j:j + 1], m_ords[j:j + 1]))
        self._stats.add(reinsertions=len(lost))
        return m_pts[supported], m_ords[supported]

    def _append(self, i, m_pts, m_ords, pending):
        with self._aux:
            cells = self._cells
            if i < len(cells):
                return m_pts, m_ords, i, 0
            i = len(cells)
            if i > 0:
                m_pts, m_ords = self._keep_supported(cells[-1].get(), m_pts, m_ords, pending)
                if not m_pts.shape[0]:
                    return m_pts, m_ords, i, 0
            level = Level.build(m_pts, m_ords, self._tick())
            self._cells = cells + [AtomicReference(level)]
            return m_pts[:0], m_ords[:0], i + 1, 1

    def _remove_worst_locked(self) -> None:
        retries = 0
        while True:
            cells = self._cells
            cell = cells[-1]
            snap = cell.get()
            if len(snap) == 1:
                if cell.compare_and_set(snap, TOMBSTONE):
                    self._cells = cells[:-1]
                    break
            else:
                new = snap.without(snap.worst_index(), self._tick())
                if cell.compare_and_set(snap, new):
                    break
            retries += 1
        self._removals.increment_and_get()
        self._size.increment_and_get(-1)
        self._stats.add(cas_retries=retries)

    def levels(self) -> list[Level]:
        return [s for s in (c.get() for c in self._cells) if s is not TOMBSTONE]

    def query(self, index: int) -> QueryResult:
        return query_levels(self.levels(), index)


class TimestampCASArchive(CASArchive):
    """CAS with level time stamps (CAS2).

    A level whose time stamp predates the start of the current insertion
    was not modified since, which normally means none of its points can
    dominate the moving set, so the one-sided merge suffices.

    The argument assumes a consistent structure at that moment. It fails
    when a point enters the previous level while a dominator of it is in
    transit between levels, so the fast path is guarded by a dominance
    check; guard hits are counted in ``stats.timestamp_misses``.
    """

    strategy = "cas2"
    timestamps = True
