"""Per-level locks with hand-over-hand acquisition and deferred deletion.

Levels form a singly linked list behind a sentinel head. An inserting
thread locks nodes in list order, always taking the next lock before
dropping the previous one, so threads can never overtake each other. A
thread merging into a level therefore knows that no earlier thread is
still working on a preceding level, which is what makes the one-sided
merge sufficient.

Worst-point removal is deferred: nothing is removed until the population
exceeds ``trim_factor * capacity``, and then the excess is trimmed in one
pass under a dedicated lock.
"""

from __future__ import annotations

import math
import threading

import numpy as np

from ..core import UsageError
from ..inds import QueryResult, query_levels
from ..level import Level
from .base import ConcurrentArchive

DEFAULT_TRIM_FACTOR = 1.2


class _Node:
    __slots__ = ("level", "next", "lock", "dead")

    def __init__(self, level: Level | None, nxt: "_Node | None" = None):
        self.level = level
        self.next = nxt
        self.lock = threading.Lock()
        self.dead = False


class LevelLockArchive(ConcurrentArchive):
    """Hand-over-hand level locking.

    Args:
        trim_factor: deletions start once the size exceeds
            ``ceil(trim_factor * capacity)``.
    """

    strategy = "lock"

    def __init__(self, levels, *, trim_factor: float = DEFAULT_TRIM_FACTOR, **kwargs):
        super().__init__(levels, **kwargs)
        if trim_factor < 1:
            raise UsageError("trim_factor must be at least 1")
        self.trim_factor = trim_factor
        self._head = _Node(None)
        node = self._head
        for lv in levels:
            node.next = _Node(lv)
            node = node.next
        self._trim_lock = threading.Lock()

    @property
    def trim_threshold(self) -> int | None:
        if self.capacity is None:
            return None
        # round first so that 1.2 * 1000 does not become 1201
        return math.ceil(round(self.trim_factor * self.capacity, 9))

    def _add(self, p, ordinal):
        violations = self._insert(p, np.array([ordinal], dtype=np.int64))
        size = self._size.increment_and_get()
        self._stats.add(insertions=1, lock_order_violations=violations)
        limit = self.trim_threshold
        if limit is not None and size > limit:
            with self._trim_lock:
                if self._size.value > limit:
                    self._trim_locked()

    def _insert(self, m_pts, m_ords) -> int:
        violations = 0
        p = m_pts[0]
        prev = self._head
        prev.lock.acquire()
        cur = prev.next
        while cur is not None:
            cur.lock.acquire()
            if self.debug and (prev.next is not cur or cur.dead):
                violations += 1
            if not cur.level.contains_dominator_of(p):
                break
            prev.lock.release()
            prev, cur = cur, cur.next
        # held: prev, and cur unless the walk fell off the tail
        try:
            while True:
                if cur is None:
                    prev.next = _Node(Level.build(m_pts, m_ords))
                    break
                res = cur.level.absorb(m_pts, m_ords, full=False)
                if res.whole:
                    cur.next = _Node(cur.level, cur.next)
                    cur.level = Level.build(m_pts, m_ords)
                    break
                cur.level = res.level
                m_pts, m_ords = res.moved_points, res.moved_ordinals
                if not m_pts.shape[0]:
                    break
                nxt = cur.next
                if nxt is not None:
                    nxt.lock.acquire()
                    if self.debug and (cur.next is not nxt or nxt.dead):
                        violations += 1
                prev.lock.release()
                prev, cur = cur, nxt
        finally:
            prev.lock.release()
            if cur is not None:
                cur.lock.release()
        return violations

    def trim(self) -> int:
        """Remove points until the size equals the capacity; returns the count."""
        if self.capacity is None:
            return 0
        with self._trim_lock:
            return self._trim_locked()

    def _trim_locked(self) -> int:
        count = self._size.value - self.capacity
        if count <= 0:
            return 0
        start = self._pick_start(2 * count)
        while True:
            held = self._lock_from(start)
            points = sum(len(n.level) for n in held if n.level is not None)
            if start is self._head or points > count:
                break
            for n in held:
                n.lock.release()
            start = self._head
        try:
            levels = held[1:] if start is self._head else held
            remaining = count
            while levels and remaining >= len(levels[-1].level):
                node = levels.pop()
                remaining -= len(node.level)
                node.dead = True
            if levels:
                levels[-1].next = None
            else:
                self._head.next = None
            if remaining:
                last = levels[-1]
                lv = last.level
                for _ in range(remaining):
                    lv = lv.without(lv.worst_index())
                last.level = lv
        finally:
            for n in held:
                n.lock.release()
        self._size.increment_and_get(-count)
        self._stats.add(trims=1, trimmed_points=count, removals=count)
        return count

    def _pick_start(self, margin: int) -> _Node:
        # lock-free sizing pass; the locked pass verifies the choice
        nodes = []
        node = self._head.next
        while node is not None:
            nodes.append(node)
            node = node.next
        total = 0
        for node in reversed(nodes):
            total += len(node.level)
            if total >= margin:
                return node
        return self._head

    @staticmethod
    def _lock_from(start: _Node) -> list[_Node]:
        held = []
        node = start
        while node is not None:
            node.lock.acquire()
            held.append(node)
            node = node.next
        return held

    def _walk(self) -> list[Level]:
        out = []
        prev = self._head
        prev.lock.acquire()
        cur = prev.next
        while cur is not None:
            cur.lock.acquire()
            prev.lock.release()
            out.append(cur.level)
            prev, cur = cur, cur.next
        prev.lock.release()
        return out

    def levels(self) -> list[Level]:
        return self._walk()

    def query(self, index: int) -> QueryResult:
        return query_levels(self._walk(), index)
