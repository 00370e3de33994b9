"""Sequential incremental non-dominated sorting.

The population is a list of :class:`~asyncnds.level.Level` snapshots in rank
order. Inserting a point finds its level by binary search, then pushes a
moving set of displaced points down level by level until it is empty.
"""

from __future__ import annotations

from typing import Callable, NamedTuple, Sequence

import numpy as np

from .core import Point, UsageError, as_points
from .level import Level, check_level
from .offline import brute_force_ranks, sort_ranks


class QueryResult(NamedTuple):
    point: Point
    rank: int
    crowding: float


class InvariantError(AssertionError):
    pass


def levels_from_points(points: np.ndarray, ordinals: np.ndarray, timestamp: int = 0) -> list[Level]:
    """Partition points into levels using the offline sorter."""
    ranks = sort_ranks(points)
    levels = []
    for r in range(int(ranks.max()) + 1 if len(ranks) else 0):
        sel = ranks == r
        levels.append(Level.build(points[sel], ordinals[sel], timestamp))
    return levels


def find_level(levels: Sequence[Level], p: np.ndarray) -> int:
    """Index of the first level holding no dominator of ``p``.

    "Level i holds a dominator of p" is true on a prefix of the levels, so
    the boundary is found by binary search.
    """
    lo, hi = 0, len(levels)
    while lo < hi:
        mid = (lo + hi) // 2
        if levels[mid].contains_dominator_of(p):
            lo = mid + 1
        else:
            hi = mid
    return lo


def query_levels(levels: Sequence[Level], index: int) -> QueryResult:
    total = sum(len(lv) for lv in levels)
    if not 0 <= index < total:
        raise UsageError(f"index {index} out of range for size {total}")
    for rank, lv in enumerate(levels):
        if index < len(lv):
            pt = Point(tuple(lv.points[index]), int(lv.ordinals[index]))
            return QueryResult(pt, rank, float(lv.crowding[index]))
        index -= len(lv)
    raise AssertionError("unreachable")


def _dominated_by_any(ref: np.ndarray, cand: np.ndarray) -> np.ndarray:
    """Which rows of ``cand`` are strictly dominated by some row of ``ref``.

    Plain broadcasting, deliberately independent of the kernels.
    """
    out = np.zeros(cand.shape[0], dtype=bool)
    if ref.shape[0] == 0:
        return out
    step = max(1, (1 << 22) // (ref.shape[0] * ref.shape[1]))
    for s in range(0, cand.shape[0], step):
        c = cand[s:s + step, None, :]
        le = np.all(ref[None] <= c, axis=2)
        lt = np.any(ref[None] < c, axis=2)
        out[s:s + step] = np.any(le & lt, axis=1)
    return out


def check_levels(levels: Sequence[Level], *, oracle: bool = True) -> None:
    """Full invariant sweep; raises :class:`InvariantError` on the first problem.

    Every level must be internally consistent (order, views, crowding), an
    antichain, and every point of a level must have a strict dominator in
    the previous one. Together these pin the partition down uniquely. With
    ``oracle=True`` the partition is additionally compared with
    :func:`~asyncnds.offline.brute_force_ranks`.
    """
    for i, lv in enumerate(levels):
        problems = check_level(lv)
        if problems:
            raise InvariantError(f"level {i}: {'; '.join(problems)}")
    if not levels:
        return
    ords = np.concatenate([lv.ordinals for lv in levels])
    if np.unique(ords).size != ords.size:
        raise InvariantError("duplicate ordinals")
    for i, lv in enumerate(levels):
        inner = _dominated_by_any(lv.points, lv.points)
        if inner.any():
            raise InvariantError(f"level {i} is not an antichain (ordinal {lv.ordinals[inner][0]})")
        if i:
            orphan = ~_dominated_by_any(levels[i - 1].points, lv.points)
            if orphan.any():
                raise InvariantError(
                    f"ordinal {lv.ordinals[orphan][0]} at level {i} has no dominator in level {i - 1}")
    if oracle:
        pts = np.concatenate([lv.points for lv in levels])
        expected = brute_force_ranks(pts)
        actual = np.concatenate([np.full(len(lv), i) for i, lv in enumerate(levels)])
        bad = np.flatnonzero(expected != actual)
        if bad.size:
            j = bad[0]
            raise InvariantError(
                f"{bad.size} misranked points, e.g. ordinal {ords[j]} at level "
                f"{actual[j]} should be {expected[j]}")


class RankedPopulation:
    """Levels of a population under point insertion and worst-point removal.

    Not thread-safe; see :mod:`asyncnds.concurrent` for shared use.

    Args:
        points: initial (n, k) objective vectors, n >= 1.
        ordinals: identities for the initial points (default ``0..n-1``).
    """

    moving_hook: Callable[[np.ndarray], None] | None = None

    def __init__(self, points, ordinals=None):
        pts = as_points(points)
        if pts.shape[0] == 0:
            raise UsageError("cannot create a population from no points")
        ords = (np.arange(pts.shape[0], dtype=np.int64) if ordinals is None
                else np.asarray(ordinals, dtype=np.int64))
        if ords.shape != (pts.shape[0],) or np.unique(ords).size != ords.size:
            raise UsageError("ordinals must be unique, one per point")
        self.k = pts.shape[1]
        self.levels = levels_from_points(pts, ords)
        self._ordinals = set(ords.tolist())
        self._next = int(ords.max()) + 1

    @classmethod
    def from_levels(cls, levels: Sequence[Level], next_ordinal: int = 0) -> "RankedPopulation":
        if not levels:
            raise UsageError("cannot create a population from no levels")
        self = cls.__new__(cls)
        self.levels = list(levels)
        self.k = levels[0].k
        self._ordinals = set(int(o) for lv in levels for o in lv.ordinals)
        self._next = max(next_ordinal, max(self._ordinals) + 1)
        return self

    def __len__(self) -> int:
        return sum(len(lv) for lv in self.levels)

    @property
    def next_ordinal(self) -> int:
        return self._next

    def find_insertion_level(self, p) -> int:
        arr = as_points([p], k=self.k)[0]
        return find_level(self.levels, arr)

    def insert(self, p, ordinal: int | None = None) -> int:
        """Insert one point and return its ordinal."""
        if isinstance(p, Point):
            if ordinal is None:
                ordinal = p.ordinal
            p = p.coordinates
        arr = as_points([p], k=self.k)
        if ordinal is None:
            ordinal = self._next
        ordinal = int(ordinal)
        if ordinal in self._ordinals:
            raise UsageError(f"ordinal {ordinal} already present")
        self._ordinals.add(ordinal)
        self._next = max(self._next, ordinal + 1)
        self._push(arr, np.array([ordinal], dtype=np.int64), find_level(self.levels, arr[0]))
        return ordinal

    def _push(self, m_pts: np.ndarray, m_ords: np.ndarray, ell: int) -> None:
        levels = self.levels
        while m_pts.shape[0]:
            if self.moving_hook is not None:
                self.moving_hook(m_pts)
            if ell == len(levels):
                levels.append(Level.build(m_pts, m_ords))
                return
            res = levels[ell].absorb(m_pts, m_ords, full=False)
            if res.whole:
                # the moving set dominates the entire level: it becomes a new
                # level and every deeper level shifts down unchanged
                levels.insert(ell, Level.build(m_pts, m_ords))
                return
            levels[ell] = res.level
            m_pts, m_ords = res.moved_points, res.moved_ordinals
            ell += 1

    def remove_worst(self) -> Point:
        """Remove the minimal-crowding point of the last level."""
        if not self.levels:
            raise UsageError("population is empty")
        last = self.levels[-1]
        i = last.worst_index()
        removed = Point(tuple(last.points[i]), int(last.ordinals[i]))
        if len(last) == 1:
            self.levels.pop()
        else:
            self.levels[-1] = last.without(i)
        self._ordinals.discard(removed.ordinal)
        return removed

    def query(self, index: int) -> QueryResult:
        """Point, rank and crowding distance at ``index`` in level order."""
        return query_levels(self.levels, index)

    def ranks(self) -> dict[int, int]:
        return {int(o): r for r, lv in enumerate(self.levels) for o in lv.ordinals}

    def check(self, *, oracle: bool = True) -> None:
        check_levels(self.levels, oracle=oracle)
