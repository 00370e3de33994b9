"""Immutable non-domination level snapshots.

A :class:`Level` is never mutated after construction. Updates produce a new
snapshot, which is what lets the compare-and-set strategies publish a
whole level atomically by swapping one reference.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from . import kernels


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class Absorbed(NamedTuple):
    """Result of merging a moving set into a level."""

    level: "Level"
    moved_points: np.ndarray
    moved_ordinals: np.ndarray
    whole: bool  # every old level point was displaced and no moving point was


class Level:
    """One non-domination level.

    Attributes:
        points: (n, k) array sorted lexicographically, ties by ordinal.
        ordinals: (n,) ordinals aligned with ``points``.
        by_coord: (k, n) positions into ``points``; row ``c`` is sorted by
            coordinate ``c`` with ties by ordinal.
        crowding: (n,) crowding distances within this level.
        timestamp: version tag used by the time-stamped strategy.
    """

    __slots__ = ("points", "ordinals", "by_coord", "crowding", "timestamp")

    def __init__(self, points, ordinals, by_coord, crowding, timestamp=0):
        self.points = _frozen(points)
        self.ordinals = _frozen(ordinals)
        self.by_coord = _frozen(by_coord)
        self.crowding = _frozen(crowding)
        self.timestamp = timestamp

    @classmethod
    def build(cls, points, ordinals, timestamp: int = 0) -> "Level":
        pts = np.ascontiguousarray(points, dtype=np.float64)
        ords = np.ascontiguousarray(ordinals, dtype=np.int64)
        return cls(*kernels.build_level(pts, ords), timestamp)

    def __len__(self) -> int:
        return self.points.shape[0]

    def __repr__(self) -> str:
        return f"Level(n={len(self)}, k={self.k}, timestamp={self.timestamp})"

    @property
    def k(self) -> int:
        return self.points.shape[1]

    def contains_dominator_of(self, p: np.ndarray) -> bool:
        return bool(kernels.any_dominates(self.points, p))

    def update(self, keep: np.ndarray, add_points: np.ndarray, add_ordinals: np.ndarray,
               timestamp: int | None = None) -> "Level":
        """New snapshot holding the kept points plus the additions.

        Sorted views are merged rather than rebuilt, so the cost is
        O(nk + m k log m) for m additions, and crowding distances are
        recomputed for every point.
        """
        ts = self.timestamp if timestamp is None else timestamp
        return Level(*kernels.rebuild_level(self.points, self.ordinals, self.by_coord,
                                            keep, add_points, add_ordinals), ts)

    def absorb(self, m_points: np.ndarray, m_ordinals: np.ndarray, *, full: bool,
               timestamp: int | None = None) -> Absorbed:
        """Merge a moving antichain into this level.

        With ``full=False`` the caller guarantees no level point dominates a
        moving point, and only level points can be displaced (the HelperB
        case). With ``full=True`` either side may displace the other.
        Moving points must be sorted by their first coordinate.
        """
        n = len(self)
        if m_points.shape[0] == 0:
            return Absorbed(self, m_points, m_ordinals, False)
        cand = kernels.nadir_candidates(self.points, m_points.min(axis=0))
        displaced = np.zeros(n, dtype=bool)
        if cand.any():
            ci = np.flatnonzero(cand)
            displaced[ci] = kernels.dominated_mask(m_points, self.points[ci])
        pushed = None
        if full and n:
            # only level points weakly below the moving set's maximum can dominate it
            reach = np.all(self.points <= m_points.max(axis=0), axis=1)
            if reach.any():
                pushed = kernels.dominated_mask(self.points[reach], m_points)
                if not pushed.any():
                    pushed = None
        if pushed is None:
            land_pts, land_ords = m_points, m_ordinals
            moved_pts, moved_ords = self.points[displaced], self.ordinals[displaced]
            whole = n > 0 and bool(displaced.all())
        else:
            land_pts, land_ords = m_points[~pushed], m_ordinals[~pushed]
            moved_pts = np.concatenate([self.points[displaced], m_points[pushed]])
            moved_ords = np.concatenate([self.ordinals[displaced], m_ordinals[pushed]])
            moved_pts, moved_ords = lex_sort(moved_pts, moved_ords)
            whole = False
        level = self.update(~displaced, land_pts, land_ords, timestamp)
        return Absorbed(level, np.ascontiguousarray(moved_pts),
                        np.ascontiguousarray(moved_ords), whole)

    def worst_index(self) -> int:
        """Position of the point with minimal crowding; ties go to the last in order."""
        cd = self.crowding
        return int(np.flatnonzero(cd == cd.min())[-1])

    def without(self, index: int, timestamp: int | None = None) -> "Level":
        keep = np.ones(len(self), dtype=bool)
        keep[index] = False
        empty = self.points[:0]
        return self.update(keep, empty, self.ordinals[:0], timestamp)


def lex_sort(points: np.ndarray, ordinals: np.ndarray):
    if points.shape[0] < 2:
        return points, ordinals
    k = points.shape[1]
    order = np.lexsort((ordinals,) + tuple(points[:, c] for c in range(k - 1, -1, -1)))
    return points[order], ordinals[order]


def check_level(level: Level) -> list[str]:
    """Internal-consistency problems of one snapshot (empty when valid)."""
    from .core import crowding_distance

    problems = []
    pts, ords = level.points, level.ordinals
    n = len(level)
    if n == 0:
        return ["empty level"]
    ref_pts, ref_ords = lex_sort(pts, ords)
    if not (np.array_equal(ref_pts, pts) and np.array_equal(ref_ords, ords)):
        problems.append("points not in lexicographic order")
    for c in range(level.k):
        row = level.by_coord[c]
        if not np.array_equal(np.sort(row), np.arange(n)):
            problems.append(f"coordinate view {c} is not a permutation")
            continue
        expected = np.lexsort((ords, pts[:, c]))
        if not np.array_equal(row, expected):
            problems.append(f"coordinate view {c} is not sorted")
    ref_cd = crowding_distance(pts, ords)
    inf = np.isinf(ref_cd)
    if not np.array_equal(inf, np.isinf(level.crowding)):
        problems.append("crowding infinities differ from recomputation")
    else:
        fin = ~inf
        a, b = level.crowding[fin], ref_cd[fin]
        if not np.all(np.abs(a - b) <= 1e-12 * np.maximum(np.abs(b), 1e-300)):
            problems.append("crowding differs from recomputation")
    return problems
