"""Objective-space points, dominance relations and crowding distance.

All problems are minimization problems; maximize by negating objectives.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np


class UsageError(ValueError):
    """Raised when an operation is called outside its contract."""


class Dominance(enum.Enum):
    STRICTLY_DOMINATES = "strictly_dominates"
    EQUAL = "equal"
    DOMINATED = "dominated"
    INCOMPARABLE = "incomparable"


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


@dataclass(frozen=True)
class Point:
    """An objective vector with a stable ordinal identity."""

    coordinates: tuple[float, ...]
    ordinal: int

    def __post_init__(self):
        coords = tuple(float(c) for c in self.coordinates)
        if len(coords) < 2:
            raise UsageError("a point needs at least two objectives")
        if not all(np.isfinite(coords)):
            raise UsageError(f"non-finite coordinate in {coords}")
        if self.ordinal < 0:
            raise UsageError("ordinal must be non-negative")
        object.__setattr__(self, "coordinates", coords)

    @property
    def k(self) -> int:
        return len(self.coordinates)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coordinates, dtype=np.float64)


def _coords(p) -> np.ndarray:
    if isinstance(p, Point):
        return p.as_array()
    return np.asarray(p, dtype=np.float64)


def _check_same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise UsageError(f"dimension mismatch: {a.shape[-1]} vs {b.shape[-1]}")


def as_points(points, k: int | None = None) -> np.ndarray:
    """Validate and convert an (n, k) collection of objective vectors."""
    if isinstance(points, np.ndarray):
        arr = np.ascontiguousarray(points, dtype=np.float64)
    else:
        arr = np.ascontiguousarray([_coords(p) for p in points], dtype=np.float64)
        if arr.size == 0:
            arr = arr.reshape(0, k or 0)
    if arr.ndim != 2:
        raise UsageError(f"expected a 2-D array of points, got shape {arr.shape}")
    if arr.shape[0] and arr.shape[1] < 2:
        raise UsageError("points need at least two objectives")
    if k is not None and arr.shape[0] and arr.shape[1] != k:
        raise UsageError(f"dimension mismatch: expected k={k}, got {arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise UsageError("points contain non-finite coordinates")
    return arr


def dominates(p, q) -> bool:
    """True iff ``p`` strictly dominates ``q``."""
    a, b = _coords(p), _coords(q)
    _check_same_dim(a, b)
    return bool(np.all(a <= b) and np.any(a < b))


def compare_dominance(p, q) -> Dominance:
    """Classify the ordered pair ``(p, q)``.

    >>> compare_dominance((1, 2), (2, 3))
    <Dominance.STRICTLY_DOMINATES: 'strictly_dominates'>
    >>> compare_dominance((1, 3), (3, 1))
    <Dominance.INCOMPARABLE: 'incomparable'>
    """
    a, b = _coords(p), _coords(q)
    _check_same_dim(a, b)
    le = bool(np.all(a <= b))
    ge = bool(np.all(a >= b))
    if le and ge:
        return Dominance.EQUAL
    if le:
        return Dominance.STRICTLY_DOMINATES
    if ge:
        return Dominance.DOMINATED
    return Dominance.INCOMPARABLE


def nadir(points) -> np.ndarray:
    """Coordinatewise minimum of a nonempty point set.

    The name follows the incremental sorting literature, where this vector
    filters the level points a moving set can displace.
    """
    arr = as_points(points) if not isinstance(points, np.ndarray) else points
    if arr.shape[0] == 0:
        raise UsageError("nadir of an empty set")
    return arr.min(axis=0)


def lex_compare(p, q) -> Ordering:
    """Lexicographic comparison of coordinate sequences.

    Points with equal coordinates compare by ordinal when both are
    :class:`Point` instances, so levels are strictly ordered.
    """
    a, b = _coords(p), _coords(q)
    _check_same_dim(a, b)
    diff = np.flatnonzero(a != b)
    if diff.size:
        i = diff[0]
        return Ordering.LESS if a[i] < b[i] else Ordering.GREATER
    if isinstance(p, Point) and isinstance(q, Point) and p.ordinal != q.ordinal:
        return Ordering.LESS if p.ordinal < q.ordinal else Ordering.GREATER
    return Ordering.EQUAL


def crowding_distance(points, ordinals: Sequence[int] | None = None) -> np.ndarray:
    """Crowding distance of every point of one level, computed from scratch.

    Neighbors in each coordinate come from a sort by that coordinate with
    ties broken by ordinal (input position when ``ordinals`` is omitted).
    Spans are taken within the level; a zero span contributes nothing.
    Points lacking a neighbor in any coordinate get ``inf``.
    """
    pts = np.asarray(points, dtype=np.float64)
    n = pts.shape[0]
    ords = np.arange(n) if ordinals is None else np.asarray(ordinals)
    cd = np.zeros(n)
    for c in range(pts.shape[1] if n else 0):
        order = np.lexsort((ords, pts[:, c]))
        vals = pts[order, c]
        span = vals[-1] - vals[0]
        if span > 0.0 and n > 2:
            cd[order[1:-1]] += (vals[2:] - vals[:-2]) / span
        cd[order[0]] = np.inf
        cd[order[-1]] = np.inf
    return cd
