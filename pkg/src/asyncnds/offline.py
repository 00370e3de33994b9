"""Offline non-dominated sorting.

``brute_force_ranks`` is the quadratic reference used by tests and by the
verification commands. ``sort_ranks`` is the divide-and-conquer sorter
(sweep over the first objective, split on the last one, reduce the
dimension when a split leaves the last objective ordered). The two merge
helpers cover the case the incremental structure needs: two antichains
whose union therefore has ranks 0 and 1 only.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .core import as_points

DEFAULT_THRESHOLD = 64


def brute_force_ranks(points) -> np.ndarray:
    """Ranks by direct pairwise comparison, O(n^2 k) time and O(n^2) memory."""
    pts = as_points(points)
    n = pts.shape[0]
    ranks = np.full(n, -1, dtype=np.int64)
    if n == 0:
        return ranks
    dom = np.zeros((n, n), dtype=bool)  # dom[i, j]: i strictly dominates j
    step = max(1, (1 << 22) // (n * pts.shape[1]))
    for s in range(0, n, step):
        a = pts[s:s + step, None, :]
        b = pts[None, :, :]
        dom[s:s + step] = np.all(a <= b, axis=2) & np.any(a < b, axis=2)
    count = dom.sum(axis=0)
    front = np.flatnonzero(count == 0)
    rank = 0
    while front.size:
        ranks[front] = rank
        count = count - dom[front].sum(axis=0)
        front = np.flatnonzero((count == 0) & (ranks < 0))
        rank += 1
    return ranks


def _lex_unique(pts: np.ndarray):
    k = pts.shape[1]
    order = np.lexsort(tuple(pts[:, c] for c in range(k - 1, -1, -1)))
    srt = pts[order]
    new_group = np.ones(len(srt), dtype=bool)
    new_group[1:] = np.any(srt[1:] != srt[:-1], axis=1)
    group = np.cumsum(new_group) - 1
    inverse = np.empty(len(pts), dtype=np.int64)
    inverse[order] = group
    return np.ascontiguousarray(srt[new_group]), inverse


class _Sorter:
    def __init__(self, pts: np.ndarray, threshold: int):
        self.pts = pts
        self.ranks = np.zeros(pts.shape[0], dtype=np.int64)
        self.threshold = max(2, threshold)

    def helper_a(self, idx: np.ndarray, m: int) -> None:
        n = idx.shape[0]
        if n < 2:
            return
        if n <= self.threshold:
            kernels.helper_a_direct(self.pts, idx, m, self.ranks)
            return
        if m == 2:
            kernels.sweep_a(self.pts, idx, self.ranks)
            return
        col = self.pts[idx, m - 1]
        if col.min() == col.max():
            self.helper_a(idx, m - 1)
            return
        med = np.partition(col, n // 2)[n // 2]
        less = col < med
        greater = col > med
        if less.sum() <= greater.sum():
            low = ~greater
        else:
            low = less
        lo, hi = idx[low], idx[~low]
        self.helper_a(lo, m)
        self.helper_b(lo, hi, m - 1)
        self.helper_a(hi, m)

    def helper_b(self, lidx: np.ndarray, hidx: np.ndarray, m: int) -> None:
        nl, nh = lidx.shape[0], hidx.shape[0]
        if nl == 0 or nh == 0:
            return
        if nl == 1 or nh == 1 or nl + nh <= self.threshold:
            kernels.helper_b_direct(self.pts, lidx, hidx, m, self.ranks)
            return
        if m == 2:
            kernels.sweep_b(self.pts, lidx, hidx, self.ranks)
            return
        lc = self.pts[lidx, m - 1]
        hc = self.pts[hidx, m - 1]
        if lc.max() <= hc.min():
            self.helper_b(lidx, hidx, m - 1)
            return
        if lc.min() > hc.max():
            return
        allc = np.concatenate([lc, hc])
        med = np.partition(allc, allc.size // 2)[allc.size // 2]
        # ties go to whichever side leaves the split more balanced
        n_less = int((allc < med).sum())
        n_leq = int((allc <= med).sum())
        total = allc.size
        if min(n_less, total - n_less) >= min(n_leq, total - n_leq):
            l_low, h_low = lc < med, hc < med
        else:
            l_low, h_low = lc <= med, hc <= med
        l1, l2 = lidx[l_low], lidx[~l_low]
        h1, h2 = hidx[h_low], hidx[~h_low]
        self.helper_b(l1, h1, m)
        self.helper_b(l1, h2, m - 1)
        self.helper_b(l2, h2, m)


def sort_ranks(points, threshold: int = DEFAULT_THRESHOLD) -> np.ndarray:
    """Non-dominated ranks by divide and conquer.

    Identical objective vectors are collapsed before sorting and receive
    the same rank.

    Args:
        points: (n, k) objective vectors.
        threshold: subproblem size below which pairs are compared directly.

    Returns:
        int64 array of ranks aligned with the input order.
    """
    pts = as_points(points)
    if pts.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    uniq, inverse = _lex_unique(pts)
    sorter = _Sorter(uniq, threshold)
    sorter.helper_a(np.arange(uniq.shape[0], dtype=np.int64), uniq.shape[1])
    return sorter.ranks[inverse]


def _lex_sorted(pts: np.ndarray) -> np.ndarray:
    if pts.shape[0] < 2:
        return pts
    k = pts.shape[1]
    return np.ascontiguousarray(pts[np.lexsort(tuple(pts[:, c] for c in range(k - 1, -1, -1)))])


def helper_b_merge(known, candidates):
    """Split ``candidates`` into those no ``known`` point dominates and the rest.

    Both inputs must be antichains and no candidate may dominate a known
    point; this is not checked.

    Returns:
        ``(retained, displaced)`` arrays, each in candidate order.
    """
    kn = as_points(known)
    cand = as_points(candidates, k=kn.shape[1] if kn.shape[0] else None)
    if cand.shape[0] == 0 or kn.shape[0] == 0:
        return cand, cand[:0]
    mask = kernels.dominated_mask(_lex_sorted(kn), cand)
    return cand[~mask], cand[mask]


def two_rank_masks(a: np.ndarray, b: np.ndarray):
    """Rank-1 masks for ``a`` and ``b`` in the union of two antichains.

    ``a`` and ``b`` must be sorted by their first coordinate.
    """
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros(a.shape[0], dtype=bool), np.zeros(b.shape[0], dtype=bool)
    return kernels.dominated_mask(b, a), kernels.dominated_mask(a, b)


def merge_two_antichains(a, b):
    """Non-dominated sorting of the union of two antichains.

    No assumption is made about which side dominates which. Because each
    input is an antichain, every rank is 0 or 1.

    Returns:
        ``(rank_zero, rank_one)`` arrays; ``a``'s points precede ``b``'s.
    """
    pa = as_points(a)
    pb = as_points(b, k=pa.shape[1] if pa.shape[0] else None)
    if pa.shape[0] == 0:
        return pb, pb[:0]
    if pb.shape[0] == 0:
        return pa, pa[:0]
    sa, sb = _lex_sorted(pa), _lex_sorted(pb)
    one_a, one_b = two_rank_masks(sa, sb)
    zero = np.concatenate([sa[~one_a], sb[~one_b]])
    one = np.concatenate([sa[one_a], sb[one_b]])
    return zero, one
