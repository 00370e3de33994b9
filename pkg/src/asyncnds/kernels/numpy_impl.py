"""Pure-numpy fallbacks for the kernels in :mod:`numba_impl`.

The level rebuild here re-sorts from scratch instead of merging, which is
asymptotically slower but produces the same arrays: every ordering used by
a level is a strict total order (coordinates, then ordinal).
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right

import numpy as np

_CHUNK_ELEMS = 1 << 22


def any_dominates(ref, p):
    end = np.searchsorted(ref[:, 0], p[0], side="right")
    sub = ref[:end]
    return bool(np.any(np.all(sub <= p, axis=1) & np.any(sub < p, axis=1)))


def dominated_mask(ref, cand):
    out = np.zeros(cand.shape[0], dtype=bool)
    if ref.shape[0] == 0 or cand.shape[0] == 0:
        return out
    step = max(1, _CHUNK_ELEMS // (ref.shape[0] * ref.shape[1]))
    r = ref[None, :, :]
    for s in range(0, cand.shape[0], step):
        c = cand[s:s + step, None, :]
        le = np.all(r <= c, axis=2)
        lt = np.any(r < c, axis=2)
        out[s:s + step] = np.any(le & lt, axis=1)
    return out


def nadir_candidates(points, nadir):
    out = np.zeros(points.shape[0], dtype=bool)
    start = np.searchsorted(points[:, 0], nadir[0], side="left")
    sub = points[start:]
    out[start:] = np.all(nadir <= sub, axis=1) & np.any(nadir < sub, axis=1)
    return out


def crowding(points, by_coord):
    n, k = points.shape
    cd = np.zeros(n, dtype=np.float64)
    if n == 0:
        return cd
    for c in range(k):
        order = by_coord[c]
        col = points[order, c]
        span = col[-1] - col[0]
        if span > 0.0 and n > 2:
            cd[order[1:-1]] += (col[2:] - col[:-2]) / span
        cd[order[0]] = np.inf
        cd[order[-1]] = np.inf
    return cd


def build_level(points, ords):
    n, k = points.shape
    order = np.lexsort((ords,) + tuple(points[:, c] for c in range(k - 1, -1, -1)))
    new_pts = np.ascontiguousarray(points[order])
    new_ords = np.ascontiguousarray(ords[order], dtype=np.int64)
    by_coord = np.empty((k, n), dtype=np.int64)
    for c in range(k):
        by_coord[c] = np.lexsort((new_ords, new_pts[:, c]))
    return new_pts, new_ords, by_coord, crowding(new_pts, by_coord)


def rebuild_level(points, ords, by_coord, keep, add_pts, add_ords):
    pts = np.concatenate([points[keep], add_pts])
    o = np.concatenate([ords[keep], add_ords])
    return build_level(pts, o)


def helper_a_direct(pts, idx, m, ranks):
    sub = pts[idx, :m]
    for b in range(1, idx.shape[0]):
        prev = np.all(sub[:b] <= sub[b], axis=1)
        if prev.any():
            best = ranks[idx[:b][prev]].max() + 1
            if best > ranks[idx[b]]:
                ranks[idx[b]] = best


def helper_b_direct(pts, lidx, hidx, m, ranks):
    lsub = pts[lidx, :m]
    for h in hidx:
        end = np.searchsorted(lidx, h)
        if end == 0:
            continue
        dom = np.all(lsub[:end] <= pts[h, :m], axis=1)
        if dom.any():
            best = ranks[lidx[:end][dom]].max() + 1
            if best > ranks[h]:
                ranks[h] = best


class _Staircase:
    """Entries sorted by y with strictly increasing rank."""

    def __init__(self):
        self.ys = []
        self.rs = []

    def query(self, y):
        pos = bisect_right(self.ys, y) - 1
        return self.rs[pos] if pos >= 0 else -1

    def insert(self, y, r):
        pos = bisect_left(self.ys, y)
        end = pos
        while end < len(self.ys) and self.rs[end] <= r:
            end += 1
        self.ys[pos:end] = [y]
        self.rs[pos:end] = [r]


def sweep_a(pts, idx, ranks):
    stair = _Staircase()
    for s in idx:
        y = pts[s, 1]
        q = stair.query(y)
        if q + 1 > ranks[s]:
            ranks[s] = q + 1
        stair.insert(y, int(ranks[s]))


def sweep_b(pts, lidx, hidx, ranks):
    stair = _Staircase()
    i = 0
    nl = len(lidx)
    for h in hidx:
        while i < nl and lidx[i] < h:
            s = lidx[i]
            y = pts[s, 1]
            if stair.query(y) < ranks[s]:
                stair.insert(y, int(ranks[s]))
            i += 1
        q = stair.query(pts[h, 1])
        if q + 1 > ranks[h]:
            ranks[h] = q + 1
