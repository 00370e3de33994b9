"""numba implementations of the hot kernels.

All kernels are compiled with ``nogil=True`` so that threads driving a
concurrent archive can interleave while one of them is inside a kernel.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_OPTS = dict(nogil=True, cache=True)


@njit(**_OPTS)
def _strictly_dominates(points, i, q, j):
    # points[i] strictly dominates q[j]
    k = points.shape[1]
    strict = False
    for c in range(k):
        a = points[i, c]
        b = q[j, c]
        if a > b:
            return False
        if a < b:
            strict = True
    return strict


@njit(**_OPTS)
def _weakly_dominates_prefix(pts, i, j, m):
    for c in range(m):
        if pts[i, c] > pts[j, c]:
            return False
    return True


@njit(**_OPTS)
def any_dominates(ref, p):
    q = p.reshape(1, p.shape[0])
    x0 = p[0]
    for i in range(ref.shape[0]):
        if ref[i, 0] > x0:
            break
        if _strictly_dominates(ref, i, q, 0):
            return True
    return False


@njit(**_OPTS)
def dominated_mask(ref, cand):
    out = np.zeros(cand.shape[0], dtype=np.bool_)
    for j in range(cand.shape[0]):
        x0 = cand[j, 0]
        for i in range(ref.shape[0]):
            if ref[i, 0] > x0:
                break
            if _strictly_dominates(ref, i, cand, j):
                out[j] = True
                break
    return out


@njit(**_OPTS)
def nadir_candidates(points, nadir):
    n = points.shape[0]
    k = points.shape[1]
    out = np.zeros(n, dtype=np.bool_)
    start = np.searchsorted(points[:, 0], nadir[0])
    for i in range(start, n):
        strict = False
        ok = True
        for c in range(k):
            a = nadir[c]
            b = points[i, c]
            if a > b:
                ok = False
                break
            if a < b:
                strict = True
        out[i] = ok and strict
    return out


@njit(**_OPTS)
def _lex_less(pa, oa, i, pb, ob, j):
    k = pa.shape[1]
    for c in range(k):
        a = pa[i, c]
        b = pb[j, c]
        if a < b:
            return True
        if a > b:
            return False
    return oa[i] < ob[j]


@njit(**_OPTS)
def _lex_order(points, ords):
    order = np.argsort(ords, kind="mergesort")
    for c in range(points.shape[1] - 1, -1, -1):
        col = np.empty(order.shape[0], dtype=np.float64)
        for t in range(order.shape[0]):
            col[t] = points[order[t], c]
        order = order[np.argsort(col, kind="mergesort")]
    return order


@njit(**_OPTS)
def _coord_order(points, ords, c):
    order = np.argsort(ords, kind="mergesort")
    col = np.empty(order.shape[0], dtype=np.float64)
    for t in range(order.shape[0]):
        col[t] = points[order[t], c]
    return order[np.argsort(col, kind="mergesort")]


@njit(**_OPTS)
def crowding(points, by_coord):
    n = points.shape[0]
    k = points.shape[1]
    cd = np.zeros(n, dtype=np.float64)
    if n == 0:
        return cd
    for c in range(k):
        order = by_coord[c]
        lo = points[order[0], c]
        hi = points[order[n - 1], c]
        span = hi - lo
        if span > 0.0:
            for t in range(1, n - 1):
                cd[order[t]] += (points[order[t + 1], c] - points[order[t - 1], c]) / span
        cd[order[0]] = np.inf
        cd[order[n - 1]] = np.inf
    return cd


@njit(**_OPTS)
def build_level(points, ords):
    n = points.shape[0]
    k = points.shape[1]
    order = _lex_order(points, ords)
    new_pts = np.empty((n, k), dtype=np.float64)
    new_ords = np.empty(n, dtype=np.int64)
    for t in range(n):
        new_pts[t] = points[order[t]]
        new_ords[t] = ords[order[t]]
    by_coord = np.empty((k, n), dtype=np.int64)
    for c in range(k):
        by_coord[c] = _coord_order(new_pts, new_ords, c)
    return new_pts, new_ords, by_coord, crowding(new_pts, by_coord)


@njit(**_OPTS)
def rebuild_level(points, ords, by_coord, keep, add_pts, add_ords):
    n = points.shape[0]
    k = points.shape[1]
    a = add_pts.shape[0]
    kept = np.flatnonzero(keep)
    nk = kept.shape[0]
    total = nk + a
    aord = _lex_order(add_pts, add_ords)

    new_pts = np.empty((total, k), dtype=np.float64)
    new_ords = np.empty(total, dtype=np.int64)
    old_to_new = np.full(n, -1, dtype=np.int64)
    add_to_new = np.empty(a, dtype=np.int64)
    i = 0
    j = 0
    for t in range(total):
        take_old = False
        if i < nk and j < a:
            take_old = _lex_less(points, ords, kept[i], add_pts, add_ords, aord[j])
        elif i < nk:
            take_old = True
        if take_old:
            src = kept[i]
            new_pts[t] = points[src]
            new_ords[t] = ords[src]
            old_to_new[src] = t
            i += 1
        else:
            src = aord[j]
            new_pts[t] = add_pts[src]
            new_ords[t] = add_ords[src]
            add_to_new[src] = t
            j += 1

    new_by = np.empty((k, total), dtype=np.int64)
    for c in range(k):
        seq_add = add_to_new[_coord_order(add_pts, add_ords, c)]
        old_seq = by_coord[c]
        i = 0
        j = 0
        t = 0
        # skip removed entries while merging
        while i < n and old_to_new[old_seq[i]] < 0:
            i += 1
        while t < total:
            take_old = False
            if i < n and j < a:
                u = old_to_new[old_seq[i]]
                v = seq_add[j]
                x = new_pts[u, c]
                y = new_pts[v, c]
                take_old = x < y or (x == y and new_ords[u] < new_ords[v])
            elif i < n:
                take_old = True
            if take_old:
                new_by[c, t] = old_to_new[old_seq[i]]
                i += 1
                while i < n and old_to_new[old_seq[i]] < 0:
                    i += 1
            else:
                new_by[c, t] = seq_add[j]
                j += 1
            t += 1
    return new_pts, new_ords, new_by, crowding(new_pts, new_by)


@njit(**_OPTS)
def helper_a_direct(pts, idx, m, ranks):
    for b in range(1, idx.shape[0]):
        hi = idx[b]
        r = ranks[hi]
        for a in range(b):
            lo = idx[a]
            if ranks[lo] >= r and _weakly_dominates_prefix(pts, lo, hi, m):
                r = ranks[lo] + 1
        ranks[hi] = r


@njit(**_OPTS)
def helper_b_direct(pts, lidx, hidx, m, ranks):
    for b in range(hidx.shape[0]):
        hi = hidx[b]
        r = ranks[hi]
        for a in range(lidx.shape[0]):
            lo = lidx[a]
            if lo > hi:
                break
            if ranks[lo] >= r and _weakly_dominates_prefix(pts, lo, hi, m):
                r = ranks[lo] + 1
        ranks[hi] = r


@njit(**_OPTS)
def _stair_query(ys, rs, size, y):
    # max rank among entries with ys <= y, or -1
    pos = np.searchsorted(ys[:size], y, side="right") - 1
    if pos < 0:
        return -1
    return rs[pos]


@njit(**_OPTS)
def _stair_insert(ys, rs, size, y, r):
    pos = np.searchsorted(ys[:size], y, side="left")
    end = pos
    while end < size and rs[end] <= r:
        end += 1
    removed = end - pos
    if removed == 0:
        for t in range(size, pos, -1):
            ys[t] = ys[t - 1]
            rs[t] = rs[t - 1]
    elif removed > 1:
        shift = removed - 1
        for t in range(pos + 1, size - shift):
            ys[t] = ys[t + shift]
            rs[t] = rs[t + shift]
    ys[pos] = y
    rs[pos] = r
    return size - removed + 1


@njit(**_OPTS)
def sweep_a(pts, idx, ranks):
    n = idx.shape[0]
    ys = np.empty(n, dtype=np.float64)
    rs = np.empty(n, dtype=np.int64)
    size = 0
    for t in range(n):
        s = idx[t]
        q = _stair_query(ys, rs, size, pts[s, 1])
        if q + 1 > ranks[s]:
            ranks[s] = q + 1
        size = _stair_insert(ys, rs, size, pts[s, 1], ranks[s])


@njit(**_OPTS)
def sweep_b(pts, lidx, hidx, ranks):
    nl = lidx.shape[0]
    ys = np.empty(nl, dtype=np.float64)
    rs = np.empty(nl, dtype=np.int64)
    size = 0
    i = 0
    for t in range(hidx.shape[0]):
        h = hidx[t]
        while i < nl and lidx[i] < h:
            s = lidx[i]
            q = _stair_query(ys, rs, size, pts[s, 1])
            if q < ranks[s]:
                size = _stair_insert(ys, rs, size, pts[s, 1], ranks[s])
            i += 1
        q = _stair_query(ys, rs, size, pts[h, 1])
        if q + 1 > ranks[h]:
            ranks[h] = q + 1
