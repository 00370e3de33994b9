import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from asyncnds import offline
from asyncnds.kernels import numpy_impl
from asyncnds.offline import brute_force_ranks, helper_b_merge, merge_two_antichains, sort_ranks

from helpers import random_antichain


def rows(a):
    return sorted(map(tuple, np.asarray(a).tolist()))


@pytest.mark.parametrize("pts, expected", [
    ([(1, 1)], [0]),
    ([(1, 2), (2, 1), (3, 3)], [0, 0, 1]),
    ([(1, 1), (2, 2), (3, 3)], [0, 1, 2]),
    ([(1, 1), (1, 1), (2, 2)], [0, 0, 1]),
])
def test_brute_force_examples(pts, expected):
    assert brute_force_ranks(pts).tolist() == expected
    assert sort_ranks(pts).tolist() == expected


def test_brute_force_is_the_recursive_definition(rng):
    pts = np.floor(rng.random((80, 3)) * 5)
    r = brute_force_ranks(pts)
    for j in range(len(pts)):
        dom = [i for i in range(len(pts))
               if np.all(pts[i] <= pts[j]) and np.any(pts[i] < pts[j])]
        assert r[j] == (1 + max(r[dom]) if dom else 0)


def test_sort_ranks_small_inputs(rng):
    for n in range(0, 4):
        for k in (2, 3, 5):
            pts = np.floor(rng.random((n, k)) * 3)
            assert np.array_equal(sort_ranks(pts), brute_force_ranks(pts) if n else np.zeros(0))


def test_sort_ranks_random_3d(rng):
    pts = rng.random((200, 3))
    assert np.array_equal(sort_ranks(pts), brute_force_ranks(pts))


def test_antichain_grid_is_one_level():
    x = np.arange(200, dtype=float)
    assert not sort_ranks(np.column_stack([x, 199 - x])).any()


@st.composite
def instances(draw):
    k = draw(st.integers(2, 6))
    n = draw(st.integers(1, 120))
    levels = draw(st.integers(2, 8))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    return np.floor(rng.random((n, k)) * levels)


@given(instances(), st.sampled_from([1, 4, 64]))
def test_sort_ranks_matches_brute_force(pts, threshold):
    assert np.array_equal(sort_ranks(pts, threshold=threshold), brute_force_ranks(pts))


@given(instances(), st.integers(0, 2**32 - 1))
def test_sort_ranks_permutation_invariant(pts, seed):
    perm = np.random.default_rng(seed).permutation(len(pts))
    assert np.array_equal(sort_ranks(pts)[perm], sort_ranks(pts[perm]))


@given(instances())
def test_sort_ranks_numpy_backend(pts):
    saved = offline.kernels
    offline.kernels = numpy_impl
    try:
        got = sort_ranks(pts, threshold=4)
    finally:
        offline.kernels = saved
    assert np.array_equal(got, brute_force_ranks(pts))


def test_helper_b_examples():
    retained, displaced = helper_b_merge([(2, 2)], [(1, 5), (3, 3), (5, 1)])
    assert rows(retained) == [(1, 5), (5, 1)] and rows(displaced) == [(3, 3)]
    retained, displaced = helper_b_merge([(1, 1)], np.zeros((0, 2)))
    assert len(retained) == 0 and len(displaced) == 0


@given(st.integers(0, 2**32 - 1), st.integers(2, 4), st.integers(1, 60), st.integers(1, 60))
def test_helper_b_matches_oracle(seed, k, nm, nc):
    rng = np.random.default_rng(seed)
    known = random_antichain(rng, nm, k)
    cand = random_antichain(rng, nc, k) + rng.random() * 0.2
    # enforce the precondition: drop candidates that dominate a known point
    ok = ~np.array([np.any(np.all(c <= known, axis=1) & np.any(c < known, axis=1)) for c in cand])
    cand = cand[ok]
    retained, displaced = helper_b_merge(known, cand)
    assert len(retained) + len(displaced) == len(cand)
    assert not set(map(tuple, retained.tolist())) & set(map(tuple, displaced.tolist()))
    r = brute_force_ranks(np.vstack([known, cand]))
    assert rows(displaced) == rows(cand[r[len(known):] == 1])


def test_merge_two_antichains_examples():
    zero, one = merge_two_antichains([(2, 2), (4, 1)], [(1, 4), (3, 3)])
    assert rows(zero) == [(1, 4), (2, 2), (4, 1)] and rows(one) == [(3, 3)]
    b = np.array([(1.0, 4.0), (3.0, 2.0)])
    zero, one = merge_two_antichains(np.zeros((0, 2)), b)
    assert rows(zero) == rows(b) and len(one) == 0


@given(st.integers(0, 2**32 - 1), st.integers(2, 4), st.integers(0, 300), st.integers(0, 300))
def test_merge_two_antichains_matches_oracle(seed, k, na, nb):
    rng = np.random.default_rng(seed)
    a = random_antichain(rng, na, k) * (0.8 + 0.4 * rng.random())
    b = random_antichain(rng, nb, k) * (0.8 + 0.4 * rng.random())
    zero, one = merge_two_antichains(a.reshape(na, k), b.reshape(nb, k))
    union = np.vstack([a.reshape(na, k), b.reshape(nb, k)])
    r = brute_force_ranks(union) if len(union) else np.zeros(0, dtype=int)
    assert r.max(initial=0) <= 1
    assert rows(zero) == rows(union[r == 0]) and rows(one) == rows(union[r == 1])
