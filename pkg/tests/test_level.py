import numpy as np
import pytest

from asyncnds.core import crowding_distance
from asyncnds.level import Level, check_level, lex_sort

from helpers import random_antichain


def build(pts, ords=None):
    pts = np.asarray(pts, dtype=float)
    ords = np.arange(len(pts), dtype=np.int64) if ords is None else np.asarray(ords, dtype=np.int64)
    return Level.build(*lex_sort(pts, ords))


def test_snapshot_is_immutable():
    lv = build([(1, 4), (2, 3), (4, 1)])
    with pytest.raises(ValueError):
        lv.points[0, 0] = 9
    with pytest.raises(ValueError):
        lv.crowding[0] = 0


def test_crowding_example_and_worst():
    lv = build([(4, 1), (1, 4), (2, 3)])
    assert lv.points.tolist() == [[1, 4], [2, 3], [4, 1]]
    assert lv.crowding.tolist() == [np.inf, 2.0, np.inf]
    # (2, 3) has the smallest crowding distance
    assert lv.worst_index() == 1


def test_worst_ties_go_to_last_in_order():
    lv = build([(1, 4), (4, 1)])
    assert lv.worst_index() == 1
    lv = build([(2, 2), (2, 2)], [9, 3])
    assert lv.ordinals[lv.worst_index()] == 9
    # three copies: the middle one has zero crowding
    lv = build([(2, 2), (2, 2), (2, 2)], [5, 3, 9])
    assert lv.ordinals[lv.worst_index()] == 5


def test_update_merges_views(rng):
    pts = random_antichain(rng, 500, 3)
    lv = build(pts)
    keep = np.ones(500, dtype=bool)
    keep[rng.choice(500, 3, replace=False)] = False
    add, add_ords = lex_sort(random_antichain(rng, 5, 3), np.arange(500, 505, dtype=np.int64))
    new = lv.update(keep, add, add_ords)
    assert check_level(new) == []
    assert len(new) == 502
    ref = crowding_distance(new.points, new.ordinals)
    fin = ~np.isinf(ref)
    np.testing.assert_allclose(new.crowding[fin], ref[fin], rtol=1e-12)


def test_absorb_one_sided():
    lv = build([(1, 5), (3, 3), (5, 1)])
    res = lv.absorb(np.array([[2.0, 2.0]]), np.array([10]), full=False, timestamp=7)
    assert res.level.points.tolist() == [[1, 5], [2, 2], [5, 1]]
    assert res.moved_points.tolist() == [[3, 3]]
    assert res.level.timestamp == 7 and not res.whole


def test_absorb_whole_level():
    lv = build([(2, 4), (4, 2)])
    res = lv.absorb(np.array([[1.0, 3.0], [3.0, 1.0]]), np.array([10, 11]), full=False)
    assert res.whole
    assert res.moved_points.tolist() == [[2, 4], [4, 2]]


def test_absorb_full_pushes_dominated_movers():
    lv = build([(1, 1), (3, 6)])
    movers, mords = lex_sort(np.array([[2.0, 2.0], [0.5, 7.0]]), np.array([10, 11]))
    res = lv.absorb(movers, mords, full=True)
    assert sorted(map(tuple, res.level.points.tolist())) == [(0.5, 7), (1, 1)]
    assert sorted(map(tuple, res.moved_points.tolist())) == [(2, 2), (3, 6)]
    assert check_level(res.level) == []


def test_without_drops_one_point(rng):
    lv = build(random_antichain(rng, 50, 2))
    i = lv.worst_index()
    new = lv.without(i)
    assert len(new) == 49 and lv.ordinals[i] not in new.ordinals
    assert check_level(new) == []


def test_check_level_reports_problems():
    lv = build([(1, 4), (2, 3), (4, 1)])
    bad = Level(lv.points.copy(), lv.ordinals.copy(), lv.by_coord.copy(), np.zeros(3), 0)
    assert any("crowding" in p for p in check_level(bad))
    swapped = Level(lv.points[::-1].copy(), lv.ordinals[::-1].copy(), lv.by_coord.copy(),
                    lv.crowding.copy(), 0)
    assert check_level(swapped)
