import numpy as np
import pytest

from asyncnds.core import UsageError
from asyncnds.inds import RankedPopulation
from asyncnds.problems import (DTLZ_K, PROBLEM_NAMES, Dataset, DatasetFormatError, get_problem,
                               load_dataset, polynomial_mutation, save_dataset, sbx, synthesize)

import reference_problems

CASES = [(n, 2) for n in PROBLEM_NAMES if n.startswith("ZDT")] + \
        [(n, k) for n in PROBLEM_NAMES if n.startswith("DTLZ") for k in (3, 6)]


@pytest.mark.parametrize("name, k", CASES)
def test_evaluator_matches_reference(name, k):
    prob = get_problem(name, k)
    rng = np.random.default_rng(hash(name) % 2**32 + k)
    xs = prob.sample(rng, 10_000)
    got = prob.evaluate(xs)
    for i in range(0, 10_000, 1):
        want = reference_problems.evaluate(name, xs[i], k)
        np.testing.assert_allclose(got[i], want, rtol=1e-12, atol=1e-300)


def test_known_values():
    assert get_problem("ZDT1", 2).evaluate(np.zeros(30)).tolist() == [0.0, 1.0]
    x = np.full(12, 0.5)
    x[:2] = 0.0
    np.testing.assert_allclose(get_problem("DTLZ2", 3).evaluate(x), [1.0, 0.0, 0.0], atol=1e-15)


def test_variable_counts():
    assert get_problem("ZDT1", 2).d == 30 and get_problem("ZDT4", 2).d == 10
    assert get_problem("ZDT6", 2).d == 10
    assert get_problem("DTLZ1", 4).d == 8 and get_problem("DTLZ3", 6).d == 15
    assert get_problem("DTLZ7", 10).d == 29


def test_invalid_problem_combinations():
    with pytest.raises(UsageError):
        get_problem("ZDT1", 3)
    with pytest.raises(UsageError):
        get_problem("DTLZ2", 5)
    with pytest.raises(UsageError):
        get_problem("WFG1", 3)
    for k in DTLZ_K:
        get_problem("dtlz2", k)


def test_bounds_enforced():
    prob = get_problem("ZDT4", 2)
    x = np.zeros(10)
    x[1] = -5.0
    prob.evaluate(x)
    x[1] = -5.5
    with pytest.raises(UsageError):
        prob.evaluate(x)
    with pytest.raises(UsageError):
        get_problem("ZDT1", 2).evaluate(np.zeros(29))


def test_variation_operators_respect_bounds(rng):
    lo, hi = np.zeros(10), np.ones(10)
    for _ in range(200):
        a, b = rng.random(10), rng.random(10)
        c1, c2 = sbx(rng, a, b, lo, hi)
        m = polynomial_mutation(rng, c1, lo, hi, prob=1.0)
        for v in (c1, c2, m):
            assert np.all(v >= lo) and np.all(v <= hi)


def test_sbx_children_preserve_mean_when_unbounded_side_free(rng):
    lo, hi = np.full(5, -100.0), np.full(5, 100.0)
    a, b = rng.random(5), rng.random(5)
    c1, c2 = sbx(rng, a, b, lo, hi, prob=1.0)
    np.testing.assert_allclose(c1 + c2, a + b, atol=1e-9)


@pytest.fixture(scope="module")
def small_ds():
    return synthesize(get_problem("DTLZ2", 3), 3, init=300, insertions=100)


def test_synthesis_is_deterministic(small_ds, tmp_path):
    again = synthesize(get_problem("DTLZ2", 3), 3, init=300, insertions=100)
    assert again == small_ds
    save_dataset(small_ds, tmp_path / "a.ds")
    save_dataset(again, tmp_path / "b.ds")
    assert (tmp_path / "a.ds").read_bytes() == (tmp_path / "b.ds").read_bytes()
    assert synthesize(get_problem("DTLZ2", 3), 4, init=300, insertions=100) != small_ds


def test_synthesized_shape(small_ds):
    assert small_ds.initial.shape == (300, 3) and small_ds.insertions.shape == (100, 3)
    assert np.all(np.isfinite(small_ds.initial)) and np.all(np.isfinite(small_ds.insertions))
    assert small_ds.problem == "DTLZ2"


def test_round_trip_is_exact(small_ds, tmp_path):
    path = tmp_path / "dtlz2_k3.ds"
    save_dataset(small_ds, path)
    back = load_dataset(path)
    assert back == small_ds
    assert back.initial.tobytes() == small_ds.initial.tobytes()
    assert back.problem == "DTLZ2"
    assert path.read_text().splitlines()[0] == "k 3 init 300 ins 100 seed 3"


def test_truncated_file_names_section(small_ds, tmp_path):
    path = tmp_path / "t.ds"
    save_dataset(small_ds, path)
    lines = path.read_text().splitlines()
    (tmp_path / "cut1.ds").write_text("\n".join(lines[:150]) + "\n")
    with pytest.raises(DatasetFormatError, match=r"line 151: .*truncated in initial section"):
        load_dataset(tmp_path / "cut1.ds")
    (tmp_path / "cut2.ds").write_text("\n".join(lines[:301]) + "\n")
    with pytest.raises(DatasetFormatError, match="missing '---' separator"):
        load_dataset(tmp_path / "cut2.ds")
    (tmp_path / "cut3.ds").write_text("\n".join(lines[:350]) + "\n")
    with pytest.raises(DatasetFormatError, match="truncated in insertion section"):
        load_dataset(tmp_path / "cut3.ds")


def test_k_mismatch_reports_row(small_ds, tmp_path):
    path = tmp_path / "t.ds"
    save_dataset(small_ds, path)
    lines = path.read_text().splitlines()
    lines[11] = "1 2"
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(DatasetFormatError, match=r"line 12: initial row 10 has 2 values, expected k=3"):
        load_dataset(path)


@pytest.mark.parametrize("text, pattern", [
    ("", "missing header"),
    ("k 2 init 1 ins 1\n", "expected 'k <k>"),
    ("k 2 init 1 ins 0 seed 0\n1 x\n---\n", "not numeric"),
    ("k 2 init 1 ins 0 seed 0\n1 nan\n---\n", "not finite"),
    ("k 2 init 1 ins 0 seed 0\n1 2\n+++\n", "expected '---'"),
    ("k 2 init 1 ins 0 seed 0\n1 2\n---\n3 4\n", "unexpected data"),
    ("k 2 init 2 ins 0 seed 0\n1 2\n---\n", "has 1 rows, header says 2"),
])
def test_malformed_files(tmp_path, text, pattern):
    path = tmp_path / "bad.ds"
    path.write_text(text)
    with pytest.raises(DatasetFormatError, match=pattern):
        load_dataset(path)


def test_dataset_validates_shapes():
    with pytest.raises(UsageError):
        Dataset(3, np.zeros((2, 2)), np.zeros((1, 3)), 0)


def _distance_to_zdt1_front(f, samples=np.linspace(0, 1, 2001)):
    front = np.column_stack([samples, 1 - np.sqrt(samples)])
    return np.sqrt(((f[:, None, :] - front[None]) ** 2).sum(axis=2)).min(axis=1)


def _window_trend(metric):
    ds = synthesize(get_problem("ZDT1", 2), 1)
    pop = RankedPopulation(ds.initial)
    samples = []
    for i, p in enumerate(ds.insertions):
        pop.insert(p)
        pop.remove_worst()
        if i % 10 == 9:
            samples.append(metric(pop))
    return np.array(samples).reshape(10, 10).mean(axis=1)


@pytest.mark.slow
@pytest.mark.xfail(strict=True, reason="1000 steady-state steps on a 5000-point random population "
                   "leave the rank-0 front almost in place; see the decisions ledger")
def test_zdt1_best_front_approaches_true_front():
    windows = _window_trend(lambda pop: _distance_to_zdt1_front(pop.levels[0].points).mean())
    assert windows[-1] < windows[0]
    assert np.sum(np.diff(windows) < 0) >= 7


@pytest.mark.slow
def test_zdt1_population_approaches_true_front():
    windows = _window_trend(
        lambda pop: _distance_to_zdt1_front(np.concatenate([lv.points for lv in pop.levels])[::5]).mean())
    assert windows[-1] < windows[0]
    assert np.sum(np.diff(windows) < 0) >= 7
