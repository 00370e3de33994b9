"""Benchmark harness for the insertion strategies.

One *episode* rebuilds the archive from the dataset's initial population
(untimed), then times T threads inserting the dataset's points, each
insertion followed by the strategy's capacity policy. An *iteration*
repeats episodes until ``min_iteration_seconds`` of timed work has
accumulated. Warm-up iterations are discarded. Each fork is a fresh
process (or a fresh in-process run when ``fork_mode="inline"``).

After every measured iteration the archive of its last episode is checked
with the full invariant sweep; an iteration that fails it is FAILED no
matter how fast it was.
"""

from __future__ import annotations

import concurrent.futures
import csv
import io
import math
import multiprocessing
import os
import statistics
import threading
import time
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .concurrent import STRATEGIES, make_archive
from .core import UsageError
from .inds import InvariantError, RankedPopulation, check_levels, levels_from_points
from .problems.dataset import Dataset, load_dataset

SEQUENTIAL = "inds"
GRID_STRATEGIES = ("sync", "cas1", "cas2", "lock")
GRID_THREADS = (3, 6, 12, 24)
CSV_COLUMNS = ("problem", "k", "dataset_seed", "strategy", "threads", "fork", "iteration",
               "total_us", "mean_insert_us", "stddev_us", "cas_retries", "trims")
FAILED = "FAILED"


def grid_cells(strategies: Sequence[str] = GRID_STRATEGIES,
               threads: Sequence[int] = GRID_THREADS) -> list[tuple[str, int]]:
    """The sequential baseline once, then every strategy at every thread count."""
    return [(SEQUENTIAL, 1)] + [(s, t) for s in strategies for t in threads]


@dataclass(frozen=True)
class BenchConfig:
    strategy: str
    dataset: str
    threads: int = 1
    warmup: int = 4
    iterations: int = 4
    min_iteration_seconds: float = 1.0
    forks: int = 2
    seed: int = 0
    fork_mode: str = "process"
    oracle: bool = False  # also compare with the quadratic brute-force ranking
    problem: str | None = None
    capacity: int | None = None  # defaults to the initial population size

    def __post_init__(self):
        if self.strategy != SEQUENTIAL and self.strategy not in STRATEGIES:
            raise UsageError(f"unknown strategy {self.strategy!r}")
        if self.threads < 1:
            raise UsageError("threads must be positive")
        if self.strategy == SEQUENTIAL and self.threads != 1:
            raise UsageError("the sequential baseline runs with exactly one thread")
        if self.warmup < 0 or self.iterations < 1 or self.forks < 1:
            raise UsageError("warmup must be >= 0, iterations and forks >= 1")
        if self.min_iteration_seconds < 0:
            raise UsageError("min_iteration_seconds must be >= 0")
        if self.fork_mode not in ("process", "inline"):
            raise UsageError("fork_mode must be 'process' or 'inline'")
        if self.capacity is not None and self.capacity < 1:
            raise UsageError("capacity must be positive")


@dataclass
class IterationResult:
    fork: int
    iteration: int
    total_us: float  # mean timed episode length
    mean_insert_us: float  # total_us / number of inserted points
    stddev_us: float  # sample stddev of single-insertion latencies
    cas_retries: int
    trims: int
    episodes: int = 1
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None


@dataclass
class BenchReport:
    config: BenchConfig
    problem: str
    k: int
    dataset_seed: int
    results: list[IterationResult] = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return any(r.failed for r in self.results)

    def csv_rows(self) -> list[dict]:
        rows = []
        for r in self.results:
            timing = (FAILED,) * 3 if r.failed else (
                f"{r.total_us:.3f}", f"{r.mean_insert_us:.3f}", f"{r.stddev_us:.3f}")
            rows.append(dict(zip(CSV_COLUMNS, (
                self.problem, self.k, self.dataset_seed, self.config.strategy,
                self.config.threads, r.fork, r.iteration, *timing, r.cas_retries, r.trims))))
        return rows


class _Sequential:
    """The single-threaded structure behind the archive interface."""

    def __init__(self, levels, capacity: int):
        self.pop = RankedPopulation.from_levels(levels)
        self.capacity = capacity

    def add_point(self, p) -> None:
        self.pop.insert(p)
        if len(self.pop) > self.capacity:
            self.pop.remove_worst()

    def __len__(self) -> int:
        return len(self.pop)

    def levels(self):
        return self.pop.levels

    def check(self, *, oracle: bool = True) -> None:
        check_levels(self.pop.levels, oracle=oracle)


def partition(n: int, threads: int, seed: int) -> list[np.ndarray]:
    """Even random split of ``range(n)``; each share keeps dataset order."""
    perm = np.random.default_rng([seed, threads]).permutation(n)
    return [np.sort(part) for part in np.array_split(perm, threads)]


def _worker(add, rows: np.ndarray, latencies: list, errors: list) -> None:
    clock = time.perf_counter_ns
    try:
        for p in rows:
            t = clock()
            add(p)
            latencies.append(clock() - t)
    except BaseException as exc:  # reported by the harness thread
        errors.append(exc)


class _Runner:
    def __init__(self, cfg: BenchConfig, ds: Dataset):
        self.cfg = cfg
        self.ds = ds
        n = ds.initial.shape[0]
        self.capacity = cfg.capacity or n
        self.levels = levels_from_points(ds.initial, np.arange(n, dtype=np.int64))
        self.shares = [ds.insertions[idx] for idx in partition(len(ds.insertions), cfg.threads, cfg.seed)]

    def _build(self):
        if self.cfg.strategy == SEQUENTIAL:
            return _Sequential(self.levels, self.capacity)
        return make_archive(self.cfg.strategy, self.levels, capacity=self.capacity)

    def episode(self):
        archive = self._build()
        lat = [[] for _ in self.shares]
        errors: list = []
        if self.cfg.strategy == SEQUENTIAL:
            t0 = time.perf_counter_ns()
            _worker(archive.add_point, self.shares[0], lat[0], errors)
            elapsed = time.perf_counter_ns() - t0
        else:
            threads = [threading.Thread(target=_worker, args=(archive.add_point, rows, out, errors))
                       for rows, out in zip(self.shares, lat)]
            t0 = time.perf_counter_ns()
            for t in threads:
                t.start()
            for t in threads:
                t.join()
            elapsed = time.perf_counter_ns() - t0
        if errors:
            raise errors[0]
        return archive, elapsed, [x for part in lat for x in part]

    def verify(self, archive) -> str | None:
        try:
            if self.cfg.strategy == "lock":
                bound = archive.trim_threshold
                if len(archive) > bound:
                    return f"size {len(archive)} exceeds the trim bound {bound}"
            archive.check(oracle=self.cfg.oracle)
        except InvariantError as exc:
            return str(exc)
        return None

    def iteration(self, fork: int, index: int, measured: bool) -> IterationResult:
        spent = 0
        times, lat = [], []
        retries = trims = 0
        while True:
            archive, elapsed, latencies = self.episode()
            spent += elapsed
            times.append(elapsed)
            lat.extend(latencies)
            stats = getattr(archive, "stats", None)
            if stats is not None:
                retries += stats.cas_retries
                trims += stats.trims
            if spent >= self.cfg.min_iteration_seconds * 1e9:
                break
        n_ins = max(1, len(self.ds.insertions))
        total_us = statistics.fmean(times) / 1e3
        result = IterationResult(
            fork, index, total_us, total_us / n_ins,
            statistics.stdev(lat) / 1e3 if len(lat) > 1 else 0.0,
            round(retries / len(times)), round(trims / len(times)), len(times))
        if measured:
            result.error = self.verify(archive)
        return result


def _load(cfg: BenchConfig) -> Dataset:
    return load_dataset(cfg.dataset, cfg.problem)


def run_fork(cfg: BenchConfig, fork: int) -> list[IterationResult]:
    """All warm-up and measured iterations of one fork; returns the measured ones."""
    runner = _Runner(cfg, _load(cfg))
    for w in range(cfg.warmup):
        runner.iteration(fork, -1 - w, measured=False)
    return [runner.iteration(fork, i, measured=True) for i in range(cfg.iterations)]


def run_benchmark(cfg: BenchConfig) -> BenchReport:
    ds = _load(cfg)
    report = BenchReport(cfg, ds.problem or os.path.basename(cfg.dataset), ds.k, ds.seed)
    if cfg.fork_mode == "inline":
        for f in range(cfg.forks):
            report.results.extend(run_fork(cfg, f))
        return report
    ctx = multiprocessing.get_context("spawn")
    for f in range(cfg.forks):
        with concurrent.futures.ProcessPoolExecutor(max_workers=1, mp_context=ctx) as pool:
            report.results.extend(pool.submit(run_fork, cfg, f).result())
    return report


def write_csv(rows: Iterable[dict], path) -> None:
    """Append rows, writing the header first if the file is new or empty."""
    new = not os.path.exists(path) or os.path.getsize(path) == 0
    with open(path, "a", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        if new:
            w.writeheader()
        w.writerows(rows)


def read_csv(path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != CSV_COLUMNS:
            raise UsageError(f"{path}: expected columns {','.join(CSV_COLUMNS)}")
        return list(reader)


SUMMARY_COLUMNS = ("problem", "k", "dataset_seed", "strategy", "threads", "samples", "failed",
                   "mean_total_us", "stddev_total_us", "mean_insert_us", "stddev_insert_us",
                   "mean_cas_retries", "mean_trims")


def _sd(xs: list[float]) -> float:
    return statistics.stdev(xs) if len(xs) > 1 else 0.0


def summarize(rows: Iterable[dict]) -> list[dict]:
    """One row per (dataset, strategy, threads); stddevs are sample stddevs."""
    groups: dict[tuple, list[dict]] = {}
    for r in rows:
        key = (r["problem"], int(r["k"]), int(r["dataset_seed"]), r["strategy"], int(r["threads"]))
        groups.setdefault(key, []).append(r)
    out = []
    for key, rs in groups.items():
        ok = [r for r in rs if r["total_us"] != FAILED]
        tot = [float(r["total_us"]) for r in ok]
        ins = [float(r["mean_insert_us"]) for r in ok]
        out.append(dict(zip(SUMMARY_COLUMNS, (
            *key, len(rs), len(rs) - len(ok),
            statistics.fmean(tot) if tot else math.nan, _sd(tot),
            statistics.fmean(ins) if ins else math.nan, _sd(ins),
            statistics.fmean(float(r["cas_retries"]) for r in rs),
            statistics.fmean(float(r["trims"]) for r in rs)))))
    out.sort(key=lambda r: (r["problem"], r["k"], r["dataset_seed"],
                            r["strategy"] != SEQUENTIAL, r["strategy"], r["threads"]))
    return out


def _fmt(v) -> str:
    if isinstance(v, float):
        return FAILED if math.isnan(v) else f"{v:.2f}"
    return str(v)


def render_text(summary: list[dict]) -> str:
    """Aligned table, one section per dataset."""
    sections: dict[tuple, list[dict]] = {}
    for r in summary:
        sections.setdefault((r["problem"], r["k"], r["dataset_seed"]), []).append(r)
    cols = SUMMARY_COLUMNS[3:]
    buf = io.StringIO()
    if len(sections) > 1:
        buf.write(f"note: rows come from {len(sections)} different datasets, shown separately\n\n")
    for (problem, k, seed), rs in sections.items():
        cells = [[_fmt(r[c]) for c in cols] for r in rs]
        widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
        buf.write(f"dataset {problem} k={k} seed={seed}\n")
        buf.write("  ".join(c.rjust(w) for c, w in zip(cols, widths)) + "\n")
        for row in cells:
            buf.write("  ".join(v.rjust(w) for v, w in zip(row, widths)) + "\n")
        buf.write("\n")
    return buf.getvalue()


def render_csv(summary: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SUMMARY_COLUMNS, lineterminator="\n")
    w.writeheader()
    w.writerows(summary)
    return buf.getvalue()


def config_dict(cfg: BenchConfig) -> dict:
    return asdict(cfg)
