"""Command-line interface: ``asyncnds {synth,bench,verify,report}``.

Exit codes: 0 success, 1 verification or benchmark failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
import threading

import numpy as np

from . import bench
from .concurrent import STRATEGIES, make_archive
from .core import UsageError
from .inds import InvariantError, levels_from_points
from .level import lex_sort
from .offline import brute_force_ranks
from .problems import PROBLEM_NAMES, get_problem, load_dataset, save_dataset, synthesize

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _cmd_synth(args) -> int:
    problem = get_problem(args.problem, args.k)
    ds = synthesize(problem, args.seed, init=args.init, insertions=args.ins)
    save_dataset(ds, args.out)
    print(f"wrote {args.out}: {problem.name} k={ds.k} init={len(ds.initial)} "
          f"ins={len(ds.insertions)} seed={ds.seed}")
    return EXIT_OK


def _cmd_bench(args) -> int:
    cfg = bench.BenchConfig(
        strategy=args.strategy, dataset=args.dataset, threads=args.threads, warmup=args.warmup,
        iterations=args.iters, min_iteration_seconds=args.min_time, forks=args.forks,
        seed=args.seed, fork_mode="inline" if args.inline else "process", oracle=args.oracle,
        problem=args.problem)
    load_dataset(cfg.dataset, cfg.problem)  # parse errors surface before any work
    report = bench.run_benchmark(cfg)
    if args.out:
        bench.write_csv(report.csv_rows(), args.out)
    print(bench.render_text(bench.summarize(report.csv_rows())), end="")
    if report.failed:
        for r in report.results:
            if r.failed:
                print(f"FAILED fork {r.fork} iteration {r.iteration}: {r.error}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def _insert_concurrently(archive, rows: np.ndarray, threads: int, seed: int) -> None:
    errors = []

    def work(share):
        try:
            for p in share:
                archive.add_point(p)
        except BaseException as exc:
            errors.append(exc)

    ts = [threading.Thread(target=work, args=(rows[idx],))
          for idx in bench.partition(len(rows), threads, seed)]
    for t in ts:
        t.start()
    for t in ts:
        t.join()
    if errors:
        raise errors[0]


def verify_strategy(ds, strategy: str, threads: int, repeats: int,
                    seed: int = 0) -> list[tuple[int, str]]:
    """Run both verification suites ``repeats`` times; returns (repeat, message) failures.

    Insertion-only: with no capacity the final partition must equal the
    brute-force ranking of all points. Full workload: with the capacity
    policy on, the quiescent invariant sweep must pass.
    """
    n = len(ds.initial)
    levels = levels_from_points(ds.initial, np.arange(n, dtype=np.int64))
    union = np.concatenate([ds.initial, ds.insertions])
    expected = brute_force_ranks(union)
    # ordinals follow completion order, so levels are compared as point multisets
    want = [lex_sort(union[expected == r], expected[expected == r])[0]
            for r in range(int(expected.max()) + 1)]
    failures = []
    for rep in range(repeats):
        run_seed = seed + rep
        a = make_archive(strategy, levels, debug=True)
        _insert_concurrently(a, ds.insertions, threads, run_seed)
        got = [lex_sort(lv.points, lv.ordinals)[0] for lv in a.levels()]
        if len(got) != len(want) or not all(np.array_equal(x, y) for x, y in zip(got, want)):
            failures.append((rep, f"{strategy} T={threads} repeat {rep}: level partition differs "
                            f"from the oracle ranking"))
        st = a.stats
        if st.precondition_violations or st.lock_order_violations:
            failures.append((rep, f"{strategy} T={threads} repeat {rep}: {st.precondition_violations} "
                            f"precondition and {st.lock_order_violations} lock-order violations"))
        b = make_archive(strategy, levels, capacity=n, debug=True)
        _insert_concurrently(b, ds.insertions, threads, run_seed)
        try:
            if strategy == "lock" and len(b) > b.trim_threshold:
                raise InvariantError(f"size {len(b)} exceeds the trim bound {b.trim_threshold}")
            b.check(oracle=False)
        except InvariantError as exc:
            failures.append((rep, f"{strategy} T={threads} repeat {rep} (capacity on): {exc}"))
    return failures


def _cmd_verify(args) -> int:
    ds = load_dataset(args.dataset)
    strategies = sorted(STRATEGIES) if args.strategy == "all" else [args.strategy]
    failures = []
    for s in strategies:
        fs = verify_strategy(ds, s, args.threads, args.repeats, args.seed)
        print(f"{s} T={args.threads}: {args.repeats - len({rep for rep, _ in fs})}"
              f"/{args.repeats} repeats clean")
        failures.extend(msg for _, msg in fs)
    for f in failures:
        print(f"FAILED {f}", file=sys.stderr)
    return EXIT_FAIL if failures else EXIT_OK


def _cmd_report(args) -> int:
    if not args.inputs:
        raise UsageError("report needs at least one --in CSV")
    rows = []
    for path in args.inputs:
        rows.extend(bench.read_csv(path))
    summary = bench.summarize(rows)
    text = bench.render_text(summary)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(bench.render_csv(summary) if args.out.endswith(".csv") else text)
    print(text, end="")
    return EXIT_OK


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _non_negative(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be a non-negative integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="asyncnds", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="synthesize a dataset with a steady-state NSGA-II")
    p.add_argument("--problem", required=True, help=", ".join(PROBLEM_NAMES))
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--init", type=_positive, default=5000, help="initial population size")
    p.add_argument("--ins", type=_positive, default=1000, help="number of recorded insertions")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("bench", help="time one strategy on one dataset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--strategy", required=True, choices=[bench.SEQUENTIAL, *STRATEGIES])
    p.add_argument("--threads", type=_positive, default=1)
    p.add_argument("--warmup", type=_non_negative, default=4)
    p.add_argument("--iters", type=_positive, default=4)
    p.add_argument("--forks", type=_positive, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="CSV file to append to")
    p.add_argument("--min-time", type=float, default=1.0, help="minimum timed seconds per iteration")
    p.add_argument("--inline", action="store_true", help="run forks in this process")
    p.add_argument("--oracle", action="store_true", help="also verify against brute-force ranks")
    p.add_argument("--problem", help="problem name when the file name does not reveal it")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("verify", help="check concurrent results against the oracle")
    p.add_argument("--dataset", required=True)
    p.add_argument("--strategy", required=True, choices=["all", *STRATEGIES])
    p.add_argument("--threads", type=_positive, default=1)
    p.add_argument("--repeats", type=_positive, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("report", help="merge benchmark CSVs into a comparison table")
    p.add_argument("--in", dest="inputs", nargs="*", default=[])
    p.add_argument("--out", help="output file; CSV if it ends in .csv, aligned text otherwise")
    p.set_defaults(func=_cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"asyncnds {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
