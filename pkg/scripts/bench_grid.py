"""Run the full benchmark grid over a set of dataset files.

For every dataset: the sequential baseline once, then each concurrent
strategy at each thread count (17 cells). Rows are appended to one CSV and
a summary table is printed at the end.

    python scripts/bench_grid.py data/*.ds --out results.csv [--quick]
"""

import argparse
import sys

from asyncnds import bench


def main(argv=None) -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("datasets", nargs="+")
    ap.add_argument("--out", required=True)
    ap.add_argument("--threads", type=int, nargs="+", default=list(bench.GRID_THREADS))
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--quick", action="store_true",
                    help="1 warm-up, 2 iterations, 1 in-process fork, no minimum iteration time")
    args = ap.parse_args(argv)
    opts = (dict(warmup=1, iterations=2, forks=1, min_iteration_seconds=0.0, fork_mode="inline")
            if args.quick else {})
    failed = False
    for path in args.datasets:
        for strategy, threads in bench.grid_cells(threads=args.threads):
            cfg = bench.BenchConfig(strategy, path, threads, seed=args.seed, **opts)
            report = bench.run_benchmark(cfg)
            bench.write_csv(report.csv_rows(), args.out)
            status = "FAILED" if report.failed else "ok"
            print(f"{path} {strategy:>4} T={threads:<2} {status}", flush=True)
            failed |= report.failed
    print(bench.render_text(bench.summarize(bench.read_csv(args.out))))
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
