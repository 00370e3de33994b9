"""Compare the numba kernels with the pure-numpy fallback.

Part one times each kernel from both modules in this process. Part two
replays a sequential INDS workload end to end in two subprocesses, one
with ASYNCNDS_DISABLE_JIT set, so every Python-level caller is included.

    python benchmarks/bench_kernels.py [--repeat 20] [--n 5000] [--k 3]
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from asyncnds.kernels import numba_impl, numpy_impl
from asyncnds.level import lex_sort

END_TO_END = """
import time, numpy as np
from asyncnds import RankedPopulation, kernels
rng = np.random.default_rng(1)
n, k = {n}, {k}
base = rng.random((n, k)); base[:, -1] = 1.5 - base[:, :-1].sum(axis=1) / (k - 1) + 0.5 * base[:, -1]
pop = RankedPopulation(base)
pop.insert(base[0] * 0.99); pop.remove_worst()  # compile outside the timed region
t = time.perf_counter()
for p in rng.random((1000, k)):
    pop.insert(p); pop.remove_worst()
print(kernels.BACKEND, time.perf_counter() - t)
"""


def workload(n, k, seed=0):
    rng = np.random.default_rng(seed)
    pts = rng.random((n, k))
    ords = np.arange(n, dtype=np.int64)
    pts, ords = lex_sort(pts, ords)
    level = numpy_impl.build_level(pts, ords)
    m = lex_sort(rng.random((20, k)) * 0.5, np.arange(n, n + 20, dtype=np.int64))
    return pts, ords, level, m


def kernel_table(n, k, repeat):
    pts, ords, (lp, lo, by, _), (mp, mo) = workload(n, k)
    keep = np.ones(n, dtype=bool)
    keep[::7] = False
    cases = {
        "build_level": lambda impl: impl.build_level(pts, ords),
        "rebuild_level": lambda impl: impl.rebuild_level(lp, lo, by, keep, mp, mo),
        "dominated_mask": lambda impl: impl.dominated_mask(mp, lp),
        "nadir_candidates": lambda impl: impl.nadir_candidates(lp, mp.min(axis=0)),
        "any_dominates": lambda impl: impl.any_dominates(lp, mp[0]),
    }
    print(f"{'kernel':<18}{'numba us':>12}{'numpy us':>12}{'speedup':>10}")
    for name, fn in cases.items():
        fn(numba_impl)  # compile
        t_jit = min(timeit.repeat(lambda: fn(numba_impl), number=1, repeat=repeat)) * 1e6
        t_np = min(timeit.repeat(lambda: fn(numpy_impl), number=1, repeat=repeat)) * 1e6
        print(f"{name:<18}{t_jit:>12.1f}{t_np:>12.1f}{t_np / t_jit:>10.1f}")


def end_to_end(n, k):
    code = END_TO_END.format(n=n, k=k)
    for flag in ("0", "1"):
        env = dict(os.environ, ASYNCNDS_DISABLE_JIT=flag)
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                             text=True, check=True).stdout.split()
        print(f"1000 insert+remove_worst, backend {out[0]:<6} {float(out[1]):.3f} s")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--n", type=int, default=5000)
    ap.add_argument("--k", type=int, default=3)
    args = ap.parse_args()
    kernel_table(args.n, args.k, args.repeat)
    end_to_end(args.n, args.k)
