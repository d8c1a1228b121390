#!/usr/bin/env python3
"""Benchmark the compiled trial kernel against the pure Python fallback.

Runs the same seeded chunk through both backends, reports per-trial cost
and the speedup, and verifies that the two backends agree bit for bit on
the chunk it timed. The trial count for the Python backend is scaled down
so the benchmark stays quick.

Usage:
    python benchmarks/bench_kernel.py [--trials 200000] [--py-trials 2000]
"""

import argparse
import time

from pcmc import _kernel_py
from pcmc.rng import cell_key

try:
    from pcmc import _mc_kernel
except ImportError:
    _mc_kernel = None

CELLS = [(4, 0.1), (5, 0.3), (7, 0.5)]
SEED = 20260809


def time_chunk(module, n, d, trials):
    key = cell_key(n, d)
    t0 = time.perf_counter()
    result = module.run_chunk(n, d, 3.0, SEED, key, 0, trials)
    return time.perf_counter() - t0, result


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--trials", type=int, default=200_000,
                        help="trials per cell for the compiled kernel")
    parser.add_argument("--py-trials", type=int, default=2_000,
                        help="trials per cell for the pure Python kernel")
    args = parser.parse_args()

    if _mc_kernel is None:
        print("compiled kernel not built; timing the pure Python kernel only")

    print(f"{'cell':>8} {'backend':>9} {'trials':>8} {'total':>9} {'per trial':>11}")
    for n, d in CELLS:
        rows = []
        dt_py, _ = time_chunk(_kernel_py, n, d, args.py_trials)
        rows.append(("python", args.py_trials, dt_py))
        if _mc_kernel is not None:
            dt_c, _ = time_chunk(_mc_kernel, n, d, args.trials)
            rows.append(("compiled", args.trials, dt_c))
        for backend, trials, dt in rows:
            print(f"{n}/{d:<5} {backend:>9} {trials:>8} {dt:>8.3f}s "
                  f"{dt / trials * 1e6:>9.2f}us")
        if _mc_kernel is not None:
            speedup = (dt_py / args.py_trials) / (dt_c / args.trials)
            print(f"{'':8} speedup: {speedup:.0f}x")

    if _mc_kernel is not None:
        n, d = CELLS[-1]
        key = cell_key(n, d)
        check = args.py_trials
        same = (_mc_kernel.run_chunk(n, d, 3.0, SEED, key, 0, check)
                == _kernel_py.run_chunk(n, d, 3.0, SEED, key, 0, check))
        print(f"bit-identical on {check} shared trials: {same}")


if __name__ == "__main__":
    main()
