"""Compare the compiled and pure-Python Schur kernels.

Times ``linalg.schur`` on random complex matrices for each available
backend and also reports a full bidisc fiber sweep, which is where the
kernel dominates. Usage::

    python benchmarks/bench_schur.py [--sizes 4 8 16 32] [--repeats 20]
"""

import argparse
import time

import numpy as np

from distvar import bidisc, fixtures, linalg


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[4, 8, 16, 32])
    ap.add_argument("--repeats", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    backends = sorted(linalg.KERNELS)
    rng = np.random.default_rng(args.seed)
    print(f"backends: {', '.join(backends)} (default {linalg.BACKEND})")
    print(f"{'n':>4} " + " ".join(f"{b + ' [ms]':>14}" for b in backends) + f" {'speedup':>9}")
    for n in args.sizes:
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        row = {b: best_of(lambda: linalg.schur(a, backend=b), args.repeats) for b in backends}
        speed = row["python"] / row["cython"] if "cython" in row else float("nan")
        print(f"{n:>4} " + " ".join(f"{1e3 * row[b]:>14.3f}" for b in backends) + f" {speed:>9.1f}")

    # end to end: one 193-point fiber sweep of the Neil triple per backend
    t = fixtures.neil()
    saved = linalg.BACKEND
    for b in backends:
        linalg.BACKEND = b
        dt = best_of(lambda: bidisc.sample(t), 3)
        print(f"neil sample sweep, {b}: {dt:.3f} s")
    linalg.BACKEND = saved


if __name__ == "__main__":
    main()
