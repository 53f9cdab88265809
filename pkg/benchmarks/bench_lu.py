"""Compare the compiled and numpy batched LU kernels.

    python3 benchmarks/bench_lu.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from gna.kernels import backends, batched_det, batched_solve

SHAPES = [(37, 2), (37, 4), (37, 8), (37, 16), (400, 4), (400, 8)]


def bench(impl, fn, a, b, repeat):
    if fn == "det":
        stmt = lambda: batched_det(a, impl)
    else:
        stmt = lambda: batched_solve(a, b, impl)
    return min(timeit.repeat(stmt, number=20, repeat=repeat)) / 20


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    impls = backends()
    if "cython" not in impls:
        print("compiled backend not built; only the numpy kernel is available")
    rng = np.random.default_rng(0)
    print(f"{'op':6} {'K':>5} {'n':>3} " + " ".join(f"{name:>12}" for name in impls) + "   speedup")
    for fn in ("det", "solve"):
        for K, n in SHAPES:
            a = rng.normal(size=(K, n, n))
            b = rng.normal(size=(K, n, 1))
            times = {name: bench(impl, fn, a, b, args.repeat) for name, impl in impls.items()}
            row = " ".join(f"{t * 1e6:10.1f}us" for t in times.values())
            speed = times["python"] / times["cython"] if "cython" in times else float("nan")
            print(f"{fn:6} {K:5d} {n:3d} {row}   {speed:6.2f}x")


if __name__ == "__main__":
    main()
