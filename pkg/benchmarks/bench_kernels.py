"""Timing comparison of the compiled and pure-numpy pairwise kernels.

Runs the mean-of-K-smallest-sums kernel on matrices shaped like real
workloads, checks the two backends agree bit for bit, and prints a small
table. Invoke directly:

    python3 benchmarks/bench_kernels.py
"""

import os
import time

import numpy as np


def run_backend(backend, R, K):
    os.environ["CUMBIA_BACKEND"] = backend
    from cumbia._kernels import pair_mean_k_smallest

    return pair_mean_k_smallest(R, K)


def time_backend(backend, R, K, repeats):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = run_backend(backend, R, K)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    from cumbia._kernels import HAS_NUMBA

    cases = [
        ("small joint block", 36, 60, 3),
        ("sample side, default synth", 60, 1500, 3),
        ("variable side, default synth", 1500, 60, 3),
        ("wide shave step", 200, 230, 3),
    ]
    rng = np.random.default_rng(12345)

    if HAS_NUMBA:
        # trigger compilation outside the timed region
        warm = rng.standard_normal((4, 5))
        run_backend("numba", warm, 2)

    print(f"numba available: {HAS_NUMBA}")
    header = f"{'case':<30} {'rows':>5} {'cols':>5} {'numpy':>10} "
    header += f"{'numba':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, n, m, K in cases:
        R = np.abs(rng.standard_normal((n, m))) + 0.1
        t_np, out_np = time_backend("numpy", R, K, repeats=3)
        if HAS_NUMBA:
            t_nb, out_nb = time_backend("numba", R, K, repeats=3)
            if out_np.tobytes() != out_nb.tobytes():
                raise SystemExit(f"backend mismatch on {name}")
            ratio = f"{t_np / t_nb:7.2f}x"
            nb_col = f"{t_nb * 1e3:8.2f}ms"
        else:
            ratio = "    n/a"
            nb_col = "       n/a"
        print(f"{name:<30} {n:>5} {m:>5} {t_np * 1e3:8.2f}ms "
              f"{nb_col} {ratio}")
    os.environ.pop("CUMBIA_BACKEND", None)
    print("backends agree bit for bit on all cases")


if __name__ == "__main__":
    main()
