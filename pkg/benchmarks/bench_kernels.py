"""Benchmark the compiled kernels against the numpy fallback.

Times the two hot paths behind UDRD_BACKEND: the dense symmetric
eigensolve (cyclic Jacobi vs LAPACK) and the per-band solver sums
(tight C loop vs vectorized numpy). Run as:

    python benchmarks/bench_kernels.py [--quick]
"""

import argparse
import os
import time

import numpy as np

from udrd import _kernels
from udrd.process import ArSpectrum, toeplitz_truncation


def best_of(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_eigh(orders, repeats):
    model = ArSpectrum(coeffs=(0.8,))
    print(f"\n{'eigh':<22}{'python':>12}{'compiled':>12}{'ratio':>9}")
    for n in orders:
        matrix = toeplitz_truncation(model, n).matrix
        times = {}
        for backend in available_backends():
            os.environ["UDRD_BACKEND"] = backend
            times[backend] = best_of(lambda: _kernels.eigh_kernel(matrix), repeats)
        print(_row(f"toeplitz {n}x{n}", times))


def bench_sums(sizes, repeats):
    rng = np.random.default_rng(0)
    print(f"\n{'solver sums':<22}{'python':>12}{'compiled':>12}{'ratio':>9}")
    for n in sizes:
        vals = np.exp(rng.uniform(np.log(0.1), np.log(100.0), size=n))
        calls = max(1, 200_000 // max(n, 50))

        def run():
            for _ in range(calls):
                _kernels.distortion_sum(vals, 2.5)
                _kernels.rate_sum(vals, 2.5)

        times = {}
        for backend in available_backends():
            os.environ["UDRD_BACKEND"] = backend
            times[backend] = best_of(run, repeats) / calls
        print(_row(f"{n} bands x2 maps", times))


def available_backends():
    backends = ["python"]
    if _kernels.compiled_available():
        backends.append("compiled")
    return backends


def _fmt(seconds):
    if seconds < 1e-3:
        return f"{seconds * 1e6:9.1f} us"
    if seconds < 1.0:
        return f"{seconds * 1e3:9.2f} ms"
    return f"{seconds:9.2f} s "


def _row(label, times):
    py = times.get("python")
    cy = times.get("compiled")
    cy_txt = _fmt(cy) if cy is not None else "        n/a"
    ratio = f"{py / cy:8.1f}x" if cy else "      n/a"
    return f"{label:<22}{_fmt(py)}{cy_txt}{ratio}"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true", help="smaller sizes, fewer repeats")
    args = parser.parse_args()

    saved = os.environ.get("UDRD_BACKEND")
    print(f"compiled extension available: {_kernels.compiled_available()}")
    try:
        if args.quick:
            bench_eigh(orders=[32, 64, 128], repeats=2)
            bench_sums(sizes=[4, 64, 1024], repeats=2)
        else:
            bench_eigh(orders=[64, 128, 256, 512], repeats=3)
            bench_sums(sizes=[4, 64, 1024, 8192], repeats=3)
    finally:
        if saved is None:
            os.environ.pop("UDRD_BACKEND", None)
        else:
            os.environ["UDRD_BACKEND"] = saved


if __name__ == "__main__":
    main()
