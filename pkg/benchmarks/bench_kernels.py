"""Benchmark: compiled kernels vs the pure-python fallback.

Times the J0 hot loop in the shapes the library actually uses (large
arrays for sampling-scale work, 15-point batches as fired by the
adaptive panels, and plain scalars), then two end-to-end operations.

Run:  python benchmarks/bench_kernels.py
"""

import math
import os
import subprocess
import sys
import time

import numpy as np

from sinelaw.kernels import get_backend, BACKEND


def _timeit(fn, *args, repeat=5, number=1):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        for _ in range(number):
            fn(*args)
        best = min(best, (time.perf_counter() - t0) / number)
    return best


def bench_backend(name):
    k = get_backend(name)
    rng = np.random.default_rng(0)
    big = rng.uniform(0.0, 60.0, 1_000_000)
    small = rng.uniform(0.0, 60.0, 15)
    rows = {}
    rows["j0 array 1e6"] = _timeit(k.j0_array, big)
    rows["j0 batch 15 (x1000)"] = _timeit(
        lambda: [k.j0_array(small) for _ in range(1000)])
    rows["j0 scalar (x10000)"] = _timeit(
        lambda: [k.j0(1.234567) for _ in range(10000)])
    return rows


def bench_operations():
    """End-to-end timings on whichever backend is active."""
    from sinelaw.quadrature import QuadConfig
    from sinelaw.sampler import builtin_f, sample_vn
    from sinelaw.limitlaw import limit_char_fn
    from sinelaw.transforms import Decay, RealFunction, hankel0

    expf = RealFunction(eval=lambda r: np.exp(-math.sqrt(math.pi / 2) * r),
                        decay=Decay("exponential", math.sqrt(math.pi / 2)))
    cfg = QuadConfig()
    rows = {}
    rows["hankel0 exp target (t=2)"] = _timeit(hankel0, expf, 2.0, cfg)
    f = builtin_f("cauchy")
    ccfg = QuadConfig(abs_tol=1e-8, rel_tol=1e-8, max_panels=200_000)
    rows["limit charfn cauchy (t=2)"] = _timeit(limit_char_fn, f, 2.0, ccfg)
    rows["sample 1e6 draws"] = _timeit(sample_vn, f, 1000, 1_000_000, 42)
    return rows


def main():
    if os.environ.get("SINELAW_PURE"):
        print("note: SINELAW_PURE is set; compiled backend disabled")
    print(f"active backend: {BACKEND}\n")

    results = {}
    for name in ("cython", "pure"):
        try:
            results[name] = bench_backend(name)
        except (ImportError, ValueError) as exc:
            print(f"{name}: unavailable ({exc})")
    if len(results) == 2:
        print(f"{'kernel':28s} {'cython':>12s} {'pure':>12s} {'speedup':>9s}")
        for key in results["cython"]:
            c, p = results["cython"][key], results["pure"][key]
            print(f"{key:28s} {c * 1e3:10.3f}ms {p * 1e3:10.3f}ms "
                  f"{p / c:8.1f}x")
    else:
        for name, rows in results.items():
            for key, v in rows.items():
                print(f"{name} {key}: {v * 1e3:.3f} ms")

    print(f"\nend-to-end (backend: {BACKEND})")
    for key, v in bench_operations().items():
        print(f"{key:28s} {v * 1e3:10.3f}ms")
    if BACKEND == "cython":
        print("\nsame operations on the pure fallback "
              "(subprocess with SINELAW_PURE=1):")
        sys.stdout.flush()
        env = dict(os.environ, SINELAW_PURE="1")
        code = ("from benchmarks.bench_kernels import bench_operations\n"
                "for k, v in bench_operations().items():\n"
                f"    print(f'{{k:28s}} {{v * 1e3:10.3f}}ms')\n")
        out = subprocess.run([sys.executable, "-c", code], env=env,
                             cwd=os.path.dirname(os.path.dirname(
                                 os.path.abspath(__file__))),
                             capture_output=True, text=True)
        print(out.stdout, end="")


if __name__ == "__main__":
    main()
