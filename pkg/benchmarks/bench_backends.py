#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Run from the repository root after installing the package:

    python benchmarks/bench_backends.py
"""

import math
import time

import numpy as np

from sh22osc._kernels import _core_py

try:
    from sh22osc._kernels import _core
except ImportError:
    _core = None


def model_bands(n, gamma=1.0):
    d = np.zeros(n)
    e = np.array(
        [gamma if i % 2 == 0 else math.sqrt((i + 1) / 2) for i in range(n - 1)]
    )
    return d, e


def timeit(fn, repeat=3):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench():
    cases = []
    for n in (256, 1024, 2048):
        d, e = model_bands(n)
        i_lo = (n - 21) // 2
        cases.append(
            (
                f"eigenvalues_by_index N={n} (21 central)",
                lambda b, d=d, e=e, i_lo=i_lo: b.eigenvalues_by_index(
                    d, e, i_lo, i_lo + 20, 1e-13, 200
                ),
            )
        )
    d, e = model_bands(2048)
    cases.append(
        (
            "inverse_iteration N=2048",
            lambda b, d=d, e=e: b.inverse_iteration(d, e, math.sqrt(5.0), 4),
        )
    )
    cases.append(
        (
            "charlier_dual_sequence n_max=600 x=12",
            lambda b: b.charlier_dual_sequence(600, 12, 1.0),
        )
    )

    header = f"{'kernel':45s} {'python':>10s} {'cython':>10s} {'speedup':>9s}"
    print(header)
    print("-" * len(header))
    for name, fn in cases:
        t_py = timeit(lambda: fn(_core_py))
        if _core is None:
            print(f"{name:45s} {t_py * 1e3:9.2f}ms {'n/a':>10s} {'n/a':>9s}")
            continue
        t_cy = timeit(lambda: fn(_core))
        print(
            f"{name:45s} {t_py * 1e3:9.2f}ms {t_cy * 1e3:9.2f}ms {t_py / t_cy:8.1f}x"
        )
    if _core is None:
        print("\ncompiled core not built; install with `pip install -e .` to compare")


if __name__ == "__main__":
    bench()
