"""Compare the compiled kernels against the pure-Python fallbacks.

Run: python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from spikestab import _kernels_py

try:
    from spikestab import _kernels
except ImportError:
    _kernels = None


def _time(fn, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_lif(T=10, m=100_000):
    rng = np.random.default_rng(0)
    drives = np.ascontiguousarray(rng.normal(size=(T, m)))
    rows = []
    py = _time(lambda: _kernels_py.lif_forward(drives, 1.0, 0.5, True))
    rows.append(("lif_forward", "python", py))
    if _kernels is not None:
        cy = _time(lambda: _kernels.lif_forward(drives, 1.0, 0.5, True))
        rows.append(("lif_forward", "cython", cy))
        s1, _ = _kernels.lif_forward(drives, 1.0, 0.5, True)
        s2, _ = _kernels_py.lif_forward(drives, 1.0, 0.5, True)
        assert np.array_equal(np.asarray(s1), s2), "backends disagree"
    return rows


def bench_fwht(n=20):
    rng = np.random.default_rng(1)
    base = rng.normal(size=1 << n)
    rows = []
    a = base.copy()
    rows.append(("fwht", "python", _time(lambda: _kernels_py.fwht_inplace(a.copy()))))
    if _kernels is not None:
        rows.append(("fwht", "cython", _time(lambda: _kernels.fwht_inplace(a.copy()))))
        b1, b2 = base.copy(), base.copy()
        _kernels.fwht_inplace(b1)
        _kernels_py.fwht_inplace(b2)
        assert np.array_equal(b1, b2), "backends disagree"
    return rows


def main():
    rows = bench_lif() + bench_fwht()
    print(f"{'kernel':<14}{'backend':<10}{'best time (s)':>14}")
    by_kernel = {}
    for kernel, backend, t in rows:
        print(f"{kernel:<14}{backend:<10}{t:>14.4f}")
        by_kernel.setdefault(kernel, {})[backend] = t
    for kernel, times in by_kernel.items():
        if "cython" in times:
            print(f"{kernel}: cython speedup {times['python'] / times['cython']:.1f}x")
    if _kernels is None:
        print("compiled extension not available; python fallback only")


if __name__ == "__main__":
    main()
