#!/usr/bin/env python3
"""Benchmark the compiled permanent kernel against the NumPy fallback.

Run as `python3 benchmarks/bench_permanent.py`.  Times single-matrix
permanents across sizes and the batched kernel at the shapes the
Monte-Carlo estimators actually use (many small replicated submatrices).
"""

import time

import numpy as np

from bosonic_moments._kernels import _permanents_py

try:
    from bosonic_moments._kernels import _permanents as _permanents_cy
except ImportError:
    _permanents_cy = None


def _time(fn, *args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def main():
    rng = np.random.default_rng(7)
    backends = [("python", _permanents_py)]
    if _permanents_cy is not None:
        backends.append(("cython", _permanents_cy))
    else:
        print("compiled kernel not built; timing the fallback only\n")

    print(f"{'kernel':<28} {'python':>12} {'cython':>12} {'speedup':>9}")
    for k in (6, 8, 10, 12):
        a = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
        times = {}
        values = {}
        for name, mod in backends:
            times[name], values[name] = _time(mod.permanent, a)
        _report(f"permanent {k}x{k}", times, values)

    for batch, k in [(2000, 2), (2000, 4), (500, 8)]:
        stack = rng.standard_normal((batch, k, k)) + 1j * rng.standard_normal(
            (batch, k, k)
        )
        times = {}
        values = {}
        for name, mod in backends:
            times[name], out = _time(mod.permanent_batch, stack)
            values[name] = complex(out[0])
        _report(f"batch {batch} x ({k}x{k})", times, values)


def _report(label, times, values):
    if len(values) == 2:
        a, b = values["python"], values["cython"]
        assert abs(a - b) <= 1e-9 * max(1.0, abs(a)), "backends disagree"
        speedup = times["python"] / times["cython"]
        print(
            f"{label:<28} {times['python'] * 1e3:>10.3f}ms "
            f"{times['cython'] * 1e3:>10.3f}ms {speedup:>8.1f}x"
        )
    else:
        print(f"{label:<28} {times['python'] * 1e3:>10.3f}ms {'-':>12} {'-':>9}")


if __name__ == "__main__":
    main()
