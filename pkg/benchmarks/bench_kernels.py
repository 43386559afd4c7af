"""Time the fraction-free elimination kernel: numba int64 path vs object-array path.

    python benchmarks/bench_kernels.py [--repeat N]

Set STRATA_LAB_DISABLE_JIT=1 to confirm the library default falls back to the
object path; this script always times both explicitly.
"""
import argparse
import time

import numpy as np

from strata_lab import _jit
from strata_lab.cech import Arrangement, build_cech_slice
from strata_lab.kernels import ff_gauss_jordan


def random_case(rng, rows, cols, density=0.4):
    a = rng.integers(-3, 4, size=(rows, cols))
    a[rng.random((rows, cols)) > density] = 0
    return a


def slice_case(d):
    arr = Arrangement.coordinate(["x", "y", "z", "w"])
    sl = build_cech_slice(arr, d)
    m = sl.complex.d(0)
    a = np.zeros(m.shape, dtype=np.int64)
    for (i, j), v in m.entries.items():
        a[i, j] = int(v)
    return a


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    print(f"numba available: {_jit.NUMBA_AVAILABLE}  jit disabled by env: {_jit.JIT_DISABLED}")
    rng = np.random.default_rng(0)
    cases = [(f"random {n}x{n}", random_case(rng, n, n)) for n in (20, 40, 80)]
    cases += [(f"cech slice d={d}", slice_case(d)) for d in (4, 6)]

    # warm the compiled kernel
    ff_gauss_jordan(cases[0][1], use_jit=True)

    print(f"{'case':<18}{'shape':>12}{'numba [ms]':>14}{'numpy [ms]':>14}{'speedup':>10}")
    for name, a in cases:
        fast = ff_gauss_jordan(a, use_jit=True)
        slow = ff_gauss_jordan(a, use_jit=False)
        assert fast[1] == slow[1] and (fast[0] == slow[0]).all(), name
        t_jit = best_of(lambda: ff_gauss_jordan(a, use_jit=True), args.repeat)
        t_obj = best_of(lambda: ff_gauss_jordan(a, use_jit=False), args.repeat)
        shape = f"{a.shape[0]}x{a.shape[1]}"
        print(f"{name:<18}{shape:>12}{t_jit * 1e3:>14.2f}{t_obj * 1e3:>14.2f}{t_obj / t_jit:>9.1f}x")


if __name__ == "__main__":
    main()
