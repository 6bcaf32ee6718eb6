"""Timing comparison of the numpy and numba field backends.

Run as: python3 benchmarks/bench_backends.py [--points N] [--repeats K]
The compiled path pays a one-time jit cost (cached on disk afterwards);
it is reported separately from the steady-state numbers.
"""
import argparse
import time

import numpy as np

from bgls_osc import _backend
from bgls_osc.operators import default_x_grid

LAMBDAS = (16.0, 64.0, 256.0, 1024.0)


def best_of(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=512,
                    help="x-grid points per side (default 512)")
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    try:
        t0 = time.perf_counter()
        numba_fn = _backend._get_numba_fn()
        compile_probe = (np.array([0.5]), 8.0, 1.0, _backend.F_INV_SQRT, 1.0,
                         _backend.AMP_INDICATOR, 1e-10, 1e-8, 1 << 17,
                         _backend._GK_X, _backend._GK_WK, _backend._GK_WG7)
        numba_fn(*compile_probe)
        compile_s = time.perf_counter() - t0
    except ImportError:
        numba_fn = None
        compile_s = None

    print("field backend benchmark: witness profile, indicator amplitude,")
    print("%d-point mirrored log grid, best of %d runs"
          % (2 * args.points + 1, args.repeats))
    if compile_s is not None:
        print("numba first-call cost (jit or cache load): %.2f s" % compile_s)
    else:
        print("numba unavailable; numpy backend only")
    print()
    print("%8s  %12s  %12s  %8s" % ("lambda", "numpy [ms]", "numba [ms]",
                                    "speedup"))
    for lam in LAMBDAS:
        x = default_x_grid(lam, args.points)
        base_args = (x, lam, 1.0, _backend.F_INV_SQRT, 1.0,
                     _backend.AMP_INDICATOR, 1e-10, 1e-8, 1 << 17)
        t_np = best_of(lambda: _backend._field_bilinear_numpy(*base_args),
                       args.repeats)
        if numba_fn is None:
            print("%8g  %12.1f  %12s  %8s" % (lam, 1e3 * t_np, "-", "-"))
            continue
        t_nb = best_of(
            lambda: numba_fn(*base_args, _backend._GK_X, _backend._GK_WK,
                             _backend._GK_WG7), args.repeats)
        print("%8g  %12.1f  %12.1f  %7.1fx"
              % (lam, 1e3 * t_np, 1e3 * t_nb, t_np / t_nb))


if __name__ == "__main__":
    main()
