"""Compare the compiled and numpy kernel backends.

Run with ``python3 benchmarks/bench_kernels.py``. Each case is timed as the
best of several repeats; the maximum relative difference between backends
is reported next to the timings.
"""

import argparse
import time

import numpy as np

from photonsep._kernels import _pykernels

try:
    from photonsep._kernels import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def best_time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def rel_diff(a, b):
    scale = np.maximum(np.abs(a), np.abs(b))
    mask = scale > 1e-250
    return float(np.max(np.abs(a - b)[mask] / scale[mask])) if mask.any() else 0.0


def cases():
    rng = np.random.default_rng(0)
    # (label, callable factory) pairs sized like the model runs
    kappa01 = np.sort(rng.uniform(0.9, 1.1, 2560))
    cw01 = rng.normal(size=kappa01.size) + 1j * rng.normal(size=kappa01.size)
    kappa001 = np.sort(rng.uniform(0.99, 1.01, 1600))
    cw001 = rng.normal(size=kappa001.size) + 1j * rng.normal(size=kappa001.size)
    yield ("bessel_sweep  n=2000 lmax=200 x<400", "bessel_sweep", (rng.uniform(0, 400, 2000), 200))
    yield ("bessel_sweep  n=500 lmax=6800 x~1.6e4", "bessel_sweep", (rng.uniform(1.5e4, 1.7e4, 500), 6800))
    yield ("wave_sums     eps=0.01 lmax=200", "weighted_wave_sums", (kappa01, cw01, 500.0, 200))
    yield ("wave_sums     eps=0.001 lmax=6786", "weighted_wave_sums", (kappa001, cw001, 15811.0, 6786))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if _ckernels is None:
        print("compiled backend not available; build with `pip install -e . --no-build-isolation`")
    print(f"{'case':42s} {'numpy [s]':>10s} {'cython [s]':>11s} {'speedup':>8s} {'max rel diff':>13s}")
    for label, name, arg in cases():
        t_py, out_py = best_time(lambda: getattr(_pykernels, name)(*arg), args.repeat)
        if _ckernels is None:
            print(f"{label:42s} {t_py:10.4f} {'-':>11s} {'-':>8s} {'-':>13s}")
            continue
        t_c, out_c = best_time(lambda: getattr(_ckernels, name)(*arg), args.repeat)
        print(f"{label:42s} {t_py:10.4f} {t_c:11.4f} {t_py / t_c:8.1f} {rel_diff(out_py, out_c):13.2e}")


if __name__ == "__main__":
    main()
