"""Compare the numba and numpy paths of the hot kernels.

Run with ``python3 benchmarks/bench_kernels.py``.  Each kernel is timed on
both backends after a warm-up call (which also triggers compilation), and
the largest relative disagreement between the two is reported.
"""

import argparse
import timeit

import numpy as np

from pronylattice import _kernels


def _cases(n_modes: int, n_points: int):
    rng = np.random.default_rng(0)
    g = rng.uniform(0.0, 1.0, n_modes)
    tau = np.logspace(-8, 8, n_modes)
    omega = np.logspace(-4, 4, n_points)
    t = np.linspace(0.0, 100.0, n_points)
    z = rng.uniform(-20, 20, n_points) + 1j * rng.uniform(-20, 20, n_points)
    return {
        "gamma": ((z,), "gamma"),
        "maxwell_sum": ((g, tau, omega), "maxwell_sum"),
        "debye_sum": ((g, tau, omega), "debye_sum"),
        "exp_sum": ((g, tau, t), "exp_sum"),
        "near_integer": ((0.6, 0.5, 10**6, 1e-9), "near_integer"),
    }


def _time(fn, args, repeat: int) -> float:
    fn(*args)
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def _rel_diff(a, b) -> float:
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        return float("inf")
    if a.size == 0:
        return 0.0
    scale = np.maximum(np.abs(a), np.abs(b))
    scale = np.where(scale == 0, 1.0, scale)
    return float(np.max(np.abs(a - b) / scale))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--modes", type=int, default=321)
    ap.add_argument("--points", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if _kernels.NUMBA is None:
        print("numba path unavailable (disabled or not installed); timing numpy only")
    print(f"{'kernel':<14}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}{'max rel diff':>15}")
    for name, (call_args, attr) in _cases(args.modes, args.points).items():
        np_fn = getattr(_kernels.NUMPY, attr)
        t_np = _time(np_fn, call_args, args.repeat)
        if _kernels.NUMBA is None:
            print(f"{name:<14}{1e3 * t_np:>12.3f}{'-':>12}{'-':>10}{'-':>15}")
            continue
        nb_fn = getattr(_kernels.NUMBA, attr)
        t_nb = _time(nb_fn, call_args, args.repeat)
        diff = _rel_diff(np_fn(*call_args), nb_fn(*call_args))
        print(f"{name:<14}{1e3 * t_np:>12.3f}{1e3 * t_nb:>12.3f}{t_np / t_nb:>10.2f}{diff:>15.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
