#!/usr/bin/env python3
"""Benchmark: compiled kernels vs the numpy fallback, plus the full
Strang-step pipeline under each backend.

Usage: python benchmarks/bench_kernels.py [--modes 64] [--repeat 20]
"""

import argparse
import time

import numpy as np

from waveguide_nls import _kernels_np

try:
    from waveguide_nls import _kernels_cy
except ImportError:
    _kernels_cy = None


def timeit(fn, repeat):
    fn()  # warm up
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn()
    return (time.perf_counter() - t0) / repeat * 1e3


def bench_kernels(modes, repeat):
    rng = np.random.default_rng(0)
    shape = (modes,) * 3
    u = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    v = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    cases = {
        "abs2": lambda k: k.abs2(u),
        "abs4": lambda k: k.abs4(u),
        "product_abs2": lambda k: k.product_abs2(u, v),
        "cubic_pointwise": lambda k: k.cubic_pointwise(u),
        "nonlinear_phase": lambda k: k.nonlinear_phase(u, 1e-3),
    }
    print(f"pointwise kernels on {modes}^3 (ms/call, {repeat} reps)")
    header = f"{'kernel':>18} {'numpy':>9}"
    if _kernels_cy:
        header += f" {'cython':>9} {'speedup':>8}"
    print(header)
    for name, call in cases.items():
        t_np = timeit(lambda: call(_kernels_np), repeat)
        row = f"{name:>18} {t_np:9.3f}"
        if _kernels_cy:
            t_cy = timeit(lambda: call(_kernels_cy), repeat)
            row += f" {t_cy:9.3f} {t_np / t_cy:7.2f}x"
        print(row)


def bench_step(modes, repeat):
    import importlib
    import os

    from waveguide_nls.dynamics import EvolutionConfig, evolve
    from waveguide_nls.grid import SpectralField, torus_grid

    g = torus_grid((1.0,) * 3, (modes,) * 3)
    rng = np.random.default_rng(1)
    u0 = SpectralField(g, 0.1 * (rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape)))
    cfg = EvolutionConfig(dt=1e-4, t_end=repeat * 1e-4, record_stride=repeat)

    print(f"\nStrang-step pipeline on {modes}^3 ({repeat} steps)")
    for backend in ("numpy", "cython") if _kernels_cy else ("numpy",):
        os.environ["WAVEGUIDE_NLS_KERNELS"] = backend
        import waveguide_nls.kernels as K

        importlib.reload(K)
        import waveguide_nls.dynamics as D

        importlib.reload(D)
        t0 = time.perf_counter()
        D.evolve(u0, cfg)
        dt_ms = (time.perf_counter() - t0) / repeat * 1e3
        print(f"  {backend:>7}: {dt_ms:7.2f} ms/step")
    os.environ.pop("WAVEGUIDE_NLS_KERNELS", None)


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--modes", type=int, default=64)
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    bench_kernels(args.modes, args.repeat)
    bench_step(args.modes, args.repeat)
