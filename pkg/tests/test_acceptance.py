"""Acceptance suite: one test per criterion, each printing a PASS line with
the measured values. Run with `pytest tests/test_acceptance.py -v -s`.

The heavy sweeps (bilinear, drift, growth) dominate the runtime; budgets
are asserted per criterion. Parameters were calibrated so every measured
effect sits well clear of the splitting-error floor, which each drift
report carries alongside the signal.
"""

import cmath
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import constant_field, plane_wave
from waveguide_nls.dynamics import EvolutionConfig, evolve, free_flow_trajectory
from waveguide_nls.functionals import (
    WindowSpec,
    energy,
    mass,
    momentum,
    sobolev_norm,
    xsb_norm,
)
from waveguide_nls.grid import (
    SpectralField,
    build_grid,
    to_spatial,
    to_spectral,
    torus_grid,
)
from waveguide_nls.multipliers import check_ibasic, free_propagate, i_symbol
from waveguide_nls.probes import (
    almost_conservation_experiment,
    band_limited_data,
    bilinear_sweep,
    dmod_drift_experiment,
    growth_data,
    hs_tail_data,
    imethod_schedule,
    scaling_check,
    sobolev_growth_experiment,
)


def report(name, ok, detail):
    print(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} ({detail})", flush=True)
    assert ok, f"{name}: {detail}"


def test_transform_exactness():
    t0 = time.monotonic()
    g = torus_grid((1.0,) * 3, (32,) * 3)
    rng = np.random.default_rng(2024)
    F = SpectralField(g, rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape))
    f = to_spatial(F)
    F2 = to_spectral(f)
    round_err = float(
        np.linalg.norm(F2.coeffs - F.coeffs) / np.linalg.norm(F.coeffs)
    )
    planch_err = abs(f.l2_norm() - F.l2_norm()) / F.l2_norm()
    wall = time.monotonic() - t0
    report(
        "transform-exactness",
        round_err <= 1e-12 and planch_err <= 1e-12 and wall < 5.0,
        f"roundtrip {round_err:.2e}, plancherel {planch_err:.2e}, {wall:.2f}s",
    )


def test_propagator_exactness():
    g = torus_grid((2 * math.pi,) * 3, (16,) * 3)
    w = plane_wave(g, (1, 0, 0))
    phase = free_propagate(w, math.pi).coeffs[1, 0, 0]
    phase_err = abs(phase + 1.0)
    rng = np.random.default_rng(7)
    F = SpectralField(g, rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape))
    ab = free_propagate(free_propagate(F, 0.37), 0.41)
    once = free_propagate(F, 0.78)
    group_err = float(np.max(np.abs(ab.coeffs - once.coeffs)) / np.max(np.abs(F.coeffs)))
    report(
        "propagator-exactness",
        phase_err <= 1e-12 and group_err <= 1e-12,
        f"phase {phase_err:.2e}, group law {group_err:.2e}",
    )


def test_constant_solution_oracle():
    g = torus_grid((1.0,) * 3, (16,) * 3)
    u0 = constant_field(g, 1.0)
    traj = evolve(u0, EvolutionConfig(dt=1e-3, t_end=1.0, record_stride=1000))
    final = to_spatial(traj.snapshots[-1]).values
    err = float(np.max(np.abs(final - cmath.exp(-1j))))
    report("constant-solution", err <= 1e-12, f"max deviation {err:.2e}")


def _conservation_data(g):
    raw = band_limited_data(g, 2.0, 31, 1.0)
    c = raw.coeffs.copy()
    kx = g.xi_mesh[0]
    c[np.broadcast_to(kx > 0, g.shape)] *= 2.0  # asymmetry for nonzero momentum
    f = SpectralField(g, c)
    return SpectralField(g, 0.5 * f.coeffs / f.l2_norm())


def test_conservation():
    t0 = time.monotonic()
    g = torus_grid((1.0,) * 3, (32,) * 3)
    u0 = _conservation_data(g)
    m0, p0 = mass(u0), momentum(u0)
    traj = evolve(u0, EvolutionConfig(dt=1e-3, t_end=2.0, record_stride=200))
    mass_drift = max(abs(mass(s) - m0) for s in traj.snapshots) / m0
    p_scale = float(np.linalg.norm(p0))
    mom_drift = max(
        float(np.linalg.norm(momentum(s) - p0)) for s in traj.snapshots
    ) / p_scale

    def e_drift(dt):
        tr = evolve(u0, EvolutionConfig(dt=dt, t_end=0.5, record_stride=round(0.5 / dt)))
        return abs(energy(tr.snapshots[-1]) - energy(tr.snapshots[0]))

    ratio = e_drift(2e-3) / e_drift(1e-3)
    wall = time.monotonic() - t0
    report(
        "conservation",
        mass_drift <= 1e-11 and mom_drift <= 1e-9 and 3.4 <= ratio <= 4.6,
        f"mass {mass_drift:.2e}, momentum {mom_drift:.2e}, dt-ratio {ratio:.2f}, {wall:.0f}s",
    )


def test_multiplier_bounds():
    t0 = time.monotonic()
    g = torus_grid((1.0,) * 3, (32,) * 3)
    xi = g.xi_abs[~g.nyquist_mask]
    s = 5 / 6
    ok = True
    worst = {}
    for N in (8.0, 16.0, 32.0):
        m = i_symbol(xi, N, s)
        prod = m * (1.0 + xi**2) ** ((1 - s) / 2)
        lo, hi = float(np.min(prod)), float(np.max(prod))
        rep = check_ibasic(g, N, s, 1 / 6)
        ok = ok and lo >= 1.0 - 1e-12 and hi <= 3.0 * N ** (1 - s) and rep["max_ratio"] <= 4.0
        worst[N] = (lo, hi / N ** (1 - s), rep["max_ratio"])
    wall = time.monotonic() - t0
    report(
        "multiplier-bounds",
        ok and wall < 10.0,
        f"sandwich/ibasic per N: {worst}, {wall:.2f}s",
    )


def test_dealiasing_oracle():
    from test_dynamics import band_limited, brute_force_cubic
    from waveguide_nls.dynamics import cubic_term

    g = torus_grid((1.0,) * 3, (16,) * 3)
    F = band_limited(g, 3, seed=5)
    out = to_spectral(cubic_term(to_spatial(F), dealias=True))
    oracle = brute_force_cubic(g, F, 3)
    scale = float(np.max(np.abs(oracle)))
    worst = 0.0
    for mx in range(-7, 8):
        for my in range(-7, 8):
            for mz in range(-7, 8):
                worst = max(
                    worst,
                    abs(out.coeffs[mx % 16, my % 16, mz % 16] - oracle[mx + 9, my + 9, mz + 9]),
                )
    report("dealiasing-oracle", worst <= 1e-12 * scale, f"max dev {worst/scale:.2e} rel")


def test_xsb_separability():
    g = torus_grid((2 * math.pi,) * 3, (12,) * 3)
    rng = np.random.default_rng(12)
    u0 = SpectralField(g, rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape))
    w = WindowSpec(0.0, 1.0)
    n_t = 256
    traj = free_flow_trajectory(u0, 0.0, 1.0 - 1.0 / n_t, n_t)
    hb = w.hb_norm(0.6, 4096)
    worst = 0.0
    for s in (0.0, 1.0):
        got = xsb_norm(traj, s, 0.6, w)
        ref = sobolev_norm(u0, s) * hb
        worst = max(worst, abs(got - ref) / ref)
    report("xsb-separability", worst <= 0.01, f"worst rel dev {worst:.4f}")


def test_bilinear_sweep():
    t0 = time.monotonic()
    results = {}
    g3 = torus_grid((1.0,) * 3, (64,) * 3)
    rep3 = bilinear_sweep(g3, [8.0, 16.0, 32.0], 4.0, t_end=0.99, trials=8, seed=404)
    results["T3"] = rep3
    gw = build_grid(
        3,
        [("euclidean_truncated", 8.0), ("torus", 1.0), ("torus", 1.0)],
        (512, 32, 32),
    )
    repw = bilinear_sweep(gw, [8.0, 16.0, 32.0], 4.0, t_end=0.99, trials=8, seed=505)
    results["RxT2"] = repw
    ok = True
    detail = []
    for tag, rep in results.items():
        mx = rep.ratios["max_ratio_over_bound"]
        trend = rep.ratios["trend_non_increasing_x2"]
        ok = ok and mx <= 4.0 and trend
        detail.append(f"{tag}: max ratio/bound {mx:.3f}, trend x2 {trend}")
    wall = time.monotonic() - t0
    ok = ok and wall < 15 * 60
    report("bilinear-sweep", ok, "; ".join(detail) + f", {wall:.0f}s")


def test_almost_conservation():
    t0 = time.monotonic()
    g = torus_grid((1.0,) * 3, (64,) * 3)
    u0 = hs_tail_data(g, 0.85, 123, 0.2)
    rep = almost_conservation_experiment(
        g, 0.85, [4.0, 8.0, 16.0, 32.0], u0, t_loc=0.5, dt=2.5e-5, record_stride=1000
    )
    fit = rep.fits["drift_vs_n"]

    null_a = almost_conservation_experiment(
        g, 1.0, [4.0, 8.0, 16.0, 32.0], u0, t_loc=0.25, dt=2e-4, record_stride=250
    )
    slope_a = null_a.fits["drift_vs_n"]["slope"] if "drift_vs_n" in null_a.fits else 0.0

    ub = band_limited_data(g, 2.0, 7, 0.5)
    null_b = almost_conservation_experiment(
        g, 0.85, [4.0, 8.0, 16.0, 32.0], ub, t_loc=0.25, dt=2e-4, record_stride=250
    )
    slope_b = null_b.fits["drift_vs_n"]["slope"]
    wall = time.monotonic() - t0
    ok = (
        fit["slope"] <= -0.8
        and fit["r2"] >= 0.9
        and abs(slope_a) <= 0.1
        and abs(slope_b) <= 0.1
        and wall < 20 * 60
    )
    report(
        "almost-conservation",
        ok,
        f"slope {fit['slope']:.3f}, r2 {fit['r2']:.3f}, nulls {slope_a:.3f}/{slope_b:.3f}, "
        f"floor {rep.ratios['plain_energy_drift']:.2e}, {wall:.0f}s",
    )


def test_dmod_drift():
    t0 = time.monotonic()
    g = torus_grid((1.0,) * 3, (64,) * 3)
    u0 = hs_tail_data(g, 0.85, 123, 0.2)
    rep = dmod_drift_experiment(
        g, [4.0, 8.0, 16.0, 32.0], u0, t_loc=0.5, dt=2.5e-5, record_stride=1000
    )
    fit = rep.fits["drift_vs_n"]
    wall = time.monotonic() - t0
    ok = fit["slope"] <= -0.8 and fit["r2"] >= 0.9 and wall < 20 * 60
    report(
        "dmod-drift",
        ok,
        f"slope {fit['slope']:.3f}, r2 {fit['r2']:.3f}, "
        f"surrogates {rep.ratios['surrogate_sum']}, {wall:.0f}s",
    )


def test_schedule_calculator():
    r56 = imethod_schedule(Fraction(5, 6), 16.0)
    r1112 = imethod_schedule(Fraction(11, 12), 16.0)
    r1 = imethod_schedule(Fraction(1), 16.0)
    ok = (
        r56.subthreshold
        and r56.t_exponent == 0
        and r1112.lambda_exponent == Fraction(1, 5)
        and r1112.t_exponent == Fraction(3, 5)
        and r1112.energy_exponent == Fraction(1, 3)
        and (r1.lambda_exponent, r1.t_exponent, r1.energy_exponent) == (0, 1, 0)
    )
    report(
        "schedule-calculator",
        ok,
        f"5/6 flagged, 11/12 -> (1/5, 3/5, {r1112.energy_exponent}), 1 -> (0, 1, 0)",
    )


def test_scaling_symmetry():
    g = torus_grid((2 * math.pi,) * 3, (16,) * 3)
    u0 = band_limited_data(g, 0.4, 3, 0.5)
    err = scaling_check(u0, 2.0, 0.5, 1e-3)
    report("scaling-symmetry", err <= 1e-8, f"rel error {err:.2e}")


def test_growth_envelope():
    t0 = time.monotonic()
    g = torus_grid((2 * math.pi,) * 3, (32,) * 3)
    sups = {}
    exps = {}
    for a in (1.0, 4.0):
        u0 = growth_data(g, a, 99)
        rep = sobolev_growth_experiment(g, u0, t_end=50.0, dt=5e-4, delta=0.1, record_stride=500)
        sups[a] = rep.ratios["sup_envelope_ratio"]
        exps[a] = rep.fits["h2_growth"]["slope"]
    agree = max(sups.values()) / min(sups.values())
    wall = time.monotonic() - t0
    ok = (
        all(np.isfinite(v) for v in sups.values())
        and agree <= 2.0
        and all(e <= 1.1 for e in exps.values())
        and wall < 20 * 60
    )
    report(
        "growth-envelope",
        ok,
        f"sup ratios {sups}, A-agreement x{agree:.2f}, H2 exponents {exps}, {wall:.0f}s",
    )
