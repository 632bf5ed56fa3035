import math

import numpy as np
import pytest

from conftest import constant_field, plane_wave, random_spectral
from waveguide_nls.dynamics import Trajectory, free_flow_trajectory
from waveguide_nls.errors import EmptyTrajectory, InsufficientSampling, WindowNotCovered
from waveguide_nls.functionals import (
    diagnostics,
    energy,
    gradient_energy,
    mass,
    modified_energy_D,
    modified_energy_I,
    momentum,
    sobolev_norm,
    spacetime_norm,
    WindowSpec,
    xsb_norm,
)
from waveguide_nls.grid import SpatialField, SpectralField, to_spatial, torus_grid


def test_constant_field_conserved_quantities(unit_torus_16):
    c = 1.2 - 0.7j
    f = constant_field(unit_torus_16, c)
    assert mass(f) == pytest.approx(abs(c) ** 2, rel=1e-12)
    assert energy(f) == pytest.approx(0.25 * abs(c) ** 4, rel=1e-12)
    assert np.max(np.abs(momentum(f))) < 1e-12


def test_real_field_zero_momentum(unit_torus_16):
    F = random_spectral(unit_torus_16, 1)
    real_vals = to_spatial(F).values.real.astype(np.complex128)
    p = momentum(SpatialField(unit_torus_16, real_vals))
    assert np.max(np.abs(p)) <= 1e-12 * mass(SpatialField(unit_torus_16, real_vals))


def test_plane_wave_momentum(torus_2pi_16):
    g = torus_2pi_16
    a = 0.7 + 0.2j
    w = plane_wave(g, (2, 1, 0), a * g.volume)
    p = momentum(w)
    xi0 = np.array([2.0, 1.0, 0.0])
    assert np.allclose(p, abs(a) ** 2 * g.volume * xi0, rtol=1e-12)


def test_sobolev_norm_basics(unit_torus_16):
    f = random_spectral(unit_torus_16, 2)
    assert sobolev_norm(f, 0.0) == pytest.approx(f.l2_norm(), rel=1e-12)
    c = constant_field(unit_torus_16, 2.0 + 1j)
    for s in (0.0, 0.5, 2.0):
        assert sobolev_norm(c, s) == pytest.approx(abs(2.0 + 1j), rel=1e-12)


def test_sobolev_plane_wave(torus_2pi_16):
    g = torus_2pi_16
    a = 1.5
    w = plane_wave(g, (3, 0, 0), a * g.volume)
    for s in (0.5, 1.0, 2.0):
        assert sobolev_norm(w, s) == pytest.approx(
            (1 + 9.0) ** (s / 2) * a * math.sqrt(g.volume), rel=1e-12
        )


def test_sobolev_monotone_in_s(torus_2pi_16):
    # mass concentrated on |xi| >= 1 shell
    g = torus_2pi_16
    c = np.zeros(g.shape, dtype=np.complex128)
    c[2, 3, 1] = 1.0
    c[5, 0, 2] = 0.5
    f = SpectralField(g, c)
    norms = [sobolev_norm(f, s) for s in (0.0, 0.3, 0.7, 1.0, 1.5)]
    assert all(b >= a for a, b in zip(norms, norms[1:]))


def test_modified_energy_reduces_to_energy(unit_torus_16):
    f = random_spectral(unit_torus_16, 3)
    n_big = 10 * unit_torus_16.xi_max
    assert modified_energy_I(f, n_big, 0.7) == pytest.approx(energy(f), rel=1e-12)
    assert modified_energy_D(f, n_big) == pytest.approx(energy(f), rel=1e-12)


def test_modified_energy_constant(unit_torus_16):
    c = constant_field(unit_torus_16, 1.1)
    for n in (1.0, 8.0):
        assert modified_energy_I(c, n, 0.8) == pytest.approx(0.25 * 1.1**4, rel=1e-12)
        assert modified_energy_D(c, n) == pytest.approx(0.25 * 1.1**4, rel=1e-12)


def test_modified_gradient_energy_ordering(unit_torus_16):
    from waveguide_nls.multipliers import apply_D, apply_I

    f = random_spectral(unit_torus_16, 4)
    assert gradient_energy(apply_I(f, 8.0, 0.7)) <= gradient_energy(f) * (1 + 1e-12)
    assert gradient_energy(apply_D(f, 8.0)) >= gradient_energy(f) * (1 - 1e-12)


def test_modified_energy_monotone_convergence(unit_torus_16):
    f = random_spectral(unit_torus_16, 5)
    e = energy(f)
    diffs = [abs(modified_energy_I(f, n, 0.8) - e) for n in (8.0, 16.0, 32.0, 64.0)]
    assert all(b <= a + 1e-13 for a, b in zip(diffs, diffs[1:]))


def test_diagnostics_record(unit_torus_16):
    f = random_spectral(unit_torus_16, 6)
    rec = diagnostics(0.5, f, i_params=(8.0, 0.8), d_scale=8.0)
    assert rec.t == 0.5 and rec.mass > 0 and np.isfinite(rec.h2)
    assert rec.e_i is not None and rec.e_d is not None


# ------------------------------------------------------------ spacetime norms


def test_spacetime_constant(unit_torus_16):
    c = constant_field(unit_torus_16, 0.8)
    times = np.linspace(0.0, 1.0, 9)
    traj = Trajectory(unit_torus_16, times, tuple([c] * 9))
    for p, q in ((10 / 3, 10 / 3), (30 / 7, 30 / 7), (7.5, 7.5), (math.inf, math.inf)):
        assert spacetime_norm(traj, p, q) == pytest.approx(0.8, rel=1e-10)


def test_spacetime_single_snapshot_sup(unit_torus_16):
    f = random_spectral(unit_torus_16, 7)
    traj = Trajectory(unit_torus_16, np.array([0.0]), (f,))
    from waveguide_nls.functionals import spatial_lq_norm

    assert spacetime_norm(traj, math.inf, 2.0) == pytest.approx(
        spatial_lq_norm(f, 2.0), rel=1e-12
    )
    with pytest.raises(EmptyTrajectory):
        spacetime_norm(Trajectory(unit_torus_16, np.array([]), ()), 2, 2)


def test_spacetime_free_plane_wave(torus_2pi_16):
    g = torus_2pi_16
    a = 1.3
    w = plane_wave(g, (1, 1, 0), a * g.volume)
    traj = free_flow_trajectory(w, 0.0, 1.0, 33)
    vol = g.volume
    # |u| = a everywhere, for all t
    expect = a * vol ** (3 / 10) * 1.0  # (vol * T)^(1/p) with p = 10/3, T = 1
    assert spacetime_norm(traj, 10 / 3, 10 / 3) == pytest.approx(expect, rel=1e-10)


# ------------------------------------------------------------------ xsb norm


def small_grid():
    return torus_grid((2 * np.pi,) * 3, (12,) * 3)


def test_xsb_free_solution_factorization():
    g = small_grid()
    u0 = random_spectral(g, 8)
    w = WindowSpec(0.0, 1.0)
    n_t = 256
    traj = free_flow_trajectory(u0, 0.0, 1.0 - 1.0 / n_t, n_t)
    for s in (0.0, 1.0):
        got = xsb_norm(traj, s, 0.6, w)
        oracle = sobolev_norm(u0, s) * w.hb_norm(0.6, 4096)
        assert got == pytest.approx(oracle, rel=0.01)


def test_xsb_single_mode():
    g = small_grid()
    a = 2.0
    u0 = plane_wave(g, (2, 1, 0), a * g.volume)
    w = WindowSpec(0.0, 1.0)
    n_t = 256
    traj = free_flow_trajectory(u0, 0.0, 1.0 - 1.0 / n_t, n_t)
    got = xsb_norm(traj, 1.0, 0.6, w)
    oracle = sobolev_norm(u0, 1.0) * w.hb_norm(0.6, 4096)
    assert got == pytest.approx(oracle, rel=0.01)


class _FlatWindow:
    """Degenerate chi == 1 window (endpoint smoothness waived)."""

    def __init__(self, t0, t1):
        self.t0, self.t1 = t0, t1
        self.length = t1 - t0

    def chi(self, t):
        return np.ones_like(np.asarray(t, dtype=float))


def test_xsb_degenerate_is_l2tx():
    g = small_grid()
    u0 = random_spectral(g, 9)
    n_t = 256
    traj = free_flow_trajectory(u0, 0.0, 1.0 - 1.0 / n_t, n_t)
    got = xsb_norm(traj, 0.0, 0.0, _FlatWindow(0.0, 1.0))
    # free flow preserves the L2 norm, so L2_{t,x} over [0,1) is ||u0||_2
    assert got == pytest.approx(u0.l2_norm(), rel=1e-6)


def test_xsb_guards():
    g = small_grid()
    u0 = random_spectral(g, 10)
    w = WindowSpec(0.0, 1.0)
    short = free_flow_trajectory(u0, 0.0, 0.4, 64)
    with pytest.raises(WindowNotCovered):
        xsb_norm(short, 0.0, 0.6, w)
    coarse = free_flow_trajectory(u0, 0.0, 1.0, 8)
    with pytest.raises(InsufficientSampling):
        xsb_norm(coarse, 0.0, 0.6, w)


def test_window_chi_shape():
    w = WindowSpec(2.0, 6.0)
    assert w.chi(2.0) == 0.0 and w.chi(6.0) == 0.0
    assert w.chi(2.4) == 0.0  # vanishes identically near endpoints
    assert w.chi(4.0) == 1.0
    assert w.chi(3.0) == 1.0 and w.chi(5.0) == 1.0  # middle half plateau
    mid = w.chi(2.75)
    assert 0.0 < mid < 1.0
