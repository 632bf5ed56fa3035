import math

import numpy as np
import pytest

from conftest import constant_field, plane_wave, random_spectral
from waveguide_nls.errors import EmptyRange
from waveguide_nls.grid import SpectralField, to_spatial, torus_grid
from waveguide_nls.multipliers import (
    apply_D,
    apply_I,
    bessel_power,
    check_ibasic,
    d_symbol,
    dump_symbol_table,
    eta1,
    free_propagate,
    gradient,
    i_operator_symbol,
    i_symbol,
    project_band,
    project_leq,
)


def test_eta1_plateau_support_monotone():
    assert eta1(0.5) == 1.0
    assert eta1(-0.3) == 1.0
    assert eta1(3.0) == 0.0
    assert eta1(-2.5) == 0.0
    assert 0.0 < eta1(1.5) < 1.0
    r = np.linspace(1.0, 2.0, 201)
    vals = eta1(r)
    assert np.all(np.diff(vals) <= 1e-15)


@pytest.mark.parametrize("s", [0.5, 5 / 6, 0.9, 1.0])
def test_i_symbol_plateau_and_tail(s):
    N = 16.0
    assert i_symbol(N / 2, N, s) == 1.0
    assert i_symbol(4 * N, N, s) == pytest.approx((1 / 4) ** (1 - s), rel=1e-14)
    # smooth monotone decrease across the blend
    r = np.linspace(0.5 * N, 4 * N, 400)
    vals = i_symbol(r, N, s)
    assert np.all(np.diff(vals) <= 1e-14)


def test_i_symbol_trivial_cases():
    assert i_symbol(64.0, 16, 5 / 6) == pytest.approx(4 ** (-1 / 6), rel=1e-13)
    assert i_symbol(4 * 16.0, 16, 1.0) == 1.0


def test_d_symbol_plateau_and_tail():
    assert d_symbol(4.0, 8) == 1.0
    assert d_symbol(32.0, 8) == pytest.approx(4.0, rel=1e-14)
    r = np.linspace(4.0, 40.0, 400)
    assert np.all(np.diff(d_symbol(r, 8)) >= -1e-14)


def test_smoothing_sandwich_exhaustive():
    # 1 <= m <xi>^(1-s) <= 3 N^(1-s) over the whole retained lattice
    g = torus_grid((1.0,) * 3, (32,) * 3)
    xi = g.xi_abs[~g.nyquist_mask]
    for N in (8.0, 16.0, 32.0):
        for s in (0.5, 5 / 6, 0.95):
            m = i_symbol(xi, N, s)
            prod = m * (1.0 + xi**2) ** ((1 - s) / 2)
            assert np.min(prod) >= 1.0 - 1e-12
            assert np.max(prod) <= 3.0 * N ** (1 - s)


def test_project_leq_plane_waves(torus_2pi_16):
    g = torus_2pi_16  # xi lattice = integers
    low = plane_wave(g, (1, 0, 0))
    assert np.allclose(project_leq(low, 4.0).coeffs, low.coeffs)
    hi = plane_wave(g, (7, 7, 0))
    assert np.max(np.abs(project_leq(hi, 3.0).coeffs)) == 0.0


def test_project_leq_near_idempotent(torus_2pi_16):
    f = random_spectral(torus_2pi_16, 3)
    p1 = project_leq(f, 4.0)
    p2 = project_leq(p1, 4.0)
    # bounded by sup |eta^2 - eta| * ||f||_2 over the lattice
    from waveguide_nls.multipliers import lp_cutoff_symbol

    sym = lp_cutoff_symbol(4.0).values(torus_2pi_16)
    bound = np.max(np.abs(sym**2 - sym)) * f.l2_norm()
    diff = SpectralField(torus_2pi_16, p2.coeffs - p1.coeffs).l2_norm()
    assert diff <= bound + 1e-12


def test_project_band_telescoping(torus_2pi_16):
    f = random_spectral(torus_2pi_16, 4)
    total = np.zeros(torus_2pi_16.shape, dtype=np.complex128)
    for j in range(1, 5):
        total = total + project_band(f, 2.0**j).coeffs
    expect = project_leq(f, 2.0**4).coeffs - project_leq(f, 1.0).coeffs
    assert np.max(np.abs(total - expect)) < 1e-13


def test_project_band_bounded(torus_2pi_16):
    f = random_spectral(torus_2pi_16, 5)
    assert project_band(f, 4.0).l2_norm() <= (1 + 1e-12) * f.l2_norm()


def test_apply_I_identity_when_N_large(unit_torus_16):
    f = random_spectral(unit_torus_16, 6)
    g = apply_I(f, N=1e6, s=0.6)
    assert np.max(np.abs(g.coeffs - f.coeffs)) < 1e-12


def test_apply_I_plane_wave_scaling(torus_2pi_16):
    w = plane_wave(torus_2pi_16, (4, 0, 0))  # |xi| = 4 = 4N for N=1
    out = apply_I(w, N=1.0, s=5 / 6)
    assert abs(out.coeffs[4, 0, 0] - (1 / 4) ** (1 / 6)) < 1e-13


def test_apply_I_contractive_apply_D_expansive(unit_torus_16):
    f = random_spectral(unit_torus_16, 7)
    assert apply_I(f, 8.0, 0.7).l2_norm() <= f.l2_norm() * (1 + 1e-12)
    assert apply_D(f, 8.0).l2_norm() >= f.l2_norm() * (1 - 1e-12)


def test_free_propagate_phase_and_group_law(torus_2pi_16):
    w = plane_wave(torus_2pi_16, (1, 0, 0))
    out = free_propagate(w, math.pi)
    assert abs(out.coeffs[1, 0, 0] + 1.0) < 1e-12
    f = random_spectral(torus_2pi_16, 8)
    a = free_propagate(free_propagate(f, 0.3), 0.45)
    b = free_propagate(f, 0.75)
    assert np.max(np.abs(a.coeffs - b.coeffs)) < 1e-12
    assert abs(free_propagate(f, 0.0).l2_norm() - f.l2_norm()) < 1e-12


def test_free_propagate_unitary(unit_torus_16):
    f = random_spectral(unit_torus_16, 9)
    for t in (0.1, 1.0, 17.3):
        assert abs(free_propagate(f, t).l2_norm() - f.l2_norm()) <= 1e-12 * f.l2_norm()


def test_bessel_power_roundtrip(unit_torus_16):
    f = random_spectral(unit_torus_16, 10)
    assert np.allclose(bessel_power(f, 0.0).coeffs, f.coeffs)
    back = bessel_power(bessel_power(f, 1.3), -1.3)
    assert np.max(np.abs(back.coeffs - f.coeffs)) <= 1e-12 * np.max(np.abs(f.coeffs))
    assert abs(bessel_power(f, 2.0).coeffs[0, 0, 0] - f.coeffs[0, 0, 0]) < 1e-12


def test_gradient_constant_and_plane_wave(torus_2pi_16):
    c = constant_field(torus_2pi_16, 3.0)
    for comp in gradient(c):
        assert np.max(np.abs(comp.coeffs)) == 0.0
    w = plane_wave(torus_2pi_16, (2, 5, 0))
    gx, gy, gz = gradient(w)
    assert abs(gx.coeffs[2, 5, 0] - 2j) < 1e-13
    assert abs(gy.coeffs[2, 5, 0] - 5j) < 1e-13
    assert abs(gz.coeffs[2, 5, 0]) < 1e-13


def test_gradient_integration_by_parts(unit_torus_16):
    g = unit_torus_16
    a, b = to_spatial(random_spectral(g, 11)), to_spatial(random_spectral(g, 12))
    h = g.cell_volume
    for j in range(3):
        da = gradient(a)[j].values
        db = gradient(b)[j].values
        lhs = h * np.sum(da * np.conj(b.values))
        rhs = -h * np.sum(a.values * np.conj(db))
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


def test_real_symbols_commute_with_conjugation(unit_torus_16):
    g = unit_torus_16
    f = to_spatial(random_spectral(g, 13))
    from waveguide_nls.grid import SpatialField

    conj_first = apply_I(SpatialField(g, np.conj(f.values)), 8.0, 0.8)
    conj_last = apply_I(f, 8.0, 0.8)
    assert np.max(np.abs(conj_first.values - np.conj(conj_last.values))) < 1e-12


def test_check_ibasic_trivial_and_exact():
    g = torus_grid((1.0,) * 3, (16,) * 3)
    rep = check_ibasic(g, 8.0, 1.0, 0.0)  # m == 1, alpha = 0
    assert rep["max_ratio"] == pytest.approx(1.0, abs=1e-12)
    rep2 = check_ibasic(g, 16.0, 5 / 6, 1 / 6)
    assert rep2["max_ratio"] <= 4.0 and rep2["passed"]


def test_check_ibasic_empty_range():
    g = torus_grid((1.0,) * 3, (8,) * 3)
    with pytest.raises(EmptyRange):
        check_ibasic(g, 1e6, 5 / 6, 1 / 6)


def test_dump_symbol_table(tmp_path):
    g = torus_grid((1.0, 1.0), (8, 8))
    path = tmp_path / "sym.txt"
    dump_symbol_table(g, i_operator_symbol(8.0, 0.8), path)
    lines = path.read_text().splitlines()
    kept = (8 - 1) * (8 - 1)  # non-Nyquist lattice points
    assert len(lines) == 1 + kept
    cols = lines[1].split()
    assert len(cols) == 3
