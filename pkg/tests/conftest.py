import numpy as np
import pytest

from waveguide_nls.grid import SpectralField, build_grid, torus_grid


def random_spectral(grid, seed=0, scale=1.0):
    """Valid random spectral field (Nyquist-free by construction)."""
    rng = np.random.default_rng(seed)
    c = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    return SpectralField(grid, scale * c)


def plane_wave(grid, mode, amplitude=1.0):
    """Spectral field with a single coefficient at the given mode index."""
    c = np.zeros(grid.shape, dtype=np.complex128)
    c[tuple(m % s for m, s in zip(mode, grid.shape))] = amplitude
    return SpectralField(grid, c)


def constant_field(grid, value=1.0):
    """u identically equal to value (single zero-frequency coefficient)."""
    c = np.zeros(grid.shape, dtype=np.complex128)
    c[(0,) * grid.d] = value * grid.volume
    return SpectralField(grid, c)


@pytest.fixture
def unit_torus_16():
    return torus_grid((1.0, 1.0, 1.0), (16, 16, 16))


@pytest.fixture
def torus_2pi_16():
    return torus_grid((2 * np.pi,) * 3, (16, 16, 16))


@pytest.fixture
def waveguide_grid():
    return build_grid(
        3, [("euclidean_truncated", 16.0), ("torus", 1.0), ("torus", 1.0)], (64, 16, 16)
    )
