"""Pseudo-spectral simulator and probe suite for the defocusing cubic
nonlinear Schroedinger equation on three-dimensional product spaces."""

__version__ = "0.1.0"

from .grid import (  # noqa: F401
    Direction,
    GridSpec,
    SpatialField,
    SpectralField,
    boundary_mass_fraction,
    build_grid,
    to_spatial,
    to_spectral,
    torus_grid,
)
