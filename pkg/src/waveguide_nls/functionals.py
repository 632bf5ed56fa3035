"""Scalar diagnostics: conserved quantities, Sobolev norms, modified
energies, space-time Lebesgue norms and the windowed Bourgain norm.

All quadratures follow the grid module's normalization: spatial sums carry
the cell volume h, spectral sums the frequency weight w. Quartic integrals
are evaluated on the 2x-padded lattice, where they are alias-free for
band-limited fields.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .dynamics import Trajectory, dealiased_spatial, _padded_grid
from .errors import EmptyTrajectory, InsufficientSampling, WindowNotCovered
from .grid import SpatialField, SpectralField, to_spectral
from .multipliers import d_symbol, i_symbol, smoothstep


def _spectral(f) -> SpectralField:
    return f if isinstance(f, SpectralField) else to_spectral(f)


def mass(f) -> float:
    """Discrete integral of |u|^2."""
    n = f.l2_norm()
    return n * n


def momentum(f) -> np.ndarray:
    """Im integral of conj(u) grad u, evaluated spectrally as w * sum xi |u_hat|^2."""
    F = _spectral(f)
    dens = kernels.abs2(F.coeffs)
    w = F.grid.freq_weight
    return np.array(
        [w * float(np.sum(g * dens)) for g in F.grid.xi_mesh]
    )


def quartic_integral(f, dealias: bool = True) -> float:
    """Integral of |u|^4 (alias-free on the padded lattice by default)."""
    F = _spectral(f)
    if dealias:
        up = dealiased_spatial(F.grid, F.coeffs)
        return _padded_grid(F.grid).cell_volume * float(np.sum(kernels.abs4(up)))
    u = f.values if isinstance(f, SpatialField) else None
    if u is None:
        from .grid import spatial_from_spectral_array

        u = spatial_from_spectral_array(F.grid, F.coeffs)
    return F.grid.cell_volume * float(np.sum(kernels.abs4(u)))


def gradient_energy(f) -> float:
    """Integral of |grad u|^2 via the spectral symbol |xi|^2."""
    F = _spectral(f)
    return F.grid.freq_weight * float(np.sum(F.grid.xi_sq * kernels.abs2(F.coeffs)))


def energy(f, dealias: bool = True) -> float:
    """E(u) = 1/2 int |grad u|^2 + 1/4 int |u|^4."""
    return 0.5 * gradient_energy(f) + 0.25 * quartic_integral(f, dealias)


def sobolev_norm(f, s: float) -> float:
    """H^s norm: ||<xi>^s u_hat||_2 under the fixed normalization."""
    F = _spectral(f)
    weight = (1.0 + F.grid.xi_sq) ** s
    return math.sqrt(F.grid.freq_weight * float(np.sum(weight * kernels.abs2(F.coeffs))))


def _modified_energy(f, sym_values: np.ndarray, dealias: bool = True) -> float:
    F = _spectral(f)
    mult = SpectralField(F.grid, F.coeffs * sym_values)
    return energy(mult, dealias)


def modified_energy_I(f, N: float, s: float, dealias: bool = True) -> float:
    """E(Iu) with the smoothing multiplier at scale N, index s."""
    F = _spectral(f)
    return _modified_energy(f, i_symbol(F.grid.xi_abs, N, s), dealias)


def modified_energy_D(f, N: float, dealias: bool = True) -> float:
    """E(Du) with the roughening multiplier at scale N."""
    F = _spectral(f)
    return _modified_energy(f, d_symbol(F.grid.xi_abs, N), dealias)


@dataclass(frozen=True)
class DiagnosticsRecord:
    t: float
    mass: float
    energy: float
    momentum: tuple
    h1: float
    h2: float
    e_i: Optional[float] = None
    e_d: Optional[float] = None


def diagnostics(
    t: float,
    f,
    i_params: Optional[tuple] = None,
    d_scale: Optional[float] = None,
) -> DiagnosticsRecord:
    """Standard per-snapshot record; i_params = (N, s) enables E(Iu),
    d_scale = N enables E(Du)."""
    F = _spectral(f)
    return DiagnosticsRecord(
        t=t,
        mass=mass(F),
        energy=energy(F),
        momentum=tuple(momentum(F)),
        h1=sobolev_norm(F, 1.0),
        h2=sobolev_norm(F, 2.0),
        e_i=None if i_params is None else modified_energy_I(F, *i_params),
        e_d=None if d_scale is None else modified_energy_D(F, d_scale),
    )


def spatial_lq_norm(f, q) -> float:
    """Spatial L^q norm by collocation quadrature (max norm for q = inf)."""
    F = _spectral(f)
    from .grid import spatial_from_spectral_array

    u = spatial_from_spectral_array(F.grid, F.coeffs)
    a = np.sqrt(kernels.abs2(u))
    if q == math.inf:
        return float(np.max(a))
    h = F.grid.cell_volume
    return float((h * np.sum(a**q)) ** (1.0 / q))


def spacetime_norm(traj: Trajectory, p, q) -> float:
    """L^p_t L^q_x by composite trapezoid in t (max over samples for p = inf)."""
    if len(traj) == 0:
        raise EmptyTrajectory("trajectory holds no snapshots")
    vals = np.array([spatial_lq_norm(s, q) for s in traj.snapshots])
    if p == math.inf:
        return float(np.max(vals))
    if len(traj) == 1:
        raise EmptyTrajectory("time quadrature needs at least two samples")
    return float(np.trapezoid(vals**p, traj.times) ** (1.0 / p))


@dataclass(frozen=True)
class WindowSpec:
    """Smooth time window on (t0, t1): identically zero on the outer
    eighths, 1 on the middle half, smoothstep blends between."""

    t0: float
    t1: float

    def __post_init__(self):
        if not self.t1 > self.t0:
            raise ValueError("need t1 > t0")

    @property
    def length(self) -> float:
        return self.t1 - self.t0

    def chi(self, t):
        L = self.length
        rise = smoothstep((np.asarray(t, dtype=float) - (self.t0 + L / 8)) / (L / 8))
        fall = smoothstep(((self.t1 - L / 8) - np.asarray(t, dtype=float)) / (L / 8))
        return rise * fall

    def hb_norm(self, b: float, n_samples: int) -> float:
        """||chi||_{H^b} on this window's periodic tau lattice with
        n_samples uniform quadrature points."""
        ts = self.t0 + np.arange(n_samples) * (self.length / n_samples)
        ch = self.chi(ts)
        ht = self.length / n_samples
        chat = ht * np.fft.fft(ch)
        tau = 2.0 * np.pi * np.fft.fftfreq(n_samples, d=ht)
        wt = 1.0 / self.length
        return math.sqrt(
            wt * float(np.sum((1.0 + tau**2) ** b * np.abs(chat) ** 2))
        )


def xsb_norm(traj: Trajectory, s: float, b: float, window: WindowSpec) -> float:
    """Windowed Bourgain norm ||<xi>^s <tau>^b V(xi,tau)||_2 where V is the
    time-DFT over the window of chi(t) times the interaction-picture field
    exp(+it|xi|^2) u_hat(t, xi)."""
    if len(traj) < 2:
        raise EmptyTrajectory("need a sampled trajectory")
    dt = traj.dt
    grid = traj.grid
    if dt * grid.xi_max**2 > 0.5:
        raise InsufficientSampling(
            f"stride {dt:.3e} too coarse for xi_max^2 = {grid.xi_max**2:.3e}"
        )
    eps = 1e-9 * max(1.0, abs(window.t1))
    if traj.times[0] > window.t0 + eps or traj.times[-1] + eps < window.t1 - dt:
        raise WindowNotCovered(
            f"trajectory [{traj.times[0]}, {traj.times[-1]}] does not cover "
            f"window [{window.t0}, {window.t1})"
        )
    sel = np.nonzero(
        (traj.times >= window.t0 - eps) & (traj.times < window.t1 - eps)
    )[0]
    n_w = len(sel)
    if n_w < 4:
        raise InsufficientSampling("window contains fewer than 4 samples")

    ts = traj.times[sel]
    ch = window.chi(ts)
    ht = window.length / n_w
    tau = 2.0 * np.pi * np.fft.fftfreq(n_w, d=ht)
    tau_w = (1.0 + tau**2) ** b
    xi_w = (1.0 + grid.xi_sq) ** s

    # time-DFT in column chunks to bound memory
    npts = int(np.prod(grid.shape))
    chunk = max(1, (1 << 22) // max(n_w, 1))
    total = 0.0
    flat_xi_w = xi_w.reshape(npts)
    phases = [np.exp(+1j * t * grid.xi_sq).reshape(npts) for t in ts]
    coeffs = [traj.snapshots[i].coeffs.reshape(npts) for i in sel]
    for start in range(0, npts, chunk):
        end = min(npts, start + chunk)
        block = np.empty((n_w, end - start), dtype=np.complex128)
        for row in range(n_w):
            block[row] = coeffs[row][start:end] * phases[row][start:end] * ch[row]
        V = ht * np.fft.fft(block, axis=0)
        total += float(np.sum(tau_w[:, None] * flat_xi_w[None, start:end] * kernels.abs2(V)))
    wt = 1.0 / window.length
    return math.sqrt(wt * grid.freq_weight * total)
