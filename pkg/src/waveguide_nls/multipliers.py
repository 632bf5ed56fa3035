"""Frequency-diagonal operator toolkit.

Smooth cutoffs, Littlewood-Paley projections, the smoothing multiplier
m (1 below N, (N/|xi|)^(1-s) above 2N) and its roughening counterpart
(1 below N, |xi|/N above 2N), Bessel potentials, spectral gradients and
the free Schroedinger propagator exp(-it |xi|^2).

Blend conventions on the transition annulus N < |xi| < 2N: cubic
interpolation of log(symbol) against log(|xi|/N) matching the value and
first derivative of both tail formulas, so the symbol is C^1, monotone
and exact outside (N, 2N). The scalar cutoff eta1 uses the classical
exp(-1/x) partition-of-unity smoothstep on (1, 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import EmptyRange
from .grid import GridSpec, SpatialField, SpectralField, to_spatial, to_spectral

_LN2 = math.log(2.0)

IBASIC_THRESHOLD = 4.0


def _bump(x: np.ndarray) -> np.ndarray:
    """exp(-1/x) for x > 0, 0 otherwise (smooth at 0)."""
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos])
    return out


def smoothstep(x):
    """C-infinity monotone step: 0 for x <= 0, 1 for x >= 1."""
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    a = _bump(arr)
    b = _bump(1.0 - arr)
    out = np.where(
        arr <= 0.0, 0.0, np.where(arr >= 1.0, 1.0, a / np.where(a + b > 0, a + b, 1.0))
    )
    return out.reshape(np.shape(x)) if np.ndim(x) else float(out[0])


def eta1(r):
    """Smooth even cutoff: 1 on |r| <= 1, 0 on |r| >= 2, decreasing between."""
    out = 1.0 - smoothstep(np.abs(np.asarray(r, dtype=float)) - 1.0)
    return out if np.ndim(r) else float(out)


def _log_blend(r: np.ndarray, p: float) -> np.ndarray:
    """exp(H(ln r)) with H the Hermite cubic joining log-tails 0 and p*ln r."""
    x = np.log(r)
    a = 2.0 * p / _LN2
    b = -p / (_LN2 * _LN2)
    return np.exp(x * x * (a + b * x))


def _radial_symbol(xi_abs, n_cut: float, p: float):
    """1 below n_cut, (|xi|/n_cut)^p above 2*n_cut, log-cubic blend between."""
    r = np.atleast_1d(np.asarray(xi_abs, dtype=float)) / n_cut
    out = np.ones_like(r)
    tail = r >= 2.0
    out[tail] = r[tail] ** p
    mid = (r > 1.0) & ~tail
    out[mid] = _log_blend(r[mid], p)
    return out.reshape(np.shape(xi_abs)) if np.ndim(xi_abs) else float(out[0])


def i_symbol(xi_abs, N: float, s: float):
    """Smoothing symbol m(|xi|): 1 for |xi| <= N, (N/|xi|)^(1-s) for |xi| >= 2N."""
    if N < 1:
        raise ValueError(f"need N >= 1, got {N}")
    if not 0.5 <= s <= 1.0:
        raise ValueError(f"need s in [1/2, 1], got {s}")
    return _radial_symbol(xi_abs, float(N), -(1.0 - s))


def d_symbol(xi_abs, N: float):
    """Roughening symbol: 1 for |xi| <= N, |xi|/N for |xi| >= 2N."""
    if N < 1:
        raise ValueError(f"need N >= 1, got {N}")
    return _radial_symbol(xi_abs, float(N), 1.0)


@dataclass(frozen=True)
class Symbol:
    """Named frequency multiplier applied diagonally in frequency."""

    name: str
    params: dict = field(default_factory=dict)
    rule: Callable[[GridSpec], np.ndarray] = None
    real: bool = True

    def values(self, grid: GridSpec) -> np.ndarray:
        v = self.rule(grid)
        if not np.all(np.isfinite(v)):
            raise ValueError(f"symbol {self.name} not finite on the lattice")
        return v


def lp_cutoff_symbol(N: float) -> Symbol:
    """Per-coordinate product cutoff prod_i eta1(xi_i / N)."""

    def rule(grid: GridSpec) -> np.ndarray:
        out = np.ones(grid.shape)
        for g in grid.xi_mesh:
            out = out * eta1(g / N)
        return out

    return Symbol("lp_leq", {"N": N}, rule)


def i_operator_symbol(N: float, s: float) -> Symbol:
    return Symbol("i_operator", {"N": N, "s": s}, lambda g: i_symbol(g.xi_abs, N, s))


def d_operator_symbol(N: float) -> Symbol:
    return Symbol("d_operator", {"N": N}, lambda g: d_symbol(g.xi_abs, N))


def bessel_symbol(s: float) -> Symbol:
    return Symbol("bessel", {"s": s}, lambda g: (1.0 + g.xi_sq) ** (0.5 * s))


def propagator_symbol(t: float) -> Symbol:
    return Symbol(
        "free_propagator", {"t": t}, lambda g: np.exp(-1j * t * g.xi_sq), real=False
    )


def apply_symbol_values(f, values: np.ndarray):
    """Multiply by a precomputed symbol array; preserves the field kind."""
    if isinstance(f, SpectralField):
        return SpectralField(f.grid, f.coeffs * values)
    if isinstance(f, SpatialField):
        F = to_spectral(f)
        return to_spatial(SpectralField(f.grid, F.coeffs * values))
    raise TypeError(f"expected a field, got {type(f)!r}")


def apply_symbol(f, sym: Symbol):
    return apply_symbol_values(f, sym.values(f.grid))


def project_leq(f, N: float):
    """Littlewood-Paley projection P_{<=N} (per-coordinate product cutoff)."""
    if N <= 0:
        raise ValueError("N must be positive")
    return apply_symbol(f, lp_cutoff_symbol(N))


def project_band(f, N: float):
    """Dyadic band P_N f = P_{<=N} f - P_{<=N/2} f."""
    sym = lp_cutoff_symbol(N).values(f.grid) - lp_cutoff_symbol(N / 2).values(f.grid)
    return apply_symbol_values(f, sym)


def apply_I(f, N: float, s: float):
    return apply_symbol(f, i_operator_symbol(N, s))


def apply_D(f, N: float):
    return apply_symbol(f, d_operator_symbol(N))


def bessel_power(f, s: float):
    """Multiply by (1 + |xi|^2)^(s/2)."""
    return apply_symbol(f, bessel_symbol(s))


def free_propagate(f, t: float):
    """Exact free flow: spectral coefficients times exp(-it |xi|^2)."""
    return apply_symbol(f, propagator_symbol(t))


def gradient(f):
    """Spectral gradient: component j is the i*xi_j multiplier. Returns d fields."""
    spectral_in = isinstance(f, SpectralField)
    F = f if spectral_in else to_spectral(f)
    out = []
    for g in f.grid.xi_mesh:
        comp = SpectralField(f.grid, F.coeffs * (1j * g))
        out.append(comp if spectral_in else to_spatial(comp))
    return tuple(out)


def check_ibasic(grid: GridSpec, N: float, s: float, alpha: float) -> dict:
    """Sweep the lattice region |xi| >= N for the symbol bound
    N^alpha <= c * m(|xi|) |xi|^alpha, reporting max N^alpha/(m |xi|^alpha)."""
    if alpha < (1.0 - s) - 1e-12:
        raise ValueError(f"need alpha >= 1-s = {1-s}, got {alpha}")
    keep = (grid.xi_abs >= N) & ~grid.nyquist_mask
    if not np.any(keep):
        raise EmptyRange(f"no lattice frequency with |xi| >= {N}")
    xi = grid.xi_abs[keep]
    m = i_symbol(xi, N, s)
    ratio = (N**alpha) / (m * xi**alpha)
    max_ratio = float(np.max(ratio))
    return {
        "N": N,
        "s": s,
        "alpha": alpha,
        "points": int(keep.sum()),
        "max_ratio": max_ratio,
        "threshold": IBASIC_THRESHOLD,
        "passed": max_ratio <= IBASIC_THRESHOLD,
    }


def dump_symbol_table(grid: GridSpec, sym: Symbol, path) -> None:
    """Write one line per retained lattice point: xi components, symbol value."""
    vals = sym.values(grid)
    keep = ~grid.nyquist_mask
    comps = [np.broadcast_to(g, grid.shape)[keep] for g in grid.xi_mesh]
    flat = vals[keep]
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(f"# symbol {sym.name} params {sym.params}\n")
        for row in range(flat.size):
            cols = " ".join(f"{c[row]:.17g}" for c in comps)
            v = flat[row]
            if sym.real:
                fh.write(f"{cols} {v.real if np.iscomplexobj(flat) else v:.17g}\n")
            else:
                fh.write(f"{cols} {v.real:.17g} {v.imag:.17g}\n")
