"""Experiment layer: measured estimates and their bound comparisons.

Frequency-scale convention: probe-level dyadic parameters (N, N1, N2, M)
live on the dual-integer scale k = xi / (2 pi), matching the exponential
exp(2 pi i k.z) on the unit torus, where k is an integer vector and the
torus of period lam carries the refined lattice k in Z/lam. Core modules
(multipliers, functionals) take raw lattice frequencies xi; conversions
multiply by 2 pi and are confined to this module.

Annulus shells are Euclidean: N/2 < |k| <= N.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .dynamics import EvolutionConfig, evolve, scaling_flow_error
from .errors import EmptyShell, ScheduleDomainError, UnderResolved
from .fitting import fit_loglog
from .functionals import (
    energy,
    mass,
    modified_energy_D,
    modified_energy_I,
    sobolev_norm,
)
from .grid import (
    GridSpec,
    SpectralField,
    ifftn,
    spatial_from_spectral_array,
    to_spectral,
)
from .multipliers import d_symbol, lp_cutoff_symbol
from .rng import complex_gaussian, derive_seed, uniform

TWO_PI = 2.0 * math.pi
DEFAULT_T = 0.99

# exponents alpha(p) of the reference slopes <N>^alpha for the free-flow
# L^p_{t,x} ratios; alpha(p) = (1 - 10/(3p)) * 3/2
STRICHARTZ_ALPHA = {
    "10/3": 0.0,
    "30/7": 1.0 / 3.0,
    "15/2": 5.0 / 6.0,
    "inf": 1.5,
}
STRICHARTZ_P = {"10/3": 10.0 / 3.0, "30/7": 30.0 / 7.0, "15/2": 7.5, "inf": math.inf}


@dataclass(frozen=True)
class AnnulusDataSpec:
    """Unit-L2 Gaussian data supported on the shell N/2 < |k| <= N."""

    n: float
    seed: int


@dataclass
class ProbeReport:
    experiment: str
    grid: dict
    params: dict
    points: list = field(default_factory=list)
    fits: dict = field(default_factory=dict)
    ratios: dict = field(default_factory=dict)
    seed: int = 0
    wall_time_s: float = 0.0
    notes: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "grid": self.grid,
            "params": self.params,
            "points": self.points,
            "fits": self.fits,
            "ratios": self.ratios,
            "seed": self.seed,
            "wall_time_s": self.wall_time_s,
            "notes": self.notes,
        }


def k_sq(grid: GridSpec) -> np.ndarray:
    return grid.xi_sq / (TWO_PI * TWO_PI)


def nyquist_k(grid: GridSpec) -> float:
    """Smallest per-direction Nyquist frequency on the k scale."""
    return min(m / (2.0 * p) for m, p in zip(grid.modes, grid.periods))


def lattice_k_max(grid: GridSpec) -> float:
    return grid.xi_max / TWO_PI


def grid_lambda(grid: GridSpec) -> float:
    """Torus period entering the bound formulas (min over torus directions,
    falling back to the min period on a pure-Euclidean grid)."""
    torus = [d.period for d in grid.directions if d.kind == "torus"]
    return min(torus) if torus else min(grid.periods)


def shell_mask(grid: GridSpec, n: float) -> np.ndarray:
    kk = k_sq(grid)
    return (kk > (0.5 * n) ** 2) & (kk <= n * n) & ~grid.nyquist_mask


def random_annulus_data(grid: GridSpec, spec: AnnulusDataSpec) -> SpectralField:
    mask = shell_mask(grid, spec.n)
    idx = np.nonzero(mask.ravel())[0]
    if idx.size == 0:
        raise EmptyShell(f"no lattice point in shell {spec.n/2} < |k| <= {spec.n}")
    flat = np.zeros(int(np.prod(grid.shape)), dtype=np.complex128)
    flat[idx] = complex_gaussian(spec.seed, idx)
    coeffs = flat.reshape(grid.shape)
    norm = math.sqrt(grid.freq_weight * float(np.sum(kernels.abs2(coeffs))))
    coeffs /= norm
    return SpectralField(grid, coeffs)


def hs_tail_data(grid: GridSpec, s: float, seed: int, amplitude: float = 1.0) -> SpectralField:
    """Generic rough-data surrogate: coefficients <k>^-(s + 3/2 + 0.01) with
    deterministic random phases on every retained mode."""
    kk = k_sq(grid)
    decay = (1.0 + kk) ** (-(s + 1.51) / 2.0)
    idx = np.arange(int(np.prod(grid.shape)))
    theta = TWO_PI * uniform(seed, idx, 3).reshape(grid.shape)
    coeffs = amplitude * decay * (np.cos(theta) + 1j * np.sin(theta))
    coeffs[grid.nyquist_mask] = 0.0
    return SpectralField(grid, coeffs)


def band_limited_data(grid: GridSpec, k_max: float, seed: int, amplitude: float = 1.0) -> SpectralField:
    """Unit-L2 (times amplitude) Gaussian data on the ball |k| <= k_max."""
    mask = (k_sq(grid) <= k_max * k_max) & ~grid.nyquist_mask
    idx = np.nonzero(mask.ravel())[0]
    if idx.size == 0:
        raise EmptyShell(f"no lattice point with |k| <= {k_max}")
    flat = np.zeros(int(np.prod(grid.shape)), dtype=np.complex128)
    flat[idx] = complex_gaussian(seed, idx)
    coeffs = flat.reshape(grid.shape)
    norm = math.sqrt(grid.freq_weight * float(np.sum(kernels.abs2(coeffs))))
    coeffs *= amplitude / norm
    return SpectralField(grid, coeffs)


def growth_data(grid: GridSpec, target_h2: float, seed: int) -> SpectralField:
    """Smooth low-mode profile plus a weak tail shell at half Nyquist,
    scaled to the requested H^2 norm. Band edges adapt to the lattice so
    the profile stays resolved on any grid."""
    nyq = nyquist_k(grid)
    core = band_limited_data(grid, nyq / 8.0, derive_seed(seed, 11), 1.0)
    tail = random_annulus_data(grid, AnnulusDataSpec(nyq / 2.0, derive_seed(seed, 12)))
    shape = SpectralField(grid, core.coeffs + 0.05 * tail.coeffs)
    scale = target_h2 / sobolev_norm(shape, 2.0)
    return SpectralField(grid, shape.coeffs * scale)


def bilinear_bound(d: int, lam: float, n1: float, n2: float, eps: float = 0.0) -> float:
    """Closed-form reference D_(lam,N1,N2) times N2^eps, by dimension."""
    if not (1 <= n2 <= n1):
        raise ValueError(f"need 1 <= N2 <= N1, got N1={n1}, N2={n2}")
    if lam <= 0:
        raise ValueError("lam must be positive")
    if d == 2:
        core = math.sqrt(1.0 / lam + n2 / n1)
    elif d == 3:
        core = 1.0 / math.sqrt(lam) + n2 / math.sqrt(n1)
    elif d == 4:
        core = math.sqrt(n2 ** (d - 3) / lam + n2 ** (d - 1) / n1)
    else:
        raise ValueError(f"dimension must be 2, 3 or 4, got {d}")
    return n2**eps * core


def _require_resolved(grid: GridSpec, n: float, what: str) -> None:
    """The shell at N must reach into the retained lattice. Shells truncated
    per direction are admissible data (the bounds are uniform over all data
    supported inside the annulus), so the guard is on the Euclidean lattice
    reach, not per-direction Nyquist."""
    if lattice_k_max(grid) < n:
        raise UnderResolved(
            f"{what}: lattice max |k| = {lattice_k_max(grid):.3g} < N = {n}"
        )


def _free_product_l2tx(
    grid: GridSpec, fu: np.ndarray, fv: np.ndarray, t_end: float, n_t: int
) -> float:
    """|| U(t)u U(t)v ||_{L^2_{t,x}([0,T))} by collocation quadrature in x
    and composite trapezoid in t. Free flow advanced by phase recurrence."""
    ts = np.linspace(0.0, t_end, n_t)
    step = np.exp(-1j * (ts[1] - ts[0]) * grid.xi_sq)
    h = grid.cell_volume
    cu = fu.copy()
    cv = fv.copy()
    vals = np.empty(n_t)
    inv_h = 1.0 / h
    for i in range(n_t):
        pair = np.stack([cu, cv])
        phys = ifftn(pair, axes=tuple(range(1, grid.d + 1)))
        phys *= inv_h
        vals[i] = h * float(np.sum(kernels.product_abs2(phys[0], phys[1])))
        if i < n_t - 1:
            cu *= step
            cv *= step
    return math.sqrt(float(np.trapezoid(vals, ts)))


def default_bilinear_samples(n1: float) -> int:
    """Time-quadrature sample count: the product's spatial sum self-averages
    over the shell modes, so percent-level accuracy needs far fewer samples
    than the fastest pair-phase would suggest (validated against 8x-refined
    quadrature and the closed-form single-mode oracle)."""
    return int(min(768, max(128, 12 * n1)))


def bilinear_probe(
    grid: GridSpec,
    n1: float,
    n2: float,
    t_end: float = DEFAULT_T,
    trials: int = 8,
    seed: int = 0,
    n_t: int | None = None,
) -> ProbeReport:
    """Measured bilinear ratios ||uv||_{L^2_{t,x}} / (||u||_2 ||v||_2) for
    free flows of independent shell data, against the closed-form bounds."""
    t_start = time.monotonic()
    if not (1 <= n2 <= n1):
        raise ValueError("need 1 <= N2 <= N1")
    _require_resolved(grid, n1, "bilinear probe")
    if n_t is None:
        n_t = default_bilinear_samples(n1)
    lam = grid_lambda(grid)
    b_dim = bilinear_bound(grid.d, lam, n1, n2, 0.0)
    b_sqrt = math.sqrt(n2)
    points = []
    for trial in range(trials):
        u = random_annulus_data(grid, AnnulusDataSpec(n1, derive_seed(seed, trial, 1)))
        v = random_annulus_data(grid, AnnulusDataSpec(n2, derive_seed(seed, trial, 2)))
        ratio = _free_product_l2tx(grid, u.coeffs, v.coeffs, t_end, n_t)
        points.append(
            {
                "d": grid.d,
                "lambda": lam,
                "n1": n1,
                "n2": n2,
                "trial": trial,
                "ratio": ratio,
                "bound_d3": b_dim,
                "bound_n2sqrt": b_sqrt,
                "ratio_over_d3": ratio / b_dim,
                "ratio_over_n2sqrt": ratio / b_sqrt,
            }
        )
    ratios = {
        "max_ratio_over_bound": max(p["ratio_over_d3"] for p in points),
        "mean_ratio_over_bound": float(np.mean([p["ratio_over_d3"] for p in points])),
        "max_ratio_over_n2sqrt": max(p["ratio_over_n2sqrt"] for p in points),
    }
    return ProbeReport(
        experiment="bilinear",
        grid=grid.describe(),
        params={"n1": n1, "n2": n2, "t_end": t_end, "trials": trials, "n_t": n_t},
        points=points,
        ratios=ratios,
        seed=seed,
        wall_time_s=time.monotonic() - t_start,
    )


def bilinear_sweep(
    grid: GridSpec,
    n1_list,
    n2: float,
    t_end: float = DEFAULT_T,
    trials: int = 8,
    seed: int = 0,
    n_t: int | None = None,
) -> ProbeReport:
    """bilinear_probe over an N1 ladder, with trend diagnostics."""
    t_start = time.monotonic()
    points = []
    means = []
    for n1 in n1_list:
        rep = bilinear_probe(grid, n1, n2, t_end, trials, derive_seed(seed, int(n1)), n_t)
        points.extend(rep.points)
        means.append(rep.ratios["mean_ratio_over_bound"])
    trend_ok = all(means[i + 1] <= 2.0 * means[i] for i in range(len(means) - 1))
    fits = {}
    if len(n1_list) >= 2:
        fits["mean_ratio_over_bound_vs_n1"] = fit_loglog(list(n1_list), means).as_dict()
    return ProbeReport(
        experiment="bilinear",
        grid=grid.describe(),
        params={
            "n1_list": list(n1_list),
            "n2": n2,
            "t_end": t_end,
            "trials": trials,
            "n_t": n_t,
        },
        points=points,
        fits=fits,
        ratios={
            "max_ratio_over_bound": max(p["ratio_over_d3"] for p in points),
            "mean_ratio_over_bound_per_n1": means,
            "trend_non_increasing_x2": trend_ok,
        },
        seed=seed,
        wall_time_s=time.monotonic() - t_start,
    )


def strichartz_probe(
    grid: GridSpec,
    n: float,
    t_end: float = DEFAULT_T,
    trials: int = 4,
    seed: int = 0,
    n_t: int | None = None,
) -> ProbeReport:
    """Free-flow L^p_{t,x} ratios for shell-N data at the interpolation
    exponents 10/3, 30/7, 15/2 and infinity."""
    t_start = time.monotonic()
    _require_resolved(grid, n, "strichartz probe")
    if n_t is None:
        n_t = default_bilinear_samples(n)
    h = grid.cell_volume
    points = []
    for trial in range(trials):
        u = random_annulus_data(grid, AnnulusDataSpec(n, derive_seed(seed, trial, 1)))
        ts = np.linspace(0.0, t_end, n_t)
        step = np.exp(-1j * (ts[1] - ts[0]) * grid.xi_sq)
        c = u.coeffs.copy()
        acc = {key: np.empty(n_t) for key in STRICHARTZ_P}
        for i in range(n_t):
            phys = spatial_from_spectral_array(grid, c)
            amp2 = kernels.abs2(phys)
            amp = np.sqrt(amp2)
            for key, p in STRICHARTZ_P.items():
                if p == math.inf:
                    acc[key][i] = float(np.max(amp))
                else:
                    acc[key][i] = h * float(np.sum(amp**p))
            if i < n_t - 1:
                c *= step
        row = {"n": n, "trial": trial}
        for key, p in STRICHARTZ_P.items():
            if p == math.inf:
                val = float(np.max(acc[key]))
            else:
                val = float(np.trapezoid(acc[key], ts) ** (1.0 / p))
            ref = (1.0 + n * n) ** (0.5 * STRICHARTZ_ALPHA[key])
            row[f"ratio_{key}"] = val
            row[f"ref_{key}"] = ref
            row[f"ratio_over_ref_{key}"] = val / ref
        points.append(row)
    return ProbeReport(
        experiment="strichartz",
        grid=grid.describe(),
        params={"n": n, "t_end": t_end, "trials": trials, "n_t": n_t},
        points=points,
        seed=seed,
        wall_time_s=time.monotonic() - t_start,
    )


def strichartz_sweep(
    grid: GridSpec,
    n_list,
    t_end: float = DEFAULT_T,
    trials: int = 4,
    seed: int = 0,
    n_t: int | None = None,
) -> ProbeReport:
    t_start = time.monotonic()
    points = []
    per_n_mean = {key: [] for key in STRICHARTZ_P}
    for n in n_list:
        rep = strichartz_probe(grid, n, t_end, trials, derive_seed(seed, int(n)), n_t)
        points.extend(rep.points)
        for key in STRICHARTZ_P:
            per_n_mean[key].append(
                float(np.mean([p[f"ratio_{key}"] for p in rep.points]))
            )
    fits = {
        f"slope_{key}": fit_loglog(list(n_list), per_n_mean[key]).as_dict()
        for key in STRICHARTZ_P
        if len(n_list) >= 2
    }
    return ProbeReport(
        experiment="strichartz",
        grid=grid.describe(),
        params={"n_list": list(n_list), "t_end": t_end, "trials": trials, "n_t": n_t},
        points=points,
        fits=fits,
        ratios={f"mean_ratio_{key}": per_n_mean[key] for key in STRICHARTZ_P},
        seed=seed,
        wall_time_s=time.monotonic() - t_start,
    )


def _drift_experiment(
    grid: GridSpec,
    n_list,
    u0: SpectralField,
    t_loc: float,
    dt: float,
    record_stride: int,
    energy_fn,
    experiment: str,
    extra_sink=None,
) -> ProbeReport:
    """Shared core: one evolution, modified energies diagnosed per N at the
    recorded times (the flow is N-independent)."""
    t_start = time.monotonic()
    k_cap = lattice_k_max(grid) / 1.5
    if max(n_list) > k_cap:
        raise UnderResolved(
            f"largest N = {max(n_list)} too close to lattice max |k| = "
            f"{lattice_k_max(grid):.3g}"
        )
    series: dict[float, list] = {n: [] for n in n_list}
    plain: list = []
    times: list = []

    def sink(t, snap):
        times.append(t)
        plain.append(energy(snap))
        for n in n_list:
            series[n].append(energy_fn(snap, TWO_PI * n))
        if extra_sink is not None:
            extra_sink(t, snap)

    cfg = EvolutionConfig(dt=dt, t_end=t_loc, record_stride=record_stride)
    evolve(u0, cfg, sink=sink)

    points = []
    drifts = []
    for n in n_list:
        e = np.array(series[n])
        drift = float(np.max(np.abs(e - e[0])))
        drifts.append(drift)
        points.append(
            {"n": n, "t_loc": t_loc, "dt": dt, "drift_sup": drift, "e0": float(e[0])}
        )
    fits = {}
    if len(n_list) >= 2 and all(d > 0 for d in drifts):
        fits["drift_vs_n"] = fit_loglog(list(n_list), drifts).as_dict()
    plain_arr = np.array(plain)
    floor = float(np.max(np.abs(plain_arr - plain_arr[0])))
    notes = [
        f"drift at N={n} within 5x of the splitting-error floor"
        for n, d in zip(n_list, drifts)
        if d < 5.0 * floor
    ]
    return ProbeReport(
        experiment=experiment,
        grid=grid.describe(),
        params={
            "n_list": list(n_list),
            "t_loc": t_loc,
            "dt": dt,
            "record_stride": record_stride,
        },
        points=points,
        fits=fits,
        ratios={
            "plain_energy_drift": floor,
            "series_times": times,
            "series": {str(n): series[n] for n in n_list},
        },
        wall_time_s=time.monotonic() - t_start,
        notes=notes,
    )


def almost_conservation_experiment(
    grid: GridSpec,
    s: float,
    n_list,
    u0: SpectralField,
    t_loc: float,
    dt: float,
    record_stride: int = 50,
) -> ProbeReport:
    """Drift of the smoothed energy E(Iu) against the scale ladder N."""
    rep = _drift_experiment(
        grid,
        n_list,
        u0,
        t_loc,
        dt,
        record_stride,
        lambda snap, n_xi: modified_energy_I(snap, n_xi, s),
        "almost_i",
    )
    rep.params["s"] = s
    for p in rep.points:
        p["s"] = s
    return rep


def dmod_drift_experiment(
    grid: GridSpec,
    n_list,
    u0: SpectralField,
    t_loc: float,
    dt: float,
    record_stride: int = 50,
) -> ProbeReport:
    """Drift of the roughened energy E(Du), plus the dyadic-piece surrogate
    sum_M min(1, M/N) ||P_M D u||_{L^{10/3}_{t,x}}."""
    k_top = lattice_k_max(grid)
    m_ladder = [2.0**j for j in range(0, int(math.ceil(math.log2(max(2.0, k_top)))) + 1)]
    band_syms = None
    piece_acc: dict[tuple, list] = {}
    times_acc: list = []

    def extra(t, snap):
        nonlocal band_syms
        if band_syms is None:
            band_syms = {
                m: lp_cutoff_symbol(TWO_PI * m).values(grid)
                - lp_cutoff_symbol(TWO_PI * m / 2).values(grid)
                for m in m_ladder
            }
        times_acc.append(t)
        h = grid.cell_volume
        for n in n_list:
            dsym = d_symbol(grid.xi_abs, TWO_PI * n)
            for m in m_ladder:
                piece = snap.coeffs * dsym * band_syms[m]
                phys = spatial_from_spectral_array(grid, piece)
                amp = np.sqrt(kernels.abs2(phys))
                piece_acc.setdefault((n, m), []).append(
                    h * float(np.sum(amp ** (10.0 / 3.0)))
                )

    rep = _drift_experiment(
        grid,
        n_list,
        u0,
        t_loc,
        dt,
        record_stride,
        lambda snap, n_xi: modified_energy_D(snap, n_xi),
        "almost_d",
        extra_sink=extra,
    )
    ts = np.array(times_acc)
    surrogates = {}
    for n in n_list:
        total = 0.0
        for m in m_ladder:
            vals = np.array(piece_acc[(n, m)])
            norm = float(np.trapezoid(vals, ts) ** (3.0 / 10.0))
            total += min(1.0, m / n) * norm
        surrogates[str(n)] = total
    rep.ratios["surrogate_sum"] = surrogates
    rep.ratios["m_ladder"] = m_ladder
    return rep


def sobolev_growth_experiment(
    grid: GridSpec,
    u0: SpectralField,
    t_end: float,
    dt: float,
    delta: float,
    record_stride: int = 100,
) -> ProbeReport:
    """H^2 time series against the envelope A + (1+t)^(1+delta)."""
    t_start = time.monotonic()
    rows = []

    def sink(t, snap):
        rows.append(
            {
                "t": t,
                "mass": mass(snap),
                "energy": energy(snap),
                "h1": sobolev_norm(snap, 1.0),
                "h2": sobolev_norm(snap, 2.0),
            }
        )

    cfg = EvolutionConfig(dt=dt, t_end=t_end, record_stride=record_stride)
    evolve(u0, cfg, sink=sink)
    a_norm = rows[0]["h2"]
    for r in rows:
        r["envelope_ratio"] = r["h2"] / (a_norm + (1.0 + r["t"]) ** (1.0 + delta))
    sup_row = max(rows, key=lambda r: r["envelope_ratio"])
    ts = np.array([r["t"] for r in rows])
    h2 = np.array([r["h2"] for r in rows])
    fit = fit_loglog(1.0 + ts, h2)
    return ProbeReport(
        experiment="growth",
        grid=grid.describe(),
        params={"t_end": t_end, "dt": dt, "delta": delta, "a_h2": a_norm,
                "record_stride": record_stride},
        points=rows,
        fits={"h2_growth": fit.as_dict()},
        ratios={
            "sup_envelope_ratio": sup_row["envelope_ratio"],
            "sup_envelope_t": sup_row["t"],
            "sup_attained_early": bool(sup_row["t"] <= 0.25 * t_end),
        },
        wall_time_s=time.monotonic() - t_start,
    )


@dataclass(frozen=True)
class ScheduleResult:
    s: Fraction
    n: float
    lambda_exponent: Fraction
    t_exponent: Fraction
    energy_exponent: Fraction | None
    lam: float
    t_horizon: float | None
    subthreshold: bool

    def as_dict(self) -> dict:
        return {
            "s": str(self.s),
            "n": self.n,
            "lambda_exponent": str(self.lambda_exponent),
            "t_exponent": str(self.t_exponent),
            "energy_exponent": None
            if self.energy_exponent is None
            else str(self.energy_exponent),
            "lambda": self.lam,
            "t_horizon": self.t_horizon,
            "subthreshold": self.subthreshold,
        }


def imethod_schedule(s, n: float) -> ScheduleResult:
    """Scaling schedule: lambda ~ N^(2(1-s)/(2s-1)), T ~ N^((6s-5)/(2s-1)),
    modified-energy growth exponent 2(1-s)/(6s-5); exact rationals.

    s <= 5/6 is flagged SubThreshold (non-positive T exponent, no energy
    exponent); s outside (1/2, 1] raises ScheduleDomainError.
    """
    s = Fraction(s) if not isinstance(s, Fraction) else s
    if not Fraction(1, 2) < s <= 1:
        raise ScheduleDomainError(f"need 1/2 < s <= 1, got {s}")
    lam_exp = 2 * (1 - s) / (2 * s - 1)
    t_exp = (6 * s - 5) / (2 * s - 1)
    sub = s <= Fraction(5, 6)
    energy_exp = None if sub else 2 * (1 - s) / (6 * s - 5)
    lam = float(n) ** float(lam_exp)
    t_horizon = None if sub else float(n) ** float(t_exp)
    return ScheduleResult(s, n, lam_exp, t_exp, energy_exp, lam, t_horizon, sub)


def scaling_check(u0, lam: float, t: float, dt: float) -> float:
    """Relative L2 error of the flow's scaling symmetry at matched resolution."""
    return scaling_flow_error(u0, lam, t, dt)
