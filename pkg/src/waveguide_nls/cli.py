"""Command-line front end: named experiments from config files, versioned
CSV/JSON outputs with a commit-marker manifest.

Commands:
    wnls run <config>         execute an experiment
    wnls validate <config>    validate only, allocate nothing
    wnls schedule --s S --n N print the scaling-schedule exponents
    wnls version

Exit codes: 0 success; 2 config parse/validation error; 3 boundary mass
exceeded; 4 non-finite amplitudes; 5 probe-level errors (empty shell,
under-resolved, empty range, window/sampling); 1 unexpected failure.

CSV schemas (fields in fixed order, numbers with 17 significant digits,
newline \\n, missing optional fields empty):
    diagnostics.csv  t,mass,energy,px,py,pz,h1,h2,e_i,e_d
    bilinear.csv     d,lambda,n1,n2,trial,ratio,bound_d3,bound_n2sqrt,ratio_over_d3,ratio_over_n2sqrt
    strichartz.csv   n,trial,ratio_10_3,ratio_30_7,ratio_15_2,ratio_inf
    drift.csv        n,s,t_loc,dt,drift_sup
    growth.csv       t,h1,h2,envelope_ratio
    schedule.csv     s,n,lambda,t_exp,energy_exp
    scaling.csv      lambda,t,dt,rel_error
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .config import RunConfig, parse_config
from .dynamics import EvolutionConfig, evolve
from .errors import (
    BoundaryMassExceeded,
    EmptyRange,
    EmptyShell,
    EmptyTrajectory,
    InsufficientSampling,
    NonFinite,
    ParseError,
    ScheduleDomainError,
    UnderResolved,
    ValidationError,
    WindowNotCovered,
)
from .functionals import diagnostics
from .grid import GridSpec, SpectralField, build_grid
from .kernels import backend_name
from .probes import (
    AnnulusDataSpec,
    band_limited_data,
    bilinear_sweep,
    dmod_drift_experiment,
    growth_data,
    hs_tail_data,
    imethod_schedule,
    almost_conservation_experiment,
    random_annulus_data,
    scaling_check,
    strichartz_sweep,
)
from .snapshots import SnapshotWriter

_PROBE_ERRORS = (
    EmptyShell,
    UnderResolved,
    EmptyRange,
    WindowNotCovered,
    InsufficientSampling,
    EmptyTrajectory,
    ScheduleDomainError,
)

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_CONFIG = 2
EXIT_BOUNDARY = 3
EXIT_NONFINITE = 4
EXIT_PROBE = 5


def fmt(x) -> str:
    """17-significant-digit serialization; empty for missing values."""
    if x is None:
        return ""
    if isinstance(x, Fraction):
        return f"{float(x):.17g}"
    return f"{x:.17g}"


class CsvWriter:
    def __init__(self, path, header):
        self.path = Path(path)
        self.header = header
        self._fh = open(self.path, "w", encoding="ascii", newline="\n")
        self._fh.write(",".join(header) + "\n")

    def row(self, values) -> None:
        self._fh.write(",".join(fmt(v) if not isinstance(v, str) else v for v in values) + "\n")

    def close(self) -> None:
        self._fh.close()


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def build_grid_from_config(cfg: RunConfig) -> GridSpec:
    g = cfg.grid
    return build_grid(g.d, list(zip(g.kinds, g.periods)), g.modes)


def initial_data(cfg: RunConfig, grid: GridSpec) -> SpectralField:
    recipe = cfg.data_recipe
    if recipe == "constant":
        coeffs = np.zeros(grid.shape, dtype=np.complex128)
        coeffs[(0,) * grid.d] = cfg.data_amplitude * grid.volume
        return SpectralField(grid, coeffs)
    if recipe == "band_limited":
        return band_limited_data(grid, cfg.data_k_max, cfg.seed, cfg.data_amplitude)
    if recipe == "hs_tail":
        s = float(cfg.s) if cfg.s is not None else 1.0
        return hs_tail_data(grid, s, cfg.seed, cfg.data_amplitude)
    if recipe == "annulus":
        return random_annulus_data(grid, AnnulusDataSpec(cfg.data_k_max, cfg.seed))
    if recipe == "growth_profile":
        return growth_data(grid, cfg.a if cfg.a else 1.0, cfg.seed)
    raise ValidationError(f"unknown data recipe {recipe!r}")


def _write_report(outdir: Path, payload: dict) -> None:
    with open(outdir / "report.json", "w", encoding="ascii", newline="\n") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
        fh.write("\n")


def _run_conserve(cfg: RunConfig, grid: GridSpec, outdir: Path) -> list[str]:
    u0 = initial_data(cfg, grid)
    i_params = None
    if cfg.s is not None and cfg.n is not None:
        i_params = (2.0 * math.pi * cfg.n, float(cfg.s))
    d_scale = 2.0 * math.pi * cfg.n if (cfg.n is not None and cfg.s is None) else None
    csv = CsvWriter(
        outdir / "diagnostics.csv",
        ["t", "mass", "energy", "px", "py", "pz", "h1", "h2", "e_i", "e_d"],
    )
    writer = None
    if cfg.snapshots:
        writer = SnapshotWriter(
            outdir / "snapshots.bin", grid, cfg.dt * cfg.stride, cfg.stride
        )
    records = []

    def sink(t, snap):
        rec = diagnostics(t, snap, i_params=i_params, d_scale=d_scale)
        records.append(rec)
        csv.row(
            [rec.t, rec.mass, rec.energy, *rec.momentum, rec.h1, rec.h2, rec.e_i, rec.e_d]
        )
        if writer is not None:
            writer.write(snap)

    try:
        evolve(
            u0,
            EvolutionConfig(
                dt=cfg.dt,
                t_end=cfg.t_end,
                record_stride=cfg.stride,
                dealias=cfg.dealias,
                boundary_mass_threshold=cfg.boundary_threshold,
            ),
            sink=sink,
        )
    finally:
        csv.close()
        if writer is not None:
            writer.close()
    m0, e0 = records[0].mass, records[0].energy
    _write_report(
        outdir,
        {
            "experiment": "conserve",
            "rows": len(records),
            "mass_drift_rel": max(abs(r.mass - m0) for r in records) / abs(m0),
            "energy_drift_abs": max(abs(r.energy - e0) for r in records),
            "grid": grid.describe(),
        },
    )
    files = ["diagnostics.csv", "report.json"]
    if writer is not None:
        files.append("snapshots.bin")
    return files


def _run_bilinear(cfg: RunConfig, grid: GridSpec, outdir: Path) -> list[str]:
    rep = bilinear_sweep(
        grid, list(cfg.n1_list), cfg.n2, cfg.t_end or 0.99, cfg.trials, cfg.seed, cfg.samples
    )
    csv = CsvWriter(
        outdir / "bilinear.csv",
        ["d", "lambda", "n1", "n2", "trial", "ratio", "bound_d3", "bound_n2sqrt",
         "ratio_over_d3", "ratio_over_n2sqrt"],
    )
    for p in rep.points:
        csv.row([p["d"], p["lambda"], p["n1"], p["n2"], p["trial"], p["ratio"],
                 p["bound_d3"], p["bound_n2sqrt"], p["ratio_over_d3"], p["ratio_over_n2sqrt"]])
    csv.close()
    _write_report(outdir, rep.as_dict())
    return ["bilinear.csv", "report.json"]


def _run_strichartz(cfg: RunConfig, grid: GridSpec, outdir: Path) -> list[str]:
    rep = strichartz_sweep(
        grid, list(cfg.n_list), cfg.t_end or 0.99, cfg.trials, cfg.seed, cfg.samples
    )
    csv = CsvWriter(
        outdir / "strichartz.csv",
        ["n", "trial", "ratio_10_3", "ratio_30_7", "ratio_15_2", "ratio_inf"],
    )
    for p in rep.points:
        csv.row([p["n"], p["trial"], p["ratio_10/3"], p["ratio_30/7"],
                 p["ratio_15/2"], p["ratio_inf"]])
    csv.close()
    _write_report(outdir, rep.as_dict())
    return ["strichartz.csv", "report.json"]


def _run_drift(cfg: RunConfig, grid: GridSpec, outdir: Path) -> list[str]:
    u0 = initial_data(cfg, grid)
    if cfg.experiment == "almost_i":
        rep = almost_conservation_experiment(
            grid, float(cfg.s), list(cfg.n_list), u0, cfg.t_end, cfg.dt, cfg.stride
        )
        s_val = float(cfg.s)
    else:
        rep = dmod_drift_experiment(
            grid, list(cfg.n_list), u0, cfg.t_end, cfg.dt, cfg.stride
        )
        s_val = None
    csv = CsvWriter(outdir / "drift.csv", ["n", "s", "t_loc", "dt", "drift_sup"])
    for p in rep.points:
        csv.row([p["n"], s_val, p["t_loc"], p["dt"], p["drift_sup"]])
    csv.close()
    rep.seed = cfg.seed
    _write_report(outdir, rep.as_dict())
    return ["drift.csv", "report.json"]


def _run_growth(cfg: RunConfig, grid: GridSpec, outdir: Path) -> list[str]:
    u0 = growth_data(grid, cfg.a, cfg.seed)
    rep = sobolev_growth_from(u0, cfg, grid)
    csv = CsvWriter(outdir / "growth.csv", ["t", "h1", "h2", "envelope_ratio"])
    for p in rep.points:
        csv.row([p["t"], p["h1"], p["h2"], p["envelope_ratio"]])
    csv.close()
    rep.seed = cfg.seed
    _write_report(outdir, rep.as_dict())
    return ["growth.csv", "report.json"]


def sobolev_growth_from(u0, cfg: RunConfig, grid: GridSpec):
    from .probes import sobolev_growth_experiment

    return sobolev_growth_experiment(
        grid, u0, cfg.t_end, cfg.dt, cfg.delta, record_stride=cfg.stride
    )


def _run_schedule(cfg: RunConfig, outdir: Path) -> list[str]:
    res = imethod_schedule(cfg.s, cfg.n)
    csv = CsvWriter(outdir / "schedule.csv", ["s", "n", "lambda", "t_exp", "energy_exp"])
    csv.row(
        [
            float(res.s),
            res.n,
            res.lam,
            float(res.t_exponent),
            None if res.energy_exponent is None else float(res.energy_exponent),
        ]
    )
    csv.close()
    _write_report(outdir, {"experiment": "schedule", **res.as_dict()})
    return ["schedule.csv", "report.json"]


def _run_scaling(cfg: RunConfig, grid: GridSpec, outdir: Path) -> list[str]:
    u0 = initial_data(cfg, grid)
    err = scaling_check(u0, cfg.lam, cfg.t_end, cfg.dt)
    csv = CsvWriter(outdir / "scaling.csv", ["lambda", "t", "dt", "rel_error"])
    csv.row([cfg.lam, cfg.t_end, cfg.dt, err])
    csv.close()
    _write_report(
        outdir,
        {"experiment": "scaling", "lambda": cfg.lam, "t": cfg.t_end, "dt": cfg.dt,
         "rel_error": err, "grid": grid.describe()},
    )
    return ["scaling.csv", "report.json"]


def run(cfg: RunConfig) -> Path:
    """Execute a validated config; returns the manifest path (written last)."""
    outdir = Path(cfg.outdir)
    manifest_path = outdir / "manifest.json"
    if manifest_path.exists():
        raise ValidationError(f"output directory already holds a manifest: {manifest_path}")
    outdir.mkdir(parents=True, exist_ok=True)
    started = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    grid = None if cfg.experiment == "schedule" else build_grid_from_config(cfg)

    if cfg.experiment == "conserve":
        files = _run_conserve(cfg, grid, outdir)
    elif cfg.experiment == "bilinear":
        files = _run_bilinear(cfg, grid, outdir)
    elif cfg.experiment == "strichartz":
        files = _run_strichartz(cfg, grid, outdir)
    elif cfg.experiment in ("almost_i", "almost_d"):
        files = _run_drift(cfg, grid, outdir)
    elif cfg.experiment == "growth":
        files = _run_growth(cfg, grid, outdir)
    elif cfg.experiment == "schedule":
        files = _run_schedule(cfg, outdir)
    elif cfg.experiment == "scaling":
        files = _run_scaling(cfg, grid, outdir)
    else:  # pragma: no cover - validated earlier
        raise ValidationError(f"unknown experiment {cfg.experiment!r}")

    manifest = {
        "artifact_version": __version__,
        "experiment": cfg.experiment,
        "config": cfg.echo,
        "seed": cfg.seed,
        "grid_hash": None if grid is None else grid.content_hash(),
        "kernel_backend": backend_name(),
        "started_utc": started,
        "finished_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "files": {name: _sha256(outdir / name) for name in files},
    }
    with open(manifest_path, "w", encoding="ascii", newline="\n") as fh:
        json.dump(manifest, fh, indent=1, sort_keys=True)
        fh.write("\n")
    return manifest_path


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="wnls", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run an experiment from a config file")
    p_run.add_argument("config")
    p_val = sub.add_parser("validate", help="validate a config file")
    p_val.add_argument("config")
    p_sched = sub.add_parser("schedule", help="print scaling-schedule exponents")
    p_sched.add_argument("--s", required=True, help="regularity index (fraction or decimal)")
    p_sched.add_argument("--n", required=True, type=float, help="frequency parameter N")
    sub.add_parser("version", help="print the artifact version")
    args = parser.parse_args(argv)

    try:
        if args.command == "version":
            print(__version__)
            return EXIT_OK
        if args.command == "schedule":
            res = imethod_schedule(Fraction(args.s), args.n)
            print(json.dumps(res.as_dict(), indent=1, sort_keys=True))
            return EXIT_OK
        if args.command == "validate":
            parse_config(args.config)
            print("ok")
            return EXIT_OK
        if args.command == "run":
            cfg = parse_config(args.config)
            manifest = run(cfg)
            print(f"manifest: {manifest}")
            return EXIT_OK
        return EXIT_UNEXPECTED
    except (ParseError, ValidationError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except BoundaryMassExceeded as e:
        print(f"boundary mass exceeded: {e}", file=sys.stderr)
        return EXIT_BOUNDARY
    except NonFinite as e:
        print(f"non-finite amplitudes: {e}", file=sys.stderr)
        return EXIT_NONFINITE
    except _PROBE_ERRORS as e:
        print(f"probe error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_PROBE


if __name__ == "__main__":
    sys.exit(main())
