#!/usr/bin/env python3
"""Regenerate the committed golden outputs under goldens/.

Each golden is a real CLI run (plus one assembled order-check table); the
frontend's render tests and the CLI determinism test consume these files.
Regenerating on a different BLAS/libm stack can shift last-ulp digits; the
manifest records the kernel backend used.
"""

import json
import shutil
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
GOLDENS = ROOT / "goldens"

sys.path.insert(0, str(ROOT / "src"))

from waveguide_nls import cli  # noqa: E402


def run_config(name, text):
    outdir = GOLDENS / name
    if outdir.exists():
        shutil.rmtree(outdir)
    cfg_path = GOLDENS / f"{name}.ini"
    cfg_path.write_text(text.format(out=outdir), encoding="ascii")
    rc = cli.main(["run", str(cfg_path)])
    if rc != 0:
        raise SystemExit(f"golden run {name} failed with exit code {rc}")
    print(f"golden {name}: ok")


CONSERVE = """
[run]
experiment = conserve
seed = 31
outdir = {out}

[grid]
d = 3
modes = 32,32,32

[numerics]
dt = 1e-3
t_end = 2.0
stride = 1

[data]
recipe = band_limited
k_max = 2
amplitude = 0.5
"""

DRIFT = """
[run]
experiment = almost_i
seed = 123
outdir = {out}

[grid]
d = 3
modes = 32,32,32

[physics]
s = 0.85
n_list = 2,4,8

[numerics]
dt = 1e-4
t_end = 0.25
stride = 250

[data]
recipe = hs_tail
amplitude = 0.2
"""

BILINEAR = """
[run]
experiment = bilinear
seed = 404
outdir = {out}

[grid]
d = 3
modes = 32,32,32

[physics]
n1_list = 4,8,16
n2 = 2

[numerics]
trials = 3
samples = 96
"""

GROWTH = """
[run]
experiment = growth
seed = 99
outdir = {out}

[grid]
d = 3
kinds = torus,torus,torus
periods = 6.283185307179586,6.283185307179586,6.283185307179586
modes = 16,16,16

[physics]
a = 1.0
delta = 0.1

[numerics]
dt = 1e-3
t_end = 5.0
stride = 500
"""


def make_order_golden():
    """Energy-drift-vs-dt table for the order-check figure."""
    import numpy as np

    from waveguide_nls.dynamics import EvolutionConfig, evolve
    from waveguide_nls.fitting import fit_loglog
    from waveguide_nls.functionals import energy
    from waveguide_nls.grid import SpectralField, torus_grid
    from waveguide_nls.probes import band_limited_data

    outdir = GOLDENS / "order"
    if outdir.exists():
        shutil.rmtree(outdir)
    outdir.mkdir(parents=True)
    g = torus_grid((2 * np.pi,) * 3, (16,) * 3)
    raw = band_limited_data(g, 0.4, 11, 1.0)
    u0 = SpectralField(g, 0.8 * raw.coeffs / raw.l2_norm())
    dts = [4e-3, 2e-3, 1e-3, 5e-4]
    drifts = []
    for dt in dts:
        tr = evolve(u0, EvolutionConfig(dt=dt, t_end=0.5, record_stride=round(0.5 / dt)))
        drifts.append(abs(energy(tr.snapshots[-1]) - energy(tr.snapshots[0])))
    with open(outdir / "order.csv", "w", encoding="ascii", newline="\n") as fh:
        fh.write("dt,drift_sup\n")
        for dt, d in zip(dts, drifts):
            fh.write(f"{dt:.17g},{d:.17g}\n")
    fit = fit_loglog(dts, drifts)
    with open(outdir / "report.json", "w", encoding="ascii", newline="\n") as fh:
        json.dump({"experiment": "order_check", "fits": {"order": fit.as_dict()}}, fh, indent=1, sort_keys=True)
        fh.write("\n")
    print(f"golden order: ok (order {fit.slope:.3f})")


if __name__ == "__main__":
    GOLDENS.mkdir(exist_ok=True)
    run_config("conserve32", CONSERVE)
    run_config("drift", DRIFT)
    run_config("bilinear", BILINEAR)
    run_config("growth", GROWTH)
    make_order_golden()
