"""Run configuration: a strict, line-oriented key = value format.

Sections are [run], [grid], [physics], [numerics], [data]. Unknown
sections or keys are validation errors, not warnings; malformed lines are
parse errors carrying the line number. Validation happens entirely before
any lattice memory is allocated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ParseError, ValidationError
from .grid import EUCLIDEAN, TORUS

EXPERIMENTS = (
    "conserve",
    "bilinear",
    "strichartz",
    "almost_i",
    "almost_d",
    "growth",
    "schedule",
    "scaling",
)

_KNOWN_KEYS = {
    "run": {"experiment", "seed", "outdir"},
    "grid": {"d", "kinds", "periods", "modes"},
    "physics": {"s", "n", "n_list", "n1_list", "n2", "lambda", "delta", "a"},
    "numerics": {
        "dt",
        "t_end",
        "stride",
        "dealias",
        "boundary_threshold",
        "trials",
        "samples",
        "snapshots",
    },
    "data": {"recipe", "k_max", "amplitude"},
}

_DATA_RECIPES = ("band_limited", "hs_tail", "constant", "annulus", "growth_profile")


def parse_raw(path: str) -> dict:
    """Parse into {section: {key: (value, line)}} with strict syntax."""
    sections: dict = {}
    current = None
    try:
        with open(path, encoding="ascii") as fh:
            lines = fh.readlines()
    except OSError as e:
        raise ParseError(path, 0, f"cannot read config: {e}") from e
    for ln, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if not current:
                raise ParseError(path, ln, "empty section name")
            sections.setdefault(current, {})
            continue
        if "=" not in line:
            raise ParseError(path, ln, f"expected key = value, got {line!r}")
        if current is None:
            raise ParseError(path, ln, "key = value before any [section] header")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key:
            raise ParseError(path, ln, "empty key")
        if key in sections[current]:
            raise ParseError(path, ln, f"duplicate key {key!r} in [{current}]")
        sections[current][key] = (value, ln)
    return sections


def _reject_unknown(path: str, sections: dict) -> None:
    for sec, kv in sections.items():
        if sec not in _KNOWN_KEYS:
            raise ValidationError(f"{path}: unknown section [{sec}]")
        for key in kv:
            if key not in _KNOWN_KEYS[sec]:
                raise ValidationError(f"{path}: unknown key {key!r} in [{sec}]")


def _get(sections, sec, key, default=None):
    if sec in sections and key in sections[sec]:
        return sections[sec][key][0]
    return default


def _as_float(value, what):
    try:
        return float(Fraction(value)) if "/" in value else float(value)
    except ValueError as e:
        raise ValidationError(f"{what}: not a number: {value!r}") from e


def _as_int(value, what):
    try:
        return int(value)
    except ValueError as e:
        raise ValidationError(f"{what}: not an integer: {value!r}") from e


def _as_bool(value, what):
    if value.lower() in ("true", "yes", "on", "1"):
        return True
    if value.lower() in ("false", "no", "off", "0"):
        return False
    raise ValidationError(f"{what}: not a boolean: {value!r}")


def _as_list(value, conv, what):
    return [conv(v.strip(), what) for v in value.split(",") if v.strip()]


@dataclass(frozen=True)
class GridConfig:
    d: int
    kinds: tuple
    periods: tuple
    modes: tuple


@dataclass(frozen=True)
class RunConfig:
    experiment: str
    seed: int
    outdir: str
    grid: GridConfig | None
    s: Fraction | None
    n: float | None
    n_list: tuple
    n1_list: tuple
    n2: float | None
    lam: float | None
    delta: float | None
    a: float | None
    dt: float | None
    t_end: float | None
    stride: int
    dealias: bool
    boundary_threshold: float
    trials: int
    samples: int | None
    snapshots: bool
    data_recipe: str
    data_k_max: float
    data_amplitude: float
    echo: dict = field(default_factory=dict)


def _parse_grid(sections) -> GridConfig | None:
    if "grid" not in sections or not sections["grid"]:
        return None
    d = _as_int(_get(sections, "grid", "d", "3"), "grid.d")
    if d not in (2, 3, 4):
        raise ValidationError(f"grid.d must be 2, 3 or 4, got {d}")
    kinds_raw = _get(sections, "grid", "kinds", ",".join(["torus"] * d))
    kinds = []
    for k in kinds_raw.split(","):
        k = k.strip()
        if k in ("torus", "t"):
            kinds.append(TORUS)
        elif k in ("euclidean", "euclidean_truncated", "e"):
            kinds.append(EUCLIDEAN)
        else:
            raise ValidationError(f"grid.kinds: unknown kind {k!r}")
    periods = _as_list(_get(sections, "grid", "periods", ",".join(["1"] * d)), _as_float, "grid.periods")
    modes_raw = _get(sections, "grid", "modes")
    if modes_raw is None:
        raise ValidationError("grid.modes is required when a [grid] section is present")
    modes = _as_list(modes_raw, _as_int, "grid.modes")
    if not (len(kinds) == len(periods) == len(modes) == d):
        raise ValidationError("grid kinds/periods/modes must all have length d")
    for p in periods:
        if p <= 0:
            raise ValidationError(f"grid.periods must be positive, got {p}")
    for m in modes:
        if m % 2 != 0 or m <= 0:
            raise ValidationError(f"OddModeCount: mode counts must be even positive, got {m}")
    return GridConfig(d, tuple(kinds), tuple(periods), tuple(modes))


def _require(cond, msg):
    if not cond:
        raise ValidationError(msg)


def parse_config(path: str) -> RunConfig:
    sections = parse_raw(path)
    _reject_unknown(path, sections)

    experiment = _get(sections, "run", "experiment")
    if experiment is None:
        raise ValidationError(f"{path}: [run] experiment is required")
    if experiment not in EXPERIMENTS:
        raise ValidationError(f"unknown experiment {experiment!r}")

    seed = _as_int(_get(sections, "run", "seed", "1"), "run.seed")
    outdir = _get(sections, "run", "outdir", "run_output")

    gridc = _parse_grid(sections)

    s_raw = _get(sections, "physics", "s")
    s = None if s_raw is None else Fraction(s_raw)
    n_raw = _get(sections, "physics", "n")
    n = None if n_raw is None else _as_float(n_raw, "physics.n")
    n_list = tuple(_as_list(_get(sections, "physics", "n_list", ""), _as_float, "physics.n_list"))
    n1_list = tuple(_as_list(_get(sections, "physics", "n1_list", ""), _as_float, "physics.n1_list"))
    n2_raw = _get(sections, "physics", "n2")
    n2 = None if n2_raw is None else _as_float(n2_raw, "physics.n2")
    lam_raw = _get(sections, "physics", "lambda")
    lam = None if lam_raw is None else _as_float(lam_raw, "physics.lambda")
    delta_raw = _get(sections, "physics", "delta")
    delta = None if delta_raw is None else _as_float(delta_raw, "physics.delta")
    a_raw = _get(sections, "physics", "a")
    a = None if a_raw is None else _as_float(a_raw, "physics.a")

    dt_raw = _get(sections, "numerics", "dt")
    dt = None if dt_raw is None else _as_float(dt_raw, "numerics.dt")
    t_raw = _get(sections, "numerics", "t_end")
    t_end = None if t_raw is None else _as_float(t_raw, "numerics.t_end")
    stride = _as_int(_get(sections, "numerics", "stride", "1"), "numerics.stride")
    dealias = _as_bool(_get(sections, "numerics", "dealias", "true"), "numerics.dealias")
    boundary = _as_float(
        _get(sections, "numerics", "boundary_threshold", "1e-6"),
        "numerics.boundary_threshold",
    )
    trials = _as_int(_get(sections, "numerics", "trials", "8"), "numerics.trials")
    samples_raw = _get(sections, "numerics", "samples")
    samples = None if samples_raw is None else _as_int(samples_raw, "numerics.samples")
    snapshots = _as_bool(_get(sections, "numerics", "snapshots", "false"), "numerics.snapshots")

    recipe = _get(sections, "data", "recipe", "band_limited")
    if recipe not in _DATA_RECIPES:
        raise ValidationError(f"data.recipe must be one of {_DATA_RECIPES}, got {recipe!r}")
    k_max = _as_float(_get(sections, "data", "k_max", "2"), "data.k_max")
    amplitude = _as_float(_get(sections, "data", "amplitude", "1"), "data.amplitude")

    echo = {
        sec: {k: v for k, (v, _) in kv.items()} for sec, kv in sections.items()
    }
    cfg = RunConfig(
        experiment=experiment,
        seed=seed,
        outdir=outdir,
        grid=gridc,
        s=s,
        n=n,
        n_list=n_list,
        n1_list=n1_list,
        n2=n2,
        lam=lam,
        delta=delta,
        a=a,
        dt=dt,
        t_end=t_end,
        stride=stride,
        dealias=dealias,
        boundary_threshold=boundary,
        trials=trials,
        samples=samples,
        snapshots=snapshots,
        data_recipe=recipe,
        data_k_max=k_max,
        data_amplitude=amplitude,
        echo=echo,
    )
    validate_config(cfg)
    return cfg


def validate_config(cfg: RunConfig) -> None:
    """Experiment-specific preconditions; raises ValidationError."""
    ex = cfg.experiment
    needs_grid = ex != "schedule"
    if needs_grid:
        _require(cfg.grid is not None, f"{ex}: [grid] section with modes is required")
    if ex in ("conserve", "growth", "scaling", "almost_i", "almost_d"):
        _require(cfg.grid.d == 3, f"{ex}: requires a d=3 grid")
        _require(min(cfg.grid.modes) >= 8, f"{ex}: all mode counts must be >= 8")
        _require(cfg.dt is not None and cfg.dt > 0, f"{ex}: numerics.dt is required")
        _require(cfg.t_end is not None and cfg.t_end > 0, f"{ex}: numerics.t_end is required")
        _require(cfg.dt <= cfg.t_end, f"{ex}: need dt <= t_end")
        n_steps = round(cfg.t_end / cfg.dt)
        _require(
            abs(n_steps * cfg.dt - cfg.t_end) <= 1e-9 * max(1.0, cfg.t_end),
            f"{ex}: t_end must be an integer multiple of dt",
        )
        _require(n_steps % cfg.stride == 0, f"{ex}: stride must divide the step count")
    if ex in ("bilinear", "strichartz"):
        _require(cfg.grid.d in (2, 3, 4), f"{ex}: grid d must be 2, 3 or 4")
    if ex == "bilinear":
        _require(bool(cfg.n1_list), "bilinear: physics.n1_list is required")
        _require(cfg.n2 is not None and cfg.n2 >= 1, "bilinear: physics.n2 >= 1 required")
        _require(
            all(n1 >= cfg.n2 for n1 in cfg.n1_list),
            "bilinear: need N2 <= N1 for every N1",
        )
    if ex == "strichartz":
        _require(bool(cfg.n_list), "strichartz: physics.n_list is required")
    if ex in ("almost_i", "almost_d"):
        _require(bool(cfg.n_list), f"{ex}: physics.n_list is required")
        _require(
            all(n >= 1 for n in cfg.n_list), f"{ex}: all N must be >= 1"
        )
    if ex == "almost_i":
        _require(cfg.s is not None, "almost_i: physics.s is required")
        _require(
            Fraction(5, 6) < cfg.s <= 1,
            "almost_i: SubThreshold — need 5/6 < s <= 1",
        )
    if ex == "growth":
        _require(cfg.a is not None and cfg.a > 0, "growth: physics.a > 0 required")
        _require(cfg.delta is not None and cfg.delta > 0, "growth: physics.delta > 0 required")
    if ex == "schedule":
        _require(cfg.s is not None, "schedule: physics.s is required")
        _require(cfg.n is not None and cfg.n >= 1, "schedule: physics.n >= 1 required")
        _require(
            Fraction(1, 2) < cfg.s <= 1,
            "schedule: DomainError — need 1/2 < s <= 1",
        )
        _require(
            cfg.s > Fraction(5, 6),
            "schedule: SubThreshold — T exponent non-positive for s <= 5/6",
        )
    if ex == "scaling":
        _require(cfg.lam is not None and cfg.lam > 0, "scaling: physics.lambda > 0 required")
        _require(cfg.dt is not None and cfg.t_end is not None, "scaling: dt and t_end required")
