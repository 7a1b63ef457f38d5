"""Declarative scenarios: parse a JSON config, build and evolve a state, emit files.

Time sampling is endpoint-exclusive: t_k = t_min + k (t_max - t_min) / t_steps
for k = 0 .. t_steps - 1, so a 200-step sweep over [0, 2 pi) contains every
t + pi partner exactly.
"""

import json
import math
import os
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from . import __version__, _kernels
from .analytic import (
    EOSqueezedDensityParams,
    compare_densities,
    eo_squeezed_density_on_grid,
)
from .factory import SQUEEZE_CONVENTION, Parity, StateKind, build_state, evolve
from .fock import TruncationPolicy
from .observables import quadrature_moments
from .position import Grid, count_humps, density_csv, density_surface, parse_density_csv

OUTPUT_FILES = {
    "density_csv": "density.csv",
    "uncertainty_json": "uncertainty.json",
    "comparison_json": "comparison.json",
    "report_text": "report.txt",
}
MANIFEST_FILE = "manifest.json"


class ConfigError(ValueError):
    """Config is not well-formed JSON of the expected shape (exit status 2)."""


class ValidationError(ValueError):
    """Config is well-formed but a value is out of range (exit status 3)."""


@dataclass
class StateSpec:
    kind: str
    alpha_re: float = 0.0
    alpha_im: float = 0.0
    r: float = 0.0
    phi: float = 0.0
    n: int = 0
    parity: str = "even"

    @property
    def alpha(self):
        return complex(self.alpha_re, self.alpha_im)


@dataclass
class EvolutionSpec:
    t_min: float = 0.0
    t_max: float = 0.0
    t_steps: int = 1

    def times(self):
        dt = (self.t_max - self.t_min) / self.t_steps
        return [self.t_min + k * dt for k in range(self.t_steps)]


@dataclass
class GridSpec:
    x_min: float = -12.0
    x_max: float = 12.0
    n_points: int = 2001


@dataclass
class TruncationSpec:
    n_max: int = 256
    guard_band: int = 16
    tail_tolerance: float = 1e-12


@dataclass
class LimitsSpec:
    alpha_max: float = 3.0
    r_max: float = 1.5


@dataclass
class ScenarioConfig:
    state: StateSpec
    evolution: EvolutionSpec = field(default_factory=EvolutionSpec)
    grid: GridSpec = field(default_factory=GridSpec)
    truncation: TruncationSpec = field(default_factory=TruncationSpec)
    limits: LimitsSpec = field(default_factory=LimitsSpec)
    outputs: list = field(default_factory=lambda: ["density_csv"])

    def to_dict(self):
        return asdict(self)


_SECTIONS = {
    "state": StateSpec,
    "evolution": EvolutionSpec,
    "grid": GridSpec,
    "truncation": TruncationSpec,
    "limits": LimitsSpec,
}


def _coerce(cls, section, raw):
    if not isinstance(raw, dict):
        raise ConfigError(f"section {section!r} must be an object")
    known = {f.name: f for f in fields(cls)}
    unknown = set(raw) - set(known)
    if unknown:
        raise ConfigError(f"unknown keys in {section!r}: {sorted(unknown)}")
    values = {}
    for name, value in raw.items():
        ftype = known[name].type
        if ftype in ("int", int):
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(f"{section}.{name} must be an integer")
        elif ftype in ("float", float):
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"{section}.{name} must be a number")
            value = float(value)
        elif ftype in ("str", str):
            if not isinstance(value, str):
                raise ConfigError(f"{section}.{name} must be a string")
        values[name] = value
    try:
        return cls(**values)
    except TypeError as exc:  # missing required field
        raise ConfigError(f"section {section!r}: {exc}") from None


def parse_config(text):
    """Parse JSON text into a ScenarioConfig; structural problems raise ConfigError."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(raw) - set(_SECTIONS) - {"outputs"}
    if unknown:
        raise ConfigError(f"unknown top-level keys: {sorted(unknown)}")
    if "state" not in raw:
        raise ConfigError("config needs a 'state' section")
    parts = {name: _coerce(cls, name, raw[name]) for name, cls in _SECTIONS.items() if name in raw}
    outputs = raw.get("outputs", ["density_csv"])
    if not (isinstance(outputs, list) and all(isinstance(o, str) for o in outputs)):
        raise ConfigError("outputs must be a list of strings")
    return ScenarioConfig(outputs=outputs, **parts)


def load_config(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    return parse_config(text)


def validate(cfg):
    """Range checks; raises ValidationError. Returns (policy, grid)."""
    st = cfg.state
    try:
        kind = StateKind(st.kind)
    except ValueError:
        raise ValidationError(f"unknown state kind {st.kind!r}") from None
    try:
        Parity.parse(st.parity)
    except ValueError as exc:
        raise ValidationError(str(exc)) from None
    for name in ("alpha_re", "alpha_im", "r", "phi"):
        if not math.isfinite(getattr(st, name)):
            raise ValidationError(f"state.{name} must be finite")
    if abs(st.alpha) > cfg.limits.alpha_max:
        raise ValidationError(f"|alpha| exceeds alpha_max={cfg.limits.alpha_max}")
    if abs(st.r) > cfg.limits.r_max:
        raise ValidationError(f"|r| exceeds r_max={cfg.limits.r_max}")
    ev = cfg.evolution
    if ev.t_steps < 1:
        raise ValidationError("evolution.t_steps must be >= 1")
    if not (math.isfinite(ev.t_min) and math.isfinite(ev.t_max)):
        raise ValidationError("evolution times must be finite")
    if ev.t_steps > 1 and not ev.t_max > ev.t_min:
        raise ValidationError("evolution needs t_max > t_min when t_steps > 1")
    try:
        tr = cfg.truncation
        policy = TruncationPolicy(tr.n_max, tr.guard_band, tr.tail_tolerance)
        grid = Grid(cfg.grid.x_min, cfg.grid.x_max, cfg.grid.n_points)
    except ValueError as exc:
        raise ValidationError(str(exc)) from None
    numbered = kind in (StateKind.SQUEEZED_NUMBER, StateKind.EO_SQUEEZED_NUMBER)
    if numbered and not 0 <= st.n <= policy.n_max // 4:
        raise ValidationError(f"state.n must lie in 0..{policy.n_max // 4}")
    if not numbered and st.n != 0:
        raise ValidationError(f"kind {kind.value} takes no number-state index")
    bad = [o for o in cfg.outputs if o not in OUTPUT_FILES]
    if bad:
        raise ValidationError(f"unknown outputs {bad}; choose from {sorted(OUTPUT_FILES)}")
    if "comparison_json" in cfg.outputs:
        if kind not in (StateKind.CAT, StateKind.EO_SQUEEZED):
            raise ValidationError("comparison_json needs kind cat or eo_squeezed")
        if st.alpha_im != 0.0 or st.phi != 0.0 or st.r < 0.0:
            raise ValidationError("comparison_json needs real alpha, phi = 0 and r >= 0")
    return policy, grid


def manifest(cfg, warnings=(), normalization=None):
    return {
        "tool": "squeezedho",
        "version": __version__,
        "kernel_backend": _kernels.BACKEND,
        "squeeze_convention": SQUEEZE_CONVENTION,
        "time_sampling": "t_k = t_min + k*(t_max - t_min)/t_steps, k = 0..t_steps-1",
        "config": cfg.to_dict(),
        "eo_normalization": _fmt(normalization),
        "outputs": [OUTPUT_FILES[o] for o in cfg.outputs],
        "warnings": list(warnings),
    }


def _fmt(value):
    """Round floats to 15 significant digits, recursively."""
    if isinstance(value, float):
        return float(f"{value:.15g}")
    if isinstance(value, dict):
        return {k: _fmt(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_fmt(v) for v in value]
    return value


def _dumps(obj):
    return json.dumps(_fmt(obj), indent=2, sort_keys=True) + "\n"


def render(cfg):
    """Run a validated scenario and return {filename: text}. Nothing is written.

    Truncation and degeneracy errors propagate to the caller.
    """
    policy, grid = validate(cfg)
    st = cfg.state
    parity = Parity.parse(st.parity)
    state, factor = build_state(
        st.kind, st.alpha, st.r, st.phi, st.n, parity, policy,
        alpha_max=cfg.limits.alpha_max, r_max=cfg.limits.r_max,
        with_normalization=True,
    )
    times = cfg.evolution.times()
    warnings = []
    tail = state.tail_mass()
    if tail > policy.tail_tolerance:
        warnings.append(
            f"state mass {tail:.3e} inside the top {policy.guard_band} levels exceeds "
            f"tail_tolerance; moments may be truncation-biased"
        )
    densities = density_surface(state, grid, times)
    for d in densities:
        if not d.adequate:
            warnings.append(f"grid coverage: edge density {d.edge_density:.3e} at t={d.t:.15g}")

    files = {}
    if "density_csv" in cfg.outputs:
        files[OUTPUT_FILES["density_csv"]] = density_csv(densities)

    reports = None
    if "uncertainty_json" in cfg.outputs or "report_text" in cfg.outputs:
        reports = [quadrature_moments(evolve(state, t)) for t in times]
    if "uncertainty_json" in cfg.outputs:
        series = [{"t": t, **rep.to_dict()} for t, rep in zip(times, reports)]
        files[OUTPUT_FILES["uncertainty_json"]] = _dumps(
            {"squeeze_convention": SQUEEZE_CONVENTION, "series": series}
        )

    if "comparison_json" in cfg.outputs:
        params = EOSqueezedDensityParams.from_alpha(abs(st.alpha_re), st.r, parity)
        per_time = []
        for d in densities:
            cmp = compare_densities(eo_squeezed_density_on_grid(grid, d.t, params), d)
            per_time.append({"t": d.t, "max_abs_diff": cmp["max_abs_diff"], "l2_diff": cmp["l2_diff"]})
        files[OUTPUT_FILES["comparison_json"]] = _dumps({
            "max_abs_diff": max(p["max_abs_diff"] for p in per_time),
            "l2_diff": max(p["l2_diff"] for p in per_time),
            "grid": grid.to_dict(),
            "params": {"x0": params.x0, "r": params.r, "parity": params.parity.name.lower()},
            "per_time": per_time,
        })

    if "report_text" in cfg.outputs:
        lines = [
            f"squeezedho {__version__} scenario report",
            f"squeeze convention: {SQUEEZE_CONVENTION}",
            f"state: kind={st.kind} alpha={st.alpha_re:.15g}{st.alpha_im:+.15g}j "
            f"r={st.r:.15g} phi={st.phi:.15g} n={st.n} parity={parity.name.lower()}",
            f"eo normalization: {'n/a' if factor is None else f'{factor:.15g}'}",
            "t var_x var_p sym_cov product sur_gap humps",
        ]
        for d, rep in zip(densities, reports):
            lines.append(
                f"{d.t:.15g} {rep.var_x:.15g} {rep.var_p:.15g} {rep.sym_cov:.15g} "
                f"{rep.product:.15g} {rep.sur_gap:.15g} {count_humps(d)}"
            )
        lines += [f"warning: {w}" for w in warnings]
        files[OUTPUT_FILES["report_text"]] = "\n".join(lines) + "\n"

    files[MANIFEST_FILE] = _dumps(manifest(cfg, warnings, factor))
    return files


def write_outputs(files, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    for name, text in files.items():
        with open(os.path.join(out_dir, name), "w", newline="\n") as fh:
            fh.write(text)


def run_scenario(config_path, out_dir, n_max=None):
    """Load, validate, run and write. Files are written only if the whole run succeeds."""
    cfg = load_config(config_path)
    if n_max is not None:
        cfg.truncation.n_max = n_max
    files = render(cfg)
    write_outputs(files, out_dir)
    return cfg, files


def density_grid_from_csv(text):
    """Reshape long-form CSV text into (x, t, rho[t, x])."""
    x, t, rho = parse_density_csv(text)
    ts = np.unique(t)
    xs = x[t == ts[0]]
    return xs, ts, rho.reshape(ts.size, xs.size)
