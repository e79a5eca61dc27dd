"""JSON experiment configs: validation, execution and the comparison report."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

import numpy as np

from . import __version__
from .analytic import qp_entropy_analytic
from .cellstate import CellState, cell_green, named_state, superposition
from .curves import EntropyCurve, atomic_write_json, rescaled_time, time_from_zeta
from .entropy import stationary_entropy_density
from .errors import ConfigError
from .exact import exact_entropy_curve
from .geometry import Region, region_from_spec
from .montecarlo import McConfig, qp_entropy_curve_mc

SCHEMA_VERSION = 1
ENGINES = ("analytic", "mc", "exact-thermo", "exact-finite", "stationary")
SEED_ENV = "QUENCHLAT_SEED"


@dataclass
class ExperimentConfig:
    """A validated experiment: one state, one region, a time grid and engines."""

    state: CellState
    region: Region
    times: np.ndarray
    engines: list[str]
    params: dict
    seed: int
    output: str
    J: float = 1.0
    raw: dict = field(default_factory=dict)

    def resolved(self) -> dict:
        """Config dict that re-runs to identical output (explicit times and seed)."""
        out = dict(self.raw)
        out["schema_version"] = SCHEMA_VERSION
        out["times"] = {"values": [float(t) for t in self.times], "scale": "t"}
        out["seed"] = self.seed
        out["engines"] = list(self.engines)
        out["params"] = self.params
        out["output"] = self.output
        return out


def parse_state(spec) -> CellState:
    if not isinstance(spec, dict):
        raise ConfigError("state must be an object")
    if "name" in spec:
        try:
            return named_state(spec["name"], spec.get("alpha"))
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"unknown state {spec['name']!r}") from exc
    try:
        terms = []
        for term in spec["terms"]:
            amp = term.get("amp", 1.0)
            amp = complex(amp[0], amp[1]) if isinstance(amp, (list, tuple)) else complex(amp)
            terms.append((amp, [tuple(s) if isinstance(s, list) else int(s) for s in term["sites"]]))
        return superposition(tuple(spec["nu"]), terms, label=spec.get("label", "custom"))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad state spec: {exc}") from exc


def parse_times(spec, region: Region, J: float) -> np.ndarray:
    if isinstance(spec, list):
        spec = {"values": spec}
    if not isinstance(spec, dict):
        raise ConfigError("times must be an object or a list")
    scale = spec.get("scale", "t")
    if scale not in ("t", "zeta"):
        raise ConfigError("times.scale must be 't' or 'zeta'")
    try:
        if "values" in spec:
            vals = np.asarray(spec["values"], dtype=float)
        else:
            vals = np.linspace(float(spec["min"]), float(spec["max"]), int(spec["count"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad times spec: {exc}") from exc
    if vals.ndim != 1 or len(vals) == 0:
        raise ConfigError("times must be a non-empty list")
    if np.any(vals < 0) or np.any(np.diff(vals) <= 0):
        raise ConfigError("times must be non-negative and strictly increasing")
    if scale == "zeta":
        vals = time_from_zeta(vals, region.linear_size(), J)
    return vals


def load_config(source, seed_override: str | None = None) -> ExperimentConfig:
    """Validate a config dict or JSON file; raise :class:`ConfigError` on any problem."""
    if isinstance(source, (str, Path)):
        try:
            with open(source, encoding="utf-8") as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}") from exc
    else:
        raw = dict(source)
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    version = raw.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {version}")
    for key in ("state", "region", "times", "engines"):
        if key not in raw:
            raise ConfigError(f"missing required key {key!r}")
    engines = raw["engines"]
    if not isinstance(engines, list) or not engines:
        raise ConfigError("engines must be a non-empty list")
    bad = [e for e in engines if e not in ENGINES]
    if bad:
        raise ConfigError(f"unknown engines {bad}; choose from {list(ENGINES)}")
    if len(set(engines)) != len(engines):
        raise ConfigError("engines must not repeat")
    params = raw.get("params", {}) or {}
    if not isinstance(params, dict):
        raise ConfigError("params must be an object")
    J = float(params.get("J", 1.0))
    if not J > 0:
        raise ConfigError("J must be positive")
    state = parse_state(raw["state"])
    try:
        region = region_from_spec(raw["region"])
    except Exception as exc:
        raise ConfigError(f"bad region spec: {exc}") from exc
    if region.d != state.d:
        raise ConfigError(f"{state.d}D state with a {region.d}D region")
    times = parse_times(raw["times"], region, J)
    seed = raw.get("seed", params.get("mc", {}).get("seed", 0))
    env = os.environ.get(SEED_ENV) if seed_override is None else seed_override
    if env not in (None, ""):
        try:
            seed = int(env)
        except ValueError as exc:
            raise ConfigError(f"{SEED_ENV} must be an integer") from exc
    if not isinstance(seed, int) or seed < 0:
        raise ConfigError("seed must be a non-negative integer")
    try:
        cell_green(state)
    except Exception as exc:
        raise ConfigError(f"state rejected: {exc}") from exc
    return ExperimentConfig(
        state=state, region=region, times=times, engines=list(engines), params=params,
        seed=seed, output=str(raw.get("output", "out")), J=J, raw=raw,
    )


def _run_engine(cfg: ExperimentConfig, engine: str, threads: int, stationary: float | None) -> EntropyCurve:
    p = cfg.params
    if engine == "analytic":
        a = p.get("analytic", {})
        return qp_entropy_analytic(cfg.state, cfg.region, cfg.times, grid=a.get("grid"), method=a.get("method", "trace"), J=cfg.J)
    if engine == "mc":
        m = p.get("mc", {})
        mc = McConfig(samples=int(m.get("samples", 10**5)), seed=cfg.seed, batch=int(m.get("batch", 2**16)), threads=threads)
        return qp_entropy_curve_mc(cfg.state, cfg.region, cfg.times, mc, cfg.J)
    if engine == "exact-thermo":
        e = p.get("exact-thermo", {})
        return exact_entropy_curve(cfg.state, cfg.region, cfg.times, "thermo", M=e.get("M"),
                                   normalize=e.get("normalize", "auto"), threads=threads, J=cfg.J)
    if engine == "exact-finite":
        e = p.get("exact-finite", {})
        return exact_entropy_curve(cfg.state, cfg.region, cfg.times, "finite", L=e.get("L"),
                                   normalize=e.get("normalize", "auto"), threads=threads, J=cfg.J)
    if engine == "stationary":
        n = len(cfg.times)
        return EntropyCurve(
            cfg.times, rescaled_time(cfg.times, cfg.region.linear_size(), cfg.region.d, cfg.J),
            np.full(n, stationary), np.zeros(n), "stationary",
        )
    raise ConfigError(f"unknown engine {engine!r}")


def compare(curves: dict[str, EntropyCurve]) -> list[dict]:
    """Pairwise deviation statistics between engines on the shared time grid."""
    out = []
    for a, b in combinations(curves, 2):
        ca, cb = curves[a], curves[b]
        diff = np.abs(ca.values - cb.values)
        se = np.sqrt(ca.stderr**2 + cb.stderr**2)
        rec = {"a": a, "b": b, "max_abs_diff": float(diff.max()), "mean_abs_diff": float(diff.mean())}
        pos = se > 0
        rec["max_diff_over_stderr"] = float((diff[pos] / se[pos]).max()) if np.any(pos) else None
        out.append(rec)
    return out


def run_experiment(cfg: ExperimentConfig, out_dir=None, threads: int = 1, plot: bool = True) -> dict:
    """Run every engine, write ``<engine>.csv`` files and ``report.json``; return the report."""
    out = Path(out_dir if out_dir is not None else cfg.output)
    out.mkdir(parents=True, exist_ok=True)
    grid = int(cfg.params.get("stationary", {}).get("grid", 512))
    stationary = stationary_entropy_density(cfg.state, grid)
    curves: dict[str, EntropyCurve] = {}
    files = {}
    for engine in cfg.engines:
        curve = _run_engine(cfg, engine, threads, stationary)
        curves[engine] = curve
        path = curve.write_csv(out / f"{engine}.csv")
        files[engine] = {"csv": path.name, "points": len(curve), "meta": curve.meta}
    report = {
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "seed": cfg.seed,
        "state": cfg.state.label,
        "region": cfg.region.describe(),
        "area": cfg.region.area(),
        "stationary": stationary,
        "engines": files,
        "comparisons": compare(curves),
        "final_minus_stationary": {k: float(c.values[-1] - stationary) for k, c in curves.items()},
        "config": cfg.resolved(),
    }
    if plot:
        from .plotting import plot_curves

        png = plot_curves(curves, out / "curves.png", stationary=stationary, title=cfg.state.label)
        report["figure"] = png.name
    atomic_write_json(out / "report.json", report)
    return report
