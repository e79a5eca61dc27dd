"""Desk-scale reproduction configs for the standard figures.

Every figure expands to a list of ordinary experiment configs, each run into
its own subdirectory, plus one combined PNG.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .curves import atomic_write_json, read_curve_csv
from .errors import UnknownFigure
from .experiment import load_config, run_experiment
from .geometry import PENTAGRAM_RATIO, star

FIGURES = ("fig3a", "fig3b", "fig5", "fig6", "fig7")


def _times(zmax: float, count: int) -> dict:
    return {"min": 0.0, "max": zmax, "count": count, "scale": "zeta"}


def _unit_polygon_radius(q: int) -> float:
    return float(np.sqrt(2.0 / (q * np.sin(2 * np.pi / q))))


def _unit_star() -> dict:
    area = star(5, 1.0).area()
    outer = 1.0 / np.sqrt(area)
    return {"shape": "star", "points": 5, "outer": outer, "inner": outer * PENTAGRAM_RATIO}


def figure_configs(fig: str, quick: bool = False) -> list[tuple[str, dict]]:
    """``(run name, config)`` pairs for one figure; ``quick`` shrinks every budget."""
    count = 11 if quick else 61
    if fig == "fig3a":
        out = []
        for name in ("1d:0", "1d:0,1", "1d:0,2"):
            for l in (20, 40):
                out.append((f"{name.replace(':', '_').replace(',', '-')}_l{l}", {
                    "state": {"name": name},
                    "region": {"shape": "interval", "l": l},
                    "times": _times(3.0, count),
                    "engines": ["analytic", "exact-thermo", "stationary"],
                    "params": {"analytic": {"grid": 1000 if quick else 10000},
                               "exact-thermo": {"M": 2048 if quick else 10000}},
                }))
        return out
    if fig == "fig3b":
        out = []
        for name in ("2d:0", "2d:0,3", "2d:0,2"):
            for l in ((4, 6) if quick else (10, 20)):
                out.append((f"{name.replace(':', '_').replace(',', '-')}_l{l}", {
                    "state": {"name": name},
                    "region": {"shape": "rectangle", "lx": l, "ly": l},
                    "times": _times(3.0, count),
                    "engines": ["analytic", "exact-thermo", "stationary"],
                    "params": {"analytic": {"grid": 64 if quick else 250},
                               "exact-thermo": {"M": 96 if quick else 250}},
                }))
        return out
    if fig == "fig5":
        angles = (0.0, np.pi / 8) if quick else (0.0, np.pi / 16, np.pi / 8, 3 * np.pi / 16, np.pi / 4)
        return [
            (f"r{r}_theta{i}", {
                "state": {"name": "phi22", "alpha": 10 / 7},
                "region": {"shape": "rectangle", "r": r, "theta": float(th)},
                "times": _times(4.0, count),
                "engines": ["analytic", "stationary"],
                "params": {"analytic": {"grid": 48 if quick else 250}},
            })
            for r in (1, 5) for i, th in enumerate(angles)
        ]
    if fig in ("fig6", "fig7"):
        if fig == "fig6":
            shapes = {
                "isosceles": {"shape": "polygon", "vertices": [[-0.5, 0.0], [0.5, 0.0], [0.0, 2.0]]},
                "equilateral": {"shape": "regular_polygon", "q": 3, "circumradius": _unit_polygon_radius(3)},
                "pentagon": {"shape": "regular_polygon", "q": 5, "circumradius": _unit_polygon_radius(5)},
            }
            state = {"name": "phi22", "alpha": 0.5}
            angles = (0.0, np.pi / 10, np.pi / 5, 3 * np.pi / 10)
        else:
            shapes = {"star": _unit_star()}
            state = {"name": "2d:0,3"}
            angles = (0.0, np.pi / 15, 2 * np.pi / 15)
        if quick:
            angles = angles[:2]
        return [
            (f"{label}_theta{i}", {
                "state": state,
                "region": dict(spec, theta=float(th)),
                "times": _times(3.0, 7 if quick else 31),
                "engines": ["mc", "stationary"],
                "params": {"mc": {"samples": 2000 if quick else 10**5}},
                "seed": 0,
            })
            for label, spec in shapes.items() for i, th in enumerate(angles)
        ]
    raise UnknownFigure(f"unknown figure {fig!r}; choose from {list(FIGURES)}")


def reproduce(fig: str, out_dir=None, threads: int = 1, quick: bool = False, plot: bool = True) -> dict:
    """Run every config of ``fig`` under ``out_dir/fig`` and return an index of the runs."""
    configs = figure_configs(fig, quick)
    root = Path(out_dir) if out_dir is not None else Path("reproduce")
    root = root / fig
    index = {"figure": fig, "quick": quick, "runs": {}}
    panels = {}
    for name, raw in configs:
        run_dir = root / name
        raw = dict(raw, output=str(run_dir))
        atomic_write_json(run_dir / "config.json", raw)
        cfg = load_config(raw)
        report = run_experiment(cfg, run_dir, threads=threads, plot=plot)
        index["runs"][name] = {"dir": name, "stationary": report["stationary"], "engines": list(report["engines"])}
        for engine, info in report["engines"].items():
            if engine == "stationary":
                continue
            panels[f"{name} {engine}"] = read_curve_csv(run_dir / info["csv"])
    if plot:
        from .plotting import plot_panels

        plot_panels(panels, root / f"{fig}.png", title=fig)
        index["figure_png"] = f"{fig}.png"
    atomic_write_json(root / "index.json", index)
    return index
