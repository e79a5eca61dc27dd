"""Static figures of entropy curves (matplotlib, imported lazily)."""
from __future__ import annotations

from pathlib import Path

STYLES = {
    "analytic": dict(ls="-", lw=1.6),
    "mc": dict(ls="none", marker="o", ms=3),
    "exact-thermo": dict(ls="--", lw=1.2),
    "exact-finite": dict(ls="-.", lw=1.2),
    "stationary": dict(ls=":", lw=1.0, color="k"),
}


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _save(fig, path: Path) -> Path:
    path = Path(path)
    tmp = path.with_name(f".{path.stem}.tmp{path.suffix}")
    fig.savefig(tmp, dpi=120, bbox_inches="tight")
    tmp.replace(path)
    return path


def plot_curves(curves: dict, path, stationary: float | None = None, title: str = "") -> Path:
    """One panel of ``S_A/|A|`` against ``zeta`` for every engine."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5, 3.6))
    for name, c in curves.items():
        if name == "stationary":
            continue
        style = STYLES.get(name, {})
        if name == "mc":
            ax.errorbar(c.zeta, c.values, yerr=c.stderr, label=name, **style)
        else:
            ax.plot(c.zeta, c.values, label=name, **style)
    if stationary is not None:
        ax.axhline(stationary, **STYLES["stationary"], label="stationary")
    ax.set_xlabel(r"$\zeta = 2 v_{max} t / |A|^{1/d}$")
    ax.set_ylabel(r"$S_A / |A|$")
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8)
    out = _save(fig, path)
    plt.close(fig)
    return out


def plot_panels(panels: dict, path, title: str = "") -> Path:
    """Several labelled curves on one axis; ``panels`` maps label -> EntropyCurve."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5.5, 3.8))
    for label, c in panels.items():
        if c.engine == "mc":
            ax.errorbar(c.zeta, c.values, yerr=c.stderr, label=label, ls="-", marker=".", ms=3, lw=0.8)
        elif c.engine == "stationary":
            ax.axhline(c.values[0], ls=":", color="k", lw=1.0, label=label)
        else:
            ax.plot(c.zeta, c.values, label=label, ls="-" if c.engine == "analytic" else "--")
    ax.set_xlabel(r"$\zeta$")
    ax.set_ylabel(r"$S_A / |A|$")
    if title:
        ax.set_title(title)
    ax.legend(fontsize=7)
    out = _save(fig, path)
    plt.close(fig)
    return out
