"""Entropy-density time series and their file formats."""
from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

CSV_HEADER = ("t", "zeta", "entropy_density", "stderr", "engine")


def rescaled_time(t, linear_size: float, d: int = 1, J: float = 1.0):
    """``zeta = 2 v_max t / |A|^(1/d)`` with ``v_max = 2J``; ``linear_size`` is ``|A|^(1/d)``."""
    return 2.0 * (2.0 * J) * np.asarray(t, dtype=float) / linear_size


def time_from_zeta(zeta, linear_size: float, J: float = 1.0):
    return np.asarray(zeta, dtype=float) * linear_size / (4.0 * J)


@dataclass
class EntropyCurve:
    """Sampled ``S_A(t) / |A|`` with per-point uncertainty.

    Attributes
    ----------
    t, zeta, values, stderr : ndarray
        Times, rescaled times, entropy densities (nats per unit area) and
        standard errors (zero for deterministic engines).
    engine : str
        ``analytic``, ``mc``, ``exact-thermo``, ``exact-finite`` or ``stationary``.
    meta : dict
        Free-form provenance (resolved parameters, seed, normalization).
    """

    t: np.ndarray
    zeta: np.ndarray
    values: np.ndarray
    stderr: np.ndarray
    engine: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.zeta = np.asarray(self.zeta, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        self.stderr = np.zeros_like(self.values) if self.stderr is None else np.asarray(self.stderr, dtype=float)

    def __len__(self) -> int:
        return len(self.t)

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for row in zip(self.t, self.zeta, self.values, self.stderr):
            w.writerow([repr(float(x)) for x in row] + [self.engine])
        return buf.getvalue()

    def write_csv(self, path) -> Path:
        return atomic_write_text(path, self.to_csv_text())


def read_curve_csv(path) -> EntropyCurve:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    engine = rows[0]["engine"] if rows else ""
    col = lambda k: [float(r[k]) for r in rows]  # noqa: E731
    return EntropyCurve(col("t"), col("zeta"), col("entropy_density"), col("stderr"), engine)


def atomic_write_text(path, text: str) -> Path:
    """Write to a temporary sibling and rename, so readers never see partial files."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def atomic_write_json(path, obj) -> Path:
    return atomic_write_text(path, json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n")


def _json_default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, complex):
        return [o.real, o.imag]
    raise TypeError(f"not JSON serializable: {type(o).__name__}")
