"""Monte Carlo evaluation of the quasiparticle entropy for arbitrary regions.

Each sample picks a point ``x~`` uniformly in ``A``, a reduced momentum
``p`` and one multiplet mode ``n``; it traces the multiplet back to the
origin from which mode ``n`` reaches ``x~`` at time ``t``, moves every mode
forward, and scores the entropy of the resulting bipartition divided by the
number of modes inside ``A``. The division removes the over-count from
multiplets reachable through several of their modes, so the sample mean is
an unbiased estimate of ``S_A(t) / |A|`` with no further constant.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .cellstate import CellGreen, CellState, cell_green, multiplet_correlation
from .curves import EntropyCurve, rescaled_time
from .entropy import fermi_entropy, mask_modes
from .errors import GeometryStateMismatch
from .geometry import Region
from .lattice import TWO_PI, QuenchConfig, group_velocity, kshifts


@dataclass(frozen=True)
class McConfig:
    """Sampling budget and seed.

    ``batch`` samples share one RNG substream and one partial sum; partial
    sums are merged in batch order, so results do not depend on ``threads``.
    """

    samples: int = 10**6
    seed: int = 0
    batch: int = 2**16
    threads: int = 1
    overcount_correction: bool = True

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.batch < 1:
            raise ValueError("batch must be >= 1")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    samples_used: int


def _batch_sizes(cfg: McConfig) -> list[int]:
    full, rest = divmod(cfg.samples, cfg.batch)
    return [cfg.batch] * full + ([rest] if rest else [])


def _batch_stats(
    g: CellGreen, region: Region, t: float, J: float, n: int, seq: np.random.SeedSequence, correct: bool
) -> tuple[float, float]:
    """Sum and sum of squares of ``n`` sample scores."""
    rng = np.random.default_rng(seq)
    cfg = QuenchConfig(g.nu, J)
    d = cfg.d
    ks = kshifts(cfg)
    x_tilde = region.sample_uniform(rng, n)
    p = rng.random((n, d)) * (TWO_PI / np.asarray(cfg.nu, dtype=float))
    chosen = rng.integers(cfg.volume, size=n)
    # displacement of every mode over time t, shape (n, |nu|, d)
    disp = group_velocity(cfg, p[:, None, :] + ks[None]) * t
    origin = x_tilde - disp[np.arange(n), chosen]
    pos = origin[:, None, :] + disp
    inside = region.contains(pos if d > 1 else pos[..., 0])
    inside[np.arange(n), chosen] = True  # the chosen mode sits at x~ by construction
    masks = (inside * (1 << np.arange(cfg.volume))).sum(axis=1)
    counts = inside.sum(axis=1)
    score = np.zeros(n)
    full = (1 << cfg.volume) - 1
    todo = (masks != full) & (masks != 0)
    if np.any(todo):
        C = multiplet_correlation(g, p[todo])
        sub_masks = masks[todo]
        vals = np.zeros(len(sub_masks))
        for m in np.unique(sub_masks):
            sel = sub_masks == m
            idx = mask_modes(int(m), cfg.volume)
            vals[sel] = fermi_entropy(C[sel][:, idx][:, :, idx])
        score[todo] = vals
    if correct:
        score = score / counts
    return float(score.sum()), float(np.dot(score, score))


def qp_entropy_mc(
    state: CellState | CellGreen,
    region: Region,
    t: float,
    cfg: McConfig = McConfig(),
    J: float = 1.0,
    stream: int = 0,
) -> McEstimate:
    """Monte Carlo estimate of ``S_A(t) / |A|`` with its standard error.

    ``stream`` selects an independent RNG substream of ``cfg.seed``;
    curves use one stream per time point.
    """
    g = state if isinstance(state, CellGreen) else cell_green(state)
    if region.d != len(g.nu):
        raise GeometryStateMismatch(f"{len(g.nu)}D state with a {region.d}D region")
    sizes = _batch_sizes(cfg)
    seqs = [np.random.SeedSequence(cfg.seed, spawn_key=(stream, b)) for b in range(len(sizes))]
    job = lambda args: _batch_stats(g, region, t, J, args[0], args[1], cfg.overcount_correction)  # noqa: E731
    threads = min(cfg.threads, len(sizes))
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(job, zip(sizes, seqs)))
    else:
        parts = [job(a) for a in zip(sizes, seqs)]
    s = sum(p[0] for p in parts)
    s2 = sum(p[1] for p in parts)
    n = cfg.samples
    mean = s / n
    var = max(s2 / n - mean * mean, 0.0) * n / max(n - 1, 1)
    return McEstimate(mean=mean, stderr=float(np.sqrt(var / n)), samples_used=n)


def qp_entropy_curve_mc(
    state: CellState | CellGreen,
    region: Region,
    times,
    cfg: McConfig = McConfig(),
    J: float = 1.0,
) -> EntropyCurve:
    """Monte Carlo curve with RNG stream ``i`` for the ``i``-th time."""
    g = state if isinstance(state, CellGreen) else cell_green(state)
    times = np.atleast_1d(np.asarray(times, dtype=float))
    est = [qp_entropy_mc(g, region, t, cfg, J, stream=i) for i, t in enumerate(times)]
    return EntropyCurve(
        t=times,
        zeta=rescaled_time(times, region.linear_size(), region.d, J),
        values=[e.mean for e in est],
        stderr=[e.stderr for e in est],
        engine="mc",
        meta={"samples": cfg.samples, "seed": cfg.seed, "batch": cfg.batch},
    )


def default_threads() -> int:
    return max(1, min(8, os.cpu_count() or 1))
