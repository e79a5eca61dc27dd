"""Hypercubic tight-binding lattice: dispersion, group velocity and momentum grids.

Conventions
-----------
Lattice spacing is 1. The dispersion is ``eps(k) = 2J sum_i cos(k_i)`` and the
group velocity ``v(k) = -2J sin(k)`` componentwise, so the per-axis maximum
speed is ``v_max = 2J``.

Modes of a unit cell of extents ``nu`` are indexed lexicographically in the
shift integers ``n`` (first axis slowest); the same order is used for the
sites of a cell, for multiplet correlation matrices and for bipartition masks.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class QuenchConfig:
    """Lattice dimension, hopping and unit cell of a quench."""

    nu: tuple[int, ...]
    J: float = 1.0

    def __post_init__(self):
        nu = tuple(int(n) for n in np.atleast_1d(self.nu))
        object.__setattr__(self, "nu", nu)
        if len(nu) < 1:
            raise ValueError("dimension must be >= 1")
        if any(n < 1 for n in nu):
            raise ValueError(f"cell extents must be >= 1, got {nu}")
        if not self.J > 0:
            raise ValueError(f"J must be positive, got {self.J}")

    @property
    def d(self) -> int:
        return len(self.nu)

    @property
    def volume(self) -> int:
        """|nu|, the number of sites (and modes) per unit cell."""
        return int(np.prod(self.nu))

    @property
    def v_max(self) -> float:
        return 2.0 * self.J


def reduce_momentum(k):
    """Reduce momenta componentwise to [0, 2pi)."""
    return np.mod(np.asarray(k, dtype=float), TWO_PI)


def as_momenta(k, d: int):
    """Coerce momenta to shape (P, d); also return the leading batch shape.

    In 1D a bare scalar or a 1D array of scalars is accepted.
    """
    k = np.asarray(k, dtype=float)
    if d == 1 and (k.ndim == 0 or k.shape[-1] != 1):
        k = k[..., None]
    if k.shape[-1] != d:
        raise ValueError(f"momentum has {k.shape[-1]} components, expected {d}")
    return k.reshape(-1, d), k.shape[:-1]


def dispersion(cfg: QuenchConfig, k) -> np.ndarray:
    """Single-particle energy ``2J sum_i cos(k_i)``.

    ``k`` has shape ``(..., d)``; a scalar is accepted when ``d == 1``.
    """
    k = np.asarray(k, dtype=float)
    if cfg.d == 1 and (k.ndim == 0 or k.shape[-1] != 1):
        return 2.0 * cfg.J * np.cos(k)
    return 2.0 * cfg.J * np.cos(k).sum(axis=-1)


def group_velocity(cfg: QuenchConfig, k) -> np.ndarray:
    """Gradient of the dispersion, ``-2J sin(k)`` componentwise."""
    return -2.0 * cfg.J * np.sin(np.asarray(k, dtype=float))


def cell_sites(nu) -> np.ndarray:
    """Integer site vectors of one cell in lexicographic order, shape (|nu|, d)."""
    nu = tuple(int(n) for n in np.atleast_1d(nu))
    return np.array(list(itertools.product(*(range(n) for n in nu))), dtype=int).reshape(-1, len(nu))


def kshifts(cfg: QuenchConfig) -> np.ndarray:
    """Momentum offsets ``2 pi n / nu`` of a multiplet, shape (|nu|, d)."""
    return TWO_PI * cell_sites(cfg.nu) / np.asarray(cfg.nu, dtype=float)


def site_index(nu, site) -> int:
    """Flat lexicographic index of a cell site given as a d-vector."""
    return int(np.ravel_multi_index(tuple(int(s) for s in site), tuple(nu)))


@dataclass(frozen=True)
class ReducedGrid:
    """Midpoint grid over the reduced zone ``prod_i [0, 2pi/nu_i)``.

    Each point carries weight ``prod_i (2pi/nu_i/M_i) / (2pi)^d`` so the
    weights sum to ``1/|nu|``.
    """

    nu: tuple[int, ...]
    M: tuple[int, ...]

    def __post_init__(self):
        nu = tuple(int(n) for n in np.atleast_1d(self.nu))
        M = tuple(int(m) for m in np.atleast_1d(self.M))
        if len(M) == 1 and len(nu) > 1:
            M = M * len(nu)
        if len(M) != len(nu) or any(m < 1 for m in M):
            raise ValueError(f"bad grid resolution {M} for cell {nu}")
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "M", M)

    @cached_property
    def axes(self) -> list[np.ndarray]:
        return [(np.arange(m) + 0.5) * (TWO_PI / n / m) for n, m in zip(self.nu, self.M)]

    @cached_property
    def points(self) -> np.ndarray:
        """Grid momenta, shape (prod(M), d)."""
        mesh = np.meshgrid(*self.axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    @property
    def weight(self) -> float:
        w = 1.0
        for n, m in zip(self.nu, self.M):
            w *= (TWO_PI / n / m) / TWO_PI
        return w

    @property
    def size(self) -> int:
        return int(np.prod(self.M))


def full_zone_grid(d: int, M) -> ReducedGrid:
    """Midpoint grid over the whole Brillouin zone (weights sum to 1)."""
    return ReducedGrid(nu=(1,) * d, M=M)
