"""Entropy of fermionic correlation matrices.

Bipartitions of a multiplet are encoded as integer bitmasks over the kshift
mode indices: bit ``i`` set means mode ``i`` lies inside the subsystem.
"""
from __future__ import annotations

import numpy as np
from scipy.special import xlogy

from .cellstate import CellGreen, CellState, cell_green, multiplet_correlation, occupation
from .errors import NotACorrelationMatrix
from .lattice import QuenchConfig, ReducedGrid, full_zone_grid, kshifts

EIG_TOL = 1e-8


def binary_entropy(x) -> np.ndarray:
    """``-x ln x - (1-x) ln(1-x)`` with ``h(0) = h(1) = 0``."""
    x = np.asarray(x, dtype=float)
    return -xlogy(x, x) - xlogy(1.0 - x, 1.0 - x)


def _spectrum_entropy(w: np.ndarray, tol: float = EIG_TOL) -> np.ndarray:
    if w.size and (w.min() < -tol or w.max() > 1.0 + tol):
        raise NotACorrelationMatrix(f"eigenvalues outside [0, 1]: [{w.min():.3g}, {w.max():.3g}]")
    return binary_entropy(np.clip(w, 0.0, 1.0)).sum(axis=-1)


def fermi_entropy(C, tol: float = EIG_TOL) -> float:
    """Von Neumann entropy (nats) of the Gaussian state with correlation matrix C.

    Eigenvalues within ``tol`` outside [0, 1] are clamped; larger violations
    raise :class:`NotACorrelationMatrix`. Stacks of matrices (..., n, n) give
    an array of entropies.
    """
    C = np.asarray(C)
    if C.shape[-1] == 0:
        return 0.0 if C.ndim == 2 else np.zeros(C.shape[:-2])
    w = np.linalg.eigvalsh(C)
    s = _spectrum_entropy(w, tol)
    return float(s) if np.ndim(s) == 0 else s


def mask_modes(mask: int, n: int) -> list[int]:
    return [i for i in range(n) if mask >> i & 1]


def modes_mask(modes) -> int:
    m = 0
    for i in modes:
        m |= 1 << int(i)
    return m


def bipartition_entropy(C, mask: int) -> float:
    """Particle entanglement of the modes selected by ``mask``.

    Entropy of the principal submatrix of the multiplet correlation matrix
    ``C`` (or of a stack of them); the empty and the full mask give 0.
    """
    C = np.asarray(C)
    n = C.shape[-1]
    if mask < 0 or mask >= 1 << n:
        raise ValueError(f"mask {mask} invalid for {n} modes")
    if mask in (0, (1 << n) - 1):
        return 0.0 if C.ndim == 2 else np.zeros(C.shape[:-2])
    idx = mask_modes(mask, n)
    sub = C[..., idx, :][..., :, idx]
    return fermi_entropy(sub)


def contribution_table(g: CellGreen, points) -> np.ndarray:
    """Entropy of every bipartition mask at every momentum.

    Returns an array of shape (P, 2^|nu|) with entry ``[j, mask]`` the
    particle entanglement ``s_mask(p_j)``.
    """
    C = multiplet_correlation(g, np.asarray(points).reshape(-1, len(g.nu)))
    n = g.volume
    table = np.zeros((C.shape[0], 1 << n))
    full = (1 << n) - 1
    for mask in range(1, full):
        comp = full ^ mask
        if comp < mask:
            table[:, mask] = table[:, comp]
            continue
        table[:, mask] = bipartition_entropy(C, mask)
    return table


def stationary_entropy_density(state: CellState | CellGreen, grid: ReducedGrid | int = 512) -> float:
    """Thermodynamic entropy per site of the late-time stationary state.

    ``-int dk/(2pi)^d [n ln n + (1-n) ln(1-n)]`` over the full Brillouin zone,
    by midpoint quadrature (``grid`` may be a resolution per axis).
    """
    g = state if isinstance(state, CellGreen) else cell_green(state)
    d = len(g.nu)
    if not isinstance(grid, ReducedGrid):
        grid = full_zone_grid(d, grid)
    if min(grid.M) < 64:
        raise ValueError("stationary entropy needs at least 64 points per axis")
    if any(n != 1 for n in grid.nu):
        # a reduced grid covers the full zone once shifted by every kshift
        pts = (grid.points[:, None, :] + kshifts(QuenchConfig(grid.nu))[None]).reshape(-1, d)
    else:
        pts = grid.points
    return float(binary_entropy(occupation(g, pts)).sum() * grid.weight)


def saturation_closed_form(alpha: float) -> float:
    """Stationary entropy density of the ``|0,1> + alpha|0,2>`` family in closed form."""
    r = np.sqrt(alpha**4 + alpha**2 + 1.0) / (alpha**2 + 1.0)
    return float(r - 1.0 - np.log(0.25 + r / 4.0))
