"""Quasiparticle entropy of box regions by exact light-cone area tracing.

``S_A(t) = int dp/(2pi)^d sum_mask s_mask(p) area_mask(p, t)`` over the
reduced zone, evaluated by midpoint quadrature on a :class:`ReducedGrid`.
"""
from __future__ import annotations

import numpy as np

from .areas import axis_segments, areas_1d_nu4, areas_2d_rect, areas_2d_rect_rotated, box_cells
from .cellstate import CellGreen, CellState, cell_green
from .curves import EntropyCurve, rescaled_time
from .entropy import contribution_table
from .errors import GeometryStateMismatch
from .geometry import Region
from .lattice import TWO_PI, QuenchConfig, ReducedGrid, group_velocity, kshifts

DEFAULT_GRID = {1: 10000, 2: 250}
CHUNK = 1 << 15


def box_sides(region: Region) -> tuple[float, ...]:
    """Side lengths of an interval or rectangle region."""
    if region.shape == "interval":
        return (region.area(),)
    if region.shape == "rectangle":
        return (float(region.params["lx"]), float(region.params["ly"]))
    raise GeometryStateMismatch(f"area tracing needs an interval or rectangle, got {region.shape!r}")


def _green(state) -> CellGreen:
    return state if isinstance(state, CellGreen) else cell_green(state)


def _resolve_grid(nu, grid) -> ReducedGrid:
    if isinstance(grid, ReducedGrid):
        if tuple(grid.nu) != tuple(nu):
            raise GeometryStateMismatch(f"grid built for cell {grid.nu}, state has {nu}")
        return grid
    return ReducedGrid(nu, DEFAULT_GRID.get(len(nu), 64) if grid is None else grid)


def _table(g: CellGreen, pts: np.ndarray) -> np.ndarray:
    return np.concatenate([contribution_table(g, pts[s : s + CHUNK]) for s in range(0, len(pts), CHUNK)])


def _axis_rule(cfg: QuenchConfig, axis: int, M: int, length: float, t: float, refine: int):
    """Midpoint rule on one reduced-zone axis with kinked cells subdivided.

    Returns nodes, weights (``dp / 2pi``) and the parent cell of each node.
    """
    nu_a = cfg.nu[axis]
    h = TWO_PI / nu_a / M
    nodes = (np.arange(M) + 0.5) * h
    parents = np.arange(M)
    weights = np.full(M, h / TWO_PI)
    if refine > 1 and t > 0:
        edges = np.arange(M + 1) * h
        shifts = TWO_PI * np.arange(nu_a) / nu_a
        v = group_velocity(cfg, edges[:, None] + shifts[None, :]) * t
        ends = np.concatenate([-v, length - v], axis=1)
        order = np.argsort(ends, axis=1, kind="stable")
        kinked = np.nonzero(np.any(order[1:] != order[:-1], axis=1))[0]
        if len(kinked):
            keep = np.ones(M, dtype=bool)
            keep[kinked] = False
            sub = (kinked[:, None] + (np.arange(refine)[None, :] + 0.5) / refine) * h
            nodes = np.concatenate([nodes[keep], sub.ravel()])
            parents = np.concatenate([parents[keep], np.repeat(kinked, refine)])
            weights = np.concatenate([weights[keep], np.full(sub.size, h / refine / TWO_PI)])
    return nodes, weights, parents


def _aligned_sum(cfg: QuenchConfig, sides, grid: ReducedGrid, table: np.ndarray, t: float, refine: int) -> float:
    """``sum_mask int dp s_mask area_mask`` for an axis-aligned box, axis by axis."""
    rules, segs = [], []
    k = kshifts(cfg)
    for axis, length in enumerate(sides):
        nodes, w, par = _axis_rule(cfg, axis, grid.M[axis], length, t, refine)
        shift = group_velocity(cfg, nodes[:, None] + k[None, :, axis]) * t
        seg, masks = axis_segments(shift, length)
        rules.append((w, par))
        segs.append((seg, masks))
    if cfg.d == 1:
        (w, par), (seg, masks) = rules[0], segs[0]
        s = np.take_along_axis(table[par], masks, axis=1)
        return float((w * (seg * s).sum(axis=1)).sum())
    if cfg.d != 2:
        raise GeometryStateMismatch("aligned area tracing supports d = 1, 2")
    (wx, px), (wy, py) = rules
    (sx, mx), (sy, my) = segs
    My = grid.M[1]
    total = 0.0
    rows = max(1, CHUNK // max(1, len(wy)))
    for a in range(0, len(wx), rows):
        b = slice(a, a + rows)
        parent = px[b, None] * My + py[None, :]  # (nx, ny)
        masks = mx[b, None, :, None] & my[None, :, None, :]  # (nx, ny, Sx, Sy)
        area = sx[b, None, :, None] * sy[None, :, None, :]
        s = table[parent[..., None, None], masks]
        cell = (area * s).sum(axis=(2, 3))
        total += float((wx[b, None] * wy[None, :] * cell).sum())
    return total


def _class_contributions(table: np.ndarray, class_of_mask: np.ndarray, classes, tol: float = 1e-9) -> dict:
    """Per-class contribution, checking it is the same for every mask of the class."""
    out = {}
    for c in classes:
        member = class_of_mask == c
        vals = np.where(member, table, np.nan)
        lo, hi = np.nanmin(vals, axis=1), np.nanmax(vals, axis=1)
        if np.any(hi - lo > tol):
            raise ValueError(f"contributions differ within class {c}; use method='trace'")
        out[c] = lo
    return out


def qp_entropy_analytic(
    state: CellState | CellGreen,
    region: Region,
    times,
    grid: ReducedGrid | int | None = None,
    method: str = "trace",
    J: float = 1.0,
    refine: int = 16,
) -> EntropyCurve:
    """Quasiparticle ``S_A(t)/|A|`` for an interval or (rotated) rectangle.

    Parameters
    ----------
    state : CellState or CellGreen
    region : Region
        Interval (1D) or rectangle (2D), possibly rotated.
    times : array_like
        Raw times ``t``.
    grid : ReducedGrid or int, optional
        Momentum quadrature; an int sets the points per axis. Defaults to
        10000 (1D) and 250 x 250 (2D).
    method : {"trace", "classes"}
        ``trace`` weights every bipartition mask by its exact area and works
        for any cell. ``classes`` uses the piecewise class areas of the
        ``nu = 4`` chain or the ``(2, 2)`` plaquette and requires equal
        contributions within each class.
    refine : int
        For aligned boxes, grid cells whose light-cone ordering changes
        inside the cell are split into this many sub-cells (1 disables).
        Contributions are kept at the parent cell's midpoint.
    """
    g = _green(state)
    d = len(g.nu)
    if region.d != d:
        raise GeometryStateMismatch(f"{d}D state with a {region.d}D region")
    sides = box_sides(region)
    grid = _resolve_grid(g.nu, grid)
    cfg = QuenchConfig(g.nu, J)
    pts = grid.points
    times = np.atleast_1d(np.asarray(times, dtype=float))
    out = np.zeros(len(times))

    if method == "trace" and not region.theta:
        table = _table(g, pts)
        for i, t in enumerate(times):
            out[i] = _aligned_sum(cfg, sides, grid, table, t, refine)
    elif method == "trace":
        for start in range(0, len(pts), CHUNK):
            p = pts[start : start + CHUNK]
            table = contribution_table(g, p)
            for i, t in enumerate(times):
                areas, masks = box_cells(cfg, sides, p, t, region.theta)
                out[i] += (areas * np.take_along_axis(table, masks, axis=1)).sum()
    elif method == "classes":
        out = _classes_method(g, region, sides, grid, times, J)
    else:
        raise ValueError(f"unknown method {method!r}")

    if method == "trace" and region.theta:
        out = out * grid.weight
    density = out / region.area() if method == "trace" else out
    return EntropyCurve(
        t=times,
        zeta=rescaled_time(times, region.linear_size(), d, J),
        values=density,
        stderr=np.zeros(len(times)),
        engine="analytic",
        meta={"grid": list(grid.M), "method": method},
    )


def _classes_method(g: CellGreen, region: Region, sides, grid: ReducedGrid, times, J: float) -> np.ndarray:
    nu = tuple(g.nu)
    if nu == (4,):
        area_fn = lambda p, t: areas_1d_nu4(sides[0], p, t, J)  # noqa: E731
    elif nu == (2, 2):
        if region.theta:
            area_fn = lambda p, t: areas_2d_rect_rotated(sides[0], sides[1], region.theta, p, t, J)  # noqa: E731
        else:
            area_fn = lambda p, t: areas_2d_rect(sides[0], sides[1], p, t, J)  # noqa: E731
    else:
        raise GeometryStateMismatch(f"class areas exist for nu=(4,) and (2,2), got {nu}")
    out = np.zeros(len(times))
    for start in range(0, grid.size, CHUNK):
        p = grid.points[start : start + CHUNK]
        table = contribution_table(g, p)
        for i, t in enumerate(times):
            br = area_fn(p, t)
            s = _class_contributions(table, br.class_of_mask, br.areas.keys())
            out[i] += sum((br.areas[c] * s[c]).sum() for c in br.areas)
    return out * grid.weight / region.area()


# -- closed form for constant contributions ------------------------------------


def light_cone_fraction(z):
    """``int_0^pi dk/(2pi) min(z sin k, 1)``, the per-axis single-mode fraction."""
    z = np.asarray(z, dtype=float)
    zs = np.maximum(z, 1.0)
    big = 0.5 - np.arcsin(1.0 / zs) / np.pi + (zs - np.sqrt(zs * zs - 1.0)) / np.pi
    return np.where(z <= 1.0, z / np.pi, big)


def closed_form_rectangle(s1: float, s2: float, s3: float, r: float, zeta):
    """Entropy density of an aligned rectangle with aspect ``r = lx/ly`` for a ``(2, 2)`` cell.

    Valid for momentum-independent contributions ``s1`` (single modes),
    ``s2`` (pairs differing in ``k_x``) and ``s3`` (pairs differing in ``k_y``).
    """
    fy = light_cone_fraction(np.asarray(zeta) * np.sqrt(r))
    fx = light_cone_fraction(np.asarray(zeta) / np.sqrt(r))
    return 4 * fy * fx * s1 + fy * (1 - 2 * fx) * s2 + (1 - 2 * fy) * fx * s3
