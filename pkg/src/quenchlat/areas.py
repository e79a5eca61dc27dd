"""Light-cone areas of multiplet origins for box-shaped regions.

A multiplet emitted at ``x`` with reduced momentum ``p`` places mode ``i`` at
``x + v_i t`` at time ``t``. For a region ``A`` the set of origins whose
modes inside ``A`` form the bipartition ``mask`` has some measure
``area_mask(p, t)``; the quasiparticle entropy is the momentum integral of
``sum_mask s_mask(p) area_mask(p, t)``.

For a box (interval, rectangle, or a rectangle rotated by ``theta``) the
origin set of mode ``i`` is the box shifted by ``-v_i t``. In the box frame
each axis splits into at most ``2|nu| - 1`` segments of constant membership,
and cells of the product grid carry the intersection of the per-axis masks.
This gives the exact per-mask areas for any cell and any momentum.

Class-level breakdowns reproduce the closed-form piecewise tables for the
``nu = 4`` chain and the ``nu = (2, 2)`` aligned rectangle.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateVelocities
from .lattice import QuenchConfig, as_momenta, group_velocity, kshifts

POPCOUNT = np.array([bin(i).count("1") for i in range(1 << 16)], dtype=np.int8)


# -- generic box tracer ----------------------------------------------------------


def mode_velocities(cfg: QuenchConfig, p) -> np.ndarray:
    """Group velocities of every multiplet mode, shape (P, |nu|, d)."""
    p, _ = as_momenta(p, cfg.d)
    return group_velocity(cfg, p[:, None, :] + kshifts(cfg)[None])


def axis_segments(shift: np.ndarray, length: float):
    """Segments of one axis with constant membership.

    ``shift`` has shape (P, n): mode ``i`` covers origins in
    ``[-shift_i, length - shift_i]``. Returns segment lengths (P, S) and
    membership bitmasks (P, S) with S = 2n - 1.
    """
    lo = -shift
    hi = length - shift
    ends = np.sort(np.concatenate([lo, hi], axis=1), axis=1)
    seg = np.diff(ends, axis=1)
    mid = 0.5 * (ends[:, 1:] + ends[:, :-1])
    inside = (mid[:, :, None] >= lo[:, None, :]) & (mid[:, :, None] <= hi[:, None, :])
    bits = (1 << np.arange(shift.shape[1])).astype(np.int64)
    masks = (inside * bits).sum(axis=-1)
    return seg, masks


def box_cells(cfg: QuenchConfig, sides, p, t: float, theta: float = 0.0):
    """Exact cells of constant bipartition for a (possibly rotated) box.

    Parameters
    ----------
    cfg : QuenchConfig
    sides : sequence of float
        Box side lengths in its own frame (``(l,)`` or ``(lx, ly)``).
    p : array_like
        Reduced momenta, shape (P, d).
    t : float
        Time.
    theta : float
        Counterclockwise rotation of the box relative to the lattice (2D).

    Returns
    -------
    areas, masks : ndarray
        Cell measures and bipartition masks, both of shape (P, C).
    """
    v = mode_velocities(cfg, p) * t  # (P, n, d)
    if cfg.d == 2 and theta:
        c, s = np.cos(theta), np.sin(theta)
        # components in the box frame
        vx = c * v[..., 0] + s * v[..., 1]
        vy = -s * v[..., 0] + c * v[..., 1]
        v = np.stack([vx, vy], axis=-1)
    areas, masks = None, None
    for axis, length in enumerate(sides):
        seg, m = axis_segments(v[..., axis], float(length))
        if areas is None:
            areas, masks = seg, m
        else:
            areas = (areas[:, :, None] * seg[:, None, :]).reshape(len(seg), -1)
            masks = (masks[:, :, None] & m[:, None, :]).reshape(len(seg), -1)
    return areas, masks


def mask_areas(cfg: QuenchConfig, sides, p, t: float, theta: float = 0.0) -> np.ndarray:
    """Total origin measure for every bipartition mask, shape (P, 2^|nu|)."""
    areas, masks = box_cells(cfg, sides, p, t, theta)
    n_masks = 1 << cfg.volume
    out = np.zeros((areas.shape[0], n_masks))
    rows = np.broadcast_to(np.arange(areas.shape[0])[:, None], masks.shape)
    np.add.at(out, (rows, masks), areas)
    return out


# -- class breakdowns -----------------------------------------------------------


@dataclass
class AreaBreakdown:
    """Per-class light-cone areas at one time for a batch of momenta.

    Attributes
    ----------
    areas : dict[int, ndarray]
        Class id -> area, each of shape (P,).
    class_of_mask : ndarray
        (P, 2^|nu|) class id of each bipartition mask; 0 marks masks outside
        every class (empty, full, or geometrically unreachable).
    times, lengths : dict
        Natural times and lengths of the configuration.
    """

    areas: dict
    class_of_mask: np.ndarray
    times: dict = field(default_factory=dict)
    lengths: dict = field(default_factory=dict)

    def masks_of(self, cls: int, row: int = 0) -> list[int]:
        return [int(m) for m in np.nonzero(self.class_of_mask[row] == cls)[0]]


def _check_distinct(v: np.ndarray, tol: float = 1e-12):
    s = np.sort(v, axis=-1)
    if np.any(np.diff(s, axis=-1) <= tol):
        raise DegenerateVelocities("two multiplet modes share the same velocity")


def chain_velocity_order(p) -> np.ndarray:
    """Mode indices of the ``nu = 4`` chain sorted by descending velocity, shape (P, 4)."""
    cfg = QuenchConfig((4,))
    v = mode_velocities(cfg, p)[..., 0]
    _check_distinct(v)
    return np.argsort(-v, axis=-1, kind="stable")


def chain_classes(p) -> np.ndarray:
    """Class of every mask for the ``nu = 4`` chain, shape (P, 16).

    With modes ``a > b > c > d`` in velocity: class 1 holds single modes and
    their complements, class 2 the pairs ``{a,b}`` and ``{c,d}``, class 3 the
    pairs ``{b,c}`` and ``{a,d}``.
    """
    order = chain_velocity_order(p)
    P = len(order)
    bit = 1 << order  # (P, 4) bits of a, b, c, d
    out = np.zeros((P, 16), dtype=np.int8)
    pc = POPCOUNT[:16]
    out[:, (pc == 1) | (pc == 3)] = 1
    rows = np.arange(P)
    for cls, pairs in ((2, ((0, 1), (2, 3))), (3, ((1, 2), (0, 3)))):
        for i, j in pairs:
            out[rows, bit[:, i] | bit[:, j]] = cls
    return out


def areas_1d_nu4(l: float, p, t: float, J: float = 1.0) -> AreaBreakdown:
    """Closed-form class areas for an interval of length ``l`` and a ``nu = 4`` chain.

    Piecewise in time with the natural times ``tau_ab = l / (v_a - v_b)``
    and lengths ``Delta_ab = (v_a - v_b) t`` of the velocity-sorted modes.
    """
    cfg = QuenchConfig((4,), J)
    v = mode_velocities(cfg, p)[..., 0]
    order = chain_velocity_order(p)
    va, vb, vc, vd = (np.take_along_axis(v, order[:, i : i + 1], axis=1)[:, 0] for i in range(4))
    dab, dbc, dac, dad = (va - vb) * t, (vb - vc) * t, (va - vc) * t, (va - vd) * t
    tab, tbc, tac, tad = l / (va - vb), l / (vb - vc), l / (va - vc), l / (va - vd)
    conds = [
        t < tad,
        t < tac,
        t < np.minimum(tab, tbc),
        (tab <= t) & (t < tbc),
        (tbc <= t) & (t < tab),
    ]
    zero = np.zeros_like(va)
    a1 = np.select(conds, [4 * dab, 2 * (l - dbc), 2 * (dab + dac - l), 2 * (l + dbc), 4 * dab], 4 * l + zero)
    a2 = np.select(conds, [2 * dbc, 2 * dbc, 2 * (l - dab), zero, 2 * (l - dab)], zero)
    a3 = np.select(conds, [zero, dad - l, l - dbc, l - dbc, zero], zero)
    return AreaBreakdown(
        areas={1: a1, 2: a2, 3: a3},
        class_of_mask=chain_classes(p),
        times={"tau_ab": tab, "tau_bc": tbc, "tau_ac": tac, "tau_ad": tad},
        lengths={"Delta_ab": dab, "Delta_bc": dbc, "Delta_ac": dac, "Delta_ad": dad},
    )


def plaquette_classes(P: int) -> np.ndarray:
    """Class of every mask for the ``nu = (2, 2)`` cell, shape (P, 16).

    Modes are indexed ``2 n_x + n_y``. Class 1 holds single modes and their
    complements, class 2 the pairs that differ in ``k_x`` only, class 3 the
    pairs that differ in ``k_y`` only and class 4 the diagonal pairs.
    """
    row = np.zeros(16, dtype=np.int8)
    pc = POPCOUNT[:16]
    row[(pc == 1) | (pc == 3)] = 1
    row[[0b0101, 0b1010]] = 2
    row[[0b0011, 0b1100]] = 3
    row[[0b1001, 0b0110]] = 4
    return np.tile(row, (P, 1))


def areas_2d_rect(lx: float, ly: float, p, t: float, J: float = 1.0) -> AreaBreakdown:
    """Closed-form class areas for an aligned ``lx x ly`` rectangle and a ``(2, 2)`` cell.

    ``X = 4J |sin p_x| t`` and ``Y = 4J |sin p_y| t`` are the separations of
    the two x- and y-velocities; each is clamped at the box side once the
    pair no longer fits.
    """
    p, _ = as_momenta(p, 2)
    X = 4.0 * J * np.abs(np.sin(p[:, 0])) * t
    Y = 4.0 * J * np.abs(np.sin(p[:, 1])) * t
    with np.errstate(divide="ignore"):
        tau_x = lx / (4.0 * J * np.abs(np.sin(p[:, 0])))
        tau_y = ly / (4.0 * J * np.abs(np.sin(p[:, 1])))
    Xc, Yc = np.minimum(X, lx), np.minimum(Y, ly)
    a1 = 4.0 * Xc * Yc
    a2 = 2.0 * (lx - Xc) * Yc
    a3 = 2.0 * (ly - Yc) * Xc
    return AreaBreakdown(
        areas={1: a1, 2: a2, 3: a3},
        class_of_mask=plaquette_classes(len(p)),
        times={"tau_x": tau_x, "tau_y": tau_y},
        lengths={"X": X, "Y": Y},
    )


def areas_2d_rect_rotated(lx: float, ly: float, theta: float, p, t: float, J: float = 1.0) -> AreaBreakdown:
    """Class areas for a rotated rectangle and a ``(2, 2)`` cell.

    Computed by the exact box tracer in the rectangle frame and summed within
    each class; diagonal pairs, which only appear once the box is tilted,
    form class 4.
    """
    cfg = QuenchConfig((2, 2), J)
    ma = mask_areas(cfg, (lx, ly), p, t, theta)
    cls = plaquette_classes(len(ma))
    areas = {c: np.where(cls == c, ma, 0.0).sum(axis=1) for c in (1, 2, 3, 4)}
    return AreaBreakdown(areas=areas, class_of_mask=cls)


# -- corner-length construction for rotated squares ------------------------------


def ramp(x):
    """``G(x) = x H(x)`` with ``H(0) = 0``."""
    x = np.asarray(x, dtype=float)
    return np.where(x > 0, x, 0.0)


def psi(k1, k2):
    """``arctan(sin k1 / sin k2)``."""
    return np.arctan2(np.sin(k1), np.sin(k2))


def speed(k1, k2):
    """``sqrt(sin^2 k1 + sin^2 k2)``."""
    return np.sqrt(np.sin(k1) ** 2 + np.sin(k2) ** 2)


@dataclass(frozen=True)
class RotatedAreaInputs:
    """Corner and intersection lengths of the tilted light cones (unit frame)."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray
    e: np.ndarray
    f: np.ndarray
    g: np.ndarray
    h: np.ndarray
    sin_yx: np.ndarray  # sin(psi(k_y, k_x) - theta), selects the branch

    @classmethod
    def build(cls, p, theta: float, t: float) -> "RotatedAreaInputs":
        p, _ = as_momenta(p, 2)
        kx, ky = p[:, 0], p[:, 1]
        v = speed(kx, ky)
        pyx, pxy = psi(ky, kx), psi(kx, ky)
        return cls(
            a=ramp(1 - 2 * t * np.sin(kx) * np.cos(theta)),
            b=ramp(1 - 2 * t * np.sin(kx) * np.sin(theta)),
            c=ramp(1 - 2 * t * np.sin(ky) * np.cos(theta)),
            d=ramp(1 - 2 * t * np.sin(ky) * np.sin(theta)),
            e=ramp(1 - 2 * v * t * np.cos(pyx - theta)),
            f=ramp(1 - 2 * v * t * np.abs(np.sin(pyx - theta))),
            g=ramp(1 - 2 * v * t * np.cos(pxy - theta)),
            h=ramp(1 - 2 * v * t * np.abs(np.sin(pxy - theta))),
            sin_yx=np.sin(pyx - theta),
        )


def rotated_areas_corner_lengths(l: float, p, theta: float, t: float, J: float = 1.0) -> dict:
    """Tilted-square class areas from the corner-length construction.

    The construction lives in a unit frame with time ``2 J t / l``; areas are
    scaled back by ``l^2`` and keyed by this module's class ids (1 single
    modes, 2 pairs differing in ``k_x``, 3 pairs differing in ``k_y``).
    Agrees with the exact tracer for class 1 before the box saturates and for
    every class as ``theta -> 0``; the pair classes drift at finite angle,
    which is why :func:`areas_2d_rect_rotated` uses the tracer.
    """
    r = RotatedAreaInputs.build(p, theta, 2.0 * J * t / l)
    up = (r.sin_yx > 0).astype(float)
    dn = 1.0 - up
    kx_pairs = 2 * r.e * (1 - r.f) * up + 2 * r.g * (1 - r.h) * dn + (r.a - r.e) * (r.b - r.g)
    ky_pairs = 2 * r.e * (1 - r.f) * dn + 2 * r.g * (1 - r.h) * up + (r.c - r.g) * (r.d - r.e)
    singles = 4 * (1 - r.a * r.b - r.c * r.d) + 2 * (r.e * r.f + r.g * r.h)
    return {1: l * l * singles, 2: l * l * kx_pairs, 3: l * l * ky_pairs}
