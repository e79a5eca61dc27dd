"""Subsystem regions: intervals and simple polygons with rotation.

Lattice convention: site ``n`` sits at the point with integer coordinates
``n``. The constructors :func:`interval` and :func:`rectangle` anchor the box
so that a length-``l`` side anchored at site ``s`` spans ``[s - 1/2, s + l - 1/2]``
and covers exactly ``l`` sites. Region boundaries count as inside.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DegenerateRegion

MAX_REJECTION_TRIALS = 10**6


def _rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def _shoelace(v: np.ndarray) -> float:
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def _centroid(v: np.ndarray) -> np.ndarray:
    x, y = v[:, 0], v[:, 1]
    cross = x * np.roll(y, -1) - np.roll(x, -1) * y
    a = cross.sum() / 2.0
    cx = ((x + np.roll(x, -1)) * cross).sum() / (6.0 * a)
    cy = ((y + np.roll(y, -1)) * cross).sum() / (6.0 * a)
    return np.array([cx, cy])


def _segments_intersect(p1, p2, q1, q2) -> bool:
    def orient(a, b, c):
        return np.sign((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))

    return orient(p1, p2, q1) * orient(p1, p2, q2) < 0 and orient(q1, q2, p1) * orient(q1, q2, p2) < 0


@dataclass(frozen=True)
class Region:
    """A 1D interval or a simple 2D polygon.

    ``vertices`` are given in the unrotated frame; the region is rotated by
    ``theta`` (counterclockwise) about its centroid and then translated by
    ``offset``. For intervals ``vertices`` holds the two endpoints.
    """

    kind: str
    vertices: np.ndarray
    theta: float = 0.0
    offset: tuple[float, ...] = ()
    shape: str = "polygon"
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if self.kind == "interval":
            v = np.sort(v.reshape(2))
            if not v[1] > v[0]:
                raise DegenerateRegion("interval has zero length")
            off = tuple(self.offset) or (0.0,)
        elif self.kind == "polygon":
            v = v.reshape(-1, 2)
            if len(v) < 3:
                raise DegenerateRegion("polygon needs at least 3 vertices")
            if _shoelace(v) < 0:
                v = v[::-1].copy()
            if abs(_shoelace(v)) <= 1e-14:
                raise DegenerateRegion("polygon has zero area")
            n = len(v)
            for i in range(n):
                for j in range(i + 2, n):
                    if i == 0 and j == n - 1:
                        continue
                    if _segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]):
                        raise DegenerateRegion("polygon is self-intersecting")
            off = tuple(self.offset) or (0.0, 0.0)
        else:
            raise ValueError(f"unknown region kind {self.kind!r}")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "offset", tuple(float(o) for o in off))

    @property
    def d(self) -> int:
        return 1 if self.kind == "interval" else 2

    @property
    def world_vertices(self) -> np.ndarray:
        """Vertices after rotation and translation."""
        if self.kind == "interval":
            return self.vertices + self.offset[0]
        c = _centroid(self.vertices)
        R = _rotation(self.theta)
        return (self.vertices - c) @ R.T + c + np.asarray(self.offset)

    def area(self) -> float:
        """Length (1D) or shoelace area (2D)."""
        if self.kind == "interval":
            return float(self.vertices[1] - self.vertices[0])
        return abs(_shoelace(self.vertices))

    def linear_size(self) -> float:
        """``|A|^(1/d)``, the length scale used to rescale time."""
        return self.area() ** (1.0 / self.d)

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        w = self.world_vertices
        if self.kind == "interval":
            return np.array([w[0]]), np.array([w[1]])
        return w.min(axis=0), w.max(axis=0)

    def contains(self, x) -> np.ndarray:
        """Membership of points ``x`` of shape (..., d) (closed region)."""
        x = np.asarray(x, dtype=float)
        if self.kind == "interval":
            if x.ndim and x.shape[-1] == 1:
                x = x[..., 0]
            lo, hi = self.world_vertices
            return (x >= lo) & (x <= hi)
        return _point_in_polygon(self.world_vertices, x)

    def rotated(self, dtheta: float) -> "Region":
        return replace(self, theta=self.theta + dtheta)

    def translated(self, shift) -> "Region":
        return replace(self, offset=tuple(np.asarray(self.offset) + np.asarray(shift, dtype=float)))

    def scaled(self, factor: float) -> "Region":
        """Scale about the origin of the unrotated frame (offset is scaled too)."""
        params = dict(self.params)
        for key in ("l", "lx", "ly", "circumradius", "outer", "inner"):
            if key in params:
                params[key] = params[key] * factor
        return replace(
            self,
            vertices=self.vertices * factor,
            offset=tuple(np.asarray(self.offset) * factor),
            params=params,
        )

    def sample_uniform(self, rng: np.random.Generator, n: int = 1) -> np.ndarray:
        """``n`` points uniform in the region by bounding-box rejection, shape (n, d)."""
        lo, hi = self.bounding_box()
        out = np.empty((0, self.d))
        trials = 0
        while len(out) < n:
            need = n - len(out)
            batch = max(64, int(need * 1.3 * np.prod(hi - lo) / self.area()) + 16)
            batch = min(batch, 4 * MAX_REJECTION_TRIALS)
            pts = lo + (hi - lo) * rng.random((batch, self.d))
            hit = pts[self.contains(pts)]
            trials += batch
            if len(hit) == 0 and trials >= MAX_REJECTION_TRIALS:
                raise DegenerateRegion("rejection sampling failed to hit the region")
            out = np.concatenate([out, hit[:need]])
        return out

    def lattice_sites(self) -> np.ndarray:
        """Integer sites inside the region, shape (n_sites, d), lexicographic."""
        lo, hi = self.bounding_box()
        axes = [np.arange(np.ceil(a - 1e-9), np.floor(b + 1e-9) + 1, dtype=int) for a, b in zip(lo, hi)]
        grid = np.stack([m.ravel() for m in np.meshgrid(*axes, indexing="ij")], axis=-1)
        return grid[self.contains(grid.astype(float))]

    def describe(self) -> dict:
        out = {"shape": self.shape, "theta": self.theta, "offset": list(self.offset)}
        out.update(self.params)
        if self.shape == "polygon":
            out["vertices"] = self.vertices.tolist()
        return out


def _point_in_polygon(v: np.ndarray, x: np.ndarray, eps: float = 1e-12) -> np.ndarray:
    """Even-odd crossing test with boundary points counted inside."""
    px, py = x[..., 0], x[..., 1]
    inside = np.zeros(px.shape, dtype=bool)
    on_edge = np.zeros(px.shape, dtype=bool)
    scale = max(1.0, float(np.abs(v).max()))
    n = len(v)
    for i in range(n):
        x1, y1 = v[i]
        x2, y2 = v[(i + 1) % n]
        crosses = (y1 > py) != (y2 > py)
        with np.errstate(divide="ignore", invalid="ignore"):
            xint = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
        inside ^= crosses & (px < xint)
        # distance to segment for the closed boundary
        dx, dy = x2 - x1, y2 - y1
        seg2 = dx * dx + dy * dy
        tpar = np.clip(((px - x1) * dx + (py - y1) * dy) / seg2, 0.0, 1.0)
        dist2 = (px - x1 - tpar * dx) ** 2 + (py - y1 - tpar * dy) ** 2
        on_edge |= dist2 <= (eps * scale) ** 2
    return inside | on_edge


# -- constructors --------------------------------------------------------------


def interval(l: float, anchor: float = 0.0) -> Region:
    """Interval of length ``l`` covering sites ``anchor .. anchor + l - 1``."""
    return Region("interval", np.array([-0.5, l - 0.5]), offset=(anchor,), shape="interval", params={"l": l})


def rectangle(lx: float, ly: float, theta: float = 0.0, anchor=(0.0, 0.0)) -> Region:
    """Rectangle ``lx x ly`` whose unrotated lower-left corner is at ``anchor - 1/2``."""
    v = np.array([[0.0, 0.0], [lx, 0.0], [lx, ly], [0.0, ly]]) - 0.5
    return Region("polygon", v, theta=theta, offset=tuple(anchor), shape="rectangle", params={"lx": lx, "ly": ly})


def regular_polygon(q: int, circumradius: float = 1.0, theta: float = 0.0, center=(0.0, 0.0)) -> Region:
    """Regular ``q``-gon centred at ``center`` with a vertex pointing up at theta = 0."""
    ang = np.pi / 2 + 2 * np.pi * np.arange(q) / q
    v = circumradius * np.stack([np.cos(ang), np.sin(ang)], axis=-1)
    return Region(
        "polygon", v, theta=theta, offset=tuple(center), shape="regular_polygon",
        params={"q": q, "circumradius": circumradius},
    )


PENTAGRAM_RATIO = float((3.0 - np.sqrt(5.0)) / 2.0)


def star(points: int = 5, outer: float = 1.0, inner: float | None = None, theta: float = 0.0, center=(0.0, 0.0)) -> Region:
    """Star outline with ``2 * points`` vertices alternating between two radii.

    The default inner radius gives the regular pentagram outline.
    """
    if inner is None:
        inner = outer * PENTAGRAM_RATIO
    ang = np.pi / 2 + np.pi * np.arange(2 * points) / points
    rad = np.where(np.arange(2 * points) % 2 == 0, outer, inner)
    v = np.stack([rad * np.cos(ang), rad * np.sin(ang)], axis=-1)
    return Region(
        "polygon", v, theta=theta, offset=tuple(center), shape="star",
        params={"points": points, "outer": outer, "inner": inner},
    )


def polygon(vertices, theta: float = 0.0, offset=(0.0, 0.0)) -> Region:
    return Region("polygon", np.asarray(vertices, dtype=float), theta=theta, offset=tuple(offset))


def unit_rectangle(r: float, theta: float = 0.0) -> Region:
    """Unit-area rectangle with sides ``sqrt(r)`` and ``1/sqrt(r)`` centred at the origin."""
    sx, sy = np.sqrt(r), 1.0 / np.sqrt(r)
    v = np.array([[-sx, -sy], [sx, -sy], [sx, sy], [-sx, sy]]) / 2.0
    return Region("polygon", v, theta=theta, shape="rectangle", params={"lx": sx, "ly": sy})


def region_from_spec(spec: dict) -> Region:
    """Build a region from its JSON description."""
    spec = dict(spec)
    shape = spec.pop("shape")
    theta = float(spec.pop("theta", 0.0))
    if shape == "interval":
        return interval(float(spec["l"]), float(spec.get("anchor", 0.0)))
    if shape == "rectangle":
        if "r" in spec:
            return unit_rectangle(float(spec["r"]), theta)
        return rectangle(float(spec["lx"]), float(spec["ly"]), theta, tuple(spec.get("anchor", (0.0, 0.0))))
    if shape == "square":
        l = float(spec.get("l", 1.0))
        return rectangle(l, l, theta, tuple(spec.get("anchor", (0.0, 0.0))))
    if shape == "regular_polygon":
        return regular_polygon(int(spec["q"]), float(spec.get("circumradius", 1.0)), theta, tuple(spec.get("center", (0.0, 0.0))))
    if shape == "star":
        return star(
            int(spec.get("points", 5)), float(spec.get("outer", 1.0)),
            None if spec.get("inner") is None else float(spec["inner"]), theta,
            tuple(spec.get("center", (0.0, 0.0))),
        )
    if shape == "polygon":
        return polygon(spec["vertices"], theta, tuple(spec.get("offset", (0.0, 0.0))))
    raise ValueError(f"unknown region shape {shape!r}")
