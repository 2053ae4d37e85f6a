"""Axis-aligned rectilinear room geometry: containment, boundary distance,
ray casting.

All coordinates are millimetres in the room frame. Polygons are simple,
closed, and every edge is parallel to an axis; vertices are stored
counterclockwise without a repeated closing vertex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, RayCastError

EPS = 1e-9


def _signed_area(vertices: list[tuple[float, float]]) -> float:
    area = 0.0
    n = len(vertices)
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        area += x0 * y1 - x1 * y0
    return 0.5 * area


def _segments_cross(a0, a1, b0, b1) -> bool:
    """True if open segments a and b properly intersect (axis-aligned case)."""
    def span(lo, hi):
        return (min(lo, hi), max(lo, hi))

    ax = a0[0] == a1[0]  # a vertical
    bx = b0[0] == b1[0]
    if ax == bx:
        return False  # parallel axis-aligned segments never properly cross
    if ax:
        v0, v1, h0, h1 = a0, a1, b0, b1
    else:
        v0, v1, h0, h1 = b0, b1, a0, a1
    vy_lo, vy_hi = span(v0[1], v1[1])
    hx_lo, hx_hi = span(h0[0], h1[0])
    return (hx_lo + EPS < v0[0] < hx_hi - EPS) and (vy_lo + EPS < h0[1] < vy_hi - EPS)


@dataclass
class Polygon:
    """Simple rectilinear polygon (CCW, no closing duplicate)."""

    vertices: list[tuple[float, float]]
    _edges: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        verts = [(float(x), float(y)) for x, y in self.vertices]
        if len(verts) >= 2 and verts[0] == verts[-1]:
            verts = verts[:-1]
        if len(verts) < 4:
            raise ConfigError(f"room polygon needs >= 4 vertices, got {len(verts)}")
        for i, (x0, y0) in enumerate(verts):
            x1, y1 = verts[(i + 1) % len(verts)]
            dx, dy = x1 - x0, y1 - y0
            if not ((dx == 0) ^ (dy == 0)):
                raise ConfigError(
                    f"room edge {i} from ({x0},{y0}) to ({x1},{y1}) is not axis-aligned"
                )
        n = len(verts)
        for i in range(n):
            for j in range(i + 1, n):
                if j == i or (j + 1) % n == i or (i + 1) % n == j:
                    continue
                if _segments_cross(verts[i], verts[(i + 1) % n],
                                   verts[j], verts[(j + 1) % n]):
                    raise ConfigError("room polygon is self-intersecting")
        if _signed_area(verts) < 0:
            verts = verts[::-1]
        self.vertices = verts
        # Edge arrays for vectorized ray casting: x0, y0, x1, y1 per edge.
        arr = np.array(verts, dtype=float)
        nxt = np.roll(arr, -1, axis=0)
        self._edges = np.hstack([arr, nxt])

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def is_rectangle(self) -> bool:
        return len(self.vertices) == 4

    def contains(self, x: float, y: float, tol: float = EPS) -> bool:
        """Inside-or-on-boundary test (even-odd rule with boundary tolerance)."""
        if self.boundary_distance(x, y) <= tol:
            return True
        return self._strictly_inside(x, y)

    def contains_strict(self, x: float, y: float, tol: float = EPS) -> bool:
        return self._strictly_inside(x, y) and self.boundary_distance(x, y) > tol

    def _strictly_inside(self, x: float, y: float) -> bool:
        inside = False
        n = len(self.vertices)
        for i in range(n):
            x0, y0 = self.vertices[i]
            x1, y1 = self.vertices[(i + 1) % n]
            if (y0 > y) != (y1 > y):
                xi = x0 + (y - y0) / (y1 - y0) * (x1 - x0)
                if x < xi:
                    inside = not inside
        return inside

    def boundary_distance(self, x: float, y: float) -> float:
        """Euclidean distance from (x, y) to the nearest boundary segment."""
        e = self._edges
        px = np.clip(x, np.minimum(e[:, 0], e[:, 2]), np.maximum(e[:, 0], e[:, 2]))
        py = np.clip(y, np.minimum(e[:, 1], e[:, 3]), np.maximum(e[:, 1], e[:, 3]))
        return float(np.min(np.hypot(px - x, py - y)))

    def boundary_distances(self, points: np.ndarray) -> np.ndarray:
        """Vectorized boundary_distance for an (N, 2) array of points."""
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        e = self._edges
        lox = np.minimum(e[:, 0], e[:, 2])[None, :]
        hix = np.maximum(e[:, 0], e[:, 2])[None, :]
        loy = np.minimum(e[:, 1], e[:, 3])[None, :]
        hiy = np.maximum(e[:, 1], e[:, 3])[None, :]
        px = np.clip(pts[:, 0:1], lox, hix)
        py = np.clip(pts[:, 1:2], loy, hiy)
        return np.min(np.hypot(px - pts[:, 0:1], py - pts[:, 1:2]), axis=1)

    def clearance_ok(self, x: float, y: float, standoff: float) -> bool:
        """Point is inside with at least `standoff` clearance to any wall."""
        if not self.contains(x, y):
            return False
        return self.boundary_distance(x, y) >= standoff - 1e-6

    def ray_distance(self, x: float, y: float, bearing_deg: float) -> float:
        """Distance from (x, y) along `bearing_deg` to the nearest wall.

        Bearing 0 points along +x, 90 along +y. The origin must lie inside.
        """
        d = self.ray_distances(x, y, np.array([bearing_deg], dtype=float))
        return float(d[0])

    def ray_distances(self, x: float, y: float, bearings_deg: np.ndarray) -> np.ndarray:
        """Vectorized ray cast for many bearings from one origin."""
        th = np.radians(np.asarray(bearings_deg, dtype=float))
        dx = np.cos(th)
        dy = np.sin(th)
        e = self._edges
        vertical = e[:, 0] == e[:, 2]
        best = np.full(th.shape, np.inf)
        for k in range(e.shape[0]):
            x0, y0, x1, y1 = e[k]
            if vertical[k]:
                denom = dx
                t = np.where(np.abs(denom) > 1e-15, (x0 - x) / np.where(denom == 0, 1, denom), np.inf)
                hit = y + t * dy
                lo, hi = min(y0, y1), max(y0, y1)
            else:
                denom = dy
                t = np.where(np.abs(denom) > 1e-15, (y0 - y) / np.where(denom == 0, 1, denom), np.inf)
                hit = x + t * dx
                lo, hi = min(x0, x1), max(x0, x1)
            valid = (t > EPS) & (hit >= lo - EPS) & (hit <= hi + EPS)
            best = np.where(valid & (t < best), t, best)
        if np.any(~np.isfinite(best)):
            raise RayCastError(
                f"no wall hit from ({x}, {y}); is the pose inside the room?"
            )
        return best


def point_to_segment_distance(px, py, x0, y0, x1, y1) -> float:
    dx, dy = x1 - x0, y1 - y0
    L2 = dx * dx + dy * dy
    if L2 == 0:
        return math.hypot(px - x0, py - y0)
    t = max(0.0, min(1.0, ((px - x0) * dx + (py - y0) * dy) / L2))
    return math.hypot(px - (x0 + t * dx), py - (y0 + t * dy))
