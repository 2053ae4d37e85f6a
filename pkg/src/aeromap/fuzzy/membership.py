"""Piecewise-linear membership functions (triangles and trapezoids)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError

TRIANGLE = "triangle"
TRAPEZOID = "trapezoid"


@dataclass(frozen=True)
class MembershipFunction:
    """Triangle (l, m, r) or trapezoid (l, m1, m2, r) with non-decreasing
    breakpoints. Degenerate edges (l == m1 or m2 == r) saturate at the
    universe boundary."""

    shape: str
    points: tuple[float, ...]

    def __post_init__(self):
        if self.shape == TRIANGLE:
            if len(self.points) != 3:
                raise ConfigError("triangle needs 3 breakpoints")
        elif self.shape == TRAPEZOID:
            if len(self.points) != 4:
                raise ConfigError("trapezoid needs 4 breakpoints")
        else:
            raise ConfigError(f"unknown membership shape {self.shape!r}")
        pts = tuple(float(p) for p in self.points)
        if any(b < a for a, b in zip(pts, pts[1:])):
            raise ConfigError(f"breakpoints must be non-decreasing, got {pts}")
        object.__setattr__(self, "points", pts)

    @property
    def support(self) -> tuple[float, float]:
        return self.points[0], self.points[-1]

    def _corners(self) -> tuple[float, float, float, float]:
        if self.shape == TRIANGLE:
            l, m, r = self.points
            return l, m, m, r
        return self.points  # type: ignore[return-value]

    def __call__(self, x):
        """Membership degree at x; accepts scalars or numpy arrays."""
        l, m1, m2, r = self._corners()
        x = np.asarray(x, dtype=float)
        rise = (x - l) / (m1 - l) if m1 > l else (x >= l).astype(float)
        fall = (r - x) / (r - m2) if r > m2 else (x <= r).astype(float)
        mu = np.clip(np.minimum(rise, fall), 0.0, 1.0)
        return float(mu) if mu.ndim == 0 else mu


def triangle(l: float, m: float, r: float) -> MembershipFunction:
    return MembershipFunction(TRIANGLE, (l, m, r))


def trapezoid(l: float, m1: float, m2: float, r: float) -> MembershipFunction:
    return MembershipFunction(TRAPEZOID, (l, m1, m2, r))


def membership(x: float, mf: MembershipFunction) -> float:
    """Degree of x in mf: exactly 1 on the plateau, exactly 0 outside support."""
    return mf(x)
