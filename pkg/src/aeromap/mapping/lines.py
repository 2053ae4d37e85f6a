"""Wall line models: ordinary least squares fits and corner intersection.

Horizontal walls are regressed as y = a + b*x, vertical walls as
x = a + b*y, so the slope stays bounded (|b| < 1) in either case.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import (
    DegenerateClusterError,
    NumericalDegeneracyError,
    ParallelLinesError,
)

VERTICAL = "vertical"
HORIZONTAL = "horizontal"

DET_TOL = 1e-9


@dataclass(frozen=True)
class LineModel:
    orientation: str     # VERTICAL | HORIZONTAL
    a: float             # intercept, mm
    b: float             # slope in the fitted parameterization
    support: int         # number of points behind the fit
    extent: tuple[float, float]  # [min, max] of the independent coordinate

    def value_at(self, independent: float) -> float:
        return self.a + self.b * independent

    def as_dict(self) -> dict:
        return {
            "orientation": self.orientation,
            "a": self.a,
            "b": self.b,
            "support": self.support,
            "extent": [self.extent[0], self.extent[1]],
        }


def ols(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Plain least squares y = a + b*x; returns (a, b)."""
    xm = x.mean()
    ym = y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    if sxx == 0.0:
        raise DegenerateClusterError(
            "zero variance in the independent coordinate; cluster is mislabeled"
        )
    b = float(np.sum((x - xm) * (y - ym))) / sxx
    a = float(ym - b * xm)
    return a, b


def fit_line(cluster) -> LineModel:
    """Fit a wall line to a cluster (see grouping.Cluster).

    Vertical clusters regress x on y, horizontal clusters y on x. Raises
    DegenerateClusterError when the cluster cannot support a bounded-slope
    fit, which signals an upstream labeling problem.
    """
    pts = np.asarray(cluster.points, dtype=float)
    if pts.shape[0] < 2:
        raise DegenerateClusterError("need at least 2 points to fit a line")
    if cluster.orientation == VERTICAL:
        X, Y = pts[:, 1], pts[:, 0]
    else:
        X, Y = pts[:, 0], pts[:, 1]
    a, b = ols(X, Y)
    if abs(b) >= 1.0:
        raise DegenerateClusterError(
            f"fitted slope {b:.3f} out of range for {cluster.orientation} wall"
        )
    return LineModel(
        orientation=cluster.orientation,
        a=a,
        b=b,
        support=int(pts.shape[0]),
        extent=(float(X.min()), float(X.max())),
    )


def intersect(l1: LineModel, l2: LineModel) -> tuple[float, float]:
    """Corner point of a vertical/horizontal line pair."""
    if l1.orientation == l2.orientation:
        raise ParallelLinesError(
            f"cannot intersect two {l1.orientation} lines"
        )
    v = l1 if l1.orientation == VERTICAL else l2
    h = l1 if l1.orientation == HORIZONTAL else l2
    det = 1.0 - v.b * h.b
    if abs(det) < DET_TOL:
        raise NumericalDegeneracyError(f"near-singular intersection, det={det}")
    x = (v.a + v.b * h.a) / det
    y = h.a + h.b * x
    return float(x), float(y)
