"""Wall extraction: cluster the cloud, fit lines, intersect adjacent pairs
into corners, and walk the corner graph into a closed counterclockwise ring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import (
    DegenerateClusterError,
    InsufficientGeometryError,
    NumericalDegeneracyError,
)
from .grouping import Cluster, GroupingParams, group_points
from .lines import HORIZONTAL, VERTICAL, LineModel, fit_line, intersect


@dataclass(frozen=True)
class WallParams:
    grouping: GroupingParams = GroupingParams()
    corner_tol: float = 300.0   # extent slack when pairing lines into corners
    merge_tol: float = 150.0    # max separation for collinear cluster merging
    merge_gap: float = 600.0    # max extent gap bridged by a merge


@dataclass
class WallModel:
    lines: list[LineModel]           # ring-ordered: lines[i] joins corners[i], corners[i+1]
    corners: list[tuple[float, float]]
    wall_lengths: list[float]

    def as_dict(self) -> dict:
        return {
            "lines": [ln.as_dict() for ln in self.lines],
            "corners": [[c[0], c[1]] for c in self.corners],
            "wall_lengths": list(self.wall_lengths),
        }


def _merge_collinear(clusters: list[Cluster], params: WallParams) -> list[Cluster]:
    """Merge cluster fragments that lie on the same wall line."""
    merged = True
    clusters = list(clusters)
    while merged:
        merged = False
        out: list[Cluster] = []
        used = [False] * len(clusters)
        fits: list[LineModel | None] = []
        for c in clusters:
            try:
                fits.append(fit_line(c))
            except DegenerateClusterError:
                fits.append(None)
        for i, ci in enumerate(clusters):
            if used[i]:
                continue
            fi = fits[i]
            for j in range(i + 1, len(clusters)):
                if used[j] or clusters[j].orientation != ci.orientation:
                    continue
                fj = fits[j]
                if fi is None or fj is None:
                    continue
                lo = min(fi.extent[0], fj.extent[0])
                hi = max(fi.extent[1], fj.extent[1])
                gap = max(fi.extent[0], fj.extent[0]) - min(fi.extent[1], fj.extent[1])
                sep = max(abs(fi.value_at(t) - fj.value_at(t)) for t in (lo, hi))
                if sep <= params.merge_tol and gap <= params.merge_gap:
                    pts = np.vstack([ci.points, clusters[j].points])
                    idx = np.concatenate([ci.indices, clusters[j].indices])
                    ci = Cluster(ci.orientation, pts, idx)
                    try:
                        fi = fit_line(ci)
                    except DegenerateClusterError:
                        fi = None
                    used[j] = True
                    merged = True
            used[i] = True
            out.append(ci)
        clusters = out
    return clusters


def _corner_candidates(lines: list[LineModel], params: WallParams
                       ) -> list[tuple[int, int, tuple[float, float]]]:
    """All (vertical_idx, horizontal_idx, point) pairs whose intersection
    lands near both lines' observed extents."""
    found = []
    for i, lv in enumerate(lines):
        if lv.orientation != VERTICAL:
            continue
        for j, lh in enumerate(lines):
            if lh.orientation != HORIZONTAL:
                continue
            try:
                x, y = intersect(lv, lh)
            except NumericalDegeneracyError:
                continue
            if (lv.extent[0] - params.corner_tol <= y <= lv.extent[1] + params.corner_tol
                    and lh.extent[0] - params.corner_tol <= x <= lh.extent[1] + params.corner_tol):
                found.append((i, j, (x, y)))
    return found


def _walk_ring(lines: list[LineModel],
               corners: list[tuple[int, int, tuple[float, float]]]
               ) -> tuple[list[tuple[float, float]], list[int]]:
    """Order corners into a closed ring by walking line adjacency."""
    by_line: dict[int, list[int]] = {}
    for ci, (vi, hi, _) in enumerate(corners):
        by_line.setdefault(vi, []).append(ci)
        by_line.setdefault(hi, []).append(ci)
    for li, cs in by_line.items():
        if len(cs) != 2:
            raise InsufficientGeometryError(
                f"wall line {li} joins {len(cs)} corners; cannot close the ring"
            )
    if len(by_line) != len(lines):
        raise InsufficientGeometryError(
            "some wall lines have no corners; cannot close the ring"
        )

    start = 0
    ring = [start]
    current_line = corners[start][0]  # leave the start corner via its vertical line
    while True:
        a, b = by_line[current_line]
        nxt = b if a == ring[-1] else a
        if nxt == start:
            break
        ring.append(nxt)
        vi, hi, _ = corners[nxt]
        current_line = hi if current_line == vi else vi
        if len(ring) > len(corners):
            raise InsufficientGeometryError("corner graph does not close into one ring")
    if len(ring) != len(corners):
        raise InsufficientGeometryError("corner graph splits into multiple rings")

    pts = [corners[ci][2] for ci in ring]
    edge_lines = []
    for k in range(len(ring)):
        vi0, hi0, _ = corners[ring[k]]
        vi1, hi1, _ = corners[ring[(k + 1) % len(ring)]]
        shared = {vi0, hi0} & {vi1, hi1}
        edge_lines.append(shared.pop())
    return pts, edge_lines


def _orient_ccw(points: list[tuple[float, float]], edges: list[int]
                ) -> tuple[list[tuple[float, float]], list[int]]:
    area = 0.0
    n = len(points)
    for i in range(n):
        x0, y0 = points[i]
        x1, y1 = points[(i + 1) % n]
        area += x0 * y1 - x1 * y0
    if area < 0:
        # Reversing the corner order re-anchors each edge to its new start.
        points = points[::-1]
        edges = edges[::-1][1:] + edges[::-1][:1]
    return points, edges


def _rotate_to_origin(points: list[tuple[float, float]], edges: list[int]
                      ) -> tuple[list[tuple[float, float]], list[int]]:
    keys = [(x * x + y * y, x, y) for x, y in points]
    k = keys.index(min(keys))
    return points[k:] + points[:k], edges[k:] + edges[:k]


def extract_walls(points, params: WallParams | None = None) -> WallModel:
    """Reconstruct the wall ring from a point cloud.

    Raises InsufficientGeometryError when the cloud cannot support at least
    two walls per orientation or the corners do not close into a single ring.
    """
    params = params or WallParams()
    grouping = group_points(points, params.grouping)
    if grouping.insufficient:
        raise InsufficientGeometryError("no usable wall clusters in the cloud")

    clusters = _merge_collinear(grouping.clusters, params)
    lines: list[LineModel] = []
    for c in clusters:
        try:
            lines.append(fit_line(c))
        except DegenerateClusterError:
            continue
    n_v = sum(1 for ln in lines if ln.orientation == VERTICAL)
    n_h = len(lines) - n_v
    if n_v < 2 or n_h < 2:
        raise InsufficientGeometryError(
            f"need >= 2 walls per orientation, found {n_v} vertical / {n_h} horizontal"
        )

    corners = _corner_candidates(lines, params)
    if len(corners) < 4:
        raise InsufficientGeometryError(f"only {len(corners)} corners found")
    ring, edge_lines = _walk_ring(lines, corners)
    ring, edge_lines = _orient_ccw(ring, edge_lines)
    ring, edge_lines = _rotate_to_origin(ring, edge_lines)

    lengths = []
    n = len(ring)
    for i in range(n):
        x0, y0 = ring[i]
        x1, y1 = ring[(i + 1) % n]
        lengths.append(math.hypot(x1 - x0, y1 - y0))
    return WallModel(
        lines=[lines[li] for li in edge_lines],
        corners=ring,
        wall_lengths=lengths,
    )
