"""Point-cloud grouping: orientation labeling, wall-band segmentation, and a
line-guided refinement pass.

A point is labeled vertical when the coordinate spread of its nearest
neighbors is larger in y than in x, else horizontal. Within an orientation,
points are segmented into wall bands along the dependent coordinate (the
wall's position), then split along the independent coordinate at gaps. A
sparse-density filter keeps thinly scattered mislabeled points out of the
bands; the refinement pass then reassigns every point to the nearest fitted
wall segment, which both rescues corner-adjacent points and stabilizes noisy
clouds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from ..errors import DegenerateClusterError
from .lines import HORIZONTAL, VERTICAL, LineModel, fit_line


@dataclass(frozen=True)
class GroupingParams:
    orientation_k: int = 7
    orientation_radius: float | None = None  # radius-based neighbors when set
    gap: float = 300.0                # mm, split threshold along a wall
    min_cluster_size: int = 5
    density_window: float = 150.0     # half-width of the wall-band density test
    density_frac: float = 0.05        # band keeps points above this fraction of peak
    refine_iters: int = 1
    reassign_max_dist: float | None = None  # default: gap


@dataclass
class Cluster:
    orientation: str
    points: np.ndarray                 # (N, 2)
    indices: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=int))

    def __len__(self) -> int:
        return int(self.points.shape[0])


@dataclass
class GroupingResult:
    clusters: list[Cluster]
    rejected: np.ndarray               # indices into the input cloud

    @property
    def insufficient(self) -> bool:
        return len(self.clusters) == 0


def _as_cloud(points) -> np.ndarray:
    arr = np.asarray(points, dtype=float)
    if arr.size == 0:
        return np.empty((0, 2))
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("point cloud must be an (N, 2) array of x, y in mm")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point cloud contains non-finite coordinates")
    return arr


def label_orientations(cloud: np.ndarray, params: GroupingParams) -> np.ndarray:
    """Per-point orientation labels: True for vertical, False for horizontal."""
    n = cloud.shape[0]
    labels = np.zeros(n, dtype=bool)
    if n < 2:
        return labels
    tree = cKDTree(cloud)
    if params.orientation_radius is not None:
        neighbor_lists = tree.query_ball_point(cloud, r=params.orientation_radius)
        for i, idx in enumerate(neighbor_lists):
            idx = [j for j in idx if j != i]
            if len(idx) < 2:
                idx = _knn(tree, cloud, i, params.orientation_k, n)
            nb = cloud[idx]
            labels[i] = nb[:, 1].std() > nb[:, 0].std()
    else:
        k = min(params.orientation_k, n - 1)
        _, nn = tree.query(cloud, k=k + 1)
        nn = np.atleast_2d(nn)
        for i in range(n):
            idx = [j for j in nn[i] if j != i][:k]
            nb = cloud[idx]
            labels[i] = nb[:, 1].std() > nb[:, 0].std()
    return labels


def _knn(tree: cKDTree, cloud: np.ndarray, i: int, k: int, n: int) -> list[int]:
    kk = min(k + 1, n)
    _, idx = tree.query(cloud[i], k=kk)
    idx = np.atleast_1d(idx)
    return [j for j in idx if j != i][:k]


def _split_on_gaps(values: np.ndarray, order: np.ndarray, gap: float) -> list[np.ndarray]:
    """Split indices `order` (sorted by `values`) where consecutive gaps exceed `gap`."""
    if order.size == 0:
        return []
    sorted_vals = values[order]
    breaks = np.where(np.diff(sorted_vals) > gap)[0]
    return [seg for seg in np.split(order, breaks + 1) if seg.size > 0]


def _segment_orientation(
    cloud: np.ndarray, idx: np.ndarray, vertical: bool, params: GroupingParams
) -> tuple[list[np.ndarray], list[int]]:
    """Segment one orientation group into wall clusters.

    Returns (clusters as index arrays, indices dropped by the density filter).
    """
    if idx.size == 0:
        return [], []
    dep = cloud[idx, 0] if vertical else cloud[idx, 1]      # wall position
    ind = cloud[idx, 1] if vertical else cloud[idx, 0]      # along the wall

    # Sparse-density filter along the wall-position axis: points that do not
    # sit inside a populated band are deferred to the refinement pass.
    order = np.argsort(dep, kind="stable")
    sorted_dep = dep[order]
    left = np.searchsorted(sorted_dep, sorted_dep - params.density_window, side="left")
    right = np.searchsorted(sorted_dep, sorted_dep + params.density_window, side="right")
    counts = right - left
    thresh = max(params.min_cluster_size, params.density_frac * counts.max())
    keep_mask = counts >= thresh
    kept = order[keep_mask]
    dropped = idx[order[~keep_mask]].tolist()

    clusters = []
    for band in _split_on_gaps(dep, kept, params.gap):
        by_ind = band[np.argsort(ind[band], kind="stable")]
        for seg in _split_on_gaps(ind, by_ind, params.gap):
            clusters.append(idx[seg])
    return clusters, dropped


def _initial_clusters(cloud: np.ndarray, params: GroupingParams
                      ) -> tuple[list[Cluster], list[int]]:
    labels = label_orientations(cloud, params)
    clusters: list[Cluster] = []
    rejected: list[int] = []
    for vertical in (True, False):
        idx = np.where(labels == vertical)[0]
        segs, dropped = _segment_orientation(cloud, idx, vertical, params)
        rejected.extend(dropped)
        for seg in segs:
            if seg.size < params.min_cluster_size:
                rejected.extend(seg.tolist())
            else:
                clusters.append(Cluster(
                    VERTICAL if vertical else HORIZONTAL,
                    cloud[seg], seg,
                ))
    return clusters, rejected


def _segment_distance(line: LineModel, cloud: np.ndarray,
                      margin: float = 0.0) -> np.ndarray:
    """Distance from every point to the wall segment, with the extent padded
    by `margin` so corner points are judged by perpendicular residual rather
    than by whichever wall happened to observe the corner first."""
    if line.orientation == VERTICAL:
        ind, dep = cloud[:, 1], cloud[:, 0]
    else:
        ind, dep = cloud[:, 0], cloud[:, 1]
    t = np.clip(ind, line.extent[0] - margin, line.extent[1] + margin)
    dx = dep - (line.a + line.b * t)
    dy = ind - t
    return np.hypot(dx, dy)


def _refine(cloud: np.ndarray, clusters: list[Cluster], params: GroupingParams
            ) -> tuple[list[Cluster], list[int]]:
    """Reassign every point to its nearest fitted wall segment and rebuild."""
    lines: list[LineModel] = []
    for c in clusters:
        try:
            lines.append(fit_line(c))
        except DegenerateClusterError:
            continue
    if not lines:
        return clusters, []
    max_dist = params.reassign_max_dist if params.reassign_max_dist is not None else params.gap
    dists = np.column_stack([_segment_distance(ln, cloud, params.gap) for ln in lines])
    nearest = np.argmin(dists, axis=1)
    best = dists[np.arange(cloud.shape[0]), nearest]
    assigned = best <= max_dist

    rebuilt: list[Cluster] = []
    rejected: list[int] = np.where(~assigned)[0].tolist()
    for li, line in enumerate(lines):
        seg = np.where(assigned & (nearest == li))[0]
        if seg.size < params.min_cluster_size:
            rejected.extend(seg.tolist())
            continue
        vertical = line.orientation == VERTICAL
        ind = cloud[seg, 1] if vertical else cloud[seg, 0]
        seg = seg[np.argsort(ind, kind="stable")]
        rebuilt.append(Cluster(line.orientation, cloud[seg], seg))
    return rebuilt, rejected


def group_points(points, params: GroupingParams | None = None) -> GroupingResult:
    """Sort a point cloud into per-wall clusters plus a rejected set.

    An empty cloud yields an empty result; a cloud whose every point lands in
    the rejected set signals insufficient data through `result.insufficient`
    (callers that need walls raise on it).
    """
    params = params or GroupingParams()
    cloud = _as_cloud(points)
    if cloud.shape[0] == 0:
        return GroupingResult([], np.empty(0, dtype=int))

    clusters, rejected = _initial_clusters(cloud, params)
    for _ in range(max(0, params.refine_iters)):
        if not clusters:
            break
        clusters, rejected = _refine(cloud, clusters, params)

    if not clusters:
        rejected = list(range(cloud.shape[0]))
    return GroupingResult(clusters, np.array(sorted(rejected), dtype=int))
