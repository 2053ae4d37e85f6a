"""Map quality metrics against ground truth, and gas-peak localization."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import InsufficientDataError, TopologyMismatchError
from .walls import WallModel


@dataclass
class ErrorReport:
    wall_mape: list[float]            # per wall, percent
    mean_wall_mape: float             # percent
    corner_displacements: list[float]  # mm, per corner after ring alignment
    gas_mape_x: float | None = None   # percent, when gas peaks supplied
    gas_mape_y: float | None = None

    def as_dict(self) -> dict:
        return {
            "wall_mape": list(self.wall_mape),
            "mean_wall_mape": self.mean_wall_mape,
            "corner_displacements": list(self.corner_displacements),
            "gas_mape_x": self.gas_mape_x,
            "gas_mape_y": self.gas_mape_y,
        }


def _ring_candidates(ring: list[tuple[float, float]]):
    n = len(ring)
    for reverse in (False, True):
        seq = ring[::-1] if reverse else ring
        for off in range(n):
            yield seq[off:] + seq[:off]


def _align_rings(estimated, truth):
    """Rotate/reflect the estimated ring to minimize total corner displacement."""
    best, best_cost = None, math.inf
    for cand in _ring_candidates(estimated):
        cost = sum(math.hypot(cx - tx, cy - ty)
                   for (cx, cy), (tx, ty) in zip(cand, truth))
        if cost < best_cost:
            best, best_cost = cand, cost
    return best


def _ring_lengths(ring) -> list[float]:
    n = len(ring)
    return [math.hypot(ring[(i + 1) % n][0] - ring[i][0],
                       ring[(i + 1) % n][1] - ring[i][1]) for i in range(n)]


def evaluate_map(
    estimated: WallModel,
    truth_polygon,
    gas_truth: list[tuple[float, float]] | None = None,
    gas_estimated: list[tuple[float, float]] | None = None,
) -> ErrorReport:
    """Compare an extracted wall model against the generating room polygon.

    `truth_polygon` is a World, a geometry.Polygon, or a corner list.
    Gas-coordinate errors use the true coordinate value as the denominator.
    """
    truth_polygon = getattr(truth_polygon, "room", truth_polygon)
    truth = list(getattr(truth_polygon, "vertices", truth_polygon))
    truth = [(float(x), float(y)) for x, y in truth]
    est = [(float(x), float(y)) for x, y in estimated.corners]
    if len(est) != len(truth):
        raise TopologyMismatchError(len(est), len(truth))

    aligned = _align_rings(est, truth)
    displacements = [math.hypot(cx - tx, cy - ty)
                     for (cx, cy), (tx, ty) in zip(aligned, truth)]
    est_len = _ring_lengths(aligned)
    true_len = _ring_lengths(truth)
    wall_mape = [abs(e - t) / t * 100.0 for e, t in zip(est_len, true_len)]

    gx = gy = None
    if gas_truth and gas_estimated:
        pairs = _pair_peaks(gas_estimated, gas_truth)
        ex, ey = [], []
        for (px, py), (tx, ty) in pairs:
            if tx == 0.0 or ty == 0.0:
                raise ValueError("gas truth coordinate is zero; relative error undefined")
            ex.append(abs(px - tx) / abs(tx) * 100.0)
            ey.append(abs(py - ty) / abs(ty) * 100.0)
        if ex:
            gx, gy = float(np.mean(ex)), float(np.mean(ey))

    return ErrorReport(
        wall_mape=wall_mape,
        mean_wall_mape=float(np.mean(wall_mape)),
        corner_displacements=displacements,
        gas_mape_x=gx,
        gas_mape_y=gy,
    )


def _pair_peaks(estimated, truth):
    """Greedy nearest pairing of estimated peaks to true source positions."""
    remaining = list(range(len(truth)))
    pairs = []
    for p in estimated:
        if not remaining:
            break
        dists = [math.hypot(p[0] - truth[t][0], p[1] - truth[t][1]) for t in remaining]
        k = int(np.argmin(dists))
        pairs.append((p, truth[remaining[k]]))
        remaining.pop(k)
    return pairs


def _grid_spacings(positions: np.ndarray) -> float:
    """Infer the sampling-grid pitch from sample positions (max of the two axes)."""
    def axis_pitch(vals: np.ndarray) -> float:
        uniq = np.unique(np.round(vals, 3))
        if uniq.size < 2:
            return 0.0
        gaps = np.diff(uniq)
        gaps = gaps[gaps > 1e-6]
        return float(np.median(gaps)) if gaps.size else 0.0

    return max(axis_pitch(positions[:, 0]), axis_pitch(positions[:, 1]))


def locate_gas_peaks(log, species: str,
                     neighbor_radius: float | None = None) -> list[tuple[float, float]]:
    """Sample positions of strict local maxima of one gas channel.

    Neighbors are samples within ~1.5 grid pitches (orthogonal + diagonal
    grid neighbors). Equal-value ties go to the earlier timestamp; a flat
    field has no strict maximum and yields an empty list.
    """
    if not log.frames:
        raise InsufficientDataError("mission log contains no sensor frames")

    # Deduplicate repeat visits to a position: keep highest reading, then earliest.
    best: dict[tuple[float, float], tuple[float, int]] = {}
    for f in log.frames:
        key = (round(f.pose.x, 3), round(f.pose.y, 3))
        v = f.sensors.channel(species)
        t = f.sensors.timestamp
        if key not in best or (v, -t) > (best[key][0], -best[key][1]):
            best[key] = (v, t)

    pos = np.array([[x, y] for (x, y) in best.keys()])
    vals = np.array([v for v, _ in best.values()])
    ts = np.array([t for _, t in best.values()])
    if neighbor_radius is None:
        pitch = _grid_spacings(pos)
        if pitch <= 0:
            return []
        neighbor_radius = 1.55 * pitch

    peaks = []
    for i in range(pos.shape[0]):
        d = np.hypot(pos[:, 0] - pos[i, 0], pos[:, 1] - pos[i, 1])
        nb = np.where((d > 1e-9) & (d <= neighbor_radius))[0]
        if nb.size == 0:
            continue
        wins = (vals[i] > vals[nb]) | ((vals[i] == vals[nb]) & (ts[i] < ts[nb]))
        if np.all(wins) and np.any(vals[i] > vals[nb]):
            peaks.append((float(pos[i, 0]), float(pos[i, 1]), float(vals[i]), int(ts[i])))

    peaks.sort(key=lambda p: (-p[2], p[3]))
    return [(p[0], p[1]) for p in peaks]
