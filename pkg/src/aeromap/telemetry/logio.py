"""MissionLog serialization (the /api/log document) and point-file loading.

Logs quantize values at capture time, so export/import round-trips exactly:
the parsed log compares equal to the in-memory one, and wall extraction on
either yields the identical model.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..errors import SchemaError
from ..sim.mission import LoggedFrame, MapPoint, MissionEvent, MissionLog
from ..sim.world import Pose, SensorFrame
from .wire import WIRE_VERSION, quantize

SENSOR_KEYS = ("voc", "co2", "smoke", "temperature", "humidity", "battery")


def mission_log_to_dict(log: MissionLog) -> dict:
    return {
        "v": WIRE_VERSION,
        "frames": [
            {
                "t": f.sensors.timestamp,
                "pose": {"x": f.pose.x, "y": f.pose.y, "heading": f.pose.heading},
                "sensors": {k: getattr(f.sensors, k) for k in SENSOR_KEYS},
            }
            for f in log.frames
        ],
        "points": [
            {"x": p.x, "y": p.y, "pose_id": p.source_pose_id} for p in log.points
        ],
        "events": [
            {"t": e.t, "kind": e.kind, "detail": e.detail} for e in log.events
        ],
    }


def mission_log_to_bytes(log: MissionLog) -> bytes:
    doc = quantize(mission_log_to_dict(log))
    return json.dumps(doc, sort_keys=True, separators=(",", ":"),
                      allow_nan=False).encode("utf-8")


def _require(doc: dict, key: str, prefix: str = ""):
    if key not in doc:
        raise SchemaError(prefix + key, "missing required field")
    return doc[key]


def parse_mission_log(data: bytes | str | dict) -> MissionLog:
    if isinstance(data, (bytes, str)):
        try:
            doc = json.loads(data)
        except json.JSONDecodeError as e:
            raise SchemaError("document", f"not valid JSON: {e}") from e
    else:
        doc = data
    if not isinstance(doc, dict):
        raise SchemaError("document", "mission log must be a JSON object")
    v = _require(doc, "v")
    if v != WIRE_VERSION:
        raise SchemaError("v", f"unsupported log version {v!r}")

    frames = []
    for i, fd in enumerate(_require(doc, "frames")):
        pose = _require(fd, "pose", f"frames[{i}].")
        sensors = _require(fd, "sensors", f"frames[{i}].")
        t = int(_require(fd, "t", f"frames[{i}]."))
        for k in ("x", "y", "heading"):
            _require(pose, k, f"frames[{i}].pose.")
        for k in SENSOR_KEYS:
            _require(sensors, k, f"frames[{i}].sensors.")
        frames.append(LoggedFrame(
            pose=Pose(float(pose["x"]), float(pose["y"]), float(pose["heading"])),
            sensors=SensorFrame(timestamp=t,
                                **{k: float(sensors[k]) for k in SENSOR_KEYS}),
        ))
    points = []
    for i, pd in enumerate(_require(doc, "points")):
        points.append(MapPoint(
            x=float(_require(pd, "x", f"points[{i}].")),
            y=float(_require(pd, "y", f"points[{i}].")),
            source_pose_id=int(_require(pd, "pose_id", f"points[{i}].")),
        ))
    events = []
    for i, ed in enumerate(_require(doc, "events")):
        events.append(MissionEvent(
            t=int(_require(ed, "t", f"events[{i}].")),
            kind=str(_require(ed, "kind", f"events[{i}].")),
            detail=ed.get("detail", {}),
        ))
    return MissionLog(frames=frames, points=points, events=events)


def load_xy_text(path: str | Path) -> np.ndarray:
    """Plain two-column text: `x y` per line, mm; '#' comments allowed."""
    rows = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise SchemaError(f"line {lineno}", "expected two columns: x y")
        try:
            rows.append((float(parts[0]), float(parts[1])))
        except ValueError as e:
            raise SchemaError(f"line {lineno}", str(e)) from e
    return np.array(rows) if rows else np.empty((0, 2))


def load_points_file(path: str | Path) -> np.ndarray:
    """Load a point cloud from a MissionLog JSON or a two-column text file."""
    p = Path(path)
    text = p.read_text()
    if text.lstrip().startswith("{"):
        log = parse_mission_log(text)
        return log.point_array()
    return load_xy_text(p)
