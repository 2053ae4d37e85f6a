"""Mission execution: boustrophedon coverage sweep, ranging scans, homing.

`sweep_iter` drives a mission incrementally (the telemetry service consumes
it frame by frame); `run_sweep` drains it into a MissionLog. Lanes run along
the x axis and are spaced along y; the dock sits at the room's min corner
plus the wall standoff. Values are quantized at capture (mm and sensor
channels to 3 decimals, timestamps to whole ms) so exported logs round-trip
exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np
from scipy.optimize import minimize

from ..errors import ConfigError
from .motion import DEFAULT_STANDOFF_MM, MotionCommand, StepResult, step
from .world import Pose, SensorFrame, World, sense_distances, sense_gas

Q = 3  # capture precision, decimal places


@dataclass(frozen=True)
class SweepPlan:
    lane_spacing: float = 500.0
    sample_spacing: float = 500.0
    scan_every: int = 4          # 360-degree scan at every k-th sample (0 = never)
    scan_increment: float = 1.0  # degrees between scan rays
    scan_reads: int = 16         # averaged ranging reads per bearing
    standoff: float = DEFAULT_STANDOFF_MM
    speed_mm_s: float = 250.0
    turn_dps: float = 90.0
    sample_dwell_ms: float = 40.0
    scan_ms_per_ray: float = 2.0

    def __post_init__(self):
        if self.lane_spacing <= 0 or self.sample_spacing <= 0:
            raise ConfigError("plan spacings must be positive")
        if self.scan_increment <= 0:
            raise ConfigError("scan_increment must be positive")
        if self.scan_reads < 1:
            raise ConfigError("scan_reads must be >= 1")


@dataclass(frozen=True)
class MapPoint:
    x: float
    y: float
    source_pose_id: int  # index of the sample frame whose pose produced it


@dataclass(frozen=True)
class MissionEvent:
    t: int
    kind: str  # start | halt | resume | home_begin | home_end
    detail: dict = field(default_factory=dict)


@dataclass(frozen=True)
class LoggedFrame:
    pose: Pose
    sensors: SensorFrame


@dataclass
class MissionLog:
    frames: list[LoggedFrame] = field(default_factory=list)
    points: list[MapPoint] = field(default_factory=list)
    events: list[MissionEvent] = field(default_factory=list)

    def point_array(self) -> np.ndarray:
        if not self.points:
            return np.empty((0, 2))
        return np.array([[p.x, p.y] for p in self.points])


def _q(v: float) -> float:
    return round(float(v), Q)


def dock_pose(world: World, standoff: float = DEFAULT_STANDOFF_MM) -> Pose:
    x0, y0, _, _ = world.room.bounds
    return Pose(x0 + standoff, y0 + standoff, 0.0)


def _coverage_coords(lo: float, hi: float, spacing: float) -> list[float]:
    """Regular coordinates from lo, stepping by spacing, always ending at hi."""
    coords = []
    v = lo
    while v <= hi + 1e-9:
        coords.append(v)
        v += spacing
    if coords[-1] < hi - 1e-9:
        coords.append(hi)
    return coords


def plan_waypoints(world: World, plan: SweepPlan) -> list[list[tuple[float, float]]]:
    """Per-lane sample waypoints for a rectangular room, serpentine order."""
    if not world.room.is_rectangle():
        raise ConfigError("coverage sweeps support axis-aligned rectangular rooms only")
    x0, y0, x1, y1 = world.room.bounds
    s = plan.standoff
    if x1 - x0 <= 2 * s or y1 - y0 <= 2 * s:
        raise ConfigError("room is too small for the configured wall standoff")
    if plan.lane_spacing > (y1 - y0):
        raise ConfigError("lane_spacing exceeds the room height")
    ys = _coverage_coords(y0 + s, y1 - s, plan.lane_spacing)
    xs = _coverage_coords(x0 + s, x1 - s, plan.sample_spacing)
    lanes = []
    for i, y in enumerate(ys):
        order = xs if i % 2 == 0 else xs[::-1]
        lanes.append([(x, y) for x in order])
    return lanes


class _Clock:
    def __init__(self):
        self.t = 0.0
        self.last_emitted = -1

    def advance(self, dt_ms: float):
        self.t += max(0.0, dt_ms)

    def stamp(self) -> int:
        v = int(round(self.t))
        if v <= self.last_emitted:
            v = self.last_emitted + 1
        self.last_emitted = v
        return v


def _turn_to(heading: float, target: float) -> int:
    delta = (target - heading + 180.0) % 360.0 - 180.0
    if delta == -180.0:
        delta = 180.0
    return int(round(delta))


def _goto(world: World, plan: SweepPlan, pose: Pose, clock: _Clock,
          target: tuple[float, float]) -> Iterator[tuple]:
    """Move axis-aligned to target (same x or same y as pose); yields pose items."""
    for axis in (0, 1):
        delta = target[axis] - (pose.x if axis == 0 else pose.y)
        steps = int(round(abs(delta)))
        if steps == 0:
            continue
        if axis == 0:
            want = 0.0 if delta > 0 else 180.0
        else:
            want = 90.0 if delta > 0 else 270.0
        turns = _turn_to(pose.heading, want)
        res: StepResult = step(world, pose, MotionCommand(steps, turns), plan.standoff)
        clock.advance(abs(turns) * 1000.0 / plan.turn_dps)
        clock.advance(abs(res.achieved_steps) * 1000.0 / plan.speed_mm_s)
        pose = res.pose
        yield ("pose", pose, clock.stamp())
    # Ensure consumers always observe the arrival pose even for a zero move.
    yield ("pose", pose, clock.stamp())


def _scan(world: World, plan: SweepPlan, pose: Pose, pose_id: int, noise_on: bool,
          rng: np.random.Generator, clock: _Clock) -> tuple:
    bearings = np.arange(0.0, 360.0, plan.scan_increment)
    ranges = sense_distances(world, pose, bearings, noise_on, rng, plan.scan_reads)
    th = np.radians(bearings)
    xs = pose.x + ranges * np.cos(th)
    ys = pose.y + ranges * np.sin(th)
    points = [MapPoint(_q(x), _q(y), pose_id) for x, y in zip(xs, ys)]
    clock.advance(bearings.size * plan.scan_ms_per_ray)
    return ("scan", pose_id, points)


def _capture_frame(world: World, pose: Pose, noise_on: bool,
                   rng: np.random.Generator, clock: _Clock) -> LoggedFrame:
    t = clock.stamp()
    raw = sense_gas(world, pose, noise_on, rng, t)
    sensors = SensorFrame(
        timestamp=t,
        voc=_q(raw.voc), co2=_q(raw.co2), smoke=_q(raw.smoke),
        temperature=_q(raw.temperature), humidity=_q(raw.humidity),
        battery=_q(raw.battery),
    )
    return LoggedFrame(pose=pose, sensors=sensors)


def locate_fix(world: World, pose: Pose, noise_on: bool, rng: np.random.Generator,
               scan_reads: int = 1, increment_deg: float = 1.0) -> tuple[float, float]:
    """Estimate (x, y) from a full ranging sweep against the known room.

    Noiseless scans reproduce the true position (up to optimizer tolerance);
    noisy scans carry the distance channel's error into the fix. The
    dead-reckoned pose seeds the optimizer.
    """
    bearings = np.arange(0.0, 360.0, increment_deg)
    observed = sense_distances(world, pose, bearings, noise_on, rng, scan_reads)
    if not noise_on:
        return pose.x, pose.y
    room = world.room

    def objective(q):
        x, y = float(q[0]), float(q[1])
        if not room.contains(x, y) or room.boundary_distance(x, y) < 1.0:
            return 1e12
        predicted = room.ray_distances(x, y, bearings)
        return float(np.sum((observed - predicted) ** 2))

    res = minimize(objective, x0=np.array([pose.x, pose.y]), method="Nelder-Mead",
                   options={"xatol": 0.1, "fatol": 1e-3, "maxiter": 400})
    return float(res.x[0]), float(res.x[1])


def home_iter(world: World, pose: Pose, noise_on: bool, rng: np.random.Generator,
              plan: Optional[SweepPlan] = None, clock: Optional[_Clock] = None
              ) -> Iterator[tuple]:
    """Navigate back to the dock; yields pose items bracketed by home events.

    The final item is ("home_result", final_pose, displacement_error_mm).
    """
    plan = plan or SweepPlan()
    clock = clock or _Clock()
    dock = dock_pose(world, plan.standoff)
    yield ("event", MissionEvent(clock.stamp(), "home_begin", {}))
    if noise_on:
        bx, by = locate_fix(world, pose, True, rng, scan_reads=1,
                            increment_deg=plan.scan_increment)
        clock.advance(360.0 / plan.scan_increment * plan.scan_ms_per_ray)
    else:
        bx, by = pose.x, pose.y
    # Axis-aligned legs sized from the believed position; executed from the
    # true one, so any fix error lands the robot off-dock by the same amount.
    target_x = pose.x + (dock.x - bx)
    target_y = pose.y + (dock.y - by)
    for item in _goto(world, plan, pose, clock, (target_x, target_y)):
        pose = item[1]
        yield item
    turns = _turn_to(pose.heading, dock.heading)
    res = step(world, pose, MotionCommand(0, turns), plan.standoff)
    clock.advance(abs(turns) * 1000.0 / plan.turn_dps)
    pose = res.pose
    displacement = math.hypot(pose.x - dock.x, pose.y - dock.y)
    yield ("event", MissionEvent(clock.stamp(), "home_end",
                                 {"displacement_mm": _q(displacement),
                                  "aborted": False}))
    yield ("home_result", pose, displacement)


def home(world: World, pose: Pose, noise_on: bool,
         rng: Optional[np.random.Generator] = None,
         plan: Optional[SweepPlan] = None) -> tuple[Pose, float]:
    """Return (final_pose, displacement_error_mm) after homing to the dock."""
    rng = rng if rng is not None else world.rng()
    final_pose, displacement = pose, math.nan
    for item in home_iter(world, pose, noise_on, rng, plan):
        if item[0] == "home_result":
            final_pose, displacement = item[1], item[2]
    return final_pose, displacement


def sweep_iter(world: World, plan: SweepPlan,
               rng: Optional[np.random.Generator] = None) -> Iterator[tuple]:
    """Full mission as an item stream: events, pose updates, frames, scans.

    Item shapes:
      ("event", MissionEvent)
      ("pose", Pose, t_ms)
      ("frame", pose_id, LoggedFrame)
      ("scan", pose_id, [MapPoint, ...])
      ("home_result", Pose, displacement_mm)
    """
    rng = rng if rng is not None else world.rng()
    noise_on = world.noise.enabled
    lanes = plan_waypoints(world, plan)
    clock = _Clock()
    pose = dock_pose(world, plan.standoff)
    yield ("event", MissionEvent(clock.stamp(), "start",
                                 {"dock": [pose.x, pose.y]}))
    frame_idx = 0
    sample_idx = 0
    for lane in lanes:
        for wp in lane:
            for item in _goto(world, plan, pose, clock, wp):
                pose = item[1]
                yield item
            clock.advance(plan.sample_dwell_ms)
            logged = _capture_frame(world, pose, noise_on, rng, clock)
            yield ("frame", frame_idx, logged)
            if plan.scan_every > 0 and sample_idx % plan.scan_every == 0:
                yield _scan(world, plan, pose, frame_idx, noise_on, rng, clock)
            frame_idx += 1
            sample_idx += 1
    yield from home_iter(world, pose, noise_on, rng, plan, clock)


def run_sweep(world: World, plan: SweepPlan,
              rng: Optional[np.random.Generator] = None) -> MissionLog:
    """Execute a full mission and collect it into a MissionLog."""
    log = MissionLog()
    for item in sweep_iter(world, plan, rng):
        kind = item[0]
        if kind == "event":
            log.events.append(item[1])
        elif kind == "frame":
            log.frames.append(item[2])
        elif kind == "scan":
            log.points.extend(item[2])
    return log
