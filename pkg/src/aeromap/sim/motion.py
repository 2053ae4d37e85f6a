"""Quantized robot kinematics: 1 mm translation steps, 1 degree turns.

A command rotates first, then translates along the new heading. Translation
is capped so the robot keeps the configured wall standoff; the achieved step
count is reported back. Positions are rounded to whole millimetres after
each command, mirroring stepper-actuated motion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import RobotHaltedError
from .world import Pose, World

DEFAULT_STANDOFF_MM = 50.0


@dataclass(frozen=True)
class MotionCommand:
    translate_steps: int = 0
    rotate_turns: int = 0

    def __post_init__(self):
        if self.translate_steps != int(self.translate_steps):
            raise ValueError("translate_steps must be an integer step count")
        if self.rotate_turns != int(self.rotate_turns):
            raise ValueError("rotate_turns must be an integer turn count")


@dataclass(frozen=True)
class StepResult:
    pose: Pose
    achieved_steps: int


def normalize_heading(deg: float) -> float:
    return float(deg) % 360.0


def _round_mm(v: float) -> float:
    return float(round(v))


def step(
    world: World,
    pose: Pose,
    cmd: MotionCommand,
    standoff: float = DEFAULT_STANDOFF_MM,
    halted: bool = False,
) -> StepResult:
    """Apply one motion command; returns the new pose and achieved steps."""
    if halted:
        raise RobotHaltedError("motion command rejected: robot is halted")
    heading = normalize_heading(pose.heading + cmd.rotate_turns)
    steps = int(cmd.translate_steps)
    if steps == 0:
        return StepResult(Pose(pose.x, pose.y, heading), 0)
    direction = 1
    if steps < 0:
        direction, steps = -1, -steps
    th = math.radians(heading)
    ux, uy = direction * math.cos(th), direction * math.sin(th)

    bearing = heading if direction > 0 else normalize_heading(heading + 180.0)
    free = world.room.ray_distance(pose.x, pose.y, bearing)
    max_steps = min(steps, max(0, math.floor(free - standoff + 1e-9)))

    # Stop at the first point along the path whose wall clearance drops
    # below the standoff (matters when grazing a reflex corner).
    achieved = max_steps
    if max_steps > 0:
        ks = np.arange(1, max_steps + 1, dtype=float)
        path = np.column_stack([pose.x + ks * ux, pose.y + ks * uy])
        bad = world.room.boundary_distances(path) < standoff - 1e-6
        if bad.any():
            achieved = int(np.argmax(bad))  # index of first violation = k - 1

    # mm rounding can nudge the pose over the standoff line; back off if so.
    while achieved > 0:
        nx = _round_mm(pose.x + achieved * ux)
        ny = _round_mm(pose.y + achieved * uy)
        if world.room.clearance_ok(nx, ny, standoff):
            return StepResult(Pose(nx, ny, heading), direction * achieved)
        achieved -= 1
    return StepResult(Pose(pose.x, pose.y, heading), 0)
