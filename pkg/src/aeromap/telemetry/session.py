"""Session state and the connection-loss watchdog.

The watchdog only guards motion: a stale client halts a sweeping or homing
robot; an idle robot stays idle. Any received command (ping included)
refreshes the contact clock.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

IDLE = "idle"
SWEEPING = "sweeping"
HOMING = "homing"
HALTED = "halted"

ROBOT_STATES = (IDLE, SWEEPING, HOMING, HALTED)

DEFAULT_WATCHDOG_TIMEOUT_MS = 2000.0


@dataclass(frozen=True)
class SessionState:
    robot_state: str = IDLE
    last_client_contact: float = 0.0   # ms
    watchdog_timeout: float = DEFAULT_WATCHDOG_TIMEOUT_MS

    def __post_init__(self):
        if self.robot_state not in ROBOT_STATES:
            raise ValueError(f"unknown robot state {self.robot_state!r}")


def touch(state: SessionState, now: float) -> SessionState:
    return replace(state, last_client_contact=now)


def watchdog_tick(state: SessionState, now: float) -> SessionState:
    """One watchdog evaluation at time `now` (ms); call at >= 10 Hz."""
    if state.robot_state in (SWEEPING, HOMING):
        if now - state.last_client_contact > state.watchdog_timeout:
            return replace(state, robot_state=HALTED)
    return state
