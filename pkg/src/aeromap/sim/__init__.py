from .world import (
    GasSource,
    NoiseConfig,
    Pose,
    SensorFrame,
    World,
    apply_noise,
    gas_field,
    sense_distance,
    sense_gas,
)
from .motion import MotionCommand, StepResult, step, normalize_heading
from .mission import (
    MapPoint,
    MissionEvent,
    MissionLog,
    SweepPlan,
    dock_pose,
    home,
    run_sweep,
    sweep_iter,
)

__all__ = [
    "GasSource", "NoiseConfig", "Pose", "SensorFrame", "World",
    "apply_noise", "gas_field", "sense_distance", "sense_gas",
    "MotionCommand", "StepResult", "step", "normalize_heading",
    "MapPoint", "MissionEvent", "MissionLog", "SweepPlan",
    "dock_pose", "home", "run_sweep", "sweep_iter",
]
