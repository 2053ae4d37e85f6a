"""Room world model: gas field, sensor noise, simulated sensors.

The gas field is a sum of isotropic Gaussians over a per-species ambient
baseline; a constant drift offset on each source stands in for advection.
Sensor noise is multiplicative zero-mean Gaussian, calibrated so that the
expected absolute relative error equals each channel's validation target.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from ..errors import ConfigError, OutsideRoomError
from ..geometry import Polygon

GAS_SPECIES = ("voc", "co2", "smoke")
CHANNELS = ("voc", "co2", "smoke", "temperature", "humidity", "battery")

# E|eps| of a zero-mean Gaussian is sigma*sqrt(2/pi), so hitting a mean
# absolute relative error target p needs sigma = p*sqrt(pi/2).
MAPE_TO_SIGMA = math.sqrt(math.pi / 2.0)

# Physical clamp range per channel (lo, hi); None leaves the side open.
CHANNEL_RANGE = {
    "voc": (0.0, None),
    "co2": (0.0, None),
    "smoke": (0.0, None),
    "temperature": (None, None),
    "humidity": (0.0, 100.0),
    "battery": (0.0, None),
    "distance": (0.0, None),
}


@dataclass(frozen=True)
class Pose:
    """Robot position in mm and heading in degrees, normalized to [0, 360)."""

    x: float
    y: float
    heading: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "heading", float(self.heading) % 360.0)


@dataclass(frozen=True)
class GasSource:
    position: tuple[float, float]
    species: str
    amplitude: float
    spread: float
    drift: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if self.species not in GAS_SPECIES:
            raise ConfigError(f"unknown gas species {self.species!r}")
        if self.amplitude < 0:
            raise ConfigError("source amplitude must be >= 0")
        if self.spread <= 0:
            raise ConfigError("source spread must be > 0")


@dataclass(frozen=True)
class NoiseConfig:
    """Per-channel mean-absolute-relative-error targets (dimensionless)."""

    voc: float = 0.1095
    co2: float = 0.1063
    smoke: float = 0.1168
    temperature: float = 0.0961
    humidity: float = 0.0446
    battery: float = 0.0244
    distance: float = 0.2006
    enabled: bool = True

    def __post_init__(self):
        for name in (*CHANNELS, "distance"):
            v = getattr(self, name)
            if not 0.0 <= v < 1.0:
                raise ConfigError(f"noise target {name}={v} outside [0, 1)")

    def target(self, channel: str) -> float:
        return getattr(self, channel)

    def disabled(self) -> "NoiseConfig":
        return replace(self, enabled=False)


@dataclass(frozen=True)
class SensorFrame:
    timestamp: int  # ms
    voc: float      # ppb
    co2: float      # ppm
    smoke: float    # ug/m^3
    temperature: float  # degC
    humidity: float     # %RH
    battery: float      # V

    def channel(self, name: str) -> float:
        return getattr(self, name)

    def as_dict(self) -> dict:
        return {
            "voc": self.voc, "co2": self.co2, "smoke": self.smoke,
            "temperature": self.temperature, "humidity": self.humidity,
            "battery": self.battery,
        }


@dataclass(frozen=True)
class BatteryModel:
    """Linear discharge from start_v to end_v over duration_ms."""

    start_v: float = 12.6
    end_v: float = 11.1
    duration_ms: int = 1_200_000

    def voltage(self, t_ms: float) -> float:
        frac = min(max(t_ms, 0.0) / self.duration_ms, 1.0)
        return self.start_v - (self.start_v - self.end_v) * frac


@dataclass
class World:
    room: Polygon
    gas_sources: list[GasSource] = field(default_factory=list)
    ambient: dict = field(default_factory=lambda: {
        "voc": 50.0, "co2": 420.0, "smoke": 10.0,
        "temperature": 21.0, "humidity": 45.0,
    })
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    battery: BatteryModel = field(default_factory=BatteryModel)
    seed: int = 1729

    def __post_init__(self):
        for src in self.gas_sources:
            if not self.room.contains_strict(*src.position):
                raise ConfigError(
                    f"gas source at {src.position} is not strictly inside the room"
                )
        for key in ("voc", "co2", "smoke", "temperature", "humidity"):
            if key not in self.ambient:
                raise ConfigError(f"ambient is missing channel {key!r}")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


def gas_field(world: World, p: tuple[float, float], species: str) -> float:
    """Noise-free concentration of `species` at point `p` (mm)."""
    if species not in GAS_SPECIES:
        raise ConfigError(f"unknown gas species {species!r}")
    x, y = float(p[0]), float(p[1])
    if not world.room.contains(x, y):
        raise OutsideRoomError(f"point ({x}, {y}) is outside the room")
    total = float(world.ambient[species])
    for src in world.gas_sources:
        if src.species != species:
            continue
        cx = src.position[0] + src.drift[0]
        cy = src.position[1] + src.drift[1]
        d2 = (x - cx) ** 2 + (y - cy) ** 2
        total += src.amplitude * math.exp(-d2 / (2.0 * src.spread ** 2))
    return total


def apply_noise(
    true_value: float,
    target_mape: float,
    rng: np.random.Generator,
    channel_range: tuple[float | None, float | None] = (None, None),
) -> float:
    """Multiplicative Gaussian noise with E|relative error| = target_mape.

    A zero target returns the input unchanged (and draws nothing, so noisy
    and noiseless runs stay stream-compatible per channel).
    """
    if not 0.0 <= target_mape < 1.0:
        raise ConfigError(f"target_mape {target_mape} outside [0, 1)")
    if target_mape == 0.0:
        return true_value
    eps = rng.normal(0.0, target_mape * MAPE_TO_SIGMA)
    value = true_value * (1.0 + eps)
    lo, hi = channel_range
    if lo is not None and value < lo:
        value = lo
    if hi is not None and value > hi:
        value = hi
    return value


def sense_distance(
    world: World,
    pose: Pose,
    bearing_deg: float,
    noise_on: bool,
    rng: np.random.Generator,
) -> float:
    """Range (mm) from pose along an absolute bearing to the nearest wall."""
    if not world.room.contains(pose.x, pose.y):
        raise OutsideRoomError(f"pose ({pose.x}, {pose.y}) is outside the room")
    true = world.room.ray_distance(pose.x, pose.y, bearing_deg)
    if not noise_on:
        return true
    return apply_noise(true, world.noise.distance, rng, CHANNEL_RANGE["distance"])


def sense_distances(
    world: World,
    pose: Pose,
    bearings_deg: np.ndarray,
    noise_on: bool,
    rng: np.random.Generator,
    reads: int = 1,
) -> np.ndarray:
    """Vectorized ranging sweep; `reads` noisy reads per bearing are averaged.

    Each individual read carries the full distance-channel noise; averaging
    is the measurement procedure, not a change to the sensor model.
    """
    if not world.room.contains(pose.x, pose.y):
        raise OutsideRoomError(f"pose ({pose.x}, {pose.y}) is outside the room")
    true = world.room.ray_distances(pose.x, pose.y, bearings_deg)
    if not noise_on or world.noise.distance == 0.0:
        return true
    sigma = world.noise.distance * MAPE_TO_SIGMA
    eps = rng.normal(0.0, sigma, size=(max(1, int(reads)), true.size))
    noisy = np.maximum(true[None, :] * (1.0 + eps), 0.0)
    return noisy.mean(axis=0)


def sense_gas(
    world: World,
    pose: Pose,
    noise_on: bool,
    rng: np.random.Generator,
    t_ms: int,
) -> SensorFrame:
    """One full sensor frame at `pose`, stamped with mission time `t_ms`."""
    values = {sp: gas_field(world, (pose.x, pose.y), sp) for sp in GAS_SPECIES}
    values["temperature"] = float(world.ambient["temperature"])
    values["humidity"] = float(world.ambient["humidity"])
    values["battery"] = world.battery.voltage(t_ms)
    if noise_on:
        for name in CHANNELS:
            values[name] = apply_noise(
                values[name], world.noise.target(name), rng, CHANNEL_RANGE[name]
            )
    return SensorFrame(timestamp=int(t_ms), **{k: float(v) for k, v in values.items()})
