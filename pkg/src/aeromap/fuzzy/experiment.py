"""Noise-robustness experiment: crisp vs fuzzy classification stability.

Each trial reads a clean frame from the world, classifies it, re-reads the
same frame through the sensor noise model, and counts how often each
classifier flips away from its own clean answer. Trials are weighted toward
poses whose gas readings sit near a class threshold, where flips actually
happen.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError
from ..geometry import Polygon
from ..sim.world import (
    CHANNEL_RANGE,
    GasSource,
    NoiseConfig,
    Pose,
    World,
    apply_noise,
    sense_gas,
)
from .config import FuzzyConfig
from .crisp import crisp_classify
from .engine import classify

FUZZY_CHANNELS = ("voc", "co2", "smoke", "temperature", "humidity")


@dataclass
class ExperimentResult:
    n_trials: int
    crisp_errors: int
    fuzzy_errors: int

    @property
    def crisp_error_rate(self) -> float:
        return self.crisp_errors / self.n_trials

    @property
    def fuzzy_error_rate(self) -> float:
        return self.fuzzy_errors / self.n_trials

    def as_dict(self) -> dict:
        return {
            "n_trials": self.n_trials,
            "crisp_error_rate": self.crisp_error_rate,
            "fuzzy_error_rate": self.fuzzy_error_rate,
        }


def build_experiment_world(seed: int = 1729) -> World:
    """Default experiment room: gas plumes that sweep every class band."""
    room = Polygon([(0, 0), (4000, 0), (4000, 3000), (0, 3000)])
    return World(
        room=room,
        gas_sources=[
            GasSource((1000.0, 1000.0), "co2", 1600.0, 900.0),
            GasSource((3000.0, 2200.0), "voc", 2600.0, 800.0),
            GasSource((2200.0, 800.0), "smoke", 380.0, 700.0),
        ],
        ambient={"voc": 80.0, "co2": 420.0, "smoke": 12.0,
                 "temperature": 15.0, "humidity": 25.0},
        seed=seed,
    )


def _near_boundary(values: dict, thresholds: dict, frac: float) -> bool:
    for name in ("voc", "co2", "smoke"):
        v = values[name]
        for t in thresholds[name]:
            if abs(v - t) <= frac * t:
                return True
    return False


def _sample_pose(world: World, rng: np.random.Generator) -> Pose:
    x0, y0, x1, y1 = world.room.bounds
    while True:
        x = rng.uniform(x0, x1)
        y = rng.uniform(y0, y1)
        if world.room.contains_strict(x, y):
            return Pose(x, y)


def _noisy_values(values: dict, noise: NoiseConfig, rng: np.random.Generator,
                  channels: tuple[str, ...]) -> dict:
    out = dict(values)
    for name in FUZZY_CHANNELS:
        if name in channels:
            out[name] = apply_noise(values[name], noise.target(name), rng,
                                    CHANNEL_RANGE[name])
    return out


def robustness_experiment(
    world: World,
    cfg: FuzzyConfig,
    thresholds: dict[str, tuple[float, float]],
    noise: NoiseConfig,
    n_trials: int,
    rng: np.random.Generator,
    boundary_weighted: bool = True,
    boundary_frac: float = 0.15,
    channels: tuple[str, ...] = FUZZY_CHANNELS,
) -> ExperimentResult:
    """Error rate of each classifier against its own clean-frame answer."""
    if n_trials < 100:
        raise ConfigError("robustness experiment needs n_trials >= 100")
    crisp_err = fuzzy_err = 0
    done = attempts = 0
    max_attempts = 200 * n_trials
    while done < n_trials:
        attempts += 1
        pose = _sample_pose(world, rng)
        clean = sense_gas(world, pose, False, rng, 0).as_dict()
        if (boundary_weighted and attempts < max_attempts
                and not _near_boundary(clean, thresholds, boundary_frac)):
            continue
        noisy = _noisy_values(clean, noise, rng, channels)
        if crisp_classify(noisy, thresholds) != crisp_classify(clean, thresholds):
            crisp_err += 1
        if classify(noisy, cfg).label != classify(clean, cfg).label:
            fuzzy_err += 1
        done += 1
    return ExperimentResult(n_trials, crisp_err, fuzzy_err)


def single_frame_error_rates(
    values: dict,
    channel: str,
    target_mape: float,
    cfg: FuzzyConfig,
    thresholds: dict[str, tuple[float, float]],
    n: int,
    rng: np.random.Generator,
) -> tuple[float, float]:
    """Monte-Carlo flip rates for one fixed frame with noise on one channel."""
    crisp_clean = crisp_classify(values, thresholds)
    fuzzy_clean = classify(values, cfg).label
    crisp_err = fuzzy_err = 0
    for _ in range(n):
        noisy = _noisy_values(values, NoiseConfig(), rng, ())
        noisy[channel] = apply_noise(values[channel], target_mape, rng,
                                     CHANNEL_RANGE[channel])
        if crisp_classify(noisy, thresholds) != crisp_clean:
            crisp_err += 1
        if classify(noisy, cfg).label != fuzzy_clean:
            fuzzy_err += 1
    return crisp_err / n, fuzzy_err / n


def ablation_table(
    world: World,
    cfg: FuzzyConfig,
    thresholds: dict[str, tuple[float, float]],
    noise: NoiseConfig,
    n_trials: int,
    rng: np.random.Generator,
    only_channels: tuple[str, ...] | None = None,
) -> dict[str, ExperimentResult]:
    """Noise on one channel at a time; returns per-channel results."""
    table = {}
    for name in only_channels or FUZZY_CHANNELS:
        if name not in FUZZY_CHANNELS:
            raise ConfigError(f"unknown ablation channel {name!r}")
        table[name] = robustness_experiment(
            world, cfg, thresholds, noise, n_trials, rng, channels=(name,)
        )
    return table
