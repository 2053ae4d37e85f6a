"""Mission configuration: one YAML file describing the world, the sweep
plan, mapping parameters, the fuzzy classifier, and telemetry settings.

Schema is documented in docs/config-schema.md; every section is optional
and falls back to the defaults below. The file path comes from the CLI
`--config` flag or the AEROMAP_CONFIG environment variable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .errors import ConfigError
from .fuzzy.config import FuzzyConfig, load_fuzzy_config
from .geometry import Polygon
from .mapping.grouping import GroupingParams
from .mapping.walls import WallParams
from .sim.mission import SweepPlan
from .sim.world import BatteryModel, GasSource, NoiseConfig, World

DEFAULT_SEED = 1729
DEFAULT_ROOM = [(0.0, 0.0), (4000.0, 0.0), (4000.0, 3000.0), (0.0, 3000.0)]

# Mission grouping defaults differ from the bare-library ones: radius-based
# orientation neighborhoods and a second refinement pass hold up under the
# fully noisy ranging channel.
MISSION_GROUPING = GroupingParams(orientation_radius=350.0, refine_iters=2)


@dataclass
class TelemetrySettings:
    host: str = "127.0.0.1"
    port: int = 8000
    watchdog_timeout_ms: float = 2000.0
    tick_ms: float = 100.0
    heartbeat_ms: float = 500.0
    frame_interval_ms: float = 25.0


@dataclass
class AppConfig:
    world: World
    plan: SweepPlan = field(default_factory=SweepPlan)
    wall_params: WallParams = field(default_factory=lambda: WallParams(grouping=MISSION_GROUPING))
    fuzzy: FuzzyConfig = field(default_factory=load_fuzzy_config)
    telemetry: TelemetrySettings = field(default_factory=TelemetrySettings)
    seed: int = DEFAULT_SEED


def default_world(seed: int = DEFAULT_SEED, noise_enabled: bool = True) -> World:
    return World(
        room=Polygon(DEFAULT_ROOM),
        gas_sources=[
            GasSource((1000.0, 1000.0), "co2", 600.0, 500.0),
            GasSource((3000.0, 2000.0), "voc", 900.0, 600.0),
        ],
        noise=NoiseConfig(enabled=noise_enabled),
        seed=seed,
    )


def default_app_config(seed: int = DEFAULT_SEED) -> AppConfig:
    return AppConfig(world=default_world(seed), seed=seed)


def _build_world(doc: dict, seed: int) -> World:
    room_doc = doc.get("room", {})
    polygon = Polygon(room_doc.get("polygon", DEFAULT_ROOM))
    sources = []
    for s in doc.get("sources", []):
        try:
            sources.append(GasSource(
                position=(float(s["position"][0]), float(s["position"][1])),
                species=s["species"],
                amplitude=float(s["amplitude"]),
                spread=float(s["spread"]),
                drift=tuple(s.get("drift", (0.0, 0.0))),
            ))
        except (KeyError, TypeError, IndexError) as e:
            raise ConfigError(f"bad gas source {s!r}: {e}") from e
    ambient = {
        "voc": 50.0, "co2": 420.0, "smoke": 10.0,
        "temperature": 21.0, "humidity": 45.0,
    }
    ambient.update(doc.get("ambient", {}))
    noise_doc = dict(doc.get("noise", {}))
    try:
        noise = NoiseConfig(**{**noise_doc.pop("targets", {}),
                               "enabled": noise_doc.get("enabled", True)})
    except TypeError as e:
        raise ConfigError(f"bad noise config: {e}") from e
    battery_doc = doc.get("battery", {})
    battery = BatteryModel(
        start_v=float(battery_doc.get("start_v", 12.6)),
        end_v=float(battery_doc.get("end_v", 11.1)),
        duration_ms=int(battery_doc.get("duration_ms", 1_200_000)),
    )
    return World(room=polygon, gas_sources=sources, ambient=ambient,
                 noise=noise, battery=battery, seed=seed)


def _build_dataclass(cls, doc: dict, what: str):
    try:
        return cls(**doc)
    except TypeError as e:
        raise ConfigError(f"bad {what} config: {e}") from e


def load_config(path: str | Path | None = None,
                seed: int | None = None,
                noise_override: bool | None = None) -> AppConfig:
    """Load the mission config; None uses AEROMAP_CONFIG or pure defaults."""
    if path is None:
        path = os.environ.get("AEROMAP_CONFIG") or None
    if path is None:
        doc: dict = {}
    else:
        try:
            doc = yaml.safe_load(Path(path).read_text())
        except FileNotFoundError as e:
            raise ConfigError(f"config file not found: {path}") from e
        except yaml.YAMLError as e:
            raise ConfigError(f"config file is not valid YAML: {e}") from e
        if not isinstance(doc, dict):
            raise ConfigError("config file must contain a YAML mapping")

    cfg_seed = seed if seed is not None else int(doc.get("seed", DEFAULT_SEED))
    world = _build_world(doc, cfg_seed)
    if noise_override is not None:
        world.noise = NoiseConfig(
            **{k: getattr(world.noise, k)
               for k in ("voc", "co2", "smoke", "temperature",
                          "humidity", "battery", "distance")},
            enabled=noise_override,
        )
    plan = _build_dataclass(SweepPlan, doc.get("plan", {}), "plan")

    mapping_doc = dict(doc.get("mapping", {}))
    corner_tol = mapping_doc.pop("corner_tol", None)
    merge_tol = mapping_doc.pop("merge_tol", None)
    merge_gap = mapping_doc.pop("merge_gap", None)
    grouping_defaults = {
        "orientation_radius": MISSION_GROUPING.orientation_radius,
        "refine_iters": MISSION_GROUPING.refine_iters,
    }
    grouping = _build_dataclass(GroupingParams,
                                {**grouping_defaults, **mapping_doc}, "mapping")
    wall_kwargs = {"grouping": grouping}
    if corner_tol is not None:
        wall_kwargs["corner_tol"] = float(corner_tol)
    if merge_tol is not None:
        wall_kwargs["merge_tol"] = float(merge_tol)
    if merge_gap is not None:
        wall_kwargs["merge_gap"] = float(merge_gap)
    wall_params = WallParams(**wall_kwargs)

    fuzzy_doc = doc.get("fuzzy", {}) or {}
    fuzzy = load_fuzzy_config(fuzzy_doc.get("config"))

    telemetry = _build_dataclass(TelemetrySettings, doc.get("telemetry", {}),
                                 "telemetry")
    return AppConfig(world=world, plan=plan, wall_params=wall_params,
                     fuzzy=fuzzy, telemetry=telemetry, seed=cfg_seed)
