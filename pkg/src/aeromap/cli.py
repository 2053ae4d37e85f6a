"""Single entry point for the whole stack.

Exit codes: 0 success, 2 config/parse error, 3 insufficient data,
4 self-check failure. Every subcommand is deterministic given
(config, seed); the default seed is 1729.
"""

from __future__ import annotations

import json
import statistics
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__
from .config import DEFAULT_SEED, AppConfig, load_config
from .errors import (
    AeromapError,
    ConfigError,
    InsufficientDataError,
    InsufficientGeometryError,
    SchemaError,
)
from .fuzzy.crisp import crisp_classify, crossover_thresholds
from .fuzzy.engine import classify
from .fuzzy.experiment import ablation_table, robustness_experiment
from .mapping.evaluate import evaluate_map, locate_gas_peaks
from .mapping.walls import extract_walls
from .sim.mission import run_sweep
from .telemetry.logio import (
    load_points_file,
    mission_log_to_bytes,
    parse_mission_log,
)
from .telemetry.wire import quantize

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INSUFFICIENT = 3
EXIT_SELF_CHECK = 4


def _dump_json(doc: dict, path: Path | None) -> bytes:
    data = json.dumps(quantize(doc), sort_keys=True,
                      separators=(",", ":")).encode("utf-8")
    if path is not None:
        path.write_bytes(data)
    return data


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load(config_path, seed, noise) -> AppConfig:
    noise_override = None if noise is None else (noise == "on")
    try:
        return load_config(config_path, seed=seed, noise_override=noise_override)
    except ConfigError as e:
        _fail(EXIT_CONFIG, str(e))


@click.group()
@click.version_option(__version__)
def main():
    """aeromap: air-quality mapping robot simulator and toolchain."""


config_option = click.option(
    "--config", "config_path", type=click.Path(), default=None,
    help="Mission config YAML (or set AEROMAP_CONFIG).",
)
seed_option = click.option("--seed", type=int, default=None,
                           help=f"RNG seed (default {DEFAULT_SEED}).")
noise_option = click.option("--noise", type=click.Choice(["on", "off"]),
                            default=None, help="Override the config noise switch.")


@main.command()
@config_option
@seed_option
@noise_option
@click.option("--out", type=click.Path(), default="mission.json",
              help="MissionLog output path.")
def simulate(config_path, seed, noise, out):
    """Run a coverage mission and write the MissionLog JSON."""
    cfg = _load(config_path, seed, noise)
    try:
        log = run_sweep(cfg.world, cfg.plan)
    except ConfigError as e:
        _fail(EXIT_CONFIG, str(e))
    Path(out).write_bytes(mission_log_to_bytes(log))
    homing = next((e.detail.get("displacement_mm") for e in reversed(log.events)
                   if e.kind == "home_end"), None)
    click.echo(f"frames: {len(log.frames)}")
    click.echo(f"points: {len(log.points)}")
    click.echo(f"homing_error_mm: {homing}")
    click.echo(f"log: {out}")


@main.command("extract-walls")
@config_option
@seed_option
@click.argument("input_file", type=click.Path(exists=True))
@click.option("--out", type=click.Path(), default="walls.json",
              help="WallModel output path.")
@click.option("--truth", "truth_config", type=click.Path(), default=None,
              help="Config whose room polygon is the ground truth; "
                   "writes an ErrorReport next to the WallModel.")
def extract_walls_cmd(config_path, seed, input_file, out, truth_config):
    """Reconstruct walls from a MissionLog JSON or two-column x/y text file."""
    cfg = _load(config_path, seed, None)
    try:
        cloud = load_points_file(input_file)
    except (SchemaError, ValueError) as e:
        _fail(EXIT_CONFIG, f"cannot parse {input_file}: {e}")
    try:
        model = extract_walls(cloud, cfg.wall_params)
    except (InsufficientGeometryError, InsufficientDataError) as e:
        _fail(EXIT_INSUFFICIENT, str(e))
    _dump_json(model.as_dict(), Path(out))
    click.echo(f"corners: {len(model.corners)}")
    click.echo(f"walls: {out}")
    if truth_config:
        truth = _load(truth_config, seed, None)
        try:
            report = evaluate_map(model, truth.world.room)
        except AeromapError as e:
            _fail(EXIT_INSUFFICIENT, str(e))
        report_path = Path(out).with_suffix(".report.json")
        _dump_json(report.as_dict(), report_path)
        click.echo(f"mean_wall_mape_pct: {report.mean_wall_mape:.3f}")
        click.echo(f"report: {report_path}")


@main.command("classify")
@config_option
@click.argument("log_file", type=click.Path(exists=True))
@click.option("--out", type=click.Path(), default=None,
              help="Write per-frame classifications as JSON.")
def classify_cmd(config_path, log_file, out):
    """Classify every frame of a MissionLog with the fuzzy pipeline."""
    cfg = _load(config_path, None, None)
    try:
        log = parse_mission_log(Path(log_file).read_bytes())
    except SchemaError as e:
        _fail(EXIT_CONFIG, f"cannot parse {log_file}: {e}")
    if not log.frames:
        _fail(EXIT_INSUFFICIENT, "log contains no frames")
    thresholds = crossover_thresholds(cfg.fuzzy)
    rows, counts = [], {"Good": 0, "Moderate": 0, "Poor": 0}
    for i, f in enumerate(log.frames):
        c = classify(f.sensors, cfg.fuzzy)
        counts[c.label] += 1
        rows.append({
            "frame": i, "t": f.sensors.timestamp, "score": c.crisp_score,
            "label": c.label,
            "crisp_label": crisp_classify(f.sensors.as_dict(), thresholds),
        })
    if out:
        _dump_json({"v": 1, "classifications": rows}, Path(out))
    for label in ("Good", "Moderate", "Poor"):
        click.echo(f"{label}: {counts[label]}")


@main.command()
@config_option
@seed_option
@noise_option
@click.option("-n", "--trials", type=int, default=1000, show_default=True)
@click.option("--only-channel", "only_channel", default=None,
              help="Restrict the ablation table to one channel.")
def experiment(config_path, seed, noise, trials, only_channel):
    """Crisp vs fuzzy robustness experiment; self-checks fuzzy < crisp."""
    if trials < 100:
        _fail(EXIT_CONFIG, "experiment needs at least 100 trials")
    from .fuzzy.experiment import build_experiment_world

    cfg = _load(config_path, seed, noise)
    world = build_experiment_world(cfg.seed) if config_path is None else cfg.world
    if noise == "off":
        world.noise = world.noise.disabled()
    thresholds = crossover_thresholds(cfg.fuzzy)
    rng = np.random.default_rng(cfg.seed)
    noise_cfg = world.noise if world.noise.enabled else world.noise.disabled()
    if not world.noise.enabled:
        from .sim.world import NoiseConfig
        noise_cfg = NoiseConfig(voc=0, co2=0, smoke=0, temperature=0,
                                humidity=0, battery=0, distance=0)
    result = robustness_experiment(world, cfg.fuzzy, thresholds, noise_cfg,
                                   trials, rng)
    click.echo(f"crisp_error_rate: {result.crisp_error_rate:.4f}")
    click.echo(f"fuzzy_error_rate: {result.fuzzy_error_rate:.4f}")
    channels = (only_channel,) if only_channel else None
    try:
        table = ablation_table(world, cfg.fuzzy, thresholds, noise_cfg,
                               max(100, trials // 5), rng, only_channels=channels)
    except ConfigError as e:
        _fail(EXIT_CONFIG, str(e))
    click.echo("ablation (channel crisp fuzzy):")
    for name, res in table.items():
        click.echo(f"  {name} {res.crisp_error_rate:.4f} {res.fuzzy_error_rate:.4f}")
    if world.noise.enabled and result.fuzzy_error_rate >= result.crisp_error_rate:
        _fail(EXIT_SELF_CHECK,
              "self-check failed: fuzzy error rate is not below crisp")


@main.command()
@config_option
@seed_option
@click.argument("log_file", type=click.Path(exists=True))
@click.option("--out", type=click.Path(), default="report.json")
def report(config_path, seed, log_file, out):
    """Full mission report: wall accuracy, gas peaks, homing, classification."""
    cfg = _load(config_path, seed, None)
    try:
        log = parse_mission_log(Path(log_file).read_bytes())
    except SchemaError as e:
        _fail(EXIT_CONFIG, f"cannot parse {log_file}: {e}")
    doc: dict = {"v": 1, "frames": len(log.frames), "points": len(log.points)}
    try:
        model = extract_walls(log.point_array(), cfg.wall_params)
        gas_truth = [s.position for s in cfg.world.gas_sources if s.species == "co2"]
        gas_est = locate_gas_peaks(log, "co2") if log.frames else []
        rep = evaluate_map(model, cfg.world.room,
                           gas_truth or None, gas_est or None)
        doc["walls"] = model.as_dict()
        doc["errors"] = rep.as_dict()
    except (InsufficientGeometryError, InsufficientDataError) as e:
        doc["walls"] = None
        doc["errors"] = {"detail": str(e)}
    homing = next((e.detail.get("displacement_mm") for e in reversed(log.events)
                   if e.kind == "home_end"), None)
    doc["homing_error_mm"] = homing
    _dump_json(doc, Path(out))
    click.echo(f"report: {out}")
    if "mean_wall_mape" in doc.get("errors", {}):
        click.echo(f"mean_wall_mape_pct: {doc['errors']['mean_wall_mape']:.3f}")
    click.echo(f"homing_error_mm: {homing}")


@main.command()
@config_option
@seed_option
@noise_option
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
@click.option("--ui", "ui_dir", type=click.Path(exists=True), default=None,
              help="Directory with the built operator console (frontend/dist); "
                   "served at /.")
def serve(config_path, seed, noise, host, port, ui_dir):
    """Run the live telemetry service (websocket + REST)."""
    import uvicorn

    from .telemetry.server import ServeConfig, create_app

    cfg = _load(config_path, seed, noise)
    app = create_app(ServeConfig(
        world=cfg.world,
        plan=cfg.plan,
        wall_params=cfg.wall_params,
        fuzzy=cfg.fuzzy,
        watchdog_timeout_ms=cfg.telemetry.watchdog_timeout_ms,
        tick_ms=cfg.telemetry.tick_ms,
        heartbeat_ms=cfg.telemetry.heartbeat_ms,
        frame_interval_ms=cfg.telemetry.frame_interval_ms,
        static_dir=ui_dir,
    ))
    uvicorn.run(app, host=host or cfg.telemetry.host,
                port=port or cfg.telemetry.port, log_level="warning")


@main.command()
@config_option
@seed_option
@click.argument("log_file", type=click.Path(exists=True))
def replay(config_path, seed, log_file):
    """Round-trip check: re-parse a log, re-serialize, re-derive outputs."""
    cfg = _load(config_path, seed, None)
    raw = Path(log_file).read_bytes()
    try:
        log = parse_mission_log(raw)
    except SchemaError as e:
        _fail(EXIT_CONFIG, f"cannot parse {log_file}: {e}")
    again = mission_log_to_bytes(log)
    if again != raw.strip():
        _fail(EXIT_SELF_CHECK, "log did not round-trip byte-identically")
    summary = {"frames": len(log.frames), "points": len(log.points),
               "events": [e.kind for e in log.events]}
    if log.points:
        try:
            m1 = extract_walls(log.point_array(), cfg.wall_params)
            m2 = extract_walls(parse_mission_log(again).point_array(), cfg.wall_params)
            if json.dumps(quantize(m1.as_dict()), sort_keys=True) != \
               json.dumps(quantize(m2.as_dict()), sort_keys=True):
                _fail(EXIT_SELF_CHECK, "wall model is not replay-stable")
            summary["corners"] = len(m1.corners)
        except (InsufficientGeometryError, InsufficientDataError):
            summary["corners"] = None
    click.echo(json.dumps(summary, sort_keys=True))


if __name__ == "__main__":
    main()
