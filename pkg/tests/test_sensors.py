"""Simulated range and gas sensors."""

import math

import numpy as np
import pytest

from aeromap.errors import OutsideRoomError
from aeromap.sim.world import (
    Pose,
    sense_distance,
    sense_distances,
    sense_gas,
)


def test_range_from_center(world_4x3, rng):
    p = Pose(2000, 1500)
    assert sense_distance(world_4x3, p, 0, False, rng) == pytest.approx(2000.0)
    assert sense_distance(world_4x3, p, 90, False, rng) == pytest.approx(1500.0)


def test_range_diagonal_square(rng):
    from aeromap.geometry import Polygon
    from aeromap.sim.world import World
    w = World(room=Polygon([(0, 0), (4000, 0), (4000, 4000), (0, 4000)]))
    d = sense_distance(w, Pose(2000, 2000), 45, False, rng)
    assert d == pytest.approx(2000 * math.sqrt(2), abs=1e-9)


def test_range_outside_room(world_4x3, rng):
    with pytest.raises(OutsideRoomError):
        sense_distance(world_4x3, Pose(-5, 100), 0, False, rng)


def test_noisy_range_mape(world_4x3):
    rng = np.random.default_rng(7)
    p = Pose(2000, 1500)
    reads = np.array([sense_distance(world_4x3, p, 0, True, rng) for _ in range(20000)])
    mape = np.mean(np.abs(reads - 2000.0) / 2000.0)
    assert mape == pytest.approx(0.2006, abs=0.005)


def test_read_averaging_reduces_spread(world_4x3):
    rng = np.random.default_rng(7)
    p = Pose(2000, 1500)
    single = sense_distances(world_4x3, p, np.zeros(4000), True, rng, reads=1)
    avg16 = sense_distances(world_4x3, p, np.zeros(4000), True, rng, reads=16)
    assert avg16.std() < single.std() / 3.0  # ~1/4 expected


def test_frame_without_sources_equals_ambient(world_4x3, rng):
    f = sense_gas(world_4x3, Pose(2000, 1500), False, rng, 0)
    assert f.voc == world_4x3.ambient["voc"]
    assert f.co2 == world_4x3.ambient["co2"]
    assert f.smoke == world_4x3.ambient["smoke"]
    assert f.temperature == world_4x3.ambient["temperature"]
    assert f.humidity == world_4x3.ambient["humidity"]
    assert f.timestamp == 0


def test_frame_at_source_center(world_with_co2, rng):
    f = sense_gas(world_with_co2, Pose(1000, 1000), False, rng, 5)
    assert f.co2 == pytest.approx(400.0 + 600.0)
    assert f.timestamp == 5


def test_noisy_frame_channel_mape(world_with_co2):
    # repeated reads at a fixed pose must land near the per-channel targets
    rng = np.random.default_rng(11)
    true = sense_gas(world_with_co2, Pose(1000, 1000), False, rng, 0)
    n = 10_000
    frames = [sense_gas(world_with_co2, Pose(1000, 1000), True, rng, 0)
              for _ in range(n)]
    for name, target in (("voc", 0.1095), ("co2", 0.1063), ("smoke", 0.1168),
                         ("temperature", 0.0961), ("humidity", 0.0446),
                         ("battery", 0.0244)):
        t = true.channel(name)
        vals = np.array([f.channel(name) for f in frames])
        mape = np.mean(np.abs(vals - t) / t)
        assert mape == pytest.approx(target, abs=0.005), name


def test_battery_discharges_linearly(world_4x3, rng):
    b0 = sense_gas(world_4x3, Pose(100, 100), False, rng, 0).battery
    half = sense_gas(world_4x3, Pose(100, 100), False, rng,
                     world_4x3.battery.duration_ms // 2).battery
    end = sense_gas(world_4x3, Pose(100, 100), False, rng,
                    world_4x3.battery.duration_ms * 2).battery
    assert b0 == pytest.approx(12.6)
    assert half == pytest.approx((12.6 + 11.1) / 2)
    assert end == pytest.approx(11.1)
