"""Gas field: sum of isotropic Gaussians over ambient."""

import math

import pytest

from aeromap.errors import ConfigError, OutsideRoomError
from aeromap.geometry import Polygon
from aeromap.sim.world import GasSource, World, gas_field

# Independently evaluated with an arbitrary-precision calculator:
# 400 + 600*exp(-0.5) = 763.918395827580054...
AT_ONE_SIGMA = 763.91839582758005


def test_value_at_source_center(world_with_co2):
    assert gas_field(world_with_co2, (1000, 1000), "co2") == pytest.approx(1000.0, abs=1e-12)


def test_far_field_returns_ambient(world_with_co2):
    # 10 m away the Gaussian tail is ~0
    assert gas_field(world_with_co2, (3900, 2900), "voc") == pytest.approx(50.0)
    far = gas_field(world_with_co2, (3800, 2800), "co2")
    assert far == pytest.approx(400.0, abs=1e-6)


def test_value_one_spread_away(world_with_co2):
    assert gas_field(world_with_co2, (1500, 1000), "co2") == pytest.approx(AT_ONE_SIGMA, abs=1e-9)
    assert gas_field(world_with_co2, (1000, 1500), "co2") == pytest.approx(AT_ONE_SIGMA, abs=1e-9)


def test_outside_room_is_domain_error(world_with_co2):
    with pytest.raises(OutsideRoomError):
        gas_field(world_with_co2, (-10, 100), "co2")


def test_unknown_species_rejected(world_with_co2):
    with pytest.raises(ConfigError):
        gas_field(world_with_co2, (1000, 1000), "oxygen")


def test_drift_offsets_the_peak(room_4x3):
    w = World(room=room_4x3,
              gas_sources=[GasSource((1000, 1000), "co2", 600, 500, drift=(200, 0))],
              ambient={"voc": 0, "co2": 400, "smoke": 0,
                       "temperature": 21, "humidity": 45})
    assert gas_field(w, (1200, 1000), "co2") == pytest.approx(1000.0)
    assert gas_field(w, (1000, 1000), "co2") < 1000.0


def test_sources_superpose(room_4x3):
    w = World(room=room_4x3,
              gas_sources=[GasSource((1000, 1000), "co2", 600, 500),
                           GasSource((1000, 1000), "co2", 100, 500)],
              ambient={"voc": 0, "co2": 400, "smoke": 0,
                       "temperature": 21, "humidity": 45})
    assert gas_field(w, (1000, 1000), "co2") == pytest.approx(1100.0)


def test_species_filtered(world_with_co2):
    # the CO2 source must not leak into the VOC channel
    assert gas_field(world_with_co2, (1000, 1000), "voc") == pytest.approx(50.0)


def test_source_outside_room_rejected(room_4x3):
    with pytest.raises(ConfigError):
        World(room=room_4x3,
              gas_sources=[GasSource((5000, 1000), "co2", 600, 500)])


def test_gaussian_formula_against_direct_math(world_with_co2):
    for d in (100, 250, 777, 1234):
        expected = 400.0 + 600.0 * math.exp(-(d * d) / (2 * 500.0 ** 2))
        got = gas_field(world_with_co2, (1000 + d, 1000), "co2")
        assert got == pytest.approx(expected, abs=1e-9)
