import numpy as np
import pytest

from aeromap.geometry import Polygon
from aeromap.sim.world import GasSource, NoiseConfig, World


@pytest.fixture
def room_4x3() -> Polygon:
    return Polygon([(0, 0), (4000, 0), (4000, 3000), (0, 3000)])


@pytest.fixture
def world_4x3(room_4x3) -> World:
    return World(room=room_4x3, seed=1729)


@pytest.fixture
def world_with_co2(room_4x3) -> World:
    return World(
        room=room_4x3,
        gas_sources=[GasSource((1000.0, 1000.0), "co2", 600.0, 500.0)],
        ambient={"voc": 50.0, "co2": 400.0, "smoke": 10.0,
                 "temperature": 21.0, "humidity": 45.0},
        seed=1729,
    )


@pytest.fixture
def big_room_world() -> World:
    # Large room so kinematics tests never touch a wall.
    room = Polygon([(-100000, -100000), (100000, -100000),
                    (100000, 100000), (-100000, 100000)])
    return World(room=room, seed=1729)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1729)
