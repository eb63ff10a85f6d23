import numpy as np
import pytest

from simris.geometry import Environment, Point3, WallPlacement, recommend_positions


@pytest.fixture
def rng():
    return np.random.default_rng(20240613)


@pytest.fixture
def indoor_scenario():
    """The indoor side-wall reference placement."""
    return recommend_positions(Environment.INDOOR_HOTSPOT, WallPlacement.SIDE_WALL)


@pytest.fixture
def outdoor_scenario():
    """The outdoor side-wall reference placement."""
    return recommend_positions(Environment.URBAN_MICRO, WallPlacement.SIDE_WALL)


@pytest.fixture
def small_indoor_scenario(indoor_scenario):
    """Indoor placement with a small surface, for brute-force oracles."""
    from dataclasses import replace

    return replace(indoor_scenario, n_elements=4)


def random_point(rng, lo=-50.0, hi=50.0, z_lo=0.1, z_hi=10.0) -> Point3:
    return Point3(
        float(rng.uniform(lo, hi)), float(rng.uniform(lo, hi)), float(rng.uniform(z_lo, z_hi))
    )
