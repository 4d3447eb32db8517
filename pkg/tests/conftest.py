"""Shared scenes and small configurations."""

import math

import numpy as np
import pytest

from weinstein_tube.lagrangian import CircleScene, GraphScene, LatitudeScene, TorusScene
from weinstein_tube.models import SceneConfig
from weinstein_tube.moser import MoserConstruction
from weinstein_tube.sasaki import NormalBundle

SMALL_SAMPLING = {
    "seed": 7,
    "points": 6,
    "pairs": 200,
    "flow_starts": 2,
    "heavy_points": 2,
    "lipschitz_samples": 2,
}


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def circle() -> CircleScene:
    return CircleScene()


@pytest.fixture
def circle_bundle(circle: CircleScene) -> NormalBundle:
    return NormalBundle(circle)


@pytest.fixture
def circle_moser(circle_bundle: NormalBundle) -> MoserConstruction:
    return MoserConstruction(circle_bundle)


@pytest.fixture
def torus() -> TorusScene:
    return TorusScene([1.0, 2.0])


@pytest.fixture
def wavy_graph() -> GraphScene:
    return GraphScene(amplitude=0.05, frequency=1.0)


@pytest.fixture
def real_axis() -> GraphScene:
    return GraphScene(amplitude=0.0)


@pytest.fixture
def latitude() -> LatitudeScene:
    return LatitudeScene(colatitude=math.pi / 3)


@pytest.fixture
def equator() -> LatitudeScene:
    return LatitudeScene()


def scene_config(lagrangian: dict, **extra) -> SceneConfig:
    """SceneConfig with the small sampling counts used throughout the tests."""
    data = {"name": lagrangian["kind"], "lagrangian": lagrangian,
            "sampling": dict(SMALL_SAMPLING), **extra}
    return SceneConfig.model_validate(data)


@pytest.fixture
def circle_config() -> SceneConfig:
    return scene_config({"kind": "circle", "radius": 1.0}, radius=0.2)


@pytest.fixture
def make_config():
    return scene_config
