import json

import pytest

from weinstein_tube.errors import ConfigError
from weinstein_tube.models import FlatAmbientSpec, SphereAmbientSpec
from weinstein_tube.parsers import SEED_ENV, JSONSceneParser, load_scene

CIRCLE = {"name": "unit", "lagrangian": {"kind": "circle", "radius": 1.0},
          "sampling": {"seed": 3}}


@pytest.fixture(autouse=True)
def _no_seed_override(monkeypatch):
    monkeypatch.delenv(SEED_ENV, raising=False)


def test_ambient_is_inferred():
    config = load_scene(json.dumps(CIRCLE))
    assert config.name == "unit"
    assert config.ambient == FlatAmbientSpec(n=1)
    torus = load_scene(json.dumps({"lagrangian": {"kind": "torus", "radii": [1, 2]}}))
    assert torus.ambient == FlatAmbientSpec(n=2)
    latitude = load_scene('{"lagrangian": {"kind": "latitude", "colatitude": 1.0}}')
    assert isinstance(latitude.ambient, SphereAmbientSpec)


@pytest.mark.parametrize("data", [
    {"ambient": {"kind": "sphere"}, "lagrangian": {"kind": "circle"}},
    {"ambient": {"kind": "flat", "n": 2}, "lagrangian": {"kind": "graph"}},
    {"ambient": {"kind": "flat"}, "lagrangian": {"kind": "latitude"}},
])
def test_ambient_mismatch(data):
    with pytest.raises(ConfigError, match="schema violation"):
        load_scene(json.dumps(data))


def test_invalid_json_reports_position():
    text = '{\n  "lagrangian": {\n    "kind": "circle",\n  }\n}'
    with pytest.raises(ConfigError) as info:
        load_scene(text)
    assert info.value.line == 4
    assert info.value.column is not None
    assert "line 4" in str(info.value)


def test_non_object_document():
    with pytest.raises(ConfigError) as info:
        load_scene("[1, 2]")
    assert info.value.line == 1


@pytest.mark.parametrize("data,key", [
    ({"lagrangian": {"kind": "circle", "radius": -1}}, "lagrangian.radius"),
    ({"lagrangian": {"kind": "torus", "radii": [1, 0]}}, "lagrangian.radii[1]"),
    ({"lagrangian": {"kind": "circle"}, "sampling": {"points": 0}}, "sampling.points"),
    ({"lagrangian": {"kind": "circle"}, "colour": "red"}, "colour"),
    ({"lagrangian": {"kind": "circle"}, "radius": 0}, "radius"),
])
def test_schema_errors_name_the_key(data, key):
    with pytest.raises(ConfigError) as info:
        load_scene(json.dumps(data))
    assert info.value.key == key
    assert key in str(info.value)


def test_seed_override(monkeypatch):
    monkeypatch.setenv(SEED_ENV, "42")
    assert load_scene(json.dumps(CIRCLE)).sampling.seed == 42
    assert load_scene(json.dumps(CIRCLE), honor_env=False).sampling.seed == 3
    assert JSONSceneParser(honor_env=False).parse(json.dumps(CIRCLE)).sampling.seed == 3


def test_bad_seed_override(monkeypatch):
    monkeypatch.setenv(SEED_ENV, "forty-two")
    with pytest.raises(ConfigError) as info:
        load_scene(json.dumps(CIRCLE))
    assert info.value.key == "sampling.seed"


def test_load_from_path(tmp_path):
    path = tmp_path / "scene.json"
    path.write_text(json.dumps(CIRCLE), encoding="utf-8")
    assert load_scene(path).sampling.seed == 3
    with pytest.raises(ConfigError, match="cannot read"):
        load_scene(tmp_path / "missing.json")
