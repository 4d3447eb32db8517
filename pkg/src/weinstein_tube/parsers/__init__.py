"""Scene configuration parsers."""

from pathlib import Path

from weinstein_tube.errors import ConfigError
from weinstein_tube.models import SceneConfig
from weinstein_tube.parsers.base import BaseSceneParser
from weinstein_tube.parsers.json_parser import SEED_ENV, JSONSceneParser


def load_scene(source: str | Path, honor_env: bool = True) -> SceneConfig:
    """Validated SceneConfig from configuration text or a path to a JSON file."""
    if isinstance(source, Path):
        try:
            content = source.read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigError(f"cannot read {source}: {e}") from e
    else:
        content = source
    return JSONSceneParser(honor_env=honor_env).parse(content)


__all__ = ["BaseSceneParser", "JSONSceneParser", "SEED_ENV", "load_scene"]
