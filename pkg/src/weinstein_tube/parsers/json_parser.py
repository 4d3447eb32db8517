"""JSON scene configurations."""

import json
import logging
import os
from typing import Any

from pydantic import ValidationError

from weinstein_tube.errors import ConfigError
from weinstein_tube.models import SceneConfig
from weinstein_tube.parsers.base import BaseSceneParser

logger = logging.getLogger(__name__)

SEED_ENV = "TUBE_SEED"

_TAGS = {"flat", "sphere", "circle", "torus", "graph", "latitude"}


def _dotted(loc: tuple[int | str, ...]) -> str:
    """('lagrangian', 'circle', 'radius') -> 'lagrangian.radius'.

    Discriminated unions insert the tag value into the location; it is dropped.
    """
    parts: list[str] = []
    for i, item in enumerate(loc):
        if isinstance(item, int):
            parts.append(f"[{item}]")
            continue
        if i > 0 and loc[i - 1] in ("lagrangian", "ambient") and item in _TAGS:
            continue
        parts.append(item if not parts else f".{item}")
    return "".join(parts).replace(".[", "[")


def _seed_override(data: dict[str, Any]) -> None:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw.strip() == "":
        return
    try:
        seed = int(raw)
    except ValueError as e:
        raise ConfigError(
            f"{SEED_ENV}={raw!r} is not an integer", key="sampling.seed"
        ) from e
    sampling = data.setdefault("sampling", {})
    if not isinstance(sampling, dict):
        return  # schema validation reports the bad type
    logger.info("%s overrides the configured seed with %d", SEED_ENV, seed)
    sampling["seed"] = seed


class JSONSceneParser(BaseSceneParser):
    """Parse a JSON document against the SceneConfig schema."""

    def __init__(self, honor_env: bool = True) -> None:
        self.honor_env = honor_env

    def parse(self, content: str) -> SceneConfig:
        try:
            data = json.loads(content)
        except json.JSONDecodeError as e:
            raise ConfigError(
                f"invalid JSON: {e.msg}", line=e.lineno, column=e.colno
            ) from e
        if not isinstance(data, dict):
            raise ConfigError(
                "scene configuration must be a JSON object", line=1, column=1
            )
        if self.honor_env:
            _seed_override(data)
        try:
            config = SceneConfig.model_validate(data)
        except ValidationError as e:
            first = e.errors()[0]
            key = _dotted(tuple(first["loc"])) or None
            raise ConfigError(f"schema violation: {first['msg']}", key=key) from e
        logger.debug("parsed scene %r (%s)", config.name, config.lagrangian.kind)
        return config
