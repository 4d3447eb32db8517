"""Lagrangian immersions: circles, product tori, graphs and latitude circles."""

from weinstein_tube.errors import InputError
from weinstein_tube.lagrangian.base import LagrangianScene
from weinstein_tube.lagrangian.circle import CircleScene
from weinstein_tube.lagrangian.graph import GraphScene
from weinstein_tube.lagrangian.latitude import LatitudeScene
from weinstein_tube.lagrangian.torus import TorusScene
from weinstein_tube.models import (
    CircleSpec,
    GraphSpec,
    LatitudeSpec,
    SceneConfig,
    SphereAmbientSpec,
    TorusSpec,
)


def build_lagrangian(config: SceneConfig) -> LagrangianScene:
    """Instantiate the Lagrangian scene described by a validated config."""
    spec = config.lagrangian
    fd_step = config.tolerances.fd_step
    if isinstance(spec, CircleSpec):
        return CircleScene(spec.radius, spec.center, fd_step)
    if isinstance(spec, TorusSpec):
        return TorusScene(spec.radii, fd_step)
    if isinstance(spec, GraphSpec):
        return GraphScene(spec.amplitude, spec.frequency, fd_step)
    if isinstance(spec, LatitudeSpec):
        ambient = config.ambient
        radius = ambient.radius if isinstance(ambient, SphereAmbientSpec) else 1.0
        return LatitudeScene(spec.colatitude, radius, fd_step)
    raise InputError(f"unknown lagrangian kind {spec!r}")


__all__ = [
    "CircleScene",
    "GraphScene",
    "LagrangianScene",
    "LatitudeScene",
    "TorusScene",
    "build_lagrangian",
]
