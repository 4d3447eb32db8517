"""Kähler ambient manifolds: flat ℂⁿ and the round sphere."""

from weinstein_tube.ambient.base import (
    AmbientManifold,
    AmbientPoint,
    AmbientTangent,
    sampled_curvature_sups,
)
from weinstein_tube.ambient.flat import FlatComplexSpace
from weinstein_tube.ambient.sphere import RoundSphere
from weinstein_tube.models import FlatAmbientSpec, SphereAmbientSpec


def build_ambient(spec: FlatAmbientSpec | SphereAmbientSpec) -> AmbientManifold:
    """Instantiate the ambient manifold described by a validated spec."""
    if isinstance(spec, SphereAmbientSpec):
        return RoundSphere(spec.radius)
    return FlatComplexSpace(spec.n)


__all__ = [
    "AmbientManifold",
    "AmbientPoint",
    "AmbientTangent",
    "FlatComplexSpace",
    "RoundSphere",
    "build_ambient",
    "sampled_curvature_sups",
]
