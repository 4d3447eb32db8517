import math

import pytest

from weinstein_tube.bounds import injectivity_radius_bound
from weinstein_tube.errors import CapabilityError, InputError
from weinstein_tube.injectivity import (
    embedding_constant,
    injectivity_probe,
    points_for_pairs,
)
from weinstein_tube.models import GeometryBudget


@pytest.mark.parametrize("pairs,points", [(1, 2), (3, 3), (10000, 142)])
def test_points_for_pairs(pairs, points):
    assert points_for_pairs(pairs) == points
    assert points * (points - 1) // 2 >= pairs


def test_embedding_constant(circle, wavy_graph, rng):
    assert embedding_constant(circle, rng, 50) == pytest.approx(math.pi / 2, rel=1e-9)
    with pytest.raises(InputError):
        embedding_constant(circle, rng, 0)
    with pytest.raises(CapabilityError):
        embedding_constant(wavy_graph, rng, 50)


def test_probe_finds_the_focal_collision(circle_bundle, rng):
    # F(θ, ξ) = F(θ + π, 2 - ξ) once the tube reaches past the centre
    report = injectivity_probe(circle_bundle, 1.5, rng, pairs=300, collision_tol=1e-3)
    assert report.verdict == "fail"
    assert report.failing_sample is not None


@pytest.mark.slow
def test_probe_passes_below_the_injectivity_bound(circle_bundle, rng):
    bound = injectivity_radius_bound(GeometryBudget(A0=1.0, emb=math.pi / 2))
    report = injectivity_probe(circle_bundle, 0.9 * bound, rng, pairs=500, refine=4)
    assert report.verdict == "pass"
    assert report.anchor == "normal-exponential-injective"


def test_probe_input_checks(circle, circle_bundle, rng):
    with pytest.raises(InputError):
        injectivity_probe(circle_bundle, 0.0, rng)
    circle.embedded = False
    with pytest.raises(CapabilityError):
        injectivity_probe(circle_bundle, 0.1, rng)
