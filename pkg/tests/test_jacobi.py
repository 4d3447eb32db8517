import math

import numpy as np
import pytest

from weinstein_tube.ambient import AmbientTangent, RoundSphere
from weinstein_tube.errors import InputError
from weinstein_tube.jacobi import (
    GeodesicSegment,
    JacobiState,
    check_energy_bound,
    d2F,
    dF,
    energy_bound_rhs,
    eval_F,
    exp_derivative_constants_check,
    integrate_jacobi,
    pushforward_matrix,
)
from weinstein_tube.models import GeometryBudget
from weinstein_tube.sasaki import SasakiTangent


@pytest.fixture
def sphere() -> RoundSphere:
    return RoundSphere(2.0)


@pytest.fixture
def segment(sphere) -> GeodesicSegment:
    p = sphere.point(0, [0.5, 0.3])
    return GeodesicSegment(sphere, p, AmbientTangent(p, np.array([0.4, -0.2])))


def _init(segment, j, dj) -> JacobiState:
    p = segment.start
    j, dj = np.asarray(j, dtype=float), np.asarray(dj, dtype=float)
    return JacobiState(AmbientTangent(p, j), AmbientTangent(p, dj), 0.0)


def test_closed_form_matches_rk4(segment):
    init = _init(segment, [0.1, 0.2], [-0.3, 0.05])
    closed = integrate_jacobi(segment, init, method="closed", step=1e-2)
    numeric = integrate_jacobi(segment, init, method="rk4", step=1e-2)
    assert len(closed) == len(numeric)
    assert np.allclose(closed[-1].J.components, numeric[-1].J.components, atol=1e-8)
    assert np.allclose(closed[-1].DJ.components, numeric[-1].DJ.components, atol=1e-8)


def test_transverse_field_follows_sine_law(sphere, segment):
    p = segment.start
    velocity = segment.velocity.components
    w = sphere.apply_j(p, velocity)
    w = w / sphere.norm(p, w)
    path = integrate_jacobi(segment, _init(segment, [0.0, 0.0], w), step=1e-2)
    # j'' + K|σ̇|² j = 0 with j(0) = 0, j'(0) = 1
    root = segment.speed / sphere.radius
    end = path[-1]
    norm = sphere.norm(end.J.base, end.J.components)
    assert norm == pytest.approx(math.sin(root) / root, rel=1e-8)


def test_jacobi_input_checks(sphere, segment):
    other = sphere.point(0, [0.1, 0.1])
    ones = AmbientTangent(other, np.ones(2))
    bad = JacobiState(ones, ones, 0.0)
    with pytest.raises(InputError):
        integrate_jacobi(segment, bad)
    init = _init(segment, [1.0, 0.0], [0.0, 0.0])
    with pytest.raises(InputError):
        integrate_jacobi(segment, init, method="leapfrog")
    with pytest.raises(InputError):
        integrate_jacobi(segment, init, forcing=lambda s: np.zeros(2), method="closed")
    with pytest.raises(InputError):
        integrate_jacobi(segment, init, forcing=np.zeros((3, 2)), step=1e-2)


def test_energy_bound_holds_on_the_sphere(sphere, segment):
    init = _init(segment, [0.1, 0.2], [-0.3, 0.05])
    path = integrate_jacobi(segment, init, step=1e-2)
    report = check_energy_bound(path, sphere, C0=1 / sphere.radius**2, D0=0.0, eps=1.0,
                                speed=segment.speed)
    assert report.verdict == "pass"
    assert report.n_samples == len(path)


def test_energy_bound_rhs():
    assert energy_bound_rhs(1.0, 0.0, 0.0, 0.0, 1.0, 1.0) == pytest.approx(math.e)
    expected = (1.0 + 2.0) * math.exp(1 + 0.5 * 4 + 2.0)
    assert energy_bound_rhs(1.0, 0.5, 2.0, 1.0, 2.0, 1.0) == pytest.approx(expected)
    with pytest.raises(InputError):
        energy_bound_rhs(1.0, 0.0, 0.0, 2.5, 1.0, 1.0)


@pytest.mark.parametrize("theta,xi", [(0.0, 0.1), (1.3, 0.25), (4.0, -0.2)])
def test_normal_exponential_of_the_circle(circle_bundle, theta, xi):
    v = circle_bundle.point([theta], [xi])
    image = eval_F(circle_bundle, v)
    radial = np.array([math.cos(theta), math.sin(theta)])
    assert np.allclose(image.coords, (1 - xi) * radial)

    _, mat = pushforward_matrix(circle_bundle, v)
    d_theta = (1 - xi) * np.array([-math.sin(theta), math.cos(theta)])
    d_xi = -radial
    assert np.allclose(mat, np.column_stack([d_theta, d_xi]))

    pushed = dF(circle_bundle, SasakiTangent(v, np.array([1.0]), np.array([0.0])))
    assert np.allclose(pushed.components, d_theta)


def test_second_derivative_methods_agree_in_flat_space(circle_bundle):
    v = circle_bundle.point([0.6], [0.15])
    X = SasakiTangent(v, np.array([1.0]), np.array([0.5]))
    Y = SasakiTangent(v, np.array([0.3]), np.array([-1.0]))
    variational = d2F(circle_bundle, X, Y, step=1e-2)
    fd = d2F(circle_bundle, X, Y, method="fd", step=1e-2)
    assert np.allclose(variational.components, fd.components, atol=1e-6)
    with pytest.raises(InputError):
        d2F(circle_bundle, X, Y, method="spectral")


def test_exp_derivative_check_needs_small_radius(circle, rng):
    budget = GeometryBudget(A0=1.0)
    # D0(0.2) = 68 * 0.04 exceeds Cbar0 = 2
    report = exp_derivative_constants_check(circle, 0.2, budget, rng, n_samples=3)
    assert report.verdict == "hypothesis-not-met"
    assert report.hypothesis == "D0(r) <= Cbar0"


def test_exp_derivative_constants_on_the_circle(circle, rng):
    budget = GeometryBudget(A0=1.0)
    report = exp_derivative_constants_check(circle, 0.1, budget, rng, n_samples=3)
    assert report.verdict == "pass"
    assert report.n_samples == 9
    squared = exp_derivative_constants_check(circle, 0.1, budget, rng, n_samples=3,
                                             squared=True)
    assert squared.check_id == "exp-derivative-bounds"
    assert squared.verdict == "pass"
