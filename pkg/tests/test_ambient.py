import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weinstein_tube.ambient import FlatComplexSpace, RoundSphere, build_ambient
from weinstein_tube.errors import (
    BaseMismatchError,
    CapabilityError,
    ChartExitError,
    InputError,
)
from weinstein_tube.models import FlatAmbientSpec, SphereAmbientSpec

coords = st.floats(min_value=-1.5, max_value=1.5, allow_nan=False)


@pytest.fixture
def sphere() -> RoundSphere:
    return RoundSphere(2.0)


def test_build_ambient():
    assert isinstance(build_ambient(FlatAmbientSpec(n=2)), FlatComplexSpace)
    sphere = build_ambient(SphereAmbientSpec(radius=3.0))
    assert isinstance(sphere, RoundSphere) and sphere.radius == 3.0


def test_complex_dimension_must_be_positive():
    with pytest.raises(InputError):
        FlatComplexSpace(0)
    with pytest.raises(InputError):
        RoundSphere(-1.0)


def test_flat_structure():
    m = FlatComplexSpace(2)
    p = m.point(0, [1.0, 2.0, 3.0, 4.0])
    j = m.complex_matrix(p)
    assert np.allclose(j @ j, -np.eye(4))
    x, y = np.array([1.0, 0, 0, 0]), np.array([0, 1.0, 0, 0])
    assert m.omega_components(p, x, y) == pytest.approx(1.0)
    assert m.kahler_defect(p) == 0.0
    assert math.isinf(m.injectivity_radius)
    assert m.exact_curvature_sups() == (0.0, 0.0, 0.0)


def test_flat_geodesics_are_lines():
    m = FlatComplexSpace(1)
    p = m.point(0, [1.0, 1.0])
    q = m.exp_geodesic(p, m.tangent(p, [3.0, 4.0]), 0.5)
    assert np.allclose(q.coords, [2.5, 3.0])
    assert m.distance(p, q) == pytest.approx(2.5)


def test_flat_has_a_single_chart():
    with pytest.raises(ChartExitError):
        FlatComplexSpace(1).point(1, [0.0, 0.0])


def test_vectors_must_share_the_base_point():
    m = FlatComplexSpace(1)
    p, q = m.point(0, [0.0, 0.0]), m.point(0, [1.0, 0.0])
    with pytest.raises(BaseMismatchError):
        m.metric_eval(p, m.tangent(p, [1.0, 0.0]), m.tangent(q, [1.0, 0.0]))


def test_curvature_orders_above_two_are_unavailable():
    m = FlatComplexSpace(1)
    p = m.point(0, [0.0, 0.0])
    x = m.tangent(p, [1.0, 0.0])
    with pytest.raises(CapabilityError):
        m.curvature(p, x, x, x, order=3, direction_args=[x, x, x])
    with pytest.raises(InputError):
        m.curvature(p, x, x, x, order=1)


@given(coords, coords)
@settings(max_examples=40, deadline=None)
def test_sphere_j_is_a_compatible_complex_structure(u, v):
    sphere = RoundSphere(2.0)
    p = sphere.point(0, [u, v])
    j = sphere.complex_matrix(p)
    g = sphere.metric_matrix(p)
    assert np.allclose(j @ j, -np.eye(2), atol=1e-12)
    assert np.allclose(j.T @ g @ j, g, atol=1e-12)


def test_sphere_is_kahler(sphere):
    p = sphere.point(0, [0.7, -0.4])
    assert sphere.kahler_defect(p) < 1e-6


def test_sphere_sectional_curvature(sphere):
    p = sphere.point(0, [0.3, 0.2])
    x, y = sphere.tangent(p, [1.0, 0.2]), sphere.tangent(p, [-0.3, 0.8])
    r = sphere.curvature(p, x, y, y)
    num = sphere.metric_eval(p, r, x)
    den = (sphere.metric_eval(p, x, x) * sphere.metric_eval(p, y, y)
           - sphere.metric_eval(p, x, y) ** 2)
    assert num / den == pytest.approx(0.25)
    assert sphere.exact_curvature_sups() == (0.25, 0.0, 0.0)


def test_sphere_embedding_round_trip(sphere):
    p = sphere.point(0, [0.5, -1.2])
    xyz = sphere.embed(p)
    assert np.linalg.norm(xyz) == pytest.approx(2.0)
    assert np.allclose(sphere.extrinsic_coordinates(p), xyz)
    assert sphere.from_embedding(xyz, 0).same_as(p, 1e-12)
    other = sphere.from_embedding(xyz, 1)
    assert np.allclose(sphere.embed(other), xyz)


def test_sphere_refuses_the_chart_pole(sphere):
    with pytest.raises(ChartExitError):
        sphere.from_embedding(np.array([0.0, 0.0, 2.0]), 0)
    with pytest.raises(ChartExitError):
        sphere.point(0, [1e4, 0.0])


def test_sphere_geodesic_distance_and_log(sphere):
    p = sphere.point(0, [0.3, -0.2])
    v = np.array([0.4, 0.1])
    q = sphere.exp_geodesic(p, sphere.tangent(p, v))
    assert sphere.distance(p, q) == pytest.approx(sphere.norm(p, v), rel=1e-10)
    assert np.allclose(sphere.log_map(p, q), v, atol=1e-10)


def test_sphere_geodesic_that_crosses_the_pole_is_refused(sphere):
    p = sphere.point(0, [0.0, 0.0])
    v = np.array([1.0, 0.0])
    # the south pole has conformal factor 2, so this reaches the north pole
    with pytest.raises(ChartExitError):
        sphere.geodesic_state(p, v, math.pi)


def test_sphere_transport_is_an_isometry(sphere):
    p = sphere.point(0, [0.3, -0.2])
    v = np.array([0.4, 0.1])
    x = np.array([1.0, 0.5])
    q, _ = sphere.geodesic_state(p, v, 1.0)
    moved = sphere.transport_along_geodesic(p, v, 1.0, x)
    assert sphere.norm(q, moved) == pytest.approx(sphere.norm(p, x), rel=1e-10)


def test_sphere_transport_methods_agree(sphere):
    # radial lines of the stereographic chart are meridians
    curve = np.stack([np.linspace(0.0, 0.8, 200), np.zeros(200)], axis=1)
    start = sphere.point(0, curve[0])
    x0 = sphere.tangent(start, [0.3, 1.0])
    by_geodesic = sphere.parallel_transport(curve, x0, "geodesic")
    by_ode = sphere.parallel_transport(curve, x0, "ode")
    assert np.allclose(by_geodesic.components, by_ode.components, atol=1e-6)


def test_unknown_transport_method(sphere):
    p = sphere.point(0, [0.0, 0.0])
    with pytest.raises(InputError):
        sphere.parallel_transport([p, p], sphere.tangent(p, [1.0, 0.0]), "magic")


def test_orthonormal_frame_is_j_adapted(sphere):
    p = sphere.point(1, [0.4, 0.9])
    frame = sphere.orthonormal_frame(p)
    g = sphere.metric_matrix(p)
    assert np.allclose(frame.T @ g @ frame, np.eye(2))
    assert np.allclose(sphere.apply_j(p, frame[:, 0]), frame[:, 1])
