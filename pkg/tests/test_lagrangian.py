import math

import numpy as np
import pytest

from weinstein_tube.errors import CapabilityError, InputError
from weinstein_tube.lagrangian import (
    CircleScene,
    GraphScene,
    LatitudeScene,
    TorusScene,
    build_lagrangian,
)


def test_build_lagrangian_from_config(make_config):
    scene = build_lagrangian(make_config({"kind": "torus", "radii": [1.0, 3.0]}))
    assert isinstance(scene, TorusScene) and scene.n == 2
    lat = build_lagrangian(make_config({"kind": "latitude", "colatitude": 1.0},
                                       ambient={"kind": "sphere", "radius": 2.0}))
    assert isinstance(lat, LatitudeScene) and lat.sphere.radius == 2.0


def test_constructor_validation():
    with pytest.raises(InputError):
        TorusScene([1.0, -1.0])
    with pytest.raises(InputError):
        GraphScene(amplitude=-0.1)
    with pytest.raises(InputError):
        LatitudeScene(colatitude=0.0)


def test_param_rejects_wrong_dimension(circle):
    with pytest.raises(InputError):
        circle.param([0.0, 1.0])
    with pytest.raises(InputError):
        circle.param([math.nan])


@pytest.mark.parametrize("scene", [
    CircleScene(2.0, (1.0, -1.0)), TorusScene([1.0, 0.5, 2.0]), GraphScene(0.3, 2.0),
    LatitudeScene(1.0), LatitudeScene(2.5),
])
def test_builtin_scenes_are_lagrangian(scene):
    for x in scene.sample_parameters(np.random.default_rng(1), 5):
        assert scene.lagrangian_defect(x) < 1e-12


def test_circle_immersion_and_normal(circle):
    assert np.allclose(circle.immerse([0.0]).coords, [1.0, 0.0])
    assert np.allclose(circle.induced_metric(np.array([0.3])), [[1.0]])
    # J∂θ points to the centre
    assert np.allclose(circle.normal_basis(np.array([0.0])), [[-1.0], [0.0]])


def test_frames_are_orthonormal(latitude):
    x = np.array([0.7])
    tangent, normal = latitude.frames(x)
    g = latitude.ambient.metric_matrix(latitude.immerse(x))
    assert np.allclose(tangent.T @ g @ tangent, np.eye(1))
    assert np.allclose(normal.T @ g @ tangent, 0.0)


def test_sample_pairs_shape(torus, rng):
    assert torus.sample_pairs(rng, 10).shape == (10, 2, 2)


@pytest.mark.parametrize("radius", [0.5, 1.0, 4.0])
def test_circle_second_fundamental_form(radius):
    scene = CircleScene(radius)
    x = np.array([1.1])
    assert scene.ii_norms(x)[0] == pytest.approx(1 / radius)
    assert scene.extrinsic_sups([x]).A0 == pytest.approx(1 / radius)


def test_circle_shape_operator(circle):
    shape = circle.shape_operator(np.array([0.4]), np.array([0.5]))
    assert np.allclose(shape, [[-0.5]])


def test_latitude_geodesic_curvature(latitude):
    expected = 1 / math.tan(math.pi / 3)
    assert latitude.exact_extrinsic_budget().A0 == pytest.approx(expected)
    assert latitude.ii_norms(np.array([0.3]))[0] == pytest.approx(expected, rel=1e-9)


def test_equator_is_totally_geodesic(equator):
    assert equator.exact_extrinsic_budget().A0 == 0.0
    assert equator.ii_norms(np.array([2.0]))[0] < 1e-12


def test_wavy_graph_budget_is_sampled(wavy_graph, rng):
    budget = wavy_graph.extrinsic_sups(np.linspace(-0.5, 0.5, 11)[:, None], rng)
    assert budget.provenance == "sampled"
    # the curvature εk³ of y = εk cos kx peaks at x = 0
    assert budget.A0 == pytest.approx(0.05, rel=1e-6)
    assert budget.A1 > 0


def test_real_axis_budget_is_zero(real_axis):
    budget = real_axis.extrinsic_sups([np.array([0.0])])
    assert (budget.A0, budget.A1, budget.A2) == (0.0, 0.0, 0.0)


def test_extrinsic_sups_need_samples(wavy_graph):
    with pytest.raises(InputError):
        wavy_graph.extrinsic_sups([])


def test_second_fundamental_form_orders(wavy_graph):
    x = np.array([0.2])
    value = wavy_graph.second_fundamental_form(x, np.array([1.0]), np.array([1.0]))
    assert value.shape == (2,)
    with pytest.raises(CapabilityError):
        wavy_graph.second_fundamental_form(x, np.ones(1), np.ones(1), order=3,
                                           directions=[np.ones(1)] * 3)
    with pytest.raises(InputError):
        wavy_graph.second_fundamental_form(x, np.ones(1), np.ones(1), order=1)


def test_flat_torus_has_no_intrinsic_curvature(torus):
    assert np.allclose(torus.curvature_tensor(np.array([0.3, 1.2])), 0.0)


def test_normal_connection_forms_agree(wavy_graph):
    spacing = 1e-3
    xs = (0.4 + spacing * np.arange(-5, 6))[:, None]
    xis = 0.1 + 0.3 * xs
    intrinsic = wavy_graph.normal_connection(xs, xis, spacing)
    projection = wavy_graph.normal_connection(xs, xis, spacing, form="projection")
    tangent = wavy_graph.normal_connection(xs, xis, spacing, form="tangent")
    assert np.allclose(intrinsic, projection, atol=1e-5)
    assert np.allclose(intrinsic, tangent, atol=1e-5)


def test_normal_connection_needs_three_samples(circle):
    with pytest.raises(InputError):
        circle.normal_connection(np.zeros((2, 1)), np.zeros((2, 1)), 0.1)


def test_intrinsic_distances(circle, torus, real_axis):
    assert circle.intrinsic_distance([0.0], [math.pi]) == pytest.approx(math.pi)
    assert torus.intrinsic_distance([0.0, 0.0], [math.pi, math.pi]) == pytest.approx(
        math.hypot(math.pi, 2 * math.pi))
    distance, error = real_axis.intrinsic_distance_estimate([0.0], [2.0])
    assert distance == pytest.approx(2.0)
    assert error < 1e-9


def test_wavy_graph_distance_matches_exponential_map(wavy_graph):
    x, X = np.array([0.3]), np.array([0.5])
    end, _ = wavy_graph.exp_map(x, X)
    assert wavy_graph.intrinsic_distance(x, end) == pytest.approx(
        wavy_graph.tangent_norm(x, X), rel=1e-6)


def test_circle_embedding_constant(circle, rng):
    assert circle.embedding_constant(circle.sample_pairs(rng, 50)) == pytest.approx(
        math.pi / 2, abs=1e-9)


def test_embedding_constant_needs_compact_embedded_scene(wavy_graph):
    with pytest.raises(CapabilityError):
        wavy_graph.embedding_constant([])


def test_exp_map_on_flat_parameters(torus):
    end, velocity = torus.exp_map(np.array([0.1, 0.2]), np.array([0.5, -0.5]))
    assert np.allclose(end, [0.6, -0.3])
    y = torus.exp_derivative(np.zeros(2), np.ones(2), np.array([1.0, 2.0]))
    assert np.allclose(y, [1.0, 2.0])


def test_exp_derivative_is_identity_at_zero(wavy_graph):
    y = wavy_graph.exp_derivative(np.array([0.7]), np.zeros(1), np.array([1.0]))
    assert y == pytest.approx([1.0], rel=1e-6)
