import math

import numpy as np
import pytest

from weinstein_tube.errors import (
    CapabilityError,
    DegeneracyError,
    FlowExitError,
    HypothesisError,
    InputError,
)
from weinstein_tube.jacobi import eval_F
from weinstein_tube.models import GeometryBudget
from weinstein_tube.moser import MoserConstruction, TubeRegion
from weinstein_tube.sasaki import NormalBundle, SasakiTangent

# C̄₀ = 2 and D₀(r) = 68r², so Qₚ is certified for r ≤ √(1/34)
CIRCLE_BUDGET = GeometryBudget(A0=1.0)


def _flow_end(xi0: float) -> float:
    # Θ maps the circle of radius 1 - ξ₀ to the one of radius √(1 - 2ξ₀)
    return 1 - math.sqrt(1 - 2 * xi0)


@pytest.fixture
def tube(circle_bundle) -> TubeRegion:
    return TubeRegion(circle_bundle, 0.2)


def test_tube_region(circle_bundle):
    tube = TubeRegion(circle_bundle, 0.2)
    assert tube.contains(circle_bundle.point([0.3], [-0.15]))
    assert not tube.contains(circle_bundle.point([0.3], [0.2]))
    assert tube.scaled(0.5).radius == pytest.approx(0.1)
    with pytest.raises(InputError):
        TubeRegion(circle_bundle, 0.0)


def test_circle_pullback_form(circle_moser, circle_bundle):
    v = circle_bundle.point([0.4], [0.1])
    assert np.allclose(circle_moser.pullback_matrix(v), [[0.0, 0.9], [-0.9, 0.0]])
    assert np.allclose(circle_moser.omega_t_matrix(0.5, v), [[0.0, 0.95], [-0.95, 0.0]])
    assert np.allclose(circle_moser.difference_chart(v), [[0.0, -0.1], [0.1, 0.0]])
    with pytest.raises(InputError):
        circle_moser.omega_t_matrix(1.5, v)


def test_circle_primitive(circle_moser, circle_bundle):
    v = circle_bundle.point([0.3], [0.1])
    mu = circle_moser.mu_components(v)
    assert mu == pytest.approx([0.005, 0.0], abs=1e-10)
    _, _, converged = circle_moser.mu_quadrature(v)
    assert converged
    X = SasakiTangent(v, np.array([2.0]), np.array([7.0]))
    assert circle_moser.mu(X) == pytest.approx(0.01, abs=1e-10)


def test_primitive_vanishes_on_the_zero_section(circle_moser, circle_bundle):
    zero_section = circle_bundle.point([1.0], [0.0])
    value, nodes, converged = circle_moser.mu_quadrature(zero_section)
    assert np.all(value == 0.0) and nodes == 0 and converged


def test_primitive_differential(circle_moser, circle_bundle):
    v = circle_bundle.point([0.8], [0.12])
    expected = circle_moser.difference_chart(v)
    assert np.allclose(circle_moser.d_mu(v), expected, atol=1e-7)


@pytest.mark.parametrize("t", [0.0, 0.5, 1.0])
def test_circle_vector_field(circle_moser, circle_bundle, t):
    xi = 0.1
    field = circle_moser.vector_field(t, circle_bundle.point([2.0], [xi]))
    assert field.horizontal == pytest.approx([0.0], abs=1e-10)
    assert field.vertical == pytest.approx([xi**2 / (2 * (1 - t * xi))], rel=1e-8)


def test_vector_field_refuses_degenerate_forms(circle_moser, circle_bundle):
    # ω₁(∂θ, ∂ξ) = 1 - ξ vanishes at ξ = 1
    with pytest.raises(DegeneracyError) as info:
        circle_moser.vector_field(1.0, circle_bundle.point([0.0], [1.0]))
    assert info.value.hypothesis == "rK1(r) <= e"


def test_flat_section_has_no_vector_field(real_axis):
    moser = MoserConstruction(NormalBundle(real_axis))
    v = NormalBundle(real_axis).point([0.4], [0.3])
    assert np.allclose(moser.mu_components(v), 0.0, atol=1e-12)
    assert np.allclose(moser.vector_field_chart(0.7, v.coords), 0.0, atol=1e-12)


def test_rk4_flow_on_the_circle(circle_moser, circle_bundle, tube):
    result = circle_moser.flow(circle_bundle.point([0.5], [0.1]), tube)
    assert result.method == "rk4"
    assert result.stayed_inside and result.exit_time is None
    assert result.steps == 40
    assert result.trajectory.shape == (41, 2)
    assert result.endpoint.x == pytest.approx([0.5], abs=1e-10)
    assert result.endpoint.xi == pytest.approx([_flow_end(0.1)], rel=1e-7)
    assert result.endpoint.xi[0] == pytest.approx(0.105572, abs=1e-6)


@pytest.mark.slow
def test_picard_flow_agrees_with_rk4(circle_moser, circle_bundle, tube):
    v = circle_bundle.point([0.5], [-0.12])
    rk4 = circle_moser.flow(v, tube)
    picard = circle_moser.flow(v, tube, method="picard")
    assert picard.method == "picard"
    assert picard.stayed_inside
    assert picard.endpoint.xi == pytest.approx(rk4.endpoint.xi, abs=1e-7)
    assert picard.endpoint.xi == pytest.approx([_flow_end(-0.12)], abs=1e-6)


def test_flow_exit(circle_moser, circle_bundle):
    narrow = TubeRegion(circle_bundle, 0.1)
    v = circle_bundle.point([0.0], [0.099])
    with pytest.raises(FlowExitError) as info:
        circle_moser.flow(v, narrow)
    assert 0.0 < info.value.exit_time < 1.0
    result = circle_moser.flow(v, narrow, raise_on_exit=False)
    assert not result.stayed_inside
    assert result.exit_time == pytest.approx(info.value.exit_time)
    outside = circle_moser.flow(circle_bundle.point([0.0], [0.15]), narrow,
                                raise_on_exit=False)
    assert outside.exit_time == 0.0


def test_unknown_flow_method(circle_moser, circle_bundle, tube):
    with pytest.raises(InputError):
        circle_moser.flow(circle_bundle.point([0.0], [0.1]), tube, method="euler")


def test_theta_on_the_circle(circle_moser, circle_bundle, tube):
    theta, xi0 = 1.1, 0.08
    image = circle_moser.theta(circle_bundle.point([theta], [xi0]), tube)
    expected = math.sqrt(1 - 2 * xi0) * np.array([math.cos(theta), math.sin(theta)])
    assert np.allclose(image.coords, expected, atol=1e-7)


@pytest.mark.slow
def test_theta_is_symplectic(circle_moser, circle_bundle, tube):
    v = circle_bundle.point([0.7], [0.05])
    assert circle_moser.symplectic_residual(v, tube) < 1e-5


@pytest.mark.slow
def test_theta_preserves_area(circle_moser, circle_bundle, tube):
    v = circle_bundle.point([0.3], [0.02])
    assert circle_moser.area_defect(v, tube, size=0.02, per_side=8) < 1e-6


def test_area_defect_needs_flat_curves(latitude):
    bundle = NormalBundle(latitude)
    moser = MoserConstruction(bundle)
    with pytest.raises(CapabilityError):
        moser.area_defect(bundle.point([0.1], [0.01]), TubeRegion(bundle, 0.1), 0.01)


def test_lipschitz_estimate_on_a_flat_section(real_axis, rng):
    moser = MoserConstruction(NormalBundle(real_axis))
    estimate = moser.measure_lipschitz(0.2, GeometryBudget(), rng, samples=2)
    assert estimate.hypothesized
    assert estimate.C < 1e-12
    assert float(estimate.alpha) == pytest.approx(1.0, abs=1e-9)
    assert estimate.samples == 2


def test_lipschitz_estimate_outside_the_q_hypothesis(circle_moser, rng):
    estimate = circle_moser.measure_lipschitz(0.2, CIRCLE_BUDGET, rng, samples=2)
    assert not estimate.hypothesized
    assert estimate.notes[0].startswith("unhypothesized: D0(r) <= Cbar0")
    with pytest.raises(HypothesisError) as info:
        circle_moser.measure_lipschitz(0.2, CIRCLE_BUDGET, rng, samples=2, strict=True)
    assert info.value.certificate == "D0(r) <= Cbar0"
    inside = circle_moser.measure_lipschitz(0.1, CIRCLE_BUDGET, rng, samples=2)
    assert inside.hypothesized and inside.C > 0


def test_q_trivialization_domain(circle_moser):
    x_p = np.array([0.0])
    q = circle_moser.q_trivialization(x_p, np.array([0.05]), np.array([0.03]), 0.1,
                                      CIRCLE_BUDGET)
    assert q.x == pytest.approx([0.05]) and q.xi == pytest.approx([0.03])
    with pytest.raises(HypothesisError) as info:
        circle_moser.q_trivialization(x_p, np.array([50.0]), np.array([5.0]), 0.1,
                                      CIRCLE_BUDGET)
    assert info.value.certificate == "|X| < r, |Y| < r/2"
    with pytest.raises(HypothesisError):
        circle_moser.q_trivialization(x_p, np.array([0.0]), np.array([0.06]), 0.1,
                                      CIRCLE_BUDGET)
    with pytest.raises(HypothesisError) as info:
        circle_moser.q_trivialization(x_p, np.array([0.01]), np.array([0.01]), 0.2,
                                      CIRCLE_BUDGET)
    assert info.value.certificate == "D0(r) <= Cbar0"


def test_q_components_need_the_hypothesis(circle_moser):
    x_p, X, Y = np.array([0.0]), np.array([0.02]), np.array([0.03])
    x1, x2 = circle_moser.q_components(0.5, x_p, X, Y, 0.1, CIRCLE_BUDGET)
    field = circle_moser.vector_field(0.5, circle_moser.bundle.point([0.02], [0.03]))
    assert x1 == pytest.approx(field.horizontal, abs=1e-10)
    assert x2 == pytest.approx(field.vertical, abs=1e-10)
    with pytest.raises(HypothesisError):
        circle_moser.q_component_jacobian(0.5, x_p, X, Y, 0.2, CIRCLE_BUDGET)


def test_singular_q_derivative_names_the_hypothesis(circle_moser, monkeypatch):
    monkeypatch.setattr(circle_moser, "q_jacobian", lambda *args: np.zeros((2, 2)))
    with pytest.raises(DegeneracyError) as info:
        circle_moser.q_components(0.5, np.array([0.0]), np.array([0.02]),
                                  np.array([0.03]), 0.1, CIRCLE_BUDGET)
    assert info.value.hypothesis == "D0(r) <= Cbar0"
    assert "DQ_p is singular" in str(info.value)


@pytest.mark.parametrize("t", [0.05, 0.5, 1.0])
def test_rho_dot_speed(wavy_graph, t):
    bundle = NormalBundle(wavy_graph)
    moser = MoserConstruction(bundle)
    v = bundle.point([0.8], [0.07])
    speed = bundle.sasaki_norm(moser.rho_dot(t, v))
    assert speed == pytest.approx(bundle.fiber_norm(v) / t, rel=1e-10)


def test_theta_is_the_normal_exponential_on_a_flat_section(real_axis):
    bundle = NormalBundle(real_axis)
    moser = MoserConstruction(bundle)
    tube = TubeRegion(bundle, 0.2)
    v = bundle.point([0.4], [0.15])
    assert np.allclose(moser.theta(v, tube).coords, eval_F(bundle, v).coords,
                       atol=1e-12)
    assert moser.symplectic_residual(v, tube, step=1e-4) <= 1e-10


def test_theta_fixes_the_zero_section(circle_moser, circle_bundle, tube):
    for angle in (0.0, 1.3, 4.0):
        image = circle_moser.theta(circle_bundle.point([angle], [0.0]), tube)
        expected = [math.cos(angle), math.sin(angle)]
        assert np.allclose(image.coords, expected, atol=1e-9)
