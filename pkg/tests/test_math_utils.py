import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weinstein_tube.math_utils import (
    bisect_largest,
    change_frame,
    expanding_bracket,
    exterior_derivative_1form,
    exterior_derivative_2form,
    gauss_legendre,
    jacobian_fd,
    metric_gram_schmidt,
    multilinear_sup,
    orthonormal_basis,
    random_unit_vectors,
    rk4_integrate,
    steps_for,
)


def test_rk4_exponential_growth():
    _, y = rk4_integrate(lambda t, y: y, np.array([1.0]), 0.0, 1.0, 100)
    assert abs(y[-1][0] - math.e) < 1e-8


def test_rk4_keeps_the_whole_path():
    times, path = rk4_integrate(lambda t, y: np.ones_like(y), np.zeros(2), 0.0, 2.0, 4,
                                keep_path=True)
    assert times.shape == (5,)
    assert path.shape == (5, 2)
    assert np.allclose(path[-1], [2.0, 2.0])


def test_rk4_integrates_backwards():
    _, y = rk4_integrate(lambda t, y: np.array([1.0]), np.array([0.0]), 1.0, 0.0, 3)
    assert y[-1][0] == pytest.approx(-1.0)


def test_steps_for():
    assert steps_for(1.0, 0.3) == 4
    assert steps_for(1.0, 0.25) == 4
    assert steps_for(0.0, 0.1) == 1
    assert steps_for(1.0, 0.0) == 1


def test_bisect_largest_finds_sqrt2():
    root = bisect_largest(lambda x: x * x <= 2, 1.0, 2.0)
    assert root == pytest.approx(math.sqrt(2), rel=1e-10)


def test_expanding_bracket():
    lo, hi = expanding_bracket(lambda x: x <= 10.0)
    assert lo <= 10.0 < hi
    assert expanding_bracket(lambda x: True) is None


def test_gauss_legendre_converges():
    integrand = lambda t: np.array(math.sin(t))  # noqa: E731
    value, nodes, converged = gauss_legendre(integrand, 0.0, math.pi)
    assert converged
    assert nodes >= 32
    assert float(value) == pytest.approx(2.0, abs=1e-12)


def test_jacobian_of_linear_map():
    a = np.array([[1.0, 2.0], [3.0, -4.0], [0.5, 0.0]])
    jac = jacobian_fd(lambda x: a @ x, np.array([0.3, -0.1]), 1e-5)
    assert np.allclose(jac, a, atol=1e-8)


def test_orthonormal_basis_whitens_the_gram_matrix():
    gram = np.array([[4.0, 1.0], [1.0, 3.0]])
    b = orthonormal_basis(gram)
    assert np.allclose(b.T @ gram @ b, np.eye(2))


def test_gram_schmidt_rejects_dependent_columns():
    with pytest.raises(ValueError, match="degenerate"):
        metric_gram_schmidt(np.array([[1.0, 2.0], [1.0, 2.0]]), np.eye(2))


def test_multilinear_sup_of_a_matrix_is_its_spectral_norm():
    m = np.array([[3.0, 0.0], [4.0, 5.0]])
    assert multilinear_sup(m) == pytest.approx(np.linalg.norm(m, 2))


def test_multilinear_sup_of_the_inner_product():
    tensor = np.eye(3)[None, :, :]
    sup = multilinear_sup(tensor, np.random.default_rng(0))
    assert sup == pytest.approx(1.0, rel=1e-9)


def test_change_frame_of_a_bilinear_form():
    form = np.array([[2.0, 0.0], [0.0, 8.0]])
    basis = np.diag([1 / math.sqrt(2), 1 / math.sqrt(8)])
    assert np.allclose(change_frame(form, basis, upper=False), np.eye(2))


def test_exterior_derivative_of_x_dy():
    x_dy = lambda y: np.array([0.0, y[0]])  # noqa: E731
    d = exterior_derivative_1form(x_dy, np.array([0.2, 0.4]), 1e-3)
    assert d[0, 1] == pytest.approx(1.0)
    assert d[1, 0] == pytest.approx(-1.0)


def test_exterior_derivative_of_a_2form():
    def form(y: np.ndarray) -> np.ndarray:
        # dx∧dy + x dy∧dz - y dx∧dz, whose derivative is 2 dx∧dy∧dz
        m = np.zeros((3, 3))
        m[0, 1], m[1, 0] = 1.0, -1.0
        m[1, 2], m[2, 1] = y[0], -y[0]
        m[0, 2], m[2, 0] = -y[1], y[1]
        return m

    d = exterior_derivative_2form(form, np.array([0.1, 0.2, 0.3]), 1e-3)
    assert d[0, 1, 2] == pytest.approx(2.0)
    assert d[1, 0, 2] == pytest.approx(-2.0)


def test_exterior_derivative_of_a_constant_2form_vanishes():
    m = np.array([[0.0, 1.0, 2.0], [-1.0, 0.0, 3.0], [-2.0, -3.0, 0.0]])
    d = exterior_derivative_2form(lambda y: m, np.zeros(3), 1e-3)
    assert np.allclose(d, 0.0)


@given(st.integers(min_value=1, max_value=6), st.integers(min_value=1, max_value=20))
@settings(max_examples=30)
def test_random_unit_vectors_are_unit(dim, count):
    v = random_unit_vectors(np.random.default_rng(dim * 100 + count), dim, count)
    assert v.shape == (count, dim)
    assert np.allclose(np.linalg.norm(v, axis=1), 1.0)
