"""Numerical helpers: RK4, bisection, Gauss-Legendre quadrature, finite differences,
metric orthonormalization and sup-norm estimation of small multilinear maps."""

import logging
from collections.abc import Callable

import numpy as np
from scipy import linalg

logger = logging.getLogger(__name__)

Array = np.ndarray


def rk4_integrate(
    rhs: Callable[[float, Array], Array],
    y0: Array,
    t0: float,
    t1: float,
    n_steps: int,
    keep_path: bool = False,
) -> tuple[Array, Array]:
    """Classical fixed-step RK4 for y' = rhs(t, y).

    Args:
        rhs: Right-hand side; must accept and return arrays shaped like y0.
        y0: Initial state (any shape).
        t0: Start time.
        t1: End time (may be smaller than t0).
        n_steps: Number of steps (>= 1).
        keep_path: Return every grid state instead of only the endpoint.

    Returns:
        (times, states); without keep_path both hold a single entry.
    """
    n_steps = max(int(n_steps), 1)
    h = (t1 - t0) / n_steps
    y = np.array(y0, dtype=float)
    times = [t0]
    path = [y.copy()]
    t = t0
    for _ in range(n_steps):
        k1 = rhs(t, y)
        k2 = rhs(t + h / 2, y + h / 2 * k1)
        k3 = rhs(t + h / 2, y + h / 2 * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t = t + h
        if keep_path:
            times.append(t)
            path.append(y.copy())
    if not keep_path:
        return np.array([t]), y[None, ...]
    return np.array(times), np.stack(path)


def steps_for(length: float, step: float) -> int:
    """Number of fixed steps of size at most `step` covering `length`."""
    if step <= 0:
        return 1
    return max(int(np.ceil(abs(length) / step - 1e-9)), 1)


def bisect_largest(
    predicate: Callable[[float], bool],
    lo: float,
    hi: float,
    rel_tol: float = 1e-12,
    max_iter: int = 200,
) -> float:
    """Largest x in [lo, hi] with predicate(x) true, for a predicate that is true
    on an initial segment. `lo` must satisfy the predicate."""
    for _ in range(max_iter):
        if hi - lo <= rel_tol * max(abs(hi), 1e-300):
            break
        mid = 0.5 * (lo + hi)
        if predicate(mid):
            lo = mid
        else:
            hi = mid
    return lo


def expanding_bracket(
    predicate: Callable[[float], bool], start: float = 1.0, limit: float = 1e300
) -> tuple[float, float] | None:
    """Find lo < hi with predicate(lo) and not predicate(hi); None if it never fails."""
    hi = start
    while predicate(hi):
        hi *= 2.0
        if hi > limit:
            return None
    lo = hi / 2.0
    while not predicate(lo):
        lo /= 2.0
        if lo < 1e-300:
            return 0.0, hi
    return lo, hi


def gauss_legendre(
    fn: Callable[[float], Array],
    a: float,
    b: float,
    n_nodes: int = 16,
    tol: float = 1e-12,
    max_nodes: int = 1024,
) -> tuple[Array, int, bool]:
    """Gauss-Legendre quadrature with node doubling until the change is below tol.

    Returns:
        (value, nodes used, converged flag).
    """

    def rule(n: int) -> Array:
        x, w = np.polynomial.legendre.leggauss(n)
        t = 0.5 * (b - a) * x + 0.5 * (b + a)
        vals = np.stack([np.asarray(fn(float(ti)), dtype=float) for ti in t])
        return 0.5 * (b - a) * np.tensordot(w, vals, axes=1)

    n = n_nodes
    value = rule(n)
    while n < max_nodes:
        n *= 2
        refined = rule(n)
        change = float(np.max(np.abs(refined - value))) if refined.size else 0.0
        value = refined
        if change < tol:
            return value, n, True
        logger.debug("quadrature change %.3e with %d nodes; doubling", change, n)
    return value, n, False


def central_difference(
    fn: Callable[[Array], Array], x: Array, direction: Array, step: float
) -> Array:
    """Directional derivative of fn at x by a central difference."""
    x = np.asarray(x, dtype=float)
    d = np.asarray(direction, dtype=float)
    return (np.asarray(fn(x + step * d)) - np.asarray(fn(x - step * d))) / (2 * step)


def jacobian_fd(fn: Callable[[Array], Array], x: Array, step: float) -> Array:
    """Jacobian matrix (outputs x inputs) by central differences."""
    x = np.asarray(x, dtype=float)
    cols = []
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = 1.0
        cols.append(np.ravel(central_difference(fn, x, e, step)))
    return np.stack(cols, axis=-1)


def orthonormal_basis(gram: Array) -> Array:
    """Columns B with B.T @ gram @ B = I (upper-triangular change of basis)."""
    chol = linalg.cholesky(np.atleast_2d(gram), lower=True)
    return linalg.solve_triangular(chol, np.eye(chol.shape[0]), lower=True).T


def metric_gram_schmidt(vectors: Array, gram: Array, rank_tol: float = 1e-10) -> Array:
    """Orthonormalize the columns of `vectors` for the inner product `gram`.

    Raises:
        ValueError: if a column is (numerically) dependent on the previous ones.
    """
    vectors = np.atleast_2d(np.asarray(vectors, dtype=float))
    out = []
    for j in range(vectors.shape[1]):
        v = vectors[:, j].copy()
        scale = float(np.sqrt(max(v @ gram @ v, 0.0)))
        for u in out:
            v = v - (u @ gram @ v) * u
        norm = float(np.sqrt(max(v @ gram @ v, 0.0)))
        if norm <= rank_tol * max(scale, 1.0):
            raise ValueError(f"column {j} is degenerate (norm {norm:.3e})")
        out.append(v / norm)
    return np.stack(out, axis=1)


def random_unit_vectors(rng: np.random.Generator, dim: int, count: int) -> Array:
    """`count` uniformly distributed unit vectors in R^dim, rows."""
    v = rng.standard_normal((count, dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def multilinear_sup(
    tensor: Array,
    rng: np.random.Generator | None = None,
    starts: int = 8,
    rounds: int = 30,
) -> float:
    """Estimate sup |T(u_1, ..., u_k)| over unit vectors u_i.

    `tensor` has shape (out, d_1, ..., d_k) in orthonormal coordinates. k = 1 is the
    exact spectral norm; for k >= 2 alternating maximization is run from the basis
    directions and random starts, giving a lower estimate of the true sup.
    """
    tensor = np.asarray(tensor, dtype=float)
    k = tensor.ndim - 1
    if k <= 0:
        return float(np.linalg.norm(tensor))
    if k == 1:
        return float(np.linalg.norm(tensor, 2))
    rng = rng if rng is not None else np.random.default_rng(0)
    dims = tensor.shape[1:]

    def contract(vecs: list[Array], skip: int) -> Array:
        out = tensor
        # contract the trailing slots first so axis indices stay valid
        for slot in range(k - 1, -1, -1):
            if slot == skip:
                continue
            out = np.tensordot(out, vecs[slot], axes=([slot + 1], [0]))
        return out

    candidates: list[list[Array]] = []
    for i in range(max(dims)):
        candidates.append([np.eye(d)[min(i, d - 1)] for d in dims])
    for _ in range(starts):
        candidates.append([random_unit_vectors(rng, d, 1)[0] for d in dims])

    best = 0.0
    for vecs in candidates:
        value = 0.0
        for _ in range(rounds):
            for slot in range(k):
                mat = contract(vecs, slot)
                _, s, vt = np.linalg.svd(np.atleast_2d(mat), full_matrices=False)
                vecs[slot] = vt[0]
                value = float(s[0])
        best = max(best, value)
    return best


def change_frame(tensor: Array, basis: Array, upper: bool = True) -> Array:
    """Components of a tensor in the frame whose columns are `basis`.

    The first index is contravariant when `upper` is set; all others are covariant.
    """
    tensor = np.asarray(tensor, dtype=float)
    start = 0
    out = tensor
    if upper:
        out = np.tensordot(np.linalg.inv(basis), out, axes=([1], [0]))
        start = 1
    for slot in range(start, tensor.ndim):
        out = np.moveaxis(np.tensordot(out, basis, axes=([slot], [0])), -1, slot)
    return out


Form = Callable[[Array], Array]


def _five_point(fn: Form, y: Array, axis: int, step: float) -> Array:
    e = np.zeros_like(y)
    e[axis] = step
    return (-fn(y + 2 * e) + 8 * fn(y + e) - 8 * fn(y - e) + fn(y - 2 * e)) / (
        12 * step
    )


def exterior_derivative_1form(fn: Form, y: Array, step: float) -> Array:
    """dμ[a, b] = ∂_a μ_b - ∂_b μ_a for a 1-form given by its components."""
    y = np.asarray(y, dtype=float)
    grad = np.stack([np.asarray(_five_point(fn, y, a, step)) for a in range(y.size)])
    return grad - grad.T


def exterior_derivative_2form(fn: Form, y: Array, step: float) -> Array:
    """dω[a, b, c] = ∂_a ω_bc - ∂_b ω_ac + ∂_c ω_ab for a 2-form as a matrix."""
    y = np.asarray(y, dtype=float)
    grad = np.stack([np.asarray(_five_point(fn, y, a, step)) for a in range(y.size)])
    return (
        grad
        - np.einsum("bac->abc", grad)
        + np.einsum("cab->abc", grad)
    )
