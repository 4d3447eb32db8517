"""Abstract Kähler ambient manifold evaluated in charts."""

import logging
from abc import ABC, abstractmethod
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from weinstein_tube.errors import (
    BaseMismatchError,
    CapabilityError,
    ChartExitError,
    InputError,
)
from weinstein_tube.math_utils import (
    random_unit_vectors,
    rk4_integrate,
)

logger = logging.getLogger(__name__)

Vector = Sequence[float] | np.ndarray


@dataclass(frozen=True, eq=False)
class AmbientPoint:
    """Chart coordinates of a point of M."""

    chart_id: int
    coords: np.ndarray

    def same_as(self, other: "AmbientPoint", tol: float = 1e-12) -> bool:
        return self.chart_id == other.chart_id and bool(
            np.allclose(self.coords, other.coords, rtol=0.0, atol=tol)
        )


@dataclass(frozen=True, eq=False)
class AmbientTangent:
    """Tangent vector in chart components."""

    base: AmbientPoint
    components: np.ndarray


class AmbientManifold(ABC):
    """A Kähler manifold (M, g, J, ω = g(J·,·)) given by closed-form charts.

    Subclasses implement the raw chart formulas; the public operations below add
    base-point checks and wrap arrays in AmbientPoint / AmbientTangent.
    """

    kind: str = "abstract"

    def __init__(self, n: int) -> None:
        if n < 1:
            raise InputError(f"complex dimension must be >= 1, got {n}")
        self.n = n
        self.dimension_real = 2 * n

    # -- raw chart formulas -------------------------------------------------

    @abstractmethod
    def chart_contains(self, chart_id: int, coords: np.ndarray) -> bool:
        """Whether coords lie in the declared domain of the chart."""
        pass

    @abstractmethod
    def metric_matrix(self, p: AmbientPoint) -> np.ndarray:
        """Components g_ij at p."""
        pass

    @abstractmethod
    def complex_matrix(self, p: AmbientPoint) -> np.ndarray:
        """Matrix of J acting on components at p."""
        pass

    @abstractmethod
    def christoffel(self, p: AmbientPoint) -> np.ndarray:
        """Christoffel symbols as an array G[k, i, j] = Γ^k_ij."""
        pass

    @abstractmethod
    def curvature_components(
        self, p: AmbientPoint, x: np.ndarray, y: np.ndarray, z: np.ndarray
    ) -> np.ndarray:
        """R(X, Y)Z with R = [∇_X, ∇_Y] - ∇_[X,Y]."""
        pass

    @abstractmethod
    def curvature_derivative_components(
        self,
        p: AmbientPoint,
        directions: Sequence[np.ndarray],
        x: np.ndarray,
        y: np.ndarray,
        z: np.ndarray,
    ) -> np.ndarray:
        """(∇^k R)(directions; X, Y)Z for k = len(directions) in {1, 2}."""
        pass

    @abstractmethod
    def geodesic_state(
        self, p: AmbientPoint, v: np.ndarray, s: float
    ) -> tuple[AmbientPoint, np.ndarray]:
        """Point and velocity at parameter s of the geodesic with initial velocity v.

        Raises:
            ChartExitError: if the geodesic leaves the chart of p.
        """
        pass

    @abstractmethod
    def transport_along_geodesic(
        self, p: AmbientPoint, v: np.ndarray, s: float, x: np.ndarray
    ) -> np.ndarray:
        """Parallel transport of x along s' -> exp_p(s' v), s' in [0, s]."""
        pass

    @abstractmethod
    def log_map(self, p: AmbientPoint, q: AmbientPoint) -> np.ndarray:
        """Initial velocity of the minimizing geodesic from p reaching q at s = 1."""
        pass

    def extrinsic_coordinates(self, p: AmbientPoint) -> np.ndarray:
        """Chart-independent Euclidean coordinates of p, used for collision tests."""
        return np.asarray(p.coords, dtype=float)

    @abstractmethod
    def distance(self, p: AmbientPoint, q: AmbientPoint) -> float:
        """Riemannian distance d_M(p, q)."""
        pass

    @property
    @abstractmethod
    def injectivity_radius(self) -> float:
        """inj(M, g); math.inf when unbounded."""
        pass

    @property
    def constant_curvature(self) -> float | None:
        """Sectional curvature when it is constant, else None."""
        return None

    def exact_curvature_sups(self) -> tuple[float, float, float] | None:
        """Analytic (C0, C1, C2) when known."""
        return None

    # -- derived raw helpers --------------------------------------------------

    def point(self, chart_id: int, coords: Vector) -> AmbientPoint:
        arr = np.asarray(coords, dtype=float).reshape(self.dimension_real)
        if not self.chart_contains(chart_id, arr):
            raise ChartExitError(f"coordinates {arr} outside chart {chart_id}")
        return AmbientPoint(chart_id, arr)

    def tangent(self, p: AmbientPoint, comps: Vector) -> AmbientTangent:
        arr = np.asarray(comps, dtype=float).reshape(self.dimension_real)
        return AmbientTangent(p, arr)

    def inner(self, p: AmbientPoint, x: np.ndarray, y: np.ndarray) -> float:
        return float(x @ self.metric_matrix(p) @ y)

    def norm(self, p: AmbientPoint, x: np.ndarray) -> float:
        return float(np.sqrt(max(self.inner(p, x, x), 0.0)))

    def apply_j(self, p: AmbientPoint, x: np.ndarray) -> np.ndarray:
        return self.complex_matrix(p) @ x

    def omega_components(self, p: AmbientPoint, x: np.ndarray, y: np.ndarray) -> float:
        """Kähler form ω(X, Y) = g(JX, Y)."""
        return self.inner(p, self.apply_j(p, x), y)

    def christoffel_contract(
        self, p: AmbientPoint, x: np.ndarray, y: np.ndarray
    ) -> np.ndarray:
        """Γ(X, Y)^k = Γ^k_ij X^i Y^j, the correction turning d/dt into ∇_t."""
        return np.einsum("kij,i...,j...->k...", self.christoffel(p), x, y)

    def orthonormal_frame(self, p: AmbientPoint) -> np.ndarray:
        """Columns forming a g-orthonormal basis at p (J-adapted: e, Je pairs)."""
        g = self.metric_matrix(p)
        jm = self.complex_matrix(p)
        cols: list[np.ndarray] = []
        for k in range(self.n):
            e = np.eye(self.dimension_real)[2 * k]
            for u in cols:
                e = e - (u @ g @ e) * u
            e = e / float(np.sqrt(e @ g @ e))
            # span(cols) is J-invariant, so Je is orthogonal to it and to e
            cols.extend([e, jm @ e])
        return np.stack(cols, axis=1)

    def frame_components(
        self, p: AmbientPoint, frame: np.ndarray, x: np.ndarray
    ) -> np.ndarray:
        """Coefficients of x in the orthonormal `frame` at p."""
        return frame.T @ self.metric_matrix(p) @ x

    def curvature_in_frame(
        self,
        p: AmbientPoint,
        frame: np.ndarray,
        x: np.ndarray,
        y: np.ndarray,
        z: np.ndarray,
    ) -> np.ndarray:
        """R(X, Y)Z with every vector given as orthonormal-frame coefficients."""
        out = self.curvature_components(p, frame @ x, frame @ y, frame @ z)
        return self.frame_components(p, frame, out)

    def curvature_derivative_in_frame(
        self,
        p: AmbientPoint,
        frame: np.ndarray,
        w: np.ndarray,
        x: np.ndarray,
        y: np.ndarray,
        z: np.ndarray,
    ) -> np.ndarray:
        out = self.curvature_derivative_components(
            p, [frame @ w], frame @ x, frame @ y, frame @ z
        )
        return self.frame_components(p, frame, out)

    def transported_frame(
        self, p: AmbientPoint, v: np.ndarray, s: float, frame: np.ndarray
    ) -> np.ndarray:
        columns = [
            self.transport_along_geodesic(p, v, s, frame[:, k])
            for k in range(frame.shape[1])
        ]
        return np.stack(columns, axis=1)

    def kahler_defect(self, p: AmbientPoint, step: float = 1e-5) -> float:
        """max |∇J| entry at p by central differences of J plus Christoffel terms."""
        gam = self.christoffel(p)
        jm = self.complex_matrix(p)
        worst = 0.0
        for k in range(self.dimension_real):
            e = np.zeros(self.dimension_real)
            e[k] = step
            jp = self.complex_matrix(AmbientPoint(p.chart_id, p.coords + e))
            jn = self.complex_matrix(AmbientPoint(p.chart_id, p.coords - e))
            dj = (jp - jn) / (2 * step)
            nabla = dj + gam[:, k, :] @ jm - jm @ gam[:, k, :]
            worst = max(worst, float(np.max(np.abs(nabla))))
        return worst

    # -- public operations ----------------------------------------------------

    @staticmethod
    def _check_base(p: AmbientPoint, *vectors: AmbientTangent) -> None:
        for vec in vectors:
            if not vec.base.same_as(p):
                raise BaseMismatchError(
                    f"vector based at {vec.base.coords} used at {p.coords}"
                )

    def metric_eval(
        self, p: AmbientPoint, x: AmbientTangent, y: AmbientTangent
    ) -> float:
        """g_p(X, Y)."""
        self._check_base(p, x, y)
        return self.inner(p, x.components, y.components)

    def complex_structure(self, p: AmbientPoint, x: AmbientTangent) -> AmbientTangent:
        """J_p X."""
        self._check_base(p, x)
        return AmbientTangent(p, self.apply_j(p, x.components))

    def curvature(
        self,
        p: AmbientPoint,
        x: AmbientTangent,
        y: AmbientTangent,
        z: AmbientTangent,
        order: int = 0,
        direction_args: Sequence[AmbientTangent] = (),
    ) -> AmbientTangent:
        """R_M(X, Y)Z or its covariant derivative of the given order."""
        self._check_base(p, x, y, z, *direction_args)
        if order not in (0, 1, 2):
            raise CapabilityError(
                f"curvature derivatives of order {order} not available"
            )
        if len(direction_args) != order:
            raise InputError(
                f"order {order} needs {order} direction argument(s), "
                f"got {len(direction_args)}"
            )
        if order == 0:
            comps = self.curvature_components(
                p, x.components, y.components, z.components
            )
        else:
            comps = self.curvature_derivative_components(
                p,
                [d.components for d in direction_args],
                x.components,
                y.components,
                z.components,
            )
        return AmbientTangent(p, comps)

    def exp_geodesic(
        self, p: AmbientPoint, v: AmbientTangent, s: float = 1.0
    ) -> AmbientPoint:
        """exp_p(s v) in closed form."""
        self._check_base(p, v)
        q, _ = self.geodesic_state(p, v.components, s)
        return q

    def parallel_transport(
        self,
        curve: Sequence[AmbientPoint] | np.ndarray,
        x0: AmbientTangent,
        method: str = "geodesic",
        chart_id: int | None = None,
    ) -> AmbientTangent:
        """Transport x0 along a sampled curve.

        Args:
            curve: AmbientPoints, or an (N, 2n) array of coordinates in `chart_id`
                (defaults to the chart of x0).
            x0: Vector at the first sample.
            method: "geodesic" composes closed-form transports along the short
                geodesics joining consecutive samples; "ode" integrates
                dX/dα = -Γ(ċ, X) with one RK4 step per segment of the polyline.
        """
        chart = x0.base.chart_id if chart_id is None else chart_id
        points = self._as_points(curve, chart)
        if len(points) < 1:
            raise InputError("empty curve")
        self._check_base(points[0], x0)
        x = x0.components.copy()
        if method == "geodesic":
            for a, b in zip(points[:-1], points[1:]):
                v = self.log_map(a, b)
                x = self.transport_along_geodesic(a, v, 1.0, x)
        elif method == "ode":
            for a, b in zip(points[:-1], points[1:]):
                if a.chart_id != b.chart_id:
                    raise InputError("ode transport requires a single chart")
                velocity = b.coords - a.coords

                def rhs(
                    t: float, state: np.ndarray, a=a, velocity=velocity
                ) -> np.ndarray:
                    here = AmbientPoint(a.chart_id, a.coords + t * velocity)
                    return -self.christoffel_contract(here, velocity, state)

                _, states = rk4_integrate(rhs, x, 0.0, 1.0, 1)
                x = states[-1]
        else:
            raise InputError(f"unknown transport method {method!r}")
        return AmbientTangent(points[-1], x)

    def curvature_sups(
        self,
        sampler: Sequence[AmbientPoint],
        rng: np.random.Generator | None = None,
        frames_per_point: int = 16,
    ) -> tuple[float, float, float]:
        """(C0, C1, C2): analytic for built-in scenes, sampled otherwise."""
        if len(sampler) == 0:
            raise InputError("curvature_sups needs at least one sample point")
        exact = self.exact_curvature_sups()
        if exact is not None:
            return exact
        logger.warning("using sampled (non-certified) curvature sups for %s", self.kind)
        return sampled_curvature_sups(self, sampler, rng, frames_per_point)

    def _as_points(
        self, curve: Sequence[AmbientPoint] | np.ndarray, chart_id: int
    ) -> list[AmbientPoint]:
        if isinstance(curve, np.ndarray):
            return [self.point(chart_id, row) for row in np.atleast_2d(curve)]
        return list(curve)


def sampled_curvature_sups(
    ambient: AmbientManifold,
    sampler: Sequence[AmbientPoint],
    rng: np.random.Generator | None = None,
    frames_per_point: int = 16,
) -> tuple[float, float, float]:
    """Sampled sup of |R|, |∇R|, |∇²R| over unit arguments (a lower estimate)."""
    if len(sampler) == 0:
        raise InputError("curvature_sups needs at least one sample point")
    rng = rng if rng is not None else np.random.default_rng(0)
    dim = ambient.dimension_real
    sups = [0.0, 0.0, 0.0]
    for p in sampler:
        frame = ambient.orthonormal_frame(p)
        basis = np.eye(dim)
        triples = [
            (basis[i], basis[j], basis[k])
            for i in range(dim)
            for j in range(dim)
            for k in range(dim)
        ]
        for _ in range(frames_per_point):
            u = random_unit_vectors(rng, dim, 5)
            triples.append((u[0], u[1], u[2]))
        for x, y, z in triples:
            xs, ys, zs = frame @ x, frame @ y, frame @ z
            r0 = ambient.curvature_components(p, xs, ys, zs)
            sups[0] = max(sups[0], ambient.norm(p, r0))
            w1 = frame @ random_unit_vectors(rng, dim, 1)[0]
            w2 = frame @ random_unit_vectors(rng, dim, 1)[0]
            d1 = ambient.curvature_derivative_components(p, [w1], xs, ys, zs)
            d2 = ambient.curvature_derivative_components(p, [w1, w2], xs, ys, zs)
            sups[1] = max(sups[1], ambient.norm(p, d1))
            sups[2] = max(sups[2], ambient.norm(p, d2))
    return sups[0], sups[1], sups[2]
