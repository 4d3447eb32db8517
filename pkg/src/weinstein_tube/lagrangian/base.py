"""Lagrangian immersions ι: L → M given by closed-form jets in one ambient chart.

Tangent vectors of L are coefficient vectors on the coordinate basis ∂/∂xⁱ. Normal
vectors are coefficient vectors on J(∂/∂xⁱ), which spans T⊥L because L is Lagrangian;
in that basis the normal metric is ḡ and the normal connection is the Levi-Civita
connection of ḡ.
"""

import logging
import math
from abc import ABC, abstractmethod
from collections.abc import Callable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from weinstein_tube.ambient import AmbientManifold, AmbientPoint
from weinstein_tube.errors import CapabilityError, InputError, RankError
from weinstein_tube.math_utils import (
    change_frame,
    metric_gram_schmidt,
    multilinear_sup,
    orthonormal_basis,
    rk4_integrate,
    steps_for,
)
from weinstein_tube.models import ExtrinsicBudget

logger = logging.getLogger(__name__)

Jet = tuple[int, np.ndarray, np.ndarray, np.ndarray]


class LagrangianScene(ABC):
    """A Lagrangian immersion with generic differential geometry on top of its jet."""

    kind: str = "abstract"
    embedded: bool = True
    compact: bool = True
    # ḡ is constant in the parameter chart, so Γ̄ = 0 and geodesics are straight lines
    constant_induced_metric: bool = False
    # ∇II = 0 (closed form); otherwise derivatives come from finite differences
    parallel_second_fundamental_form: bool = False

    def __init__(self, ambient: AmbientManifold, fd_step: float = 1e-5) -> None:
        self.ambient = ambient
        self.n = ambient.n
        self.fd_step = fd_step

    @property
    @abstractmethod
    def period(self) -> np.ndarray:
        """Length of the parameter box along each coordinate (sampling domain)."""
        pass

    @abstractmethod
    def jet(self, x: np.ndarray) -> Jet:
        """Chart id, coordinates, first derivatives (2n, n) and second (2n, n, n)."""
        pass

    @property
    def ii_step(self) -> float:
        """FD step for ∇II and ∇²II: 1e-4 of the domain scale."""
        return 1e-4 * float(np.max(self.period))

    def exact_extrinsic_budget(self) -> ExtrinsicBudget | None:
        return None

    def exact_intrinsic_distance(self, x1: np.ndarray, x2: np.ndarray) -> float | None:
        return None

    def extremal_pairs(self) -> list[tuple[np.ndarray, np.ndarray]]:
        """Pairs known to (nearly) maximize d_L / d_M, added to every sampler."""
        return []

    def default_base_point(self) -> np.ndarray:
        return np.zeros(self.n)

    # -- parameters and sampling ----------------------------------------------

    def param(self, x: Sequence[float] | np.ndarray | float) -> np.ndarray:
        arr = np.asarray(x, dtype=float).reshape(-1)
        if arr.shape != (self.n,) or not np.all(np.isfinite(arr)):
            raise InputError(
                f"parameter {x!r} outside the domain of a {self.n}-dimensional L"
            )
        return arr

    def sample_parameters(self, rng: np.random.Generator, count: int) -> np.ndarray:
        return rng.uniform(0.0, 1.0, size=(count, self.n)) * self.period

    def sample_pairs(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """(count, 2, n) parameter pairs, stratified over the separation."""
        first = self.sample_parameters(rng, count)
        jitter = rng.uniform(size=(count, self.n))
        offsets = (np.arange(count)[:, None] + jitter) / count
        rng.shuffle(offsets, axis=0)
        second = first + offsets * self.period
        return np.stack([first, second], axis=1)

    # -- immersion and frames -------------------------------------------------

    def immerse(self, x: Sequence[float] | np.ndarray | float) -> AmbientPoint:
        """ι(x)."""
        chart_id, coords, _, _ = self.jet(self.param(x))
        return self.ambient.point(chart_id, coords)

    def coordinate_tangents(self, x: np.ndarray) -> np.ndarray:
        """Columns dι(∂/∂xⁱ) in ambient components."""
        return self.jet(self.param(x))[2]

    def normal_basis(self, x: np.ndarray) -> np.ndarray:
        """Columns J dι(∂/∂xⁱ)."""
        p = self.immerse(x)
        return self.ambient.complex_matrix(p) @ self.coordinate_tangents(x)

    def induced_metric(self, x: np.ndarray) -> np.ndarray:
        """ḡ_ij = g(dι ∂i, dι ∂j)."""
        p = self.immerse(x)
        d = self.coordinate_tangents(x)
        return d.T @ self.ambient.metric_matrix(p) @ d

    def frames(self, x: Sequence[float] | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Orthonormal tangent frame e_i and normal frame J e_i, as ambient columns."""
        x = self.param(x)
        p = self.immerse(x)
        try:
            tangent = metric_gram_schmidt(
                self.coordinate_tangents(x), self.ambient.metric_matrix(p)
            )
        except ValueError as e:
            raise RankError(f"degenerate parametrization at x={x}: {e}") from e
        return tangent, self.ambient.complex_matrix(p) @ tangent

    def orthonormal_change(self, x: np.ndarray) -> np.ndarray:
        """B with Bᵀ ḡ B = I, so dι B is an orthonormal frame."""
        return orthonormal_basis(self.induced_metric(x))

    def lagrangian_defect(self, x: np.ndarray) -> float:
        """max |ι*ω(∂i, ∂j)|."""
        p = self.immerse(x)
        d = self.coordinate_tangents(x)
        jd = self.ambient.complex_matrix(p) @ d
        pulled = jd.T @ self.ambient.metric_matrix(p) @ d
        return float(np.max(np.abs(pulled)))

    # -- Levi-Civita connection of ḡ ------------------------------------------

    def christoffel(self, x: np.ndarray) -> np.ndarray:
        """Γ̄[k, i, j] of (L, ḡ)."""
        x = self.param(x)
        if self.constant_induced_metric:
            return np.zeros((self.n, self.n, self.n))
        h = self.fd_step
        dg = np.empty((self.n, self.n, self.n))  # dg[l, i, j] = ∂_l ḡ_ij
        for axis in range(self.n):
            e = np.zeros(self.n)
            e[axis] = h
            plus = self.induced_metric(x + e)
            minus = self.induced_metric(x - e)
            dg[axis] = (plus - minus) / (2 * h)
        first_kind = 0.5 * (
            np.einsum("ijl->lij", dg) + np.einsum("jil->lij", dg) - dg
        )  # Γ_{l,ij} = ½(∂_i ḡ_jl + ∂_j ḡ_il - ∂_l ḡ_ij)
        inverse = np.linalg.inv(self.induced_metric(x))
        return np.einsum("kl,lij->kij", inverse, first_kind)

    def covariant_derivative_tensor(
        self,
        field: Callable[[np.ndarray], np.ndarray],
        x: np.ndarray,
        step: float | None = None,
    ) -> np.ndarray:
        """∇T for a (1, q) tensor field T[k, i1..iq].

        The result is R[k, m, i1..iq] = (∇_m T)^k_{i..}.
        """
        x = self.param(x)
        h = self.fd_step if step is None else step
        value = np.asarray(field(x))
        q = value.ndim - 1
        partial = np.empty((self.n,) + value.shape)
        for axis in range(self.n):
            e = np.zeros(self.n)
            e[axis] = h
            plus = np.asarray(field(x + e))
            partial[axis] = (plus - np.asarray(field(x - e))) / (2 * h)
        out = np.moveaxis(partial, 0, 1).copy()
        gam = self.christoffel(x)
        out += np.tensordot(gam, value, axes=([2], [0]))
        for slot in range(q):
            # -Γ^l_{m i_slot} T^k_{.. l ..}
            # [k, rest.., m, i]
            moved = np.tensordot(value, gam, axes=([slot + 1], [0]))
            moved = np.moveaxis(moved, -2, 1)  # [k, m, rest.., i]
            moved = np.moveaxis(moved, -1, slot + 2)
            out -= moved
        return out

    # -- second fundamental form ----------------------------------------------

    def ii_coefficients(self, x: np.ndarray) -> np.ndarray:
        """h[k, i, j] with II(∂i, ∂j) = h^k_ij J∂k."""
        x = self.param(x)
        chart_id, coords, d1, d2 = self.jet(x)
        p = AmbientPoint(chart_id, coords)
        gam = self.ambient.christoffel(p)
        accel = d2 + np.einsum("kab,ai,bj->kij", gam, d1, d1)
        normals = self.ambient.complex_matrix(p) @ d1
        g = self.ambient.metric_matrix(p)
        projected = np.einsum("kij,kl,lm->mij", accel, g, normals)
        return np.einsum("km,mij->kij", np.linalg.inv(d1.T @ g @ d1), projected)

    def ii_derivative(self, x: np.ndarray) -> np.ndarray:
        """(∇h)[k, m, i, j] = (∇_m II)(∂i, ∂j) coefficients."""
        if self.parallel_second_fundamental_form:
            return np.zeros((self.n,) * 4)
        return self.covariant_derivative_tensor(self.ii_coefficients, x, self.ii_step)

    def ii_second_derivative(self, x: np.ndarray) -> np.ndarray:
        """(∇²h)[k, m2, m1, i, j] = (∇_{m2}∇_{m1} II)(∂i, ∂j) coefficients."""
        if self.parallel_second_fundamental_form:
            return np.zeros((self.n,) * 5)
        return self.covariant_derivative_tensor(self.ii_derivative, x, self.ii_step)

    def second_fundamental_form(
        self,
        x: Sequence[float] | np.ndarray,
        X: np.ndarray,
        Y: np.ndarray,
        order: int = 0,
        directions: Sequence[np.ndarray] = (),
    ) -> np.ndarray:
        """II(X, Y) or (∇ᵏII)(directions; X, Y) as ambient normal components."""
        x = self.param(x)
        if order not in (0, 1, 2):
            raise CapabilityError(
                f"second fundamental form derivative of order {order}"
            )
        if len(directions) != order:
            raise InputError(
                f"order {order} needs {order} direction(s), got {len(directions)}"
            )
        tensors = (self.ii_coefficients, self.ii_derivative, self.ii_second_derivative)
        coeffs = tensors[order](x)
        # directions[0] is the outermost derivative
        for w in directions:
            coeffs = np.tensordot(coeffs, np.asarray(w, dtype=float), axes=([1], [0]))
        coeffs = np.einsum(
            "kij,i,j->k", coeffs, np.asarray(X, float), np.asarray(Y, float)
        )
        return self.normal_basis(x) @ coeffs

    def to_orthonormal(self, tensor: np.ndarray, x: np.ndarray) -> np.ndarray:
        """Express a (1, q) tensor of L in the orthonormal frame dι B."""
        return change_frame(tensor, self.orthonormal_change(x))

    def ii_norms(
        self, x: np.ndarray, rng: np.random.Generator | None = None
    ) -> tuple[float, ...]:
        """(|II|, |∇II|, |∇²II|) at x as sups over unit arguments."""
        tensors = (
            self.ii_coefficients(x),
            self.ii_derivative(x),
            self.ii_second_derivative(x),
        )
        return tuple(multilinear_sup(self.to_orthonormal(t, x), rng) for t in tensors)

    def extrinsic_sups(
        self,
        sampler: Sequence[np.ndarray] | np.ndarray,
        rng: np.random.Generator | None = None,
    ) -> ExtrinsicBudget:
        """(A0, A1, A2): analytic for closed-form scenes, sampled otherwise."""
        if len(sampler) == 0:
            raise InputError("extrinsic_sups needs at least one sample point")
        exact = self.exact_extrinsic_budget()
        if exact is not None:
            return exact
        logger.warning("using sampled (non-certified) II sups for %s", self.kind)
        sups = np.zeros(3)
        for x in sampler:
            sups = np.maximum(sups, self.ii_norms(np.asarray(x), rng))
        return ExtrinsicBudget(A0=sups[0], A1=sups[1], A2=sups[2], provenance="sampled")

    def shape_operator(self, x: np.ndarray, xi: np.ndarray) -> np.ndarray:
        """Matrix of S_η on tangent coefficients, η = ξᵏ J∂k.

        S_η satisfies g(S_η U, V) = -g(II(U, V), η).
        """
        gbar = self.induced_metric(x)
        h = self.ii_coefficients(x)
        c = np.einsum("kij,kl,l->ij", h, gbar, np.asarray(xi, float))
        return -np.linalg.solve(gbar, c)

    # -- intrinsic curvature --------------------------------------------------

    def curvature_tensor(self, x: np.ndarray) -> np.ndarray:
        """Rl[w, a, b, c] = ⟨R_L(∂a, ∂b)∂c, ∂w⟩ from the Gauss equation."""
        x = self.param(x)
        n = self.n
        p = self.immerse(x)
        d = self.coordinate_tangents(x)
        g = self.ambient.metric_matrix(p)
        ambient_part = np.zeros((n, n, n, n))
        if self.ambient.constant_curvature != 0.0:
            for a in range(n):
                for b in range(n):
                    for c in range(n):
                        r = self.ambient.curvature_components(
                            p, d[:, a], d[:, b], d[:, c]
                        )
                        ambient_part[:, a, b, c] = d.T @ g @ r
        h = self.ii_coefficients(x)
        gbar = self.induced_metric(x)
        pair = np.einsum("kab,kl,lcd->abcd", h, gbar, h)  # ⟨II(a,b), II(c,d)⟩
        # ⟨II(X,W),II(Y,Z)⟩ - ⟨II(X,Z),II(Y,W)⟩ with X=a, Y=b, Z=c, W=w
        extrinsic = np.einsum("awbc->wabc", pair) - np.einsum("acbw->wabc", pair)
        return ambient_part + extrinsic

    def curvature_operator(self, x: np.ndarray) -> np.ndarray:
        """R[m, a, b, c] with R_L(∂a, ∂b)∂c = R^m_abc ∂m."""
        return np.einsum("mw,wabc->mabc", np.linalg.inv(self.induced_metric(x)),
                         self.curvature_tensor(x))

    def induced_curvature(
        self, x: np.ndarray, X: np.ndarray, Y: np.ndarray, Z: np.ndarray
    ) -> np.ndarray:
        """R_L(X, Y)Z as tangent coefficients."""
        return np.einsum("mabc,a,b,c->m", self.curvature_operator(x), X, Y, Z)

    # -- normal connection ----------------------------------------------------

    def normal_connection(
        self,
        x_samples: np.ndarray,
        xi_samples: np.ndarray,
        spacing: float,
        index: int | None = None,
        form: str = "intrinsic",
    ) -> np.ndarray:
        """∇⊥_X ξ at one sample of a curve, as ambient components.

        Args:
            x_samples: (N, n) curve parameters; X is the curve velocity.
            xi_samples: (N, n) normal coefficients along the curve.
            spacing: Curve-parameter spacing of the samples.
            index: Sample to evaluate at (default: middle).
            form: "intrinsic" uses the Levi-Civita connection of ḡ on coefficients,
                "tangent" evaluates -J(∇̄_X(Jξ)), "projection" takes the normal part
                of the ambient derivative.
        """
        x_samples = np.atleast_2d(np.asarray(x_samples, dtype=float))
        xi_samples = np.atleast_2d(np.asarray(xi_samples, dtype=float))
        if len(x_samples) < 3 or len(xi_samples) != len(x_samples):
            raise InputError(
                "normal_connection needs at least 3 matching curve samples"
            )
        k = len(x_samples) // 2 if index is None else index
        x = x_samples[k]
        xdot = np.gradient(x_samples, spacing, axis=0)[k]
        if form == "intrinsic":
            xidot = np.gradient(xi_samples, spacing, axis=0)[k]
            gam = self.christoffel(x)
            coeffs = xidot + np.einsum("kij,i,j->k", gam, xdot, xi_samples[k])
            return self.normal_basis(x) @ coeffs
        points = [self.immerse(xs) for xs in x_samples]
        if len({q.chart_id for q in points}) != 1:
            raise InputError("curve samples must lie in one chart")
        if form == "tangent":
            field = np.stack([
                self.ambient.apply_j(q, self.normal_basis(xs) @ c)
                for q, xs, c in zip(points, x_samples, xi_samples)
            ])
        elif form == "projection":
            field = np.stack(
                [self.normal_basis(xs) @ c for xs, c in zip(x_samples, xi_samples)]
            )
        else:
            raise InputError(f"unknown normal connection form {form!r}")
        p = points[k]
        velocity = self.coordinate_tangents(x) @ xdot
        deriv = np.gradient(field, spacing, axis=0)[k]
        deriv = deriv + self.ambient.christoffel_contract(p, velocity, field[k])
        d = self.coordinate_tangents(x)
        g = self.ambient.metric_matrix(p)
        if form == "tangent":
            tangent_part = d @ np.linalg.solve(d.T @ g @ d, d.T @ g @ deriv)
            return -self.ambient.apply_j(p, tangent_part)
        nb = self.normal_basis(x)
        return nb @ np.linalg.solve(nb.T @ g @ nb, nb.T @ g @ deriv)

    # -- intrinsic distance and embedding constant ----------------------------

    def intrinsic_distance(self, x1: Sequence[float] | np.ndarray,
                           x2: Sequence[float] | np.ndarray) -> float:
        """d_L(x1, x2)."""
        return self.intrinsic_distance_estimate(x1, x2)[0]

    def intrinsic_distance_estimate(
        self, x1: Sequence[float] | np.ndarray, x2: Sequence[float] | np.ndarray,
        nodes: int = 2048,
    ) -> tuple[float, float]:
        """(d_L, error estimate); exact scenes report 0 error."""
        a, b = self.param(x1), self.param(x2)
        exact = self.exact_intrinsic_distance(a, b)
        if exact is not None:
            return exact, 0.0
        if self.n != 1:
            raise CapabilityError("polyline distances are implemented for curves only")
        fine = self._polyline_distance(a[0], b[0], nodes)
        coarse = self._polyline_distance(a[0], b[0], nodes // 2)
        return fine, abs(coarse - fine)

    def _polyline_distance(self, a: float, b: float, nodes: int) -> float:
        if a == b:
            return 0.0
        if self.compact:
            span = self.period[0]
            a, b = a % span, b % span
            grid = np.linspace(0.0, span, nodes, endpoint=False)
            grid = np.union1d(grid, [a, b])
            closed = np.append(grid, grid[0] + span)
        else:
            grid = np.linspace(min(a, b), max(a, b), nodes)
            closed = grid
        lengths = np.array([
            math.sqrt(self.induced_metric(np.array([0.5 * (s + t)]))[0, 0]) * (t - s)
            for s, t in zip(closed[:-1], closed[1:])
        ])
        m = len(grid)
        rows = np.arange(len(lengths))
        cols = (rows + 1) % m
        graph = csr_matrix((lengths, (rows, cols)), shape=(m, m))
        start = int(np.argmin(np.abs(grid - a)))
        end = int(np.argmin(np.abs(grid - b)))
        dist = dijkstra(graph, directed=False, indices=start)
        if not np.isfinite(dist[end]):
            raise InputError("sampling graph is disconnected")
        return float(dist[end])

    def embedding_constant(
        self, pairs: np.ndarray | Sequence[tuple[np.ndarray, np.ndarray]]
    ) -> float:
        """Sampled sup of d_L / d_M over pairs, at least 1.

        This is a lower estimate of emb(L).
        """
        if not (self.embedded and self.compact):
            raise CapabilityError(
                f"emb(L) is defined for compact embedded L; {self.kind} is not"
            )
        best = 1.0
        candidates = list(pairs) + self.extremal_pairs()
        for x1, x2 in candidates:
            d_m = self.ambient.distance(self.immerse(x1), self.immerse(x2))
            if d_m < 1e-9:
                continue
            best = max(best, self.intrinsic_distance(x1, x2) / d_m)
        return best

    # -- intrinsic exponential map --------------------------------------------

    def exp_map(
        self, x: Sequence[float] | np.ndarray, X: np.ndarray, ode_step: float = 1e-3
    ) -> tuple[np.ndarray, np.ndarray]:
        """E_p(X) and the geodesic velocity there, for (L, ḡ)."""
        x = self.param(x)
        X = np.asarray(X, dtype=float)
        if self.constant_induced_metric:
            return x + X, X.copy()
        speed = math.sqrt(max(X @ self.induced_metric(x) @ X, 0.0))

        def rhs(_t: float, state: np.ndarray) -> np.ndarray:
            pos, vel = state[: self.n], state[self.n :]
            acc = -np.einsum("kij,i,j->k", self.christoffel(pos), vel, vel)
            return np.concatenate([vel, acc])

        _, states = rk4_integrate(rhs, np.concatenate([x, X]), 0.0, 1.0,
                                  max(steps_for(speed, ode_step), 16))
        return states[-1][: self.n], states[-1][self.n :]

    def exp_derivative(
        self, x: np.ndarray, X: np.ndarray, Y: np.ndarray, step: float | None = None,
        ode_step: float = 1e-3,
    ) -> np.ndarray:
        """Ỹ(X) = (DE_p)_X(Y), tangent coefficients at E_p(X)."""
        if self.constant_induced_metric:
            return np.asarray(Y, dtype=float).copy()
        h = self.fd_step * 10 if step is None else step
        plus, _ = self.exp_map(x, np.asarray(X) + h * np.asarray(Y), ode_step)
        minus, _ = self.exp_map(x, np.asarray(X) - h * np.asarray(Y), ode_step)
        return (plus - minus) / (2 * h)

    def tangent_norm(self, x: np.ndarray, X: np.ndarray) -> float:
        return math.sqrt(max(float(X @ self.induced_metric(x) @ X), 0.0))
