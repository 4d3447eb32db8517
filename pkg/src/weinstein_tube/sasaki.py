"""Almost-Kähler structure (G, J̃, ω̃) on the normal bundle T⊥L.

A point of T⊥L is (x, ξ) with η = ξⁱ J(∂/∂xⁱ). Tangent vectors are handled in two
bases: chart coordinates (∂/∂xⁱ, ∂/∂ξⁱ) and the lift frame
([∂/∂x¹]ʰ, ..., [∂/∂xⁿ]ʰ, [J∂/∂x¹]ᵛ, ..., [J∂/∂xⁿ]ᵛ), in which a SasakiTangent stores
its horizontal part π★X and vertical part K(X). In the lift frame the Sasaki metric
is diag(ḡ, ḡ), J̃ is the constant matrix [[0, -I], [I, 0]] and ω̃ = [[0, ḡ], [-ḡ, 0]].
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from weinstein_tube.errors import BaseMismatchError, InputError
from weinstein_tube.lagrangian import LagrangianScene
from weinstein_tube.math_utils import (
    change_frame,
    exterior_derivative_2form,
    multilinear_sup,
    rk4_integrate,
    steps_for,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class NormalBundlePoint:
    """(x, ξ): base parameter and normal coefficients on J∂/∂xⁱ."""

    x: np.ndarray
    xi: np.ndarray

    @property
    def coords(self) -> np.ndarray:
        return np.concatenate([self.x, self.xi])

    @classmethod
    def from_coords(cls, coords: np.ndarray) -> "NormalBundlePoint":
        coords = np.asarray(coords, dtype=float)
        n = coords.size // 2
        return cls(coords[:n].copy(), coords[n:].copy())

    def same_as(self, other: "NormalBundlePoint", tol: float = 1e-12) -> bool:
        return bool(np.allclose(self.coords, other.coords, rtol=0.0, atol=tol))


@dataclass(frozen=True, eq=False)
class SasakiTangent:
    """Tangent vector split as horizontal π★X (on ∂/∂xⁱ) and vertical K(X).

    The vertical part is expressed on J∂/∂xⁱ.
    """

    base: NormalBundlePoint
    horizontal: np.ndarray
    vertical: np.ndarray

    @property
    def lift_components(self) -> np.ndarray:
        return np.concatenate([self.horizontal, self.vertical])


class NormalBundle:
    """Normal bundle of a Lagrangian scene with its Sasaki geometry."""

    def __init__(self, scene: LagrangianScene) -> None:
        self.scene = scene
        self.n = scene.n
        j = np.zeros((2 * self.n, 2 * self.n))
        j[: self.n, self.n :] = -np.eye(self.n)
        j[self.n :, : self.n] = np.eye(self.n)
        self.jtilde_matrix = j

    # -- points and vectors ---------------------------------------------------

    def point(
        self, x: np.ndarray | list[float], xi: np.ndarray | list[float]
    ) -> NormalBundlePoint:
        fiber = np.asarray(xi, dtype=float).reshape(self.n)
        return NormalBundlePoint(self.scene.param(x), fiber)

    def fiber_norm(self, v: NormalBundlePoint) -> float:
        """|η| = sqrt(ξᵀ ḡ ξ)."""
        return float(np.sqrt(max(v.xi @ self.scene.induced_metric(v.x) @ v.xi, 0.0)))

    def from_orthonormal(self, x: np.ndarray, zeta: np.ndarray) -> NormalBundlePoint:
        """Point with fiber coefficients ζ in a ḡ-orthonormal frame (|v| = |ζ|)."""
        x = self.scene.param(x)
        fiber = self.scene.orthonormal_change(x) @ np.asarray(zeta, float)
        return NormalBundlePoint(x, fiber)

    def sample_tube(
        self, rng: np.random.Generator, radius: float, count: int
    ) -> tuple[np.ndarray, np.ndarray]:
        """Base parameters and orthonormal fiber coordinates, uniform in fiber balls."""
        if not radius > 0:
            raise InputError(f"tube radius must be positive, got {radius}")
        xs = self.scene.sample_parameters(rng, count)
        dirs = rng.standard_normal((count, self.n))
        dirs /= np.maximum(np.linalg.norm(dirs, axis=1, keepdims=True), 1e-300)
        radii = radius * rng.uniform(size=(count, 1)) ** (1 / self.n)
        return xs, dirs * radii

    def unit_tangents(
        self, v: NormalBundlePoint, rng: np.random.Generator, count: int
    ) -> list[SasakiTangent]:
        """Random G-unit tangent vectors at v."""
        frame = self.orthonormal_lift_frame(v)
        dirs = rng.standard_normal((count, 2 * self.n))
        dirs /= np.maximum(np.linalg.norm(dirs, axis=1, keepdims=True), 1e-300)
        return [self.tangent(v, frame @ d) for d in dirs]

    def tangent(self, v: NormalBundlePoint, lift: np.ndarray) -> SasakiTangent:
        lift = np.asarray(lift, dtype=float)
        return SasakiTangent(v, lift[: self.n].copy(), lift[self.n :].copy())

    def normal_vector(self, v: NormalBundlePoint) -> np.ndarray:
        """η as ambient components at ι(x)."""
        return self.scene.normal_basis(v.x) @ v.xi

    # -- chart <-> lift frame -------------------------------------------------

    def coordinate_to_lift(self, v: NormalBundlePoint) -> np.ndarray:
        """Matrix sending chart components (a, b) to lift components (h, w)."""
        n = self.n
        gam_xi = np.einsum("kij,j->ki", self.scene.christoffel(v.x), v.xi)
        m = np.eye(2 * n)
        m[n:, :n] = gam_xi
        return m

    def lift_to_coordinate(self, v: NormalBundlePoint) -> np.ndarray:
        n = self.n
        m = np.eye(2 * n)
        m[n:, :n] = -np.einsum("kij,j->ki", self.scene.christoffel(v.x), v.xi)
        return m

    def split(
        self, v: NormalBundlePoint, coordinate_tangent: np.ndarray
    ) -> SasakiTangent:
        """Horizontal/vertical parts of a chart tangent vector (a, b).

        ∂/∂xⁱ = [∂/∂xⁱ]ʰ + ξʲ Γ̄ᵏⱼᵢ [J∂/∂xᵏ]ᵛ and ∂/∂ξⁱ = [J∂/∂xⁱ]ᵛ.
        """
        comps = np.asarray(coordinate_tangent, dtype=float).reshape(2 * self.n)
        return self.tangent(v, self.coordinate_to_lift(v) @ comps)

    def lift(
        self, v: NormalBundlePoint, horizontal: np.ndarray, vertical: np.ndarray
    ) -> np.ndarray:
        """Chart components of [U]ʰ + [Jw]ᵛ."""
        comps = np.concatenate(
            [np.asarray(horizontal, float), np.asarray(vertical, float)]
        )
        return self.lift_to_coordinate(v) @ comps

    def coordinates_of(self, X: SasakiTangent) -> np.ndarray:
        return self.lift(X.base, X.horizontal, X.vertical)

    # -- metric and almost complex structure ----------------------------------

    def lift_metric(self, v: NormalBundlePoint) -> np.ndarray:
        gbar = self.scene.induced_metric(v.x)
        return linalg.block_diag(gbar, gbar)

    def orthonormal_lift_frame(self, v: NormalBundlePoint) -> np.ndarray:
        """Columns (lift components) of a G-orthonormal frame, J̃-adapted."""
        b = self.scene.orthonormal_change(v.x)
        return linalg.block_diag(b, b)

    @staticmethod
    def _check_base(*vectors: SasakiTangent) -> None:
        first = vectors[0].base
        for vec in vectors[1:]:
            if not vec.base.same_as(first):
                raise BaseMismatchError("Sasaki tangents based at different points")

    def sasaki_metric(self, X: SasakiTangent, Y: SasakiTangent) -> float:
        """G(X, Y) = ḡ(π★X, π★Y) + ḡ(K X, K Y)."""
        self._check_base(X, Y)
        gbar = self.scene.induced_metric(X.base.x)
        horizontal = X.horizontal @ gbar @ Y.horizontal
        return float(horizontal + X.vertical @ gbar @ Y.vertical)

    def sasaki_norm(self, X: SasakiTangent) -> float:
        return float(np.sqrt(max(self.sasaki_metric(X, X), 0.0)))

    def jtilde(self, X: SasakiTangent) -> SasakiTangent:
        """J̃X = [J K(X)]ʰ + [J π★X]ᵛ."""
        return SasakiTangent(X.base, -X.vertical.copy(), X.horizontal.copy())

    def omega_tilde(self, X: SasakiTangent, Y: SasakiTangent) -> float:
        """ω̃(X, Y) = G(J̃X, Y)."""
        return self.sasaki_metric(self.jtilde(X), Y)

    def omega_tilde_lift_matrix(self, v: NormalBundlePoint) -> np.ndarray:
        gbar = self.scene.induced_metric(v.x)
        zero = np.zeros_like(gbar)
        return np.block([[zero, gbar], [-gbar, zero]])

    def omega_tilde_chart(self, v: NormalBundlePoint) -> np.ndarray:
        """Chart matrix of ω̃ = ḡᵢⱼ dxⁱ∧dξʲ + ξᵏ ∂ⱼḡᵢₖ dxⁱ∧dxʲ."""
        n = self.n
        x = v.x
        h = self.scene.fd_step
        gbar = self.scene.induced_metric(x)
        dg = np.zeros((n, n, n))  # dg[j, i, k] = ∂_j ḡ_ik
        if not self.scene.constant_induced_metric:
            for j in range(n):
                e = np.zeros(n)
                e[j] = h
                plus = self.scene.induced_metric(x + e)
                minus = self.scene.induced_metric(x - e)
                dg[j] = (plus - minus) / (2 * h)
        c = np.einsum("jik,k->ij", dg, v.xi)
        out = np.zeros((2 * n, 2 * n))
        out[:n, n:] = gbar
        out[n:, :n] = -gbar.T
        out[:n, :n] = c - c.T
        return out

    def omega_tilde_coordinates(
        self, v: NormalBundlePoint, X: np.ndarray, Y: np.ndarray
    ) -> float:
        """ω̃ on chart tangents via the chart formula."""
        chart = self.omega_tilde_chart(v)
        return float(np.asarray(X, float) @ chart @ np.asarray(Y, float))

    def closedness_defect(self, v: NormalBundlePoint, step: float = 1e-4) -> float:
        """max |dω̃| by a five-point stencil on the chart formula."""
        n = self.n
        d = exterior_derivative_2form(
            lambda y: self.omega_tilde_chart(NormalBundlePoint(y[:n], y[n:])),
            v.coords,
            step,
        )
        return float(np.max(np.abs(d))) if d.size else 0.0

    # -- Levi-Civita connection of G ------------------------------------------

    def christoffel(self, v: NormalBundlePoint) -> np.ndarray:
        """Γ[C, B, A] with ∇_{E_B} E_A = Γ[C, B, A] E_C in the lift frame."""
        n = self.n
        gam = self.scene.christoffel(v.x)
        rop = self.scene.curvature_operator(v.x)  # R_L(∂a, ∂b)∂c = rop[m, a, b, c] ∂m
        xi = v.xi
        out = np.zeros((2 * n, 2 * n, 2 * n))
        h, w = slice(0, n), slice(n, 2 * n)
        # ∇_{[∂i]ʰ}[∂j]ʰ = [Γ̄ᵏᵢⱼ ∂k]ʰ - ½[J R_L(∂i, ∂j)ξ]ᵛ
        out[h, h, h] = gam
        out[w, h, h] = -0.5 * np.einsum("kijm,m->kij", rop, xi)
        # ∇_{[∂i]ʰ}[J∂j]ᵛ = [Γ̄ᵏᵢⱼ J∂k]ᵛ + ½[R_L(ξ, ∂j)∂i]ʰ
        curv = 0.5 * np.einsum("kaji,a->kij", rop, xi)
        out[w, h, w] = gam
        out[h, h, w] = curv
        # ∇_{[J∂j]ᵛ}[∂i]ʰ = ½[R_L(ξ, ∂j)∂i]ʰ ; vertical-vertical vanishes
        out[h, w, h] = np.einsum("kij->kji", curv)
        return out

    def nabla_G(self, X: SasakiTangent, Y: SasakiTangent) -> SasakiTangent:
        """∇ᴳ_X Y, Y extended as the lift of constant-coefficient coordinate fields."""
        self._check_base(X, Y)
        gam = self.christoffel(X.base)
        return self.tangent(
            X.base, np.einsum("cba,b,a->c", gam, X.lift_components, Y.lift_components)
        )

    def _directional(
        self,
        fn: Callable[[NormalBundlePoint], np.ndarray],
        v: NormalBundlePoint,
        lift: np.ndarray,
        step: float,
    ) -> np.ndarray:
        d = self.lift_to_coordinate(v) @ lift
        plus = fn(NormalBundlePoint.from_coords(v.coords + step * d))
        minus = fn(NormalBundlePoint.from_coords(v.coords - step * d))
        return (np.asarray(plus) - np.asarray(minus)) / (2 * step)

    def covariant_derivative_field(
        self,
        field: Callable[[NormalBundlePoint], np.ndarray],
        v: NormalBundlePoint,
        step: float = 1e-5,
    ) -> np.ndarray:
        """(∇Y)[C, B] = ∇_{E_B} Y for a field given by lift components."""
        dim = 2 * self.n
        value = np.asarray(field(v))
        gam = self.christoffel(v)
        out = np.empty((dim, dim))
        for b in range(dim):
            deriv = self._directional(field, v, np.eye(dim)[b], step)
            out[:, b] = deriv + gam[:, b, :] @ value
        return out

    def covariant_derivative_form(
        self,
        form: Callable[[NormalBundlePoint], np.ndarray],
        v: NormalBundlePoint,
        step: float = 1e-5,
    ) -> np.ndarray:
        """(∇α)[B, A1, ..., Ak] for a covariant k-tensor in the lift frame, k = 1, 2."""
        dim = 2 * self.n
        value = np.asarray(form(v))
        gam = self.christoffel(v)
        out = np.empty((dim,) + value.shape)
        for b in range(dim):
            deriv = self._directional(form, v, np.eye(dim)[b], step)
            g_b = gam[:, b, :]  # [D, A]
            if value.ndim == 1:
                deriv = deriv - g_b.T @ value
            else:
                deriv = deriv - g_b.T @ value - value @ g_b
            out[b] = deriv
        return out

    def nabla_jtilde(self, v: NormalBundlePoint) -> np.ndarray:
        """(∇J̃)[C, B, A] = (∇_{E_B}J̃)(E_A)^C; J̃ is constant in the lift frame."""
        gam = self.christoffel(v)
        j = self.jtilde_matrix
        return np.einsum("cbd,da->cba", gam, j) - np.einsum("cd,dba->cba", j, gam)

    def nabla_omega_tilde(self, v: NormalBundlePoint, step: float = 1e-5) -> np.ndarray:
        return self.covariant_derivative_form(self.omega_tilde_lift_matrix, v, step)

    def tensor_norm(self, v: NormalBundlePoint, tensor: np.ndarray, upper: bool,
                    rng: np.random.Generator | None = None) -> float:
        """G-norm (sup over unit arguments) of a lift-frame tensor."""
        on = change_frame(tensor, self.orthonormal_lift_frame(v), upper=upper)
        if not upper:
            on = on[None, ...]
        return multilinear_sup(on, rng)

    # -- parallel transport ---------------------------------------------------

    def parallel_transport_G(
        self,
        curve: Callable[[float], np.ndarray] | np.ndarray,
        X0: SasakiTangent,
        ode_step: float = 1e-3,
        keep_path: bool = True,
    ) -> list[SasakiTangent]:
        """Transport X0 along a curve of chart points (x, ξ), α ∈ [0, 1].

        `curve` is a callable α ↦ (x, ξ) or an (N, 2n) array sampled uniformly in α
        (interpolated linearly). Integrates dY/dα = -Γ(ċ, Y) by RK4 in the lift frame.
        """
        if isinstance(curve, np.ndarray):
            samples = np.atleast_2d(curve)
            if len(samples) < 2:
                raise InputError("curve needs at least two samples")
            grid = np.linspace(0.0, 1.0, len(samples))

            def path(alpha: float) -> np.ndarray:
                return np.array([np.interp(alpha, grid, samples[:, k])
                                 for k in range(samples.shape[1])])
        else:
            path = curve
        start = NormalBundlePoint.from_coords(path(0.0))
        if not start.same_as(X0.base, tol=1e-9):
            raise BaseMismatchError("X0 is not based at the start of the curve")
        h = 1e-6

        def rhs(alpha: float, y: np.ndarray) -> np.ndarray:
            here = NormalBundlePoint.from_coords(path(alpha))
            lo, hi = max(alpha - h, 0.0), min(alpha + h, 1.0)
            velocity = (np.asarray(path(hi)) - np.asarray(path(lo))) / (hi - lo)
            vel_lift = self.coordinate_to_lift(here) @ velocity
            return -np.einsum("cba,b,a->c", self.christoffel(here), vel_lift, y)

        n_steps = steps_for(1.0, ode_step)
        times, states = rk4_integrate(
            rhs, X0.lift_components, 0.0, 1.0, n_steps, keep_path
        )
        return [
            self.tangent(NormalBundlePoint.from_coords(path(float(t))), y)
            for t, y in zip(times, states)
        ]
