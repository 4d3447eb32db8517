"""Moser's construction on the normal bundle.

The path ωₜ = (1-t)ω̃ + tF*ω, its primitive μ obtained by integrating along the
scalings ρₜ(v) = tv, the vector field ωₜ(𝒳ₜ, ·) = -μ, its flow, and Θ = F∘Φ₁.
Lift-frame components (E_A = ([∂ᵢ]ʰ, [J∂ᵢ]ᵛ)) are used throughout.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import linalg
from scipy.integrate import cumulative_simpson

from weinstein_tube.ambient import AmbientPoint, FlatComplexSpace
from weinstein_tube.bounds import LogReal, hypotheses_hold, lindelof_alpha
from weinstein_tube.errors import (
    BaseMismatchError,
    CapabilityError,
    DegeneracyError,
    DivergenceError,
    FlowExitError,
    HypothesisError,
    InputError,
    TubeError,
)
from weinstein_tube.jacobi import eval_F, pushforward_matrix
from weinstein_tube.math_utils import (
    exterior_derivative_1form,
    gauss_legendre,
    jacobian_fd,
    steps_for,
)
from weinstein_tube.models import GeometryBudget
from weinstein_tube.sasaki import NormalBundle, NormalBundlePoint, SasakiTangent

logger = logging.getLogger(__name__)

Q_HYPOTHESIS = "D0(r) <= Cbar0"
Q_DOMAIN = "|X| < r, |Y| < r/2"
QUADRATURE_NODES = 8


@dataclass(frozen=True, eq=False)
class TubeRegion:
    """The disk bundle U_r(T⊥L) = {v : |v| < r}."""

    bundle: NormalBundle
    radius: float

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise InputError(f"tube radius must be positive, got {self.radius}")

    def contains(self, v: NormalBundlePoint) -> bool:
        return self.bundle.fiber_norm(v) < self.radius

    def scaled(self, factor: float) -> "TubeRegion":
        return TubeRegion(self.bundle, self.radius * factor)


@dataclass
class FlowResult:
    endpoint: NormalBundlePoint
    times: np.ndarray
    trajectory: np.ndarray  # (steps + 1, 2n) chart points (x, ξ)
    stayed_inside: bool
    method: str
    steps: int
    exit_time: float | None = None


@dataclass
class LipschitzEstimate:
    """Measured sup|(𝒳₁, 𝒳₂)|/|Y| and Lipschitz constant in Qₚ coordinates."""

    C: float
    L: float
    alpha: LogReal
    samples: int
    notes: list[str] = field(default_factory=list)
    hypothesized: bool = True


class MoserConstruction:
    """Everything that depends on F*ω for one scene."""

    def __init__(
        self,
        bundle: NormalBundle,
        jacobi_step: float = 1e-3,
        fd_step: float = 1e-5,
        quadrature_tol: float = 1e-12,
        condition_limit: float = 1e8,
        flow_step: float = 2.5e-2,
        picard_nodes: int = 33,
        picard_tol: float = 1e-10,
        picard_max_iter: int = 60,
    ) -> None:
        self.bundle = bundle
        self.scene = bundle.scene
        self.n = bundle.n
        self.jacobi_step = jacobi_step
        self.fd_step = fd_step
        self.quadrature_tol = quadrature_tol
        self.condition_limit = condition_limit
        self.flow_step = flow_step
        self.picard_nodes = picard_nodes
        self.picard_tol = picard_tol
        self.picard_max_iter = picard_max_iter
        self._pullback_cached = lru_cache(maxsize=4096)(self._pullback_uncached)
        self._mu_cached = lru_cache(maxsize=4096)(self._mu_uncached)

    # -- the path of forms ----------------------------------------------------

    def _pullback_uncached(self, key: tuple[float, ...]) -> np.ndarray:
        v = NormalBundlePoint.from_coords(np.array(key))
        q, mat = pushforward_matrix(self.bundle, v, self.jacobi_step)
        ambient = self.scene.ambient
        return (ambient.complex_matrix(q) @ mat).T @ ambient.metric_matrix(q) @ mat

    def pullback_matrix(self, v: NormalBundlePoint) -> np.ndarray:
        """(F*ω)(E_A, E_B) = ω(F★E_A, F★E_B)."""
        return self._pullback_cached(tuple(float(c) for c in v.coords))

    def pullback_omega(self, X: SasakiTangent, Y: SasakiTangent) -> float:
        if not X.base.same_as(Y.base):
            raise BaseMismatchError("pullback_omega needs vectors at one point")
        pulled = self.pullback_matrix(X.base)
        return float(X.lift_components @ pulled @ Y.lift_components)

    def omega_t_matrix(self, t: float, v: NormalBundlePoint) -> np.ndarray:
        if not 0.0 <= t <= 1.0:
            raise InputError(f"t must lie in [0, 1], got {t}")
        tilde = self.bundle.omega_tilde_lift_matrix(v)
        return (1 - t) * tilde + t * self.pullback_matrix(v)

    def omega_t(self, t: float, X: SasakiTangent, Y: SasakiTangent) -> float:
        omega = self.omega_t_matrix(t, X.base)
        return float(X.lift_components @ omega @ Y.lift_components)

    def difference_matrix(self, v: NormalBundlePoint) -> np.ndarray:
        """F*ω - ω̃ in the lift frame."""
        return self.pullback_matrix(v) - self.bundle.omega_tilde_lift_matrix(v)

    # -- the scaling map ρₜ ---------------------------------------------------

    @staticmethod
    def scaled_point(t: float, v: NormalBundlePoint) -> NormalBundlePoint:
        return NormalBundlePoint(v.x.copy(), t * v.xi)

    def rho_pushforward(self, t: float, X: SasakiTangent) -> SasakiTangent:
        """ρₜ★X: π★ is kept and K is scaled by t."""
        return SasakiTangent(
            self.scaled_point(t, X.base), X.horizontal.copy(), t * X.vertical
        )

    def rho_dot(self, t: float, v: NormalBundlePoint) -> SasakiTangent:
        """ρ̇ₜ(v) = [v/t]ᵛ for t ∈ (0, 1]."""
        if not 0.0 < t <= 1.0:
            raise InputError(f"rho_dot needs t in (0, 1], got {t}")
        return SasakiTangent(v, np.zeros(self.n), v.xi / t)

    def rho_pushforward_derivative(self, t: float, X: SasakiTangent,
                                   Y: SasakiTangent) -> SasakiTangent:
        """(∇ᴳρₜ★)(Y, X) for lift-constant extensions."""
        v = X.base
        scale = np.concatenate([np.ones(self.n), t * np.ones(self.n)])
        tv = self.scaled_point(t, v)
        gam_t = self.bundle.christoffel(tv)
        gam = self.bundle.christoffel(v)
        value = np.einsum("cba,b,a->c", gam_t, scale * Y.lift_components,
                          scale * X.lift_components)
        value = value - scale * np.einsum(
            "cba,b,a->c", gam, Y.lift_components, X.lift_components
        )
        return self.bundle.tangent(tv, value)

    def rho_dot_derivative(self, t: float, Y: SasakiTangent) -> SasakiTangent:
        """(∇ᴳ_{ρₜ★Y} ρ̇ₜ)(tv), computed from ρ̇ₜ(w) = [ξ(w)/t]ᵛ."""
        if not 0.0 < t <= 1.0:
            raise InputError(f"rho_dot needs t in (0, 1], got {t}")
        v = Y.base
        tv = self.scaled_point(t, v)
        Z = self.rho_pushforward(t, Y)
        chart = self.bundle.lift_to_coordinate(tv) @ Z.lift_components
        n = self.n
        deriv = np.concatenate([np.zeros(n), chart[n:] / t])
        value = np.concatenate([np.zeros(n), v.xi])
        deriv = deriv + np.einsum("cba,b,a->c", self.bundle.christoffel(tv),
                                  Z.lift_components, value)
        return self.bundle.tangent(tv, deriv)

    # -- the primitive μ ------------------------------------------------------

    def mu_quadrature(self, v: NormalBundlePoint) -> tuple[np.ndarray, int, bool]:
        """μ(E_A) = ∫₀¹ (F*ω - ω̃)_{tv}(ρ̇ₜ(tv), ρₜ★E_A) dt.

        Returns the components with the node count and convergence flag.
        ρ̇ₜ(tv) = [v]ᵛ, so the integrand never divides by t. Cached per point.
        """
        value, nodes, converged = self._mu_cached(tuple(float(c) for c in v.coords))
        return value.copy(), nodes, converged

    def _mu_uncached(self, key: tuple[float, ...]) -> tuple[np.ndarray, int, bool]:
        v = NormalBundlePoint.from_coords(np.array(key))
        n = self.n
        vertical = np.concatenate([np.zeros(n), v.xi])
        if not np.any(v.xi):
            return np.zeros(2 * n), 0, True

        def integrand(t: float) -> np.ndarray:
            scale = np.concatenate([np.ones(n), t * np.ones(n)])
            return (vertical @ self.difference_matrix(self.scaled_point(t, v))) * scale

        value, nodes, converged = gauss_legendre(
            integrand, 0.0, 1.0, n_nodes=QUADRATURE_NODES, tol=self.quadrature_tol
        )
        if not converged:
            logger.warning(
                "mu quadrature did not converge at %s (%d nodes)", v.coords, nodes
            )
        return value, nodes, converged

    def mu_components(self, v: NormalBundlePoint) -> np.ndarray:
        return self.mu_quadrature(v)[0]

    def mu(self, X: SasakiTangent) -> float:
        return float(self.mu_components(X.base) @ X.lift_components)

    def d_mu(self, v: NormalBundlePoint, step: float = 1e-4) -> np.ndarray:
        """Chart matrix of dμ by five-point differences of the chart components of μ."""
        def chart_form(y: np.ndarray) -> np.ndarray:
            w = NormalBundlePoint.from_coords(y)
            # chart covector = lift covector composed with chart -> lift
            return self.mu_components(w) @ self.bundle.coordinate_to_lift(w)

        return exterior_derivative_1form(chart_form, v.coords, step)

    def difference_chart(self, v: NormalBundlePoint) -> np.ndarray:
        """F*ω - ω̃ as a chart matrix."""
        m = self.bundle.coordinate_to_lift(v)
        return m.T @ self.difference_matrix(v) @ m

    # -- the vector field 𝒳ₜ --------------------------------------------------

    def vector_field(self, t: float, v: NormalBundlePoint) -> SasakiTangent:
        """𝒳ₜ(v) with ωₜ(𝒳ₜ, ·) = -μ, solved by SVD."""
        if not np.any(v.xi):
            return SasakiTangent(v, np.zeros(self.n), np.zeros(self.n))
        omega = self.omega_t_matrix(t, v)
        u, s, vt = linalg.svd(omega.T)
        cond = s[0] / s[-1] if s[-1] > 0 else np.inf
        if cond > self.condition_limit:
            raise DegeneracyError(
                f"omega_t is degenerate at {v.coords} (condition {cond:.3e})"
            )
        rhs = -self.mu_components(v)
        lift = vt.T @ ((u.T @ rhs) / s)
        return self.bundle.tangent(v, lift)

    def vector_field_chart(self, t: float, coords: np.ndarray) -> np.ndarray:
        v = NormalBundlePoint.from_coords(coords)
        lift = self.vector_field(t, v).lift_components
        return self.bundle.lift_to_coordinate(v) @ lift

    # -- covariant derivatives used by the inequality suite -------------------

    def mu_derivative(self, v: NormalBundlePoint) -> np.ndarray:
        return self.bundle.covariant_derivative_form(
            self.mu_components, v, self.fd_step
        )

    def pullback_derivative(self, v: NormalBundlePoint) -> np.ndarray:
        return self.bundle.covariant_derivative_form(
            self.pullback_matrix, v, self.fd_step
        )

    def omega_t_derivative(self, t: float, v: NormalBundlePoint) -> np.ndarray:
        return self.bundle.covariant_derivative_form(
            lambda w: self.omega_t_matrix(t, w), v, self.fd_step
        )

    def vector_field_derivative(self, t: float, v: NormalBundlePoint) -> np.ndarray:
        return self.bundle.covariant_derivative_field(
            lambda w: self.vector_field(t, w).lift_components, v, self.fd_step
        )

    # -- the Qₚ trivialization ------------------------------------------------

    def _q_point(self, x_p: np.ndarray, X: np.ndarray, Y: np.ndarray
                 ) -> NormalBundlePoint:
        end, _ = self.scene.exp_map(x_p, X)
        return NormalBundlePoint(end, self.scene.exp_derivative(x_p, X, Y))

    def check_q_domain(self, x_p: np.ndarray, X: np.ndarray, Y: np.ndarray,
                       radius: float, budget: GeometryBudget) -> None:
        """Raise HypothesisError unless |X| < r, |Y| < r/2 and D₀(r) ≤ C̄₀."""
        if not hypotheses_hold(radius, budget)[1]:
            raise HypothesisError(
                f"Q_p is not certified at r={radius:.6g}", Q_HYPOTHESIS
            )
        x_len = self.scene.tangent_norm(x_p, X)
        y_len = self.scene.tangent_norm(x_p, Y)
        if not (x_len < radius and y_len < radius / 2):
            raise HypothesisError(
                f"(|X|, |Y|) = ({x_len:.6g}, {y_len:.6g}) is outside "
                f"B({radius:.6g}) x B({radius / 2:.6g})",
                Q_DOMAIN,
            )

    def q_trivialization(self, x_p: np.ndarray, X: np.ndarray, Y: np.ndarray,
                         radius: float, budget: GeometryBudget) -> NormalBundlePoint:
        """Qₚ(X, Y) = JỸ(X) ∈ T⊥_{E_p(X)}L for |X| < r, |Y| < r/2."""
        self.check_q_domain(x_p, X, Y, radius, budget)
        return self._q_point(x_p, X, Y)

    def q_jacobian(self, x_p: np.ndarray, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """Chart Jacobian of (X, Y) ↦ Qₚ(X, Y)."""
        n = self.n
        if self.scene.constant_induced_metric:
            return np.eye(2 * n)

        def q(z: np.ndarray) -> np.ndarray:
            return self._q_point(x_p, z[:n], z[n:]).coords

        return jacobian_fd(q, np.concatenate([X, Y]), 10 * self.fd_step)

    def _q_components(self, t: float, x_p: np.ndarray, X: np.ndarray,
                      Y: np.ndarray) -> np.ndarray:
        v = self._q_point(x_p, X, Y)
        target = self.vector_field_chart(t, v.coords)
        try:
            return np.linalg.solve(self.q_jacobian(x_p, X, Y), target)
        except np.linalg.LinAlgError as e:
            raise DegeneracyError(
                f"DQ_p is singular at X={X}, Y={Y}", hypothesis=Q_HYPOTHESIS
            ) from e

    def q_components(self, t: float, x_p: np.ndarray, X: np.ndarray, Y: np.ndarray,
                     radius: float, budget: GeometryBudget
                     ) -> tuple[np.ndarray, np.ndarray]:
        """(𝒳₁, 𝒳₂) with 𝒳ₜ(Qₚ(X, Y)) = (DQₚ)_{(X,Y)}(𝒳₁, 𝒳₂)."""
        self.check_q_domain(x_p, X, Y, radius, budget)
        z = self._q_components(t, x_p, X, Y)
        return z[: self.n], z[self.n :]

    def _component_jacobian(self, t: float, x_p: np.ndarray, X: np.ndarray,
                            Y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        n = self.n
        b = self.scene.orthonormal_change(x_p)
        block = linalg.block_diag(b, b)
        inv = np.linalg.inv(block)

        def comps(z: np.ndarray) -> np.ndarray:
            return self._q_components(t, x_p, z[:n], z[n:])

        z = np.concatenate([X, Y])
        value = inv @ comps(z)
        jac = inv @ jacobian_fd(comps, z, 10 * self.fd_step) @ block
        return value, jac

    def q_component_jacobian(self, t: float, x_p: np.ndarray, X: np.ndarray,
                             Y: np.ndarray, radius: float, budget: GeometryBudget
                             ) -> tuple[np.ndarray, np.ndarray]:
        """(𝒳₁, 𝒳₂) and the Jacobian of (X, Y) ↦ (𝒳₁, 𝒳₂), both in ḡ-orthonormal
        coordinates of T_pL x T_pL."""
        self.check_q_domain(x_p, X, Y, radius, budget)
        return self._component_jacobian(t, x_p, X, Y)

    def measure_lipschitz(
        self,
        radius: float,
        budget: GeometryBudget,
        rng: np.random.Generator,
        samples: int = 20,
        strict: bool = False,
    ) -> LipschitzEstimate:
        """Measured C and L of the component field on B(r/2) x B(r/2), fed to the
        Lindelöf factor α = √2L/(√2L + C(e^{√2L} - 1)).

        When D₀(r) ≤ C̄₀ fails the estimate is marked unhypothesized, or
        HypothesisError is raised if `strict`.
        """
        n = self.n
        notes: list[str] = []
        hypothesized = hypotheses_hold(radius, budget)[1]
        if not hypothesized:
            if strict:
                raise HypothesisError(
                    f"Q_p is not certified at r={radius:.6g}", Q_HYPOTHESIS
                )
            logger.warning("%s fails at r=%.6g; alpha is unhypothesized",
                           Q_HYPOTHESIS, radius)
            notes.append(f"unhypothesized: {Q_HYPOTHESIS} fails at r={radius:.6g}")
        best_c = best_l = 0.0
        for x_p in self.scene.sample_parameters(rng, samples):
            b = self.scene.orthonormal_change(x_p)
            z_hat = rng.standard_normal(2 * n)
            shell = 0.5 * radius * rng.uniform() ** (1 / (2 * n))
            z_hat *= shell / max(np.linalg.norm(z_hat), 1e-300)
            t = float(rng.uniform())
            X, Y = b @ z_hat[:n], b @ z_hat[n:]
            value, jac = self._component_jacobian(t, x_p, X, Y)
            y_norm = float(np.linalg.norm(z_hat[n:]))
            if y_norm > 0:
                best_c = max(best_c, float(np.linalg.norm(value[:n])) / y_norm,
                             float(np.linalg.norm(value[n:])) / y_norm)
            best_l = max(
                best_l,
                float(np.linalg.norm(jac[:n], 2)),
                float(np.linalg.norm(jac[n:], 2)),
            )
            logger.debug("lipschitz sample x=%s X=%s Y=%s", x_p, X, Y)
        if best_c == 0.0:
            alpha = LogReal.from_float(1.0)
            notes.append("vector field vanishes on the samples; alpha = 1")
        else:
            alpha = lindelof_alpha(best_c, max(best_l, 1e-12))
        return LipschitzEstimate(best_c, best_l, alpha, samples, notes, hypothesized)

    # -- flows ----------------------------------------------------------------

    def flow(
        self,
        v0: NormalBundlePoint,
        tube: TubeRegion,
        method: str = "rk4",
        raise_on_exit: bool = True,
    ) -> FlowResult:
        """Integral curve of {𝒳ₜ} from v0 over t ∈ [0, 1] in bundle chart coords."""
        if method == "rk4":
            return self._flow_rk4(v0, tube, raise_on_exit)
        if method == "picard":
            return self._flow_picard(v0, tube, raise_on_exit)
        raise InputError(f"unknown flow method {method!r}")

    def _exit(self, tube: TubeRegion, t: float, raise_on_exit: bool) -> None:
        logger.warning(
            "trajectory left the tube of radius %.6g at t=%.6g", tube.radius, t
        )
        if raise_on_exit:
            raise FlowExitError("trajectory left the tube", t)

    def _flow_rk4(
        self, v0: NormalBundlePoint, tube: TubeRegion, raise_on_exit: bool
    ) -> FlowResult:
        n_steps = steps_for(1.0, self.flow_step)
        h = 1.0 / n_steps
        y = v0.coords.copy()
        times, path = [0.0], [y.copy()]
        inside = tube.contains(v0)
        exit_time = None if inside else 0.0
        if not inside:
            self._exit(tube, 0.0, raise_on_exit)
        for k in range(n_steps):
            t = k * h
            k1 = self.vector_field_chart(t, y)
            k2 = self.vector_field_chart(t + h / 2, y + h / 2 * k1)
            k3 = self.vector_field_chart(t + h / 2, y + h / 2 * k2)
            k4 = self.vector_field_chart(t + h, y + h * k3)
            y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            times.append((k + 1) * h)
            path.append(y.copy())
            if inside and not tube.contains(NormalBundlePoint.from_coords(y)):
                inside, exit_time = False, (k + 1) * h
                self._exit(tube, exit_time, raise_on_exit)
                break
        logger.debug("rk4 flow: %d steps, inside=%s", len(times) - 1, inside)
        return FlowResult(
            NormalBundlePoint.from_coords(y),
            np.array(times),
            np.stack(path),
            inside,
            "rk4",
            len(times) - 1,
            exit_time,
        )

    def _flow_picard(
        self, v0: NormalBundlePoint, tube: TubeRegion, raise_on_exit: bool
    ) -> FlowResult:
        grid = np.linspace(0.0, 1.0, self.picard_nodes)
        y0 = v0.coords
        curve = np.tile(y0, (len(grid), 1))
        previous_gap = np.inf
        for iteration in range(1, self.picard_max_iter + 1):
            values = np.stack(
                [self.vector_field_chart(float(t), c) for t, c in zip(grid, curve)]
            )
            new = y0 + cumulative_simpson(values, x=grid, axis=0, initial=0.0)
            gap = float(np.max(np.abs(new - curve)))
            curve = new
            logger.debug("picard iteration %d: sup change %.3e", iteration, gap)
            if gap < self.picard_tol:
                break
            if iteration > 3 and gap >= previous_gap:
                raise DivergenceError(
                    f"Picard iteration stopped contracting (change {gap:.3e})"
                )
            previous_gap = gap
        else:
            raise DivergenceError(
                f"Picard iteration did not reach {self.picard_tol:g} "
                f"in {self.picard_max_iter} steps"
            )
        inside, exit_time = True, None
        for t, c in zip(grid, curve):
            if not tube.contains(NormalBundlePoint.from_coords(c)):
                inside, exit_time = False, float(t)
                self._exit(tube, exit_time, raise_on_exit)
                break
        return FlowResult(
            NormalBundlePoint.from_coords(curve[-1]),
            grid,
            curve,
            inside,
            "picard",
            iteration,
            exit_time,
        )

    # -- Θ = F∘Φ₁ -------------------------------------------------------------

    def theta(
        self, v: NormalBundlePoint, tube: TubeRegion, method: str = "rk4"
    ) -> AmbientPoint:
        return eval_F(self.bundle, self.flow(v, tube, method).endpoint)

    def theta_pullback_chart(self, v: NormalBundlePoint, tube: TubeRegion,
                             step: float | None = None) -> np.ndarray:
        """Chart matrix of Θ*ω at v by central differences of Θ (step 1e-5·r)."""
        h = 1e-5 * tube.radius if step is None else step
        ambient = self.scene.ambient
        centre = self.theta(v, tube)
        cols = []
        for a in range(2 * self.n):
            e = np.zeros(2 * self.n)
            e[a] = h
            plus = self.theta(NormalBundlePoint.from_coords(v.coords + e), tube)
            minus = self.theta(NormalBundlePoint.from_coords(v.coords - e), tube)
            if plus.chart_id != centre.chart_id or minus.chart_id != centre.chart_id:
                raise TubeError(
                    "Theta changed ambient chart inside the difference stencil"
                )
            cols.append((plus.coords - minus.coords) / (2 * h))
        d = np.stack(cols, axis=1)
        jd = ambient.complex_matrix(centre) @ d
        return jd.T @ ambient.metric_matrix(centre) @ d

    def symplectic_residual(self, v: NormalBundlePoint, tube: TubeRegion,
                            step: float | None = None) -> float:
        """max |(Θ*ω - ω̃)(eᵢ, eⱼ)| over a G-orthonormal frame at v."""
        diff = self.theta_pullback_chart(v, tube, step) \
            - self.bundle.omega_tilde_chart(v)
        frame = self.bundle.orthonormal_lift_frame(v)
        to_chart = self.bundle.lift_to_coordinate(v) @ frame
        return float(np.max(np.abs(to_chart.T @ diff @ to_chart)))

    def area_defect(self, v: NormalBundlePoint, tube: TubeRegion, size: float,
                    per_side: int = 8) -> float:
        """|ω-area of Θ(rectangle) - ω̃-area of the rectangle| for a square of side
        `size` at v; flat ℂ only."""
        ambient = self.scene.ambient
        if self.n != 1 or not isinstance(ambient, FlatComplexSpace):
            raise CapabilityError("area defect is implemented for curves in flat C")
        x0, xi0 = v.coords
        corners = [
            (x0, xi0),
            (x0 + size, xi0),
            (x0 + size, xi0 + size),
            (x0, xi0 + size),
        ]
        boundary = []
        for (ax, ay), (bx, by) in zip(corners, corners[1:] + corners[:1]):
            for s in np.linspace(0.0, 1.0, per_side, endpoint=False):
                edge = np.array([ax + s * (bx - ax), ay + s * (by - ay)])
                w = NormalBundlePoint.from_coords(edge)
                boundary.append(self.theta(w, tube).coords)
        pts = np.array(boundary)
        image_area = 0.5 * float(np.sum(pts[:, 0] * np.roll(pts[:, 1], -1)
                                        - np.roll(pts[:, 0], -1) * pts[:, 1]))
        nodes, weights = np.polynomial.legendre.leggauss(8)
        u = x0 + 0.5 * size * (nodes + 1)
        w_ = xi0 + 0.5 * size * (nodes + 1)
        source = 0.0
        for ui, wi in zip(u, weights):
            for vj, wj in zip(w_, weights):
                point = NormalBundlePoint.from_coords(np.array([ui, vj]))
                source += wi * wj * self.bundle.omega_tilde_chart(point)[0, 1]
        source *= 0.25 * size**2
        return abs(image_area - source)
