"""Jacobi and forced Jacobi fields along ambient geodesics; F, F★ and ∇F★.

Fields are integrated as coefficient vectors in an orthonormal frame that is parallel
along the geodesic, so ∇ₛ becomes d/ds and the geodesic velocity has constant
coefficients. On constant-curvature ambients the unforced equation is solved in
closed form.
"""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from weinstein_tube.ambient import AmbientManifold, AmbientPoint, AmbientTangent
from weinstein_tube.bounds import EXP_DERIVATIVE_CONSTANTS, bar_constants, d0_poly
from weinstein_tube.errors import InputError
from weinstein_tube.lagrangian import LagrangianScene
from weinstein_tube.math_utils import random_unit_vectors, rk4_integrate, steps_for
from weinstein_tube.models import CheckReport, GeometryBudget
from weinstein_tube.reporting import Sample, hypothesis_report, inequality_report
from weinstein_tube.sasaki import NormalBundle, NormalBundlePoint, SasakiTangent

logger = logging.getLogger(__name__)

Forcing = Callable[[float], np.ndarray] | np.ndarray | None


@dataclass(frozen=True, eq=False)
class GeodesicSegment:
    """s ↦ exp_start(s · velocity), s ∈ [0, length_param]."""

    ambient: AmbientManifold
    start: AmbientPoint
    velocity: AmbientTangent
    length_param: float = 1.0

    @property
    def speed(self) -> float:
        return self.ambient.norm(self.start, self.velocity.components)

    def state(self, s: float) -> tuple[AmbientPoint, np.ndarray]:
        return self.ambient.geodesic_state(self.start, self.velocity.components, s)

    def point(self, s: float) -> AmbientPoint:
        return self.state(s)[0]


@dataclass(frozen=True, eq=False)
class JacobiState:
    """(J, ∇ₛJ) at parameter s."""

    J: AmbientTangent
    DJ: AmbientTangent
    s: float

    def energy(self, ambient: AmbientManifold) -> float:
        p = self.J.base
        return ambient.inner(p, self.J.components, self.J.components) + ambient.inner(
            p, self.DJ.components, self.DJ.components
        )


class ParallelFrame:
    """Orthonormal frame parallel along a geodesic segment."""

    def __init__(self, segment: GeodesicSegment) -> None:
        self.segment = segment
        self.ambient = segment.ambient
        start = segment.start
        self.frame0 = self.ambient.orthonormal_frame(start)
        self.u = self.ambient.frame_components(
            start, self.frame0, segment.velocity.components
        )
        self.curvature_constant = self.ambient.constant_curvature

    def frame(self, s: float) -> tuple[AmbientPoint, np.ndarray]:
        seg = self.segment
        return seg.point(s), self.ambient.transported_frame(
            seg.start, seg.velocity.components, s, self.frame0
        )

    def coefficients(self, comps: np.ndarray) -> np.ndarray:
        """Frame coefficients of a vector (or columns) at the start point."""
        return self.frame0.T @ self.ambient.metric_matrix(self.segment.start) @ comps

    def to_ambient(
        self, s: float, coeffs: np.ndarray
    ) -> tuple[AmbientPoint, np.ndarray]:
        p, frame = self.frame(s)
        return p, frame @ coeffs

    def jacobi_matrix(self, s: float) -> np.ndarray:
        """A(s) with R(j, σ̇)σ̇ = A(s) j."""
        u = self.u
        if self.curvature_constant is not None:
            return self.curvature_constant * ((u @ u) * np.eye(u.size) - np.outer(u, u))
        p, frame = self.frame(s)
        columns = [
            self.ambient.curvature_in_frame(p, frame, e, u, u) for e in np.eye(u.size)
        ]
        return np.stack(columns, axis=1)

    def curvature(
        self, s: float, a: np.ndarray, b: np.ndarray, c: np.ndarray
    ) -> np.ndarray:
        if self.curvature_constant is not None:
            return self.curvature_constant * ((b @ c) * a - (a @ c) * b)
        p, frame = self.frame(s)
        return self.ambient.curvature_in_frame(p, frame, a, b, c)

    def curvature_derivative(
        self, s: float, w: np.ndarray, a: np.ndarray, b: np.ndarray, c: np.ndarray
    ) -> np.ndarray:
        if self.curvature_constant is not None:
            return np.zeros_like(a)
        p, frame = self.frame(s)
        return self.ambient.curvature_derivative_in_frame(p, frame, w, a, b, c)


def _closed_form(frame: ParallelFrame, j0: np.ndarray, dj0: np.ndarray,
                 s: float) -> tuple[np.ndarray, np.ndarray]:
    """Unforced Jacobi field on a constant-curvature ambient (K >= 0)."""
    u = frame.u
    kappa = float(frame.curvature_constant) * float(u @ u)
    speed = math.sqrt(float(u @ u))
    if speed == 0.0:
        return j0 + s * dj0, dj0.copy()
    unit = u / speed
    para0, dpara0 = unit @ j0, unit @ dj0
    perp0 = j0 - np.multiply.outer(unit, para0)
    dperp0 = dj0 - np.multiply.outer(unit, dpara0)
    if kappa > 0:
        root = math.sqrt(kappa)
        c, sn = math.cos(root * s), math.sin(root * s) / root
    else:
        c, sn = 1.0, s
    j = np.multiply.outer(unit, para0 + s * dpara0) + c * perp0 + sn * dperp0
    dj = np.multiply.outer(unit, dpara0) - kappa * sn * perp0 + c * dperp0
    return j, dj


def _integrate_frame(
    frame: ParallelFrame,
    j0: np.ndarray,
    dj0: np.ndarray,
    forcing: Forcing,
    n_steps: int,
    keep_path: bool,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """RK4 for j'' + A(s) j = f(s); returns (s grid, j path, dj path)."""
    length = frame.segment.length_param
    h = length / n_steps
    if isinstance(forcing, np.ndarray):
        if len(forcing) != 2 * n_steps + 1:
            raise InputError(
                f"forcing grid mismatch: {len(forcing)} samples for {n_steps} steps"
            )
        table = forcing

        def force(s: float) -> np.ndarray:
            return table[int(round(s / (0.5 * h)))]
    elif forcing is None:
        def force(s: float) -> np.ndarray:
            return 0.0  # type: ignore[return-value]
    else:
        force = forcing

    cache: dict[float, np.ndarray] = {}

    def a_matrix(s: float) -> np.ndarray:
        if frame.curvature_constant is not None:
            s = 0.0
        if s not in cache:
            cache[s] = frame.jacobi_matrix(s)
        return cache[s]

    def rhs(s: float, y: np.ndarray) -> np.ndarray:
        f = force(s)
        f = np.asarray(f)
        if f.ndim == 1 and y.ndim == 3:
            f = f[:, None]
        return np.stack([y[1], -a_matrix(s) @ y[0] + f])

    times, states = rk4_integrate(
        rhs, np.stack([j0, dj0]), 0.0, length, n_steps, keep_path
    )
    return times, states[:, 0], states[:, 1]


def integrate_jacobi(
    segment: GeodesicSegment,
    init: JacobiState,
    forcing: Forcing = None,
    step: float = 1e-3,
    method: str = "rk4",
    keep_path: bool = True,
) -> list[JacobiState]:
    """Solve ∇ₛ∇ₛJ + R(J, σ̇)σ̇ = forcing along the segment.

    Args:
        segment: Geodesic to integrate along.
        init: J(0), ∇ₛJ(0) at the segment start.
        forcing: Frame coefficients (in the parallel frame started from
            `ambient.orthonormal_frame(start)`) as a callable of s, or an array on the
            half-step grid (2 * n_steps + 1 rows).
        step: RK4 step as a fraction of length_param.
        method: "rk4", "closed" (constant curvature, unforced) or "auto".
        keep_path: Return every grid state, otherwise only the endpoint.
    """
    start = segment.start
    if not init.J.base.same_as(start) or not init.DJ.base.same_as(start):
        raise InputError("initial Jacobi data must be based at the segment start")
    frame = ParallelFrame(segment)
    j0 = frame.coefficients(init.J.components)
    dj0 = frame.coefficients(init.DJ.components)
    n_steps = steps_for(1.0, step)
    closed_ok = forcing is None and frame.curvature_constant is not None \
        and frame.curvature_constant >= 0
    if method == "closed" and not closed_ok:
        raise InputError(
            "closed-form Jacobi fields need an unforced constant-curvature scene"
        )
    if method in ("closed", "auto") and closed_ok:
        grid = np.linspace(0.0, segment.length_param, n_steps + 1) if keep_path \
            else np.array([segment.length_param])
        pairs = [_closed_form(frame, j0, dj0, float(s)) for s in grid]
        js, djs = np.stack([p[0] for p in pairs]), np.stack([p[1] for p in pairs])
    elif method in ("rk4", "auto"):
        grid, js, djs = _integrate_frame(frame, j0, dj0, forcing, n_steps, keep_path)
    else:
        raise InputError(f"unknown Jacobi method {method!r}")
    out = []
    for s, j, dj in zip(grid, js, djs):
        p, fr = frame.frame(float(s))
        out.append(
            JacobiState(AmbientTangent(p, fr @ j), AmbientTangent(p, fr @ dj), float(s))
        )
    return out


# -- F, F★ and ∇F★ ------------------------------------------------------------


def normal_geodesic(bundle: NormalBundle, v: NormalBundlePoint) -> GeodesicSegment:
    """s ↦ exp_{ι(x)}(s η)."""
    scene = bundle.scene
    p = scene.immerse(v.x)
    return GeodesicSegment(scene.ambient, p, AmbientTangent(p, bundle.normal_vector(v)))


def eval_F(bundle: NormalBundle, v: NormalBundlePoint) -> AmbientPoint:
    """F(v) = exp_{π(v)} v."""
    seg = normal_geodesic(bundle, v)
    return seg.point(1.0)


def initial_data(
    bundle: NormalBundle, v: NormalBundlePoint
) -> tuple[np.ndarray, np.ndarray]:
    """Ambient columns (J(0), ∇ₛJ(0)) for the lift-frame vectors E_A.

    J(0) = dι(π★X) and ∇ₛJ(0) = dι(S_η π★X) + K(X).
    """
    scene = bundle.scene
    d = scene.coordinate_tangents(v.x)
    shape = scene.shape_operator(v.x, v.xi)
    zero = np.zeros_like(d)
    j0 = np.concatenate([d, zero], axis=1)
    dj0 = np.concatenate([d @ shape, scene.normal_basis(v.x)], axis=1)
    return j0, dj0


def pushforward_matrix(
    bundle: NormalBundle, v: NormalBundlePoint, step: float = 1e-3, method: str = "auto"
) -> tuple[AmbientPoint, np.ndarray]:
    """F(v) and the (2n, 2n) matrix whose column A is F★E_A in ambient components."""
    seg = normal_geodesic(bundle, v)
    frame = ParallelFrame(seg)
    j0, dj0 = initial_data(bundle, v)
    c0, dc0 = frame.coefficients(j0), frame.coefficients(dj0)
    closed_ok = frame.curvature_constant is not None and frame.curvature_constant >= 0
    if method in ("closed", "auto") and closed_ok:
        j1, _ = _closed_form(frame, c0, dc0, 1.0)
    else:
        _, js, _ = _integrate_frame(frame, c0, dc0, None, steps_for(1.0, step), False)
        j1 = js[-1]
    q, fr = frame.frame(1.0)
    return q, fr @ j1


def dF(bundle: NormalBundle, X: SasakiTangent, step: float = 1e-3,
       method: str = "auto") -> AmbientTangent:
    """F★X = J(1) for the Jacobi field with J(0) = dι π★X, ∇J(0) = S_η π★X + K(X)."""
    q, mat = pushforward_matrix(bundle, X.base, step, method)
    return AmbientTangent(q, mat @ X.lift_components)


def _parallel_endpoints(
    bundle: NormalBundle, X: SasakiTangent, direction: np.ndarray, delta: float
) -> list[tuple[NormalBundlePoint, np.ndarray]]:
    """(c(±δ), X(±δ)) for the chart line c(t) = v + t·direction with X G-parallel."""
    v = X.base
    out = []
    for sign in (1.0, -1.0):
        end = v.coords + sign * delta * direction
        path = bundle.parallel_transport_G(
            lambda a, sign=sign: v.coords + a * sign * delta * direction,
            X, ode_step=0.25, keep_path=False,
        )
        out.append((NormalBundlePoint.from_coords(end), path[-1].lift_components))
    return out


def _forced_initial_data(
    bundle: NormalBundle, X: SasakiTangent, Y: SasakiTangent, delta: float
) -> tuple[np.ndarray, np.ndarray]:
    """Z(0) = ∇ₜJₜ(0) and ∇ₛZ(0) = ∇ₜ∇ₛJₜ(0) - R(τ(0), σ̇(0))J(0).

    Both are returned as ambient components.
    """
    scene = bundle.scene
    ambient = scene.ambient
    v = X.base
    y_coords = bundle.coordinates_of(Y)
    p = scene.immerse(v.x)

    def data(w: NormalBundlePoint, lift: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        j0, dj0 = initial_data(bundle, w)
        return j0 @ lift, dj0 @ lift

    (vp, xp), (vm, xm) = _parallel_endpoints(bundle, X, y_coords, delta)
    a0, b0 = data(v, X.lift_components)
    ap, bp = data(vp, xp)
    am, bm = data(vm, xm)
    base_velocity = scene.coordinate_tangents(v.x) @ Y.horizontal
    z0 = (ap - am) / (2 * delta) + ambient.christoffel_contract(p, base_velocity, a0)
    dz0 = (bp - bm) / (2 * delta) + ambient.christoffel_contract(p, base_velocity, b0)
    eta = bundle.normal_vector(v)
    dz0 = dz0 - ambient.curvature_components(p, base_velocity, eta, a0)
    return z0, dz0


def d2F(
    bundle: NormalBundle,
    X: SasakiTangent,
    Y: SasakiTangent,
    step: float = 1e-3,
    delta: float = 1e-4,
    method: str = "variational",
) -> AmbientTangent:
    """(∇^{g⊗G}F★)(Y, X) at F(v).

    "variational" integrates the forced Jacobi equation for Z = ∇ₜJₜ along the family
    of normal geodesics over a G-parallel extension of X in direction Y; "fd"
    differentiates F★ along that family by central differences.
    """
    if method == "fd":
        return d2F_finite_difference(bundle, X, Y, delta, step)
    if method != "variational":
        raise InputError(f"unknown d2F method {method!r}")
    v = X.base
    seg = normal_geodesic(bundle, v)
    frame = ParallelFrame(seg)
    j0, dj0 = initial_data(bundle, v)
    n_steps = steps_for(1.0, step)
    x_lift, y_lift = X.lift_components, Y.lift_components
    coeffs = frame.coefficients(
        np.stack([j0 @ x_lift, j0 @ y_lift, dj0 @ x_lift, dj0 @ y_lift], axis=1)
    )
    # J and τ on the half-step grid
    if frame.curvature_constant is not None and frame.curvature_constant >= 0:
        fine = np.linspace(0.0, 1.0, 2 * n_steps + 1)
        pairs = [
            _closed_form(frame, coeffs[:, :2], coeffs[:, 2:], float(s)) for s in fine
        ]
        js, djs = np.stack([p[0] for p in pairs]), np.stack([p[1] for p in pairs])
    else:
        fine, js, djs = _integrate_frame(
            frame, coeffs[:, :2], coeffs[:, 2:], None, 2 * n_steps, True
        )
    u = frame.u
    forcing = np.empty((len(fine), u.size))
    for k, s in enumerate(fine):
        J, tau = js[k][:, 0], js[k][:, 1]
        dJ, dtau = djs[k][:, 0], djs[k][:, 1]
        R = frame.curvature
        f = (
            R(s, dtau, u, J)
            + 2 * R(s, tau, u, dJ)
            + R(s, J, dtau, u)
            + R(s, J, u, dtau)
        )
        if frame.curvature_constant is None:
            D = frame.curvature_derivative
            f = f + D(s, u, tau, u, J) + D(s, tau, J, u, u)
        forcing[k] = -f
    z0, dz0 = _forced_initial_data(bundle, X, Y, delta)
    _, zs, _ = _integrate_frame(frame, frame.coefficients(z0), frame.coefficients(dz0),
                                forcing, n_steps, False)
    q, fr = frame.frame(1.0)
    return AmbientTangent(q, fr @ zs[-1])


def d2F_finite_difference(
    bundle: NormalBundle, X: SasakiTangent, Y: SasakiTangent, delta: float = 1e-4,
    step: float = 1e-3,
) -> AmbientTangent:
    """Central difference of F★X(t) along c(t) plus the ambient Christoffel term."""
    ambient = bundle.scene.ambient
    v = X.base
    (vp, xp), (vm, xm) = _parallel_endpoints(bundle, X, bundle.coordinates_of(Y), delta)
    q, mat = pushforward_matrix(bundle, v, step)
    _, mat_p = pushforward_matrix(bundle, vp, step)
    _, mat_m = pushforward_matrix(bundle, vm, step)
    deriv = (mat_p @ xp - mat_m @ xm) / (2 * delta)
    deriv = deriv + ambient.christoffel_contract(
        q, mat @ Y.lift_components, mat @ X.lift_components
    )
    return AmbientTangent(q, deriv)


# -- checks -------------------------------------------------------------------


def _power(base: float, exponent: float) -> float:
    # 0^0 is taken as 0 in the energy bound
    if base == 0.0:
        return 0.0
    return base**exponent


def energy_bound_rhs(
    e0: float, c0: float, d0: float, eps: float, speed: float, s: float
) -> float:
    """(|J(0)|² + |∇J(0)|² + D₀^{2-ε}) e^{(1 + C₀v² + D₀^ε)s}."""
    if not 0.0 <= eps <= 2.0:
        raise InputError(f"epsilon must lie in [0, 2], got {eps}")
    rate = 1.0 + c0 * speed**2 + _power(d0, eps)
    return (e0 + _power(d0, 2.0 - eps)) * math.exp(rate * s)


def check_energy_bound(
    path: list[JacobiState],
    ambient: AmbientManifold,
    C0: float,
    D0: float,
    eps: float,
    speed: float,
    check_id: str = "energy-bound",
    rel_slack: float = 1e-9,
    seed: int | None = None,
) -> CheckReport:
    """|J|² + |∇J|² against the exponential envelope at every grid point."""
    if not path:
        raise InputError("empty Jacobi path")
    e0 = path[0].energy(ambient)
    samples = []
    for state in path:
        lhs = state.energy(ambient)
        rhs = energy_bound_rhs(e0, C0, D0, eps, speed, state.s)
        state_info = {"s": state.s, "energy": lhs}
        samples.append(Sample(lhs, rhs * (1 + rel_slack), state_info))
    return inequality_report(
        check_id, "energy-growth", "Jacobi energy growth bound", samples, seed=seed,
        inputs={"C0": C0, "D0": D0, "epsilon": eps, "speed": speed},
    )


def _covariant_fd(
    scene: LagrangianScene, x: np.ndarray, X: np.ndarray, direction: np.ndarray,
    field: Callable[[np.ndarray], np.ndarray], h: float, ode_step: float,
) -> np.ndarray:
    """∇ along X ↦ E_x(X) in `direction` of a vector field given on T_xL."""
    if scene.constant_induced_metric:
        return (field(X + h * direction) - field(X - h * direction)) / (2 * h)
    q, _ = scene.exp_map(x, X, ode_step)
    moved = scene.exp_derivative(x, X, direction, ode_step=ode_step)
    deriv = (field(X + h * direction) - field(X - h * direction)) / (2 * h)
    return deriv + np.einsum("kij,i,j->k", scene.christoffel(q), moved, field(X))


def _exp_derivative_samples(
    scene: LagrangianScene, radius: float, rng: np.random.Generator, n_samples: int,
    h: float, ode_step: float,
) -> list[dict[str, float | np.ndarray]]:
    out: list[dict[str, float | np.ndarray]] = []
    for x in scene.sample_parameters(rng, n_samples):
        b = scene.orthonormal_change(x)
        dirs = random_unit_vectors(rng, scene.n, 4) @ b.T  # ḡ-unit coefficient vectors
        X = dirs[0] * radius * rng.uniform()
        y1, y2, y3 = dirs[1], dirs[2], dirs[3]
        q, _ = scene.exp_map(x, X, ode_step)

        def tilde_y1(Xp: np.ndarray) -> np.ndarray:
            return scene.exp_derivative(x, Xp, y1, ode_step=ode_step)

        def first(Xp: np.ndarray) -> np.ndarray:
            return _covariant_fd(scene, x, Xp, y2, tilde_y1, h, ode_step)

        second = _covariant_fd(scene, x, X, y3, first, h, ode_step)
        out.append({
            "x": x, "X": X, "norm_X": scene.tangent_norm(x, X),
            "tilde": scene.tangent_norm(q, tilde_y1(X)),
            "first": scene.tangent_norm(q, first(X)),
            "second": scene.tangent_norm(q, second),
        })
    return out


def exp_derivative_constants_check(
    scene: LagrangianScene,
    radius: float,
    budget: GeometryBudget,
    rng: np.random.Generator,
    n_samples: int = 50,
    slack: float = 1e-6,
    check_margin: float = 0.0,
    seed: int | None = None,
    h: float = 1e-3,
    ode_step: float = 1e-3,
    squared: bool = False,
) -> CheckReport:
    """Derivative bounds of the exponential map of L under D₀(r) ≤ C̄₀.

    Checks |Ỹ₁(X)| ≤ 2, |∇_{Y₂}Ỹ₁| ≤ 38C̄₀|X| and |∇_{Y₃}∇_{Y₂}Ỹ₁| ≤ 154C̄₀ for unit
    Y's; with `squared` the sharper squared bounds with exponential factors instead.
    """
    check_id = "exp-derivative-bounds" if squared else "exp-derivative-constants"
    anchor = "exp-derivative-squared" if squared else "exp-derivative-constants"
    title = "Exponential map derivative bounds on L"
    bars = bar_constants(budget)
    cb0, cb1, _ = bars
    c_tilde, c_first, c_second = EXP_DERIVATIVE_CONSTANTS
    inputs: dict[str, float | str | None] = {"r": radius, "Cbar0": cb0, "Cbar1": cb1}
    if d0_poly(radius, bars) > cb0:
        return hypothesis_report(check_id, anchor, title, "D0(r) <= Cbar0", seed=seed,
                                 inputs=inputs)
    samples = []
    for st in _exp_derivative_samples(scene, radius, rng, n_samples, h, ode_step):
        x_norm = float(st["norm_X"])
        state = {"x": st["x"], "X": st["X"]}
        if squared:
            d0x = d0_poly(x_norm, bars)
            bounds = [
                ("tilde", float(st["tilde"]) ** 2, math.exp(1 + cb0 * x_norm**2)),
                ("first", float(st["first"]) ** 2,
                 4 * x_norm**2 * (cb1 * x_norm + 2 * cb0) ** 2
                 * math.exp(4 + 3 * cb0 * x_norm**2)),
                ("second", float(st["second"]) ** 2,
                 4 * (d0x + cb0) ** 2 * math.exp(7 + 5 * cb0 * x_norm**2)),
            ]
        else:
            bounds = [
                ("tilde", float(st["tilde"]), c_tilde),
                ("first", float(st["first"]), c_first * cb0 * x_norm),
                ("second", float(st["second"]), c_second * cb0),
            ]
        for name, lhs, rhs in bounds:
            samples.append(Sample(lhs, rhs, {**state, "bound": name}))
    return inequality_report(check_id, anchor, title, samples, slack=slack,
                             check_margin=check_margin, seed=seed, inputs=inputs)
