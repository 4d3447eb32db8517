"""Registered inequality and identity checks, run against one scene.

Every check draws from its own generator seeded by (seed, crc32(check_id)), so a
check's samples do not depend on which other checks run.
"""

import logging
import math
import zlib
from collections.abc import Callable, Iterable
from dataclasses import dataclass
from functools import cached_property

import click
import numpy as np
from tqdm import tqdm

from weinstein_tube.ambient import FlatComplexSpace
from weinstein_tube.bounds import (
    LAMBDA2,
    MU_DERIVATIVE_BOUND,
    MU_FACTOR,
    VECTOR_FIELD_FACTOR,
    bar_constants,
    component_bounds,
    component_derivative_bounds,
    hypotheses_hold,
    injectivity_radius_bound,
    k0,
    numeric_regressions,
    omega_t_derivative_bound,
    omega_t_lower_bound,
    pullback_derivative_bound,
    pushforward_bound,
    radius_1396,
    radius_d0,
    radius_k1,
    sasaki_structure_derivative_bound,
    weinstein_chain,
)
from weinstein_tube.errors import CapabilityError, InputError, TubeError
from weinstein_tube.injectivity import embedding_constant, injectivity_probe
from weinstein_tube.jacobi import (
    JacobiState,
    energy_bound_rhs,
    exp_derivative_constants_check,
    integrate_jacobi,
    normal_geodesic,
    pushforward_matrix,
)
from weinstein_tube.lagrangian import LagrangianScene, build_lagrangian
from weinstein_tube.models import (
    BoundCertificate,
    CheckReport,
    FlowSample,
    GeometryBudget,
    MoserReport,
    SceneConfig,
    SuiteReport,
)
from weinstein_tube.moser import LipschitzEstimate, MoserConstruction, TubeRegion
from weinstein_tube.reporting import Sample, hypothesis_report, inequality_report
from weinstein_tube.sasaki import NormalBundle, NormalBundlePoint

logger = logging.getLogger(__name__)

GATE_K1 = "rK1(r) <= e"
GATE_D0 = "D0(r) <= Cbar0"
IDENTITY_TOL = 1e-6
ZERO_SECTION_TOL = 1e-10
RESIDUAL_TOL = 1e-5
METHOD_GAP_TOL = 1e-7


# -- scene assembly -----------------------------------------------------------


def scene_budget(
    scene: LagrangianScene,
    rng: np.random.Generator,
    points: int = 64,
    pairs: int = 1000,
) -> tuple[GeometryBudget, str]:
    """GeometryBudget of a scene and its provenance.

    The provenance is "sampled" if any sup was sampled.
    """
    params = scene.sample_parameters(rng, points)
    ambient = scene.ambient
    analytic = ambient.exact_curvature_sups() is not None \
        and scene.exact_extrinsic_budget() is not None
    c0, c1, c2 = ambient.curvature_sups([scene.immerse(x) for x in params], rng)
    ext = scene.extrinsic_sups(params, rng)
    inj = ambient.injectivity_radius
    emb = None
    if scene.embedded and scene.compact:
        try:
            emb = embedding_constant(scene, rng, pairs)
        except CapabilityError as e:
            logger.warning("emb(L) unavailable: %s", e)
    budget = GeometryBudget(
        C0=c0, C1=c1, C2=c2, A0=ext.A0, A1=ext.A1, A2=ext.A2,
        rho0=None if math.isinf(inj) else inj, emb=emb,
    )
    return budget, "analytic" if analytic else "sampled"


def choose_radius(config: SceneConfig, budget: GeometryBudget) -> float:
    """The configured radius, or the one the radius policy picks."""
    if config.radius is not None:
        return config.radius
    policy = config.radius_policy
    if policy.mode == "certified":
        r = radius_1396(budget)
    else:
        r = policy.safety_factor * min(radius_k1(budget), radius_d0(budget))
    if math.isinf(r):
        logger.warning("every radius satisfies the hypotheses; using r = 1")
        return 1.0
    logger.info("%s radius r = %.6g", policy.mode, r)
    return r


class SuiteContext:
    """Scene objects shared by the checks of one run."""

    def __init__(self, config: SceneConfig, radius: float | None = None) -> None:
        self.config = config
        self.seed = config.sampling.seed
        self.sampling = config.sampling
        self.tol = config.tolerances
        self.scene = build_lagrangian(config)
        self.bundle = NormalBundle(self.scene)
        self.moser = MoserConstruction(
            self.bundle,
            jacobi_step=self.tol.ode_step,
            fd_step=self.tol.fd_step,
            quadrature_tol=self.tol.quadrature_tol,
            flow_step=self.tol.flow_step,
            picard_nodes=self.tol.picard_nodes,
            picard_tol=self.tol.picard_tol,
            picard_max_iter=self.tol.picard_max_iter,
        )
        self.budget, self.provenance = scene_budget(
            self.scene, self.rng("budget"), pairs=min(self.sampling.pairs, 1000)
        )
        if radius is None:
            radius = choose_radius(config, self.budget)
        self.radius = radius
        self.tube = TubeRegion(self.bundle, self.radius)
        held = hypotheses_hold(self.radius, self.budget)
        self.gates = dict(zip((GATE_K1, GATE_D0), held))

    def rng(self, label: str) -> np.random.Generator:
        return np.random.default_rng([self.seed, zlib.crc32(label.encode("utf-8"))])

    def tube_points(self, rng: np.random.Generator, count: int,
                    radius: float | None = None) -> list[NormalBundlePoint]:
        xs, zetas = self.bundle.sample_tube(rng, radius or self.radius, count)
        return [self.bundle.from_orthonormal(x, z) for x, z in zip(xs, zetas)]

    def g_norm(self, v: NormalBundlePoint, lift: np.ndarray) -> float:
        return float(np.sqrt(max(lift @ self.bundle.lift_metric(v) @ lift, 0.0)))

    @cached_property
    def lipschitz(self) -> LipschitzEstimate:
        rng = self.rng("lipschitz")
        estimate = self.moser.measure_lipschitz(
            self.radius, self.budget, rng, self.sampling.lipschitz_samples
        )
        logger.info("measured C=%.4g L=%.4g, practical alpha=%s",
                    estimate.C, estimate.L, estimate.alpha.display())
        return estimate

    @property
    def start_radius(self) -> float:
        """α·r/2 with the measured (practical) α."""
        return float(self.lipschitz.alpha) * self.radius / 2

    def certificates(self, use_printed_alpha: bool = False) -> list[BoundCertificate]:
        """The radius chain plus practical_radius from the measured α."""
        try:
            estimate = self.lipschitz
        except TubeError as e:
            logger.warning("practical_radius omitted: %s", e)
            return weinstein_chain(self.budget, self.provenance, use_printed_alpha)
        return weinstein_chain(
            self.budget, self.provenance, use_printed_alpha,
            estimate.alpha, estimate.notes,
        )

    def inputs(self, **extra: float | str | None) -> dict[str, float | str | None]:
        return {"r": self.radius, "C0": self.budget.C0, "A0": self.budget.A0, **extra}


# -- the registry -------------------------------------------------------------


CheckFn = Callable[[SuiteContext, np.random.Generator], CheckReport]


@dataclass(frozen=True)
class CheckSpec:
    check_id: str
    anchor: str
    title: str
    run: CheckFn
    gates: tuple[str, ...] = ()


REGISTRY: dict[str, CheckSpec] = {}


def register(
    check_id: str, anchor: str, title: str, gates: tuple[str, ...] = ()
) -> Callable[[CheckFn], CheckFn]:
    """Add a check to the registry; registration order is run order."""

    def wrap(fn: CheckFn) -> CheckFn:
        if check_id in REGISTRY:
            raise ValueError(f"duplicate check id {check_id!r}")
        REGISTRY[check_id] = CheckSpec(check_id, anchor, title, fn, gates)
        return fn
    return wrap


def _report(
    ctx: SuiteContext,
    spec: CheckSpec,
    samples: list[Sample],
    slack: float = 0.0,
    **inputs: float | str | None,
) -> CheckReport:
    return inequality_report(
        spec.check_id, spec.anchor, spec.title, samples, slack=slack,
        check_margin=ctx.tol.check_margin, seed=ctx.seed, provenance=ctx.provenance,
        inputs=ctx.inputs(**inputs),
    )


def _spec(check_id: str) -> CheckSpec:
    return REGISTRY[check_id]


# -- F★ and the path ωₜ -------------------------------------------------------


@register(
    "pushforward-bound", "pushforward-norm", "|F★X|² ≤ (1+λ²A₀²)e^{1+λ²C₀}|X|²"
)
def _pushforward_bound(ctx: SuiteContext, rng: np.random.Generator) -> CheckReport:
    samples = []
    ambient = ctx.scene.ambient
    for v in ctx.tube_points(rng, ctx.sampling.points):
        lam = ctx.bundle.fiber_norm(v)
        q, mat = pushforward_matrix(ctx.bundle, v, ctx.tol.ode_step)
        bound = pushforward_bound(lam, ctx.budget)
        for X in ctx.bundle.unit_tangents(v, rng, 2):
            image = mat @ X.lift_components
            squared = ambient.inner(q, image, image)
            samples.append(Sample(squared, bound, {"v": v.coords}))
    return _report(ctx, _spec("pushforward-bound"), samples, slack=ctx.tol.fd_slack)


@register("nondegeneracy", "pullback-nondegenerate",
          "(F*ω)(X, J̃X) ≥ (1 - K₀(λ))|X|²", gates=(GATE_K1,))
def _nondegeneracy(ctx: SuiteContext, rng: np.random.Generator) -> CheckReport:
    samples = []
    for v in ctx.tube_points(rng, ctx.sampling.points):
        lam = ctx.bundle.fiber_norm(v)
        for X in ctx.bundle.unit_tangents(v, rng, 2):
            value = ctx.moser.pullback_omega(X, ctx.bundle.jtilde(X))
            samples.append(Sample(1 - k0(lam, ctx.budget), value, {"v": v.coords}))
    return _report(ctx, _spec("nondegeneracy"), samples, slack=ctx.tol.fd_slack)


@register("omega-t-lower-bound", "omega-t-nondegenerate",
          "ωₜ(X, J̃X) ≥ (1 - tK₀(λ))|X|²", gates=(GATE_K1,))
def _omega_t_lower(ctx: SuiteContext, rng: np.random.Generator) -> CheckReport:
    samples = []
    for v in ctx.tube_points(rng, ctx.sampling.points):
        lam = ctx.bundle.fiber_norm(v)
        t = float(rng.uniform())
        for X in ctx.bundle.unit_tangents(v, rng, 2):
            value = ctx.moser.omega_t(t, X, ctx.bundle.jtilde(X))
            samples.append(Sample(omega_t_lower_bound(t, lam, ctx.budget), value,
                                  {"v": v.coords, "t": t}))
    return _report(ctx, _spec("omega-t-lower-bound"), samples, slack=ctx.tol.fd_slack)


@register(
    "pullback-zero-section", "pullback-zero-section", "F*ω = ω̃ on the zero section"
)
def _pullback_zero_section(ctx: SuiteContext, rng: np.random.Generator) -> CheckReport:
    samples = []
    for x in ctx.scene.sample_parameters(rng, ctx.sampling.points):
        v = NormalBundlePoint(x, np.zeros(ctx.bundle.n))
        defect = float(np.max(np.abs(ctx.moser.difference_matrix(v))))
        samples.append(Sample(defect, ZERO_SECTION_TOL, {"x": x}))
    return _report(ctx, _spec("pullback-zero-section"), samples)


# -- derivatives of the structures --------------------------------------------


@register("sasaki-structure-derivative", "sasaki-structure-derivative",
          "|∇ᴳJ̃|, |∇ᴳω̃| ≤ √2 C̄₀ λ")
def _sasaki_derivative(ctx: SuiteContext, rng: np.random.Generator) -> CheckReport:
    samples = []
    for v in ctx.tube_points(rng, ctx.sampling.points):
        lam = ctx.bundle.fiber_norm(v)
        bound = sasaki_structure_derivative_bound(lam, ctx.budget)
        nabla_j = ctx.bundle.nabla_jtilde(v)
        nabla_w = ctx.bundle.nabla_omega_tilde(v, ctx.tol.fd_step)
        nj = ctx.bundle.tensor_norm(v, nabla_j, upper=True, rng=rng)
        nw = ctx.bundle.tensor_norm(v, nabla_w, upper=False, rng=rng)
        samples.append(Sample(nj, bound, {"v": v.coords, "tensor": "J"}))
        samples.append(Sample(nw, bound, {"v": v.coords, "tensor": "omega"}))
    return _report(
        ctx, _spec("sasaki-structure-derivative"), samples, slack=ctx.tol.fd_slack
    )


@register("pullback-derivative", "pullback-derivative",
          "|∇ᴳ(F*ω)| ≤ 2√(1+λ²A₀²) e^{1/2+λ²C₀/2} K₁(λ)")
def _pullback_derivative(ctx: SuiteContext, rng: np.random.Generator) -> CheckReport:
    samples = []
    for v in ctx.tube_points(rng, ctx.sampling.heavy_points):
        lam = ctx.bundle.fiber_norm(v)
        deriv = ctx.moser.pullback_derivative(v)
        norm = ctx.bundle.tensor_norm(v, deriv, upper=False, rng=rng)
        bound = pullback_derivative_bound(lam, ctx.budget)
        samples.append(Sample(norm, bound, {"v": v.coords}))
    return _report(ctx, _spec("pullback-derivative"), samples, slack=ctx.tol.fd_slack)


@register(
    "omega-t-derivative", "omega-t-derivative", "|∇ᴳωₜ| ≤ √2 C̄₀ λ + 4K₁(λ)"
)
def _omega_t_derivative(ctx: SuiteContext, rng: np.random.Generator) -> CheckReport:
    samples = []
    for v in ctx.tube_points(rng, ctx.sampling.heavy_points):
        lam = ctx.bundle.fiber_norm(v)
        t = float(rng.uniform())
        deriv = ctx.moser.omega_t_derivative(t, v)
        norm = ctx.bundle.tensor_norm(v, deriv, upper=False, rng=rng)
        samples.append(Sample(norm, omega_t_derivative_bound(lam, ctx.budget),
                              {"v": v.coords, "t": t}))
    return _report(ctx, _spec("omega-t-derivative"), samples, slack=ctx.tol.fd_slack)


@register(
    "scaling-map",
    "scaling-map-estimates",
    "Estimates for ρₜ★, ρ̇ₜ and their derivatives",
)
def _scaling_map(ctx: SuiteContext, rng: np.random.Generator) -> CheckReport:
    samples = []
    cbar0 = bar_constants(ctx.budget)[0]
    moser, bundle = ctx.moser, ctx.bundle
    for v in ctx.tube_points(rng, ctx.sampling.points):
        lam = bundle.fiber_norm(v)
        t = float(rng.uniform(0.05, 1.0))
        tv = moser.scaled_point(t, v)
        X, Y = bundle.unit_tangents(v, rng, 2)
        state = {"v": v.coords, "t": t}
        pushed = moser.rho_pushforward(t, X)
        samples.append(Sample(ctx.g_norm(tv, pushed.lift_components), 1.0,
                              {**state, "estimate": "pushforward"}))
        dot = ctx.g_norm(v, moser.rho_dot(t, v).lift_components)
        samples.append(
            Sample(
                abs(dot - lam / t), ZERO_SECTION_TOL, {**state, "estimate": "rho-dot"}
            )
        )
        # ρ̇ₜ(tv) = [v]ᵛ at tv
        rho_dot_tv = bundle.tangent(tv, np.concatenate([np.zeros(bundle.n), v.xi]))
        pairing = abs(bundle.omega_tilde(rho_dot_tv, pushed))
        samples.append(Sample(pairing, lam, {**state, "estimate": "pairing"}))
        deriv = moser.rho_pushforward_derivative(t, X, Y)
        samples.append(Sample(ctx.g_norm(tv, deriv.lift_components), cbar0 * lam,
                              {**state, "estimate": "pushforward-derivative"}))
        dot_deriv = moser.rho_dot_derivative(t, Y)
        samples.append(Sample(ctx.g_norm(tv, dot_deriv.lift_components), 1.0,
                              {**state, "estimate": "rho-dot-derivative"}))
    return _report(ctx, _spec("scaling-map"), samples, slack=ctx.tol.fd_slack)


# -- μ and 𝒳ₜ -----------------------------------------------------------------


@register(
    "primitive-exterior-derivative", "primitive-exterior-derivative", "dμ = F*ω - ω̃"
)
def _d_mu(ctx: SuiteContext, rng: np.random.Generator) -> CheckReport:
    samples = []
    for v in ctx.tube_points(rng, ctx.sampling.heavy_points):
        gap = ctx.moser.d_mu(v) - ctx.moser.difference_chart(v)
        defect = float(np.max(np.abs(gap)))
        samples.append(Sample(defect, IDENTITY_TOL, {"v": v.coords}))
    return _report(ctx, _spec("primitive-exterior-derivative"), samples)


@register("primitive-bound", "primitive-bound", "|μ(X)| ≤ 5λ|X|", gates=(GATE_K1,))
def _mu_bound(ctx: SuiteContext, rng: np.random.Generator) -> CheckReport:
    samples = []
    for v in ctx.tube_points(rng, ctx.sampling.heavy_points):
        lam = ctx.bundle.fiber_norm(v)
        for X in ctx.bundle.unit_tangents(v, rng, 2):
            value = abs(ctx.moser.mu(X))
            samples.append(Sample(value, MU_FACTOR * lam, {"v": v.coords}))
    return _report(ctx, _spec("primitive-bound"), samples, slack=ctx.tol.fd_slack)


@register(
    "primitive-derivative", "primitive-derivative", "|∇ᴳμ| ≤ 24", gates=(GATE_K1,)
)
def _mu_derivative(ctx: SuiteContext, rng: np.random.Generator) -> CheckReport:
    samples = []
    for v in ctx.tube_points(rng, ctx.sampling.heavy_points):
        deriv = ctx.moser.mu_derivative(v)
        norm = ctx.bundle.tensor_norm(v, deriv, upper=False, rng=rng)
        samples.append(Sample(norm, MU_DERIVATIVE_BOUND, {"v": v.coords}))
    return _report(ctx, _spec("primitive-derivative"), samples, slack=ctx.tol.fd_slack)


@register(
    "vector-field-bound", "vector-field-bound", "|𝒳ₜ(v)| ≤ 10|v|", gates=(GATE_K1,)
)
def _vector_field_bound(ctx: SuiteContext, rng: np.random.Generator) -> CheckReport:
    samples = []
    for v in ctx.tube_points(rng, ctx.sampling.heavy_points):
        t = float(rng.uniform())
        field = ctx.moser.vector_field(t, v)
        samples.append(Sample(ctx.bundle.sasaki_norm(field),
                              VECTOR_FIELD_FACTOR * ctx.bundle.fiber_norm(v),
                              {"v": v.coords, "t": t}))
    return _report(ctx, _spec("vector-field-bound"), samples, slack=ctx.tol.fd_slack)


@register("vector-field-derivative", "vector-field-derivative", "|∇ᴳ𝒳ₜ| ≤ 294",
          gates=(GATE_K1,))
def _vector_field_derivative(
    ctx: SuiteContext, rng: np.random.Generator
) -> CheckReport:
    samples = []
    for v in ctx.tube_points(rng, ctx.sampling.heavy_points):
        t = float(rng.uniform())
        deriv = ctx.moser.vector_field_derivative(t, v)
        norm = ctx.bundle.tensor_norm(v, deriv, upper=True, rng=rng)
        samples.append(Sample(norm, LAMBDA2, {"v": v.coords, "t": t}))
    return _report(
        ctx, _spec("vector-field-derivative"), samples, slack=ctx.tol.fd_slack
    )


# -- Qₚ coordinates -----------------------------------------------------------


def _q_samples(
    ctx: SuiteContext,
    rng: np.random.Generator,
    count: int,
    x_radius: float,
    y_radius: float,
) -> Iterable[tuple[np.ndarray, np.ndarray, np.ndarray, float]]:
    n = ctx.bundle.n
    for x_p in ctx.scene.sample_parameters(rng, count):
        b = ctx.scene.orthonormal_change(x_p)
        dirs = rng.standard_normal((2, n))
        dirs /= np.maximum(np.linalg.norm(dirs, axis=1, keepdims=True), 1e-300)
        X = b @ dirs[0] * x_radius * float(rng.uniform()) ** (1 / n)
        y_len = y_radius * float(rng.uniform()) ** (1 / n)
        yield x_p, X, b @ dirs[1] * y_len, y_len


@register(
    "q-norm-sandwich",
    "q-norm-sandwich",
    "½|Y| ≤ |Qₚ(X, Y)| ≤ 2|Y|",
    gates=(GATE_D0,),
)
def _q_sandwich(ctx: SuiteContext, rng: np.random.Generator) -> CheckReport:
    samples = []
    r = ctx.radius
    for x_p, X, Y, y_len in _q_samples(ctx, rng, ctx.sampling.points, r, r / 2):
        q = ctx.moser.q_trivialization(x_p, X, Y, r, ctx.budget)
        norm = ctx.bundle.fiber_norm(q)
        state = {"x_p": x_p, "X": X, "Y": Y}
        samples.append(Sample(norm, 2 * y_len, state))
        samples.append(Sample(0.5 * y_len, norm, state))
    return _report(ctx, _spec("q-norm-sandwich"), samples, slack=ctx.tol.fd_slack)


@register("q-component-bounds", "q-component-bounds", "|𝒳₁| ≤ 4Λ₁|Y|, |𝒳₂| ≤ 14Λ₁|Y|",
          gates=(GATE_K1, GATE_D0))
def _q_components(ctx: SuiteContext, rng: np.random.Generator) -> CheckReport:
    samples = []
    first, second = component_bounds()
    r = ctx.radius
    draws = _q_samples(ctx, rng, ctx.sampling.heavy_points, r / 2, r / 2)
    for x_p, X, Y, y_len in draws:
        t = float(rng.uniform())
        x1, x2 = ctx.moser.q_components(t, x_p, X, Y, r, ctx.budget)
        state = {"x_p": x_p, "X": X, "Y": Y, "t": t}
        samples.append(Sample(ctx.scene.tangent_norm(x_p, x1), first * y_len, state))
        samples.append(Sample(ctx.scene.tangent_norm(x_p, x2), second * y_len, state))
    return _report(ctx, _spec("q-component-bounds"), samples, slack=ctx.tol.fd_slack)


@register("q-component-derivatives", "q-component-derivatives",
          "|D𝒳₁| ≤ 12Λ₂ + 12Λ₁, |D𝒳₂| ≤ 40Λ₂ + 82Λ₁", gates=(GATE_K1, GATE_D0))
def _q_component_derivatives(
    ctx: SuiteContext, rng: np.random.Generator
) -> CheckReport:
    samples = []
    n = ctx.bundle.n
    first, second = component_derivative_bounds()
    r = ctx.radius
    draws = _q_samples(ctx, rng, ctx.sampling.heavy_points, r / 2, r / 2)
    for x_p, X, Y, _ in draws:
        t = float(rng.uniform())
        _, jac = ctx.moser.q_component_jacobian(t, x_p, X, Y, r, ctx.budget)
        state = {"x_p": x_p, "X": X, "Y": Y, "t": t}
        samples.append(Sample(float(np.linalg.norm(jac[:n], 2)), first, state))
        samples.append(Sample(float(np.linalg.norm(jac[n:], 2)), second, state))
    return _report(
        ctx, _spec("q-component-derivatives"), samples, slack=ctx.tol.fd_slack
    )


# -- exponential maps and Jacobi fields ---------------------------------------


@register("exp-derivative-constants", "exp-derivative-constants",
          "Exponential map derivative constants on L")
def _exp_constants(ctx: SuiteContext, rng: np.random.Generator) -> CheckReport:
    return exp_derivative_constants_check(
        ctx.scene, ctx.radius, ctx.budget, rng, ctx.sampling.heavy_points,
        slack=ctx.tol.fd_slack, check_margin=ctx.tol.check_margin, seed=ctx.seed,
        ode_step=ctx.tol.ode_step,
    )


@register("exp-derivative-bounds", "exp-derivative-squared",
          "Exponential map derivative squared bounds on L")
def _exp_bounds(ctx: SuiteContext, rng: np.random.Generator) -> CheckReport:
    return exp_derivative_constants_check(
        ctx.scene, ctx.radius, ctx.budget, rng, ctx.sampling.heavy_points,
        slack=ctx.tol.fd_slack, check_margin=ctx.tol.check_margin, seed=ctx.seed,
        ode_step=ctx.tol.ode_step, squared=True,
    )


@register(
    "energy-bound", "energy-growth", "|J|² + |∇J|² growth along normal geodesics"
)
def _energy_bound(ctx: SuiteContext, rng: np.random.Generator) -> CheckReport:
    samples = []
    ambient = ctx.scene.ambient
    dim = ambient.dimension_real
    for v in ctx.tube_points(rng, ctx.sampling.heavy_points):
        seg = normal_geodesic(ctx.bundle, v)
        if seg.speed == 0.0:
            continue
        p = seg.start
        j0, dj0 = rng.standard_normal(dim), rng.standard_normal(dim)
        init = JacobiState(ambient.tangent(p, j0), ambient.tangent(p, dj0), 0.0)
        path = integrate_jacobi(seg, init, step=ctx.tol.ode_step, method="rk4")
        e0 = path[0].energy(ambient)
        for eps in (0.0, 2.0):
            for state in path[:: max(1, len(path) // 20)]:
                rhs = energy_bound_rhs(
                    e0, ctx.budget.C0, 0.0, eps, seg.speed, state.s
                )
                info = {"v": v.coords, "s": state.s, "epsilon": eps}
                samples.append(Sample(state.energy(ambient), rhs * (1 + 1e-9), info))
    if not samples:
        raise InputError("every sampled normal geodesic is constant")
    return _report(ctx, _spec("energy-bound"), samples)


@register(
    "numeric-regressions", "printed-constants", "Printed constants re-evaluated"
)
def _regressions(ctx: SuiteContext, rng: np.random.Generator) -> CheckReport:
    report = numeric_regressions()
    return report.model_copy(update={"seed": ctx.seed})


# -- structure identities -----------------------------------------------------


@register("sasaki-form-closed", "sasaki-form-closed", "dω̃ = 0")
def _closed(ctx: SuiteContext, rng: np.random.Generator) -> CheckReport:
    samples = [
        Sample(ctx.bundle.closedness_defect(v), IDENTITY_TOL, {"v": v.coords})
        for v in ctx.tube_points(rng, ctx.sampling.points)
    ]
    return _report(ctx, _spec("sasaki-form-closed"), samples)


@register("sasaki-metric-compatible", "sasaki-metric-compatible", "∇ᴳG = 0")
def _metric_compatible(ctx: SuiteContext, rng: np.random.Generator) -> CheckReport:
    samples = []
    for v in ctx.tube_points(rng, ctx.sampling.points):
        deriv = ctx.bundle.covariant_derivative_form(
            ctx.bundle.lift_metric, v, ctx.tol.fd_step
        )
        defect = float(np.max(np.abs(deriv)))
        samples.append(Sample(defect, IDENTITY_TOL, {"v": v.coords}))
    return _report(ctx, _spec("sasaki-metric-compatible"), samples)


@register("ambient-kahler", "ambient-kahler", "∇J = 0 and ω = g(J·,·) on M")
def _kahler(ctx: SuiteContext, rng: np.random.Generator) -> CheckReport:
    ambient = ctx.scene.ambient
    samples = [
        Sample(ambient.kahler_defect(ctx.scene.immerse(x)), IDENTITY_TOL, {"x": x})
        for x in ctx.scene.sample_parameters(rng, ctx.sampling.points)
    ]
    return _report(ctx, _spec("ambient-kahler"), samples)


@register("lagrangian-condition", "lagrangian-condition", "ι*ω = 0")
def _lagrangian(ctx: SuiteContext, rng: np.random.Generator) -> CheckReport:
    samples = [
        Sample(ctx.scene.lagrangian_defect(x), ZERO_SECTION_TOL, {"x": x})
        for x in ctx.scene.sample_parameters(rng, ctx.sampling.points)
    ]
    return _report(ctx, _spec("lagrangian-condition"), samples)


# -- injectivity and the Moser flow -------------------------------------------


@register(
    "injectivity-probe",
    "normal-exponential-injective",
    "No collisions of F on the tube",
)
def _injectivity(ctx: SuiteContext, rng: np.random.Generator) -> CheckReport:
    spec = _spec("injectivity-probe")
    if not (ctx.scene.embedded and ctx.budget.emb is not None):
        return hypothesis_report(
            spec.check_id,
            spec.anchor,
            spec.title,
            "L is compact and embedded",
            seed=ctx.seed,
            inputs=ctx.inputs(),
        )
    bound = injectivity_radius_bound(ctx.budget)
    if ctx.radius > bound:
        return hypothesis_report(
            spec.check_id,
            spec.anchor,
            spec.title,
            "r <= injectivity bound",
            seed=ctx.seed,
            inputs=ctx.inputs(bound=bound),
        )
    return injectivity_probe(
        ctx.bundle,
        ctx.radius,
        rng,
        ctx.sampling.pairs,
        ctx.tol.collision_tol,
        seed=ctx.seed,
    )


@register("flow-containment", "flow-containment",
          "Trajectories from the α-subtube stay in the tube", gates=(GATE_K1,))
def _containment(ctx: SuiteContext, rng: np.random.Generator) -> CheckReport:
    samples = []
    for v in ctx.tube_points(rng, ctx.sampling.flow_starts, ctx.start_radius):
        result = ctx.moser.flow(v, ctx.tube, raise_on_exit=False)
        peak = max(ctx.bundle.fiber_norm(NormalBundlePoint.from_coords(c))
                   for c in result.trajectory)
        info = {"v": v.coords, "exit_time": result.exit_time}
        samples.append(Sample(peak, ctx.radius, info))
    return _report(ctx, _spec("flow-containment"), samples,
                   start_radius=ctx.start_radius)


@register("flow-methods-agree", "flow-uniqueness", "Picard and RK4 flows agree",
          gates=(GATE_K1,))
def _methods_agree(ctx: SuiteContext, rng: np.random.Generator) -> CheckReport:
    samples = []
    count = min(ctx.sampling.flow_starts, ctx.sampling.heavy_points)
    for v in ctx.tube_points(rng, count, ctx.start_radius):
        rk4 = ctx.moser.flow(v, ctx.tube, "rk4")
        picard = ctx.moser.flow(v, ctx.tube, "picard")
        gap = float(np.max(np.abs(rk4.endpoint.coords - picard.endpoint.coords)))
        samples.append(Sample(gap, METHOD_GAP_TOL, {"v": v.coords}))
    return _report(ctx, _spec("flow-methods-agree"), samples)


@register("moser-symplectic", "moser-symplectic", "Θ*ω = ω̃", gates=(GATE_K1,))
def _residual(ctx: SuiteContext, rng: np.random.Generator) -> CheckReport:
    samples = []
    count = min(ctx.sampling.flow_starts, ctx.sampling.heavy_points)
    for v in ctx.tube_points(rng, count, ctx.start_radius):
        samples.append(Sample(ctx.moser.symplectic_residual(v, ctx.tube), RESIDUAL_TOL,
                              {"v": v.coords}))
    return _report(ctx, _spec("moser-symplectic"), samples)


@register("area-preservation", "area-preservation", "Θ preserves ω̃-areas",
          gates=(GATE_K1,))
def _area(ctx: SuiteContext, rng: np.random.Generator) -> CheckReport:
    spec = _spec("area-preservation")
    if ctx.bundle.n != 1 or not isinstance(ctx.scene.ambient, FlatComplexSpace):
        return hypothesis_report(spec.check_id, spec.anchor, spec.title,
                                 "curve in flat C", seed=ctx.seed, inputs=ctx.inputs())
    samples = []
    size = ctx.start_radius / 4
    count = min(ctx.sampling.flow_starts, ctx.sampling.heavy_points, 10)
    for v in ctx.tube_points(rng, count, ctx.start_radius / 2):
        samples.append(Sample(ctx.moser.area_defect(v, ctx.tube, size), RESIDUAL_TOL,
                              {"v": v.coords, "size": size}))
    return _report(ctx, spec, samples)


# -- running ------------------------------------------------------------------


def list_checks() -> list[tuple[str, str, str]]:
    """(check_id, anchor, title) of every registered check, in run order."""
    return [(s.check_id, s.anchor, s.title) for s in REGISTRY.values()]


def _error_report(ctx: SuiteContext, spec: CheckSpec, error: TubeError) -> CheckReport:
    logger.warning("%s raised %s: %s", spec.check_id, type(error).__name__, error)
    return CheckReport(
        check_id=spec.check_id, anchor=spec.anchor, title=spec.title, verdict="fail",
        worst_margin=-1e300, seed=ctx.seed, inputs=ctx.inputs(),
        failing_sample={"error": f"{type(error).__name__}: {error}"},
    )


def run_check(ctx: SuiteContext, check_id: str) -> CheckReport:
    """Run one registered check, or report its unmet radius hypothesis."""
    try:
        spec = REGISTRY[check_id]
    except KeyError:
        raise InputError(f"unknown check id {check_id!r}") from None
    for gate in spec.gates:
        if not ctx.gates[gate]:
            return hypothesis_report(spec.check_id, spec.anchor, spec.title, gate,
                                     seed=ctx.seed, inputs=ctx.inputs())
    try:
        return spec.run(ctx, ctx.rng(check_id))
    except TubeError as e:
        return _error_report(ctx, spec, e)


def run_suite(
    config: SceneConfig,
    check_ids: list[str] | None = None,
    radius: float | None = None,
    use_printed_alpha: bool = False,
    progress: bool = False,
) -> SuiteReport:
    """Run the selected checks (all by default) and attach the radius certificates."""
    selected = list(REGISTRY) if not check_ids else list(check_ids)
    unknown = [c for c in selected if c not in REGISTRY]
    if unknown:
        raise InputError(f"unknown check id(s): {', '.join(unknown)}")
    ctx = SuiteContext(config, radius)
    logger.info("scene %r: r = %.6g, gates %s", config.name, ctx.radius, ctx.gates)
    checks = []
    for check_id in tqdm(selected, desc="checks", unit="check", disable=not progress):
        report = run_check(ctx, check_id)
        if progress and report.verdict == "fail":
            message = f"Failed {check_id}: margin {report.worst_margin}"
            tqdm.write(click.style(message, fg="red"))
        checks.append(report)
    return SuiteReport(
        scene=config.name,
        seed=ctx.seed,
        radius=ctx.radius,
        checks=checks,
        certificates=ctx.certificates(use_printed_alpha),
    )


def run_moser(
    config: SceneConfig,
    radius: float | None = None,
    starts: int | None = None,
    residuals: bool = True,
    progress: bool = False,
) -> MoserReport:
    """Flow from starts in the practical α-subtube.

    Each start records its endpoint, the RK4/Picard gap, containment and the
    symplectic residual of Θ.
    """
    ctx = SuiteContext(config, radius)
    count = starts if starts is not None else config.sampling.flow_starts
    if count < 1:
        raise InputError(f"need at least one start, got {count}")
    rng = ctx.rng("moser")
    flows = []
    for v in tqdm(ctx.tube_points(rng, count, ctx.start_radius), desc="trajectories",
                  unit="start", disable=not progress):
        rk4 = ctx.moser.flow(v, ctx.tube, "rk4", raise_on_exit=False)
        gap = None
        if rk4.stayed_inside:
            picard = ctx.moser.flow(v, ctx.tube, "picard", raise_on_exit=False)
            gap = float(np.max(np.abs(rk4.endpoint.coords - picard.endpoint.coords)))
        residual = ctx.moser.symplectic_residual(v, ctx.tube) \
            if residuals and rk4.stayed_inside else None
        flows.append(FlowSample(
            x=list(v.x), xi=list(v.xi),
            endpoint_x=list(rk4.endpoint.x), endpoint_xi=list(rk4.endpoint.xi),
            method="rk4", steps=rk4.steps, stayed_inside=rk4.stayed_inside,
            method_gap=gap, residual=residual,
        ))
    gaps = [s.method_gap for s in flows if s.method_gap is not None]
    res = [s.residual for s in flows if s.residual is not None]
    return MoserReport(
        scene=config.name,
        radius=ctx.radius,
        start_radius=ctx.start_radius,
        alpha_practical=float(ctx.lipschitz.alpha),
        alpha_notes=list(ctx.lipschitz.notes),
        samples=flows,
        max_residual=max(res) if res else None,
        max_method_gap=max(gaps) if gaps else None,
        all_inside=all(s.stayed_inside for s in flows),
    )
