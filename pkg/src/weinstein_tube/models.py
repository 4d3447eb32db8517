"""Pydantic models for scene configuration, budgets, certificates and reports."""

import math
from typing import Annotated, Any, Literal

from pydantic import BaseModel, Field, model_validator

# -- scene configuration ------------------------------------------------------


class FlatAmbientSpec(BaseModel):
    """Flat ℂⁿ."""

    kind: Literal["flat"] = "flat"
    n: int = Field(1, ge=1, le=3, description="complex dimension")

    model_config = {"extra": "forbid"}


class SphereAmbientSpec(BaseModel):
    """Round sphere (CP¹) of the given radius."""

    kind: Literal["sphere"] = "sphere"
    radius: float = Field(1.0, gt=0)

    model_config = {"extra": "forbid"}


AmbientSpec = Annotated[
    FlatAmbientSpec | SphereAmbientSpec, Field(discriminator="kind")
]


class CircleSpec(BaseModel):
    """Round circle in ℂ¹."""

    kind: Literal["circle"] = "circle"
    radius: float = Field(1.0, gt=0)
    center: tuple[float, float] = (0.0, 0.0)

    model_config = {"extra": "forbid"}


class TorusSpec(BaseModel):
    """Product of round circles in ℂⁿ, one per radius."""

    kind: Literal["torus"] = "torus"
    radii: list[Annotated[float, Field(gt=0)]] = Field(min_length=1, max_length=3)

    model_config = {"extra": "forbid"}


class GraphSpec(BaseModel):
    """Graph of df for f(x) = amplitude * sin(frequency * x) in ℂ¹."""

    kind: Literal["graph"] = "graph"
    amplitude: float = Field(0.05, ge=0)
    frequency: float = Field(1.0, gt=0)

    model_config = {"extra": "forbid"}


class LatitudeSpec(BaseModel):
    """Latitude circle on the sphere at the given colatitude (radians)."""

    kind: Literal["latitude"] = "latitude"
    colatitude: float = Field(math.pi / 2, gt=0, lt=math.pi)

    model_config = {"extra": "forbid"}


LagrangianSpec = Annotated[
    CircleSpec | TorusSpec | GraphSpec | LatitudeSpec, Field(discriminator="kind")
]


class Sampling(BaseModel):
    seed: int = Field(0, ge=0)
    points: int = Field(1000, ge=1, description="samples per pointwise check")
    pairs: int = Field(10000, ge=1, description="pairs for emb(L) and injectivity")
    flow_starts: int = Field(100, ge=1)
    heavy_points: int = Field(
        50, ge=1, description="samples for checks on derivatives of μ, 𝒳"
    )
    lipschitz_samples: int = Field(20, ge=1)

    model_config = {"extra": "forbid"}


class Tolerances(BaseModel):
    fd_step: float = Field(1e-5, gt=0)
    ode_step: float = Field(1e-3, gt=0)
    check_margin: float = Field(0.0, ge=0)
    fd_slack: float = Field(
        1e-6, ge=0, description="added to the RHS of FD-based checks"
    )
    collision_tol: float = Field(1e-6, gt=0)
    picard_tol: float = Field(1e-10, gt=0)
    picard_max_iter: int = Field(60, ge=1)
    picard_nodes: int = Field(
        33, ge=3, description="time grid of the Picard iteration"
    )
    flow_step: float = Field(2.5e-2, gt=0, description="RK4 step of the Moser flow")
    quadrature_tol: float = Field(1e-12, gt=0)

    model_config = {"extra": "forbid"}


class RadiusPolicy(BaseModel):
    """How the tube radius is chosen when the config does not fix one."""

    mode: Literal["certified", "practical"] = "certified"
    safety_factor: float = Field(0.5, gt=0, le=1)

    model_config = {"extra": "forbid"}


class SceneConfig(BaseModel):
    """Validated scene: ambient manifold, Lagrangian, sampling and tolerances."""

    name: str = "scene"
    ambient: AmbientSpec | None = None
    lagrangian: LagrangianSpec
    sampling: Sampling = Field(default_factory=Sampling)
    tolerances: Tolerances = Field(default_factory=Tolerances)
    radius_policy: RadiusPolicy = Field(default_factory=RadiusPolicy)
    radius: float | None = Field(None, gt=0)

    model_config = {"extra": "forbid"}

    @model_validator(mode="after")
    def _resolve_ambient(self) -> "SceneConfig":
        lag = self.lagrangian
        if isinstance(lag, LatitudeSpec):
            if self.ambient is None:
                self.ambient = SphereAmbientSpec()
            elif not isinstance(self.ambient, SphereAmbientSpec):
                raise ValueError("latitude circles live on a sphere ambient")
            return self
        n = len(lag.radii) if isinstance(lag, TorusSpec) else 1
        if self.ambient is None:
            self.ambient = FlatAmbientSpec(n=n)
        elif not isinstance(self.ambient, FlatAmbientSpec) or self.ambient.n != n:
            raise ValueError(f"{lag.kind} scene needs a flat ambient with n = {n}")
        return self


# -- budgets ------------------------------------------------------------------


class GeometryBudget(BaseModel):
    """Sup-bounds feeding every constant. rho0 = None means inj(M, g) = +inf."""

    C0: float = Field(0.0, ge=0)
    C1: float = Field(0.0, ge=0)
    C2: float = Field(0.0, ge=0)
    A0: float = Field(0.0, ge=0)
    A1: float = Field(0.0, ge=0)
    A2: float = Field(0.0, ge=0)
    rho0: float | None = Field(None, gt=0)
    emb: float | None = Field(None, ge=1)

    model_config = {"extra": "forbid"}

    @model_validator(mode="after")
    def _zero_propagation(self) -> "GeometryBudget":
        # C1 = C2 = 0 if C0 = 0, and likewise for the A's
        if self.C0 == 0:
            self.C1 = self.C2 = 0.0
        if self.A0 == 0:
            self.A1 = self.A2 = 0.0
        return self

    def scaled(self, factor: float) -> "GeometryBudget":
        """Budget of the metric factor * g."""
        return GeometryBudget(
            C0=self.C0 / factor,
            C1=self.C1 / factor**1.5,
            C2=self.C2 / factor**2,
            A0=self.A0 / factor**0.5,
            A1=self.A1 / factor,
            A2=self.A2 / factor**1.5,
            rho0=None if self.rho0 is None else self.rho0 * factor**0.5,
            emb=self.emb,
        )


class ExtrinsicBudget(BaseModel):
    """sup |II|, sup |∇II|, sup |∇²II| over L."""

    A0: float = Field(ge=0)
    A1: float = Field(0.0, ge=0)
    A2: float = Field(0.0, ge=0)
    provenance: Literal["analytic", "sampled"] = "analytic"

    model_config = {"extra": "forbid"}

    @model_validator(mode="after")
    def _zero_propagation(self) -> "ExtrinsicBudget":
        if self.A0 == 0:
            self.A1 = self.A2 = 0.0
        return self


# -- certificates and reports -------------------------------------------------


class LogRealModel(BaseModel):
    """Serialized LogReal: sign * 10**log10, or a tagged infinity."""

    sign: int = Field(ge=-1, le=1)
    log10: float | None = None
    infinite: bool = False

    model_config = {"extra": "forbid"}


class BoundCertificate(BaseModel):
    """One computed constant or radius with its inputs and hypotheses."""

    name: str
    formula_id: str
    inputs: dict[str, float | None] = Field(default_factory=dict)
    value: LogRealModel
    display: str = ""
    assumptions: list[str] = Field(default_factory=list)
    provenance: Literal["analytic", "sampled"] = "analytic"
    notes: list[str] = Field(default_factory=list)

    model_config = {"extra": "forbid"}


Verdict = Literal["pass", "fail", "hypothesis-not-met"]


class CheckReport(BaseModel):
    """Outcome of one sampled inequality or identity check."""

    check_id: str
    anchor: str
    title: str = ""
    n_samples: int = Field(0, ge=0)
    worst_margin: float | None = None
    worst_lhs: float | None = None
    worst_rhs: float | None = None
    verdict: Verdict
    hypothesis: str | None = None
    provenance: Literal["analytic", "sampled"] = "sampled"
    seed: int | None = None
    inputs: dict[str, float | str | None] = Field(default_factory=dict)
    failing_sample: dict[str, Any] | None = None

    model_config = {"extra": "forbid"}

    @model_validator(mode="after")
    def _verdict_matches_margin(self) -> "CheckReport":
        if self.verdict == "hypothesis-not-met":
            if self.hypothesis is None:
                raise ValueError("hypothesis-not-met reports must name the hypothesis")
        elif (self.verdict == "pass") != (
            self.worst_margin is not None and self.worst_margin >= 0
        ):
            raise ValueError(
                f"verdict {self.verdict!r} inconsistent with margin {self.worst_margin}"
            )
        return self


class SuiteReport(BaseModel):
    """Everything `tube verify` emits for one scene."""

    scene: str = ""
    seed: int | None = None
    radius: float | None = None
    checks: list[CheckReport] = Field(default_factory=list)
    certificates: list[BoundCertificate] = Field(default_factory=list)

    model_config = {"extra": "forbid"}


class FlowSample(BaseModel):
    """One Moser trajectory and the residual of Θ at its start."""

    x: list[float]
    xi: list[float]
    endpoint_x: list[float]
    endpoint_xi: list[float]
    method: Literal["picard", "rk4"]
    steps: int
    stayed_inside: bool
    method_gap: float | None = None
    residual: float | None = None

    model_config = {"extra": "forbid"}


class MoserReport(BaseModel):
    """Summary emitted by `tube moser`."""

    scene: str
    radius: float
    start_radius: float
    alpha_practical: float
    alpha_notes: list[str] = Field(default_factory=list)
    samples: list[FlowSample] = Field(default_factory=list)
    max_residual: float | None = None
    max_method_gap: float | None = None
    all_inside: bool = True

    model_config = {"extra": "forbid"}
