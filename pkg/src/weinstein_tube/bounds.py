"""Explicit constants and radii of the tubular-neighborhood theorem.

Every headline radius is carried as a LogReal so that quantities like 10⁻¹⁰⁰/B or
e^{-√2 L} stay representable. Infinity is a tagged state, never a float sentinel.
"""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

from weinstein_tube.errors import InputError
from weinstein_tube.math_utils import bisect_largest, expanding_bracket
from weinstein_tube.models import (
    BoundCertificate,
    CheckReport,
    GeometryBudget,
    LogRealModel,
)
from weinstein_tube.reporting import Sample, inequality_report

logger = logging.getLogger(__name__)

LN10 = math.log(10.0)

# universal constants of the Moser vector field in Qₚ coordinates
LAMBDA1 = 10.0
LAMBDA2 = 294.0
MU_FACTOR = 5.0
MU_DERIVATIVE_BOUND = 24.0
VECTOR_FIELD_FACTOR = 10.0
# 4(2C₀)²e^{124/17} = 23545.88…C₀² needs 154 rather than the printed 109
EXP_DERIVATIVE_CONSTANTS = (2.0, 38.0, 154.0)
RADIUS_DIVISOR = 1396.0
HEADLINE_CONSTANT_LOG10 = -100.0

ALPHA_DISCREPANCY = (
    "the printed subtube factor 7√2/(7√2+629(e^{140√2}-1)) swaps the roles of C and L "
    "in √2L/(√2L+C(e^{√2L}-1)); both values are reported"
)
PRACTICAL_NOTE = "not certified: alpha is measured on samples of the component field"


@dataclass(frozen=True)
class LogReal:
    """sign · e^{log}; sign 0 is zero, `infinite` is +∞ or -∞ by sign."""

    sign: int
    log: float = 0.0
    infinite: bool = False

    @classmethod
    def from_float(cls, value: float) -> "LogReal":
        if math.isinf(value):
            return cls(1 if value > 0 else -1, 0.0, True)
        if math.isnan(value):
            raise InputError("NaN cannot be represented")
        if value == 0:
            return ZERO
        return cls(1 if value > 0 else -1, math.log(abs(value)))

    @classmethod
    def exp(cls, exponent: float) -> "LogReal":
        return cls(1, exponent)

    @classmethod
    def from_log10(cls, log10: float) -> "LogReal":
        return cls(1, log10 * LN10)

    @property
    def log10(self) -> float | None:
        if self.sign == 0 or self.infinite:
            return None
        return self.log / LN10

    def to_float(self) -> float:
        if self.infinite:
            return self.sign * math.inf
        if self.sign == 0:
            return 0.0
        if self.log > 709.78:
            return self.sign * math.inf
        return self.sign * math.exp(self.log)

    def __float__(self) -> float:
        return self.to_float()

    def __neg__(self) -> "LogReal":
        return LogReal(-self.sign, self.log, self.infinite)

    def __mul__(self, other: "LogReal | float") -> "LogReal":
        other = _lift(other)
        if self.sign == 0 or other.sign == 0:
            if self.infinite or other.infinite:
                raise InputError("0 * inf is undefined")
            return ZERO
        if self.infinite or other.infinite:
            return LogReal(self.sign * other.sign, 0.0, True)
        return LogReal(self.sign * other.sign, self.log + other.log)

    __rmul__ = __mul__

    def reciprocal(self) -> "LogReal":
        if self.sign == 0:
            return INFINITY
        if self.infinite:
            return ZERO
        return LogReal(self.sign, -self.log)

    def __truediv__(self, other: "LogReal | float") -> "LogReal":
        return self * _lift(other).reciprocal()

    def __rtruediv__(self, other: float) -> "LogReal":
        return _lift(other) * self.reciprocal()

    def __pow__(self, exponent: float) -> "LogReal":
        if self.sign < 0:
            raise InputError("powers of negative LogReals are not supported")
        if self.sign == 0:
            return ZERO if exponent > 0 else INFINITY
        if self.infinite:
            return INFINITY if exponent > 0 else ZERO
        return LogReal(1, self.log * exponent)

    def __add__(self, other: "LogReal | float") -> "LogReal":
        other = _lift(other)
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        if self.infinite or other.infinite:
            if self.infinite and other.infinite and self.sign != other.sign:
                raise InputError("inf - inf is undefined")
            return self if self.infinite else other
        big, small = (self, other) if self.log >= other.log else (other, self)
        ratio = math.exp(small.log - big.log)
        if big.sign == small.sign:
            return LogReal(big.sign, big.log + math.log1p(ratio))
        if ratio == 1.0:
            return ZERO
        return LogReal(big.sign, big.log + math.log1p(-ratio))

    __radd__ = __add__

    def __sub__(self, other: "LogReal | float") -> "LogReal":
        return self + (-_lift(other))

    def __lt__(self, other: "LogReal | float") -> bool:
        other = _lift(other)
        if self.sign != other.sign:
            return self.sign < other.sign
        if self.sign == 0:
            return False
        if self.infinite or other.infinite:
            if self.infinite and other.infinite:
                return False
            # same sign: the infinite one is the extreme
            return other.infinite == (self.sign > 0)
        return self.log < other.log if self.sign > 0 else self.log > other.log

    def __le__(self, other: "LogReal | float") -> bool:
        return self == _lift(other) or self < other

    def __gt__(self, other: "LogReal | float") -> bool:
        return _lift(other) < self

    def __ge__(self, other: "LogReal | float") -> bool:
        return _lift(other) <= self

    def to_model(self) -> LogRealModel:
        if self.infinite:
            return LogRealModel(sign=self.sign, log10=None, infinite=True)
        return LogRealModel(sign=self.sign, log10=self.log10)

    def display(self, digits: int = 2) -> str:
        """'10^{-100.30}' style text, or a plain decimal when representable."""
        if self.infinite:
            return "inf" if self.sign > 0 else "-inf"
        if self.sign == 0:
            return "0"
        log10 = self.log / LN10
        if -6 <= log10 <= 6:
            return f"{self.to_float():.6g}"
        prefix = "-" if self.sign < 0 else ""
        return f"{prefix}10^{{{log10:.{digits}f}}}"


ZERO = LogReal(0)
INFINITY = LogReal(1, 0.0, True)


def _lift(value: "LogReal | float") -> LogReal:
    return value if isinstance(value, LogReal) else LogReal.from_float(float(value))


def _check_lambda(lam: float) -> None:
    if lam < 0 or math.isnan(lam):
        raise InputError(f"lambda must be nonnegative, got {lam}")


def _budget_inputs(budget: GeometryBudget) -> dict[str, float | None]:
    return budget.model_dump()


# -- K₀, K₁ and the curvature bounds of L -------------------------------------


def k0(lam: float, budget: GeometryBudget) -> float:
    """K₀(λ) = 2λ²C₀(1+λ²A₀²)e^{1+λ²C₀} + λA₀."""
    _check_lambda(lam)
    c0, a0 = budget.C0, budget.A0
    return 2 * lam**2 * c0 * (1 + lam**2 * a0**2) * math.exp(1 + lam**2 * c0) + lam * a0


def k1(lam: float, budget: GeometryBudget) -> float:
    """K₁(λ), the bound |∇F★| ≤ K₁(λ) on the λ-tube; K₁(0) = 2eA₀."""
    _check_lambda(lam)
    c0, c1, a0, a1 = budget.C0, budget.C1, budget.A0, budget.A1
    cb0 = c0 + 2 * a0**2
    inner = (
        2 * a0
        + 2 * cb0 * lam
        + a1 * lam
        + 0.5 * a0 * cb0 * lam**2
        + (2 * c1 * lam**2 + 4 * c0 * lam)
        * (1 + a0**2 * lam**2)
        * math.exp(1 + lam**2 * c0)
    )
    return inner * math.exp(1 + c0 * lam**2 / 2)


def bar_constants(budget: GeometryBudget) -> tuple[float, float, float]:
    """(C̄₀, C̄₁, C̄₂): curvature bounds of (L, g|_L) from the Gauss equation."""
    c0, c1, c2 = budget.C0, budget.C1, budget.C2
    a0, a1, a2 = budget.A0, budget.A1, budget.A2
    cb0 = c0 + 2 * a0**2
    cb1 = c1 + 4 * c0 * a0 + 4 * a1 * a0
    cb2 = c2 + 9 * c1 * a0 + 4 * c0 * a1 + 12 * c0 * a0**2 + 4 * a2 * a0 + 4 * a1**2
    return cb0, cb1, cb2


def d0_poly(x: float, triple: tuple[float, float, float]) -> float:
    """D₀(x) = c₂x² + 6c₁²x⁴ + 20c₀c₁x³ + 17c₀²x² + 3c₁x."""
    if x < 0:
        raise InputError(f"D0 argument must be nonnegative, got {x}")
    c0, c1, c2 = triple
    return (
        c2 * x**2
        + 6 * c1**2 * x**4
        + 20 * c0 * c1 * x**3
        + 17 * c0**2 * x**2
        + 3 * c1 * x
    )


# -- radius hypotheses --------------------------------------------------------


def _largest(predicate: Callable[[float], bool], start: float) -> float:
    bracket = expanding_bracket(predicate, start)
    if bracket is None:
        return math.inf
    lo, hi = bracket
    return bisect_largest(predicate, lo, hi, rel_tol=1e-12, max_iter=200)


def radius_k1(budget: GeometryBudget) -> float:
    """Largest r with rK₁(r) ≤ e; +∞ for a zero budget. Implies K₀(r) ≤ ½."""
    if k1(1.0, budget) == 0.0:
        return math.inf
    return _largest(lambda r: r * k1(r, budget) <= math.e, 1.0)


def radius_d0(budget: GeometryBudget) -> float:
    """Largest r with D₀(r) ≤ C̄₀ for the L-curvature triple; +∞ when C̄₀ = 0."""
    bars = bar_constants(budget)
    if bars[0] == 0.0:
        return math.inf
    return _largest(lambda r: d0_poly(r, bars) <= bars[0], 1.0)


def min_expression(budget: GeometryBudget) -> float:
    """min{1/√C₀, C₀/C₁, √C₀/√C₂, 1/A₀, A₀/A₁, √A₀/√A₂}, ∞ entries for zero C₀ or A₀."""
    terms = [math.inf]
    c0, c1, c2 = budget.C0, budget.C1, budget.C2
    a0, a1, a2 = budget.A0, budget.A1, budget.A2
    if c0 > 0:
        terms.append(1 / math.sqrt(c0))
        if c1 > 0:
            terms.append(c0 / c1)
        if c2 > 0:
            terms.append(math.sqrt(c0) / math.sqrt(c2))
    if a0 > 0:
        terms.append(1 / a0)
        if a1 > 0:
            terms.append(a0 / a1)
        if a2 > 0:
            terms.append(math.sqrt(a0) / math.sqrt(a2))
    return min(terms)


def radius_1396(budget: GeometryBudget) -> float:
    """min_expression / 1396; implies rK₁(r) ≤ e and D₀(r) ≤ C̄₀."""
    return min_expression(budget) / RADIUS_DIVISOR


def hypotheses_hold(r: float, budget: GeometryBudget) -> tuple[bool, bool]:
    """(rK₁(r) ≤ e, D₀(r) ≤ C̄₀) evaluated directly."""
    if math.isinf(r):
        zero = k1(1.0, budget) == 0.0
        return zero, bar_constants(budget)[0] == 0.0
    bars = bar_constants(budget)
    return r * k1(r, budget) <= math.e, d0_poly(r, bars) <= bars[0]


# -- B, B★ and the headline radii ---------------------------------------------


def budget_B(budget: GeometryBudget) -> float:
    """max{C₀^{1/2}, C₁^{1/3}, C₂^{1/4}, A₀, A₁^{1/2}, A₂^{1/3}}.

    Homogeneous of degree -1/2 in the metric scale.
    """
    return max(
        budget.C0**0.5, budget.C1 ** (1 / 3), budget.C2**0.25,
        budget.A0, budget.A1**0.5, budget.A2 ** (1 / 3),
    )


def budget_Bstar(budget: GeometryBudget) -> float:
    """3·emb·max{1/ρ₀, B-terms}; ρ₀ = ∞ contributes 0."""
    if budget.emb is None:
        raise InputError("B* needs the embedding constant emb")
    inv_rho = 0.0 if budget.rho0 is None else 1.0 / budget.rho0
    return 3 * budget.emb * max(inv_rho, budget_B(budget))


def r_imm(B: float) -> LogReal:
    """10⁻¹⁰⁰/B; +∞ for B = 0."""
    if B < 0:
        raise InputError(f"B must be nonnegative, got {B}")
    if B == 0:
        return INFINITY
    return LogReal.from_log10(HEADLINE_CONSTANT_LOG10) / B


def r_emb(Bstar: float) -> LogReal:
    """10⁻¹⁰⁰/B★; +∞ for B★ = 0."""
    return r_imm(Bstar)


def lindelof_alpha(C: float, L: float) -> LogReal:
    """α = √2L / (√2L + C(e^{√2L} - 1)), evaluated in the log domain."""
    if C <= 0 or L <= 0:
        raise InputError(f"C and L must be positive, got C={C}, L={L}")
    a = math.sqrt(2) * L
    log_num = math.log(a)
    # ln(C(e^a - 1)) = ln C + a + ln(1 - e^{-a})
    log_drift = math.log(C) + a + math.log1p(-math.exp(-a)) if a > 1e-8 \
        else math.log(C * math.expm1(a))
    return LogReal(1, log_num - _logaddexp(log_num, log_drift))


def printed_alpha() -> LogReal:
    """The subtube factor 7√2/(7√2 + 629(e^{140√2} - 1)) for C = 140, L = 12580."""
    a = 140 * math.sqrt(2)
    log_num = math.log(7 * math.sqrt(2))
    log_drift = math.log(629) + a + math.log1p(-math.exp(-a))
    return LogReal(1, log_num - _logaddexp(log_num, log_drift))


def universal_lindelof_inputs() -> tuple[float, float]:
    """(C, L) = (14Λ₁, 40Λ₂ + 82Λ₁) for the Moser field in Qₚ coordinates."""
    return 14 * LAMBDA1, 40 * LAMBDA2 + 82 * LAMBDA1


def _logaddexp(a: float, b: float) -> float:
    big, small = max(a, b), min(a, b)
    return big + math.log1p(math.exp(small - big))


def practical_radius(budget: GeometryBudget, alpha: LogReal) -> LogReal:
    """Non-certified subtube radius radius_1396 · α/2."""
    r = radius_1396(budget)
    if math.isinf(r):
        return INFINITY
    return alpha * (r / 2)


def injectivity_radius_bound(budget: GeometryBudget) -> float:
    """(1/(3 emb)) min{ρ₀, π/(2√C₀), (1/√C₀) arctan(√C₀/A₀)}.

    C₀ = 0 drops the last two terms for 1/A₀; A₀ = 0 reads the arctan as π/2.
    """
    if budget.emb is None:
        raise InputError("the injectivity bound needs the embedding constant emb")
    c0, a0 = budget.C0, budget.A0
    terms = [math.inf if budget.rho0 is None else budget.rho0]
    if c0 > 0:
        root = math.sqrt(c0)
        terms.append(math.pi / (2 * root))
        terms.append(math.atan(root / a0) / root if a0 > 0 else math.pi / (2 * root))
    elif a0 > 0:
        terms.append(1 / a0)
    return min(terms) / (3 * budget.emb)


# -- bounds consumed by the inequality suite ----------------------------------


def pushforward_bound(lam: float, budget: GeometryBudget) -> float:
    """|F★X|²/|X|²_G ≤ (1+λ²A₀²)e^{1+λ²C₀}."""
    _check_lambda(lam)
    return (1 + lam**2 * budget.A0**2) * math.exp(1 + lam**2 * budget.C0)


def nondegeneracy_bound(lam: float, budget: GeometryBudget) -> float:
    """(F*ω)(X, J̃X) ≥ (1 - K₀(λ))|X|²_G."""
    return 1 - k0(lam, budget)


def omega_t_lower_bound(t: float, lam: float, budget: GeometryBudget) -> float:
    """ωₜ(X, J̃X) ≥ (1 - tK₀(λ))|X|²_G."""
    if not 0 <= t <= 1:
        raise InputError(f"t must lie in [0, 1], got {t}")
    return 1 - t * k0(lam, budget)


def sasaki_structure_derivative_bound(lam: float, budget: GeometryBudget) -> float:
    """|∇ᴳJ̃|_G and |∇ᴳω̃|_G ≤ √2 C̄₀ λ."""
    _check_lambda(lam)
    return math.sqrt(2) * bar_constants(budget)[0] * lam


def pullback_derivative_bound(lam: float, budget: GeometryBudget) -> float:
    """|∇ᴳ(F*ω)|_G ≤ 2√(1+λ²A₀²) e^{1/2+λ²C₀/2} K₁(λ)."""
    return (
        2 * math.sqrt(1 + lam**2 * budget.A0**2)
        * math.exp(0.5 + lam**2 * budget.C0 / 2)
        * k1(lam, budget)
    )


def omega_t_derivative_bound(lam: float, budget: GeometryBudget) -> float:
    """|∇ᴳωₜ|_G ≤ √2 C̄₀ λ + 4K₁(λ)."""
    return sasaki_structure_derivative_bound(lam, budget) + 4 * k1(lam, budget)


def component_bounds() -> tuple[float, float]:
    """|𝒳₁| ≤ 4Λ₁|Y| and |𝒳₂| ≤ 14Λ₁|Y|."""
    return 4 * LAMBDA1, 14 * LAMBDA1


def component_derivative_bounds() -> tuple[float, float]:
    """|D𝒳₁| ≤ 12Λ₂ + 12Λ₁ and |D𝒳₂| ≤ 40Λ₂ + 82Λ₁."""
    return 12 * LAMBDA2 + 12 * LAMBDA1, 40 * LAMBDA2 + 82 * LAMBDA1


# -- certificates -------------------------------------------------------------


def certificate(
    name: str,
    formula_id: str,
    value: LogReal | float,
    inputs: dict[str, float | None],
    assumptions: list[str] | None = None,
    provenance: str = "analytic",
    notes: list[str] | None = None,
) -> BoundCertificate:
    value = _lift(value)
    return BoundCertificate(
        name=name,
        formula_id=formula_id,
        inputs=inputs,
        value=value.to_model(),
        display=value.display(),
        assumptions=list(assumptions or []),
        provenance=provenance,  # type: ignore[arg-type]
        notes=list(notes or []),
    )


def weinstein_chain(
    budget: GeometryBudget,
    provenance: str = "analytic",
    use_printed_alpha: bool = False,
    measured_alpha: LogReal | None = None,
    measured_notes: list[str] | None = None,
) -> list[BoundCertificate]:
    """Certificates for every radius of the chain.

    Covers radius_k1, radius_d0, radius_1396, α, the Moser subtube, r_imm and
    r_emb, plus B★ and the injectivity bound when emb is known. A measured α
    adds the non-certified practical_radius.
    """
    inputs = _budget_inputs(budget)
    certs: list[BoundCertificate] = []
    r_k1 = radius_k1(budget)
    r_d0 = radius_d0(budget)
    r_1396 = radius_1396(budget)
    gate_k1, gate_d0 = hypotheses_hold(r_1396, budget)
    gate_notes = []
    if not (gate_k1 and gate_d0):
        gate_notes.append("re-evaluation of the implied hypotheses failed")
    hypotheses = ["rK1(r) <= e", "D0(r) <= Cbar0"]
    cb0, cb1, cb2 = bar_constants(budget)
    certs.append(
        certificate(
            "Cbar",
            "gauss-equation-constants",
            cb0,
            {**inputs, "Cbar1": cb1, "Cbar2": cb2},
            provenance=provenance,
            notes=[f"Cbar1={cb1:.6g}", f"Cbar2={cb2:.6g}"],
        )
    )
    certs.append(
        certificate(
            "radius_k1",
            "r*K1(r)<=e",
            r_k1,
            inputs,
            notes=["implies K0(r) <= 1/2"],
            provenance=provenance,
        )
    )
    certs.append(
        certificate("radius_d0", "D0(r)<=Cbar0", r_d0, inputs, provenance=provenance)
    )
    certs.append(
        certificate(
            "radius_1396",
            "min-expression/1396",
            r_1396,
            inputs,
            assumptions=hypotheses,
            provenance=provenance,
            notes=gate_notes,
        )
    )

    C, L = universal_lindelof_inputs()
    alpha = lindelof_alpha(C, L)
    alpha_printed = printed_alpha()
    if use_printed_alpha:
        logger.warning("subtube factor: %s", ALPHA_DISCREPANCY)
    alpha_inputs: dict[str, float | None] = {"C": C, "L": L}
    certs.append(
        certificate(
            "alpha", "lindelof-alpha", alpha, alpha_inputs, notes=[ALPHA_DISCREPANCY]
        )
    )
    certs.append(
        certificate(
            "alpha_printed",
            "printed-alpha",
            alpha_printed,
            alpha_inputs,
            notes=[ALPHA_DISCREPANCY],
        )
    )
    used = alpha_printed if use_printed_alpha else alpha
    variant = "printed-alpha" if use_printed_alpha else "lindelof-alpha"
    certs.append(
        certificate(
            "moser_subtube",
            "alpha*r/2",
            practical_radius(budget, used),
            inputs,
            assumptions=hypotheses,
            provenance=provenance,
            notes=[f"alpha variant: {variant}"],
        )
    )
    if measured_alpha is not None:
        certs.append(
            certificate(
                "practical_radius",
                "radius_1396*alpha_measured/2",
                practical_radius(budget, measured_alpha),
                {**inputs, "alpha_measured": float(measured_alpha)},
                assumptions=hypotheses,
                provenance="sampled",
                notes=[PRACTICAL_NOTE, *(measured_notes or [])],
            )
        )

    B = budget_B(budget)
    imm = r_imm(B)
    chain_notes = []
    if B > 0:
        # the B-homogeneous budget realizes the min-expression 1/B
        subtube = used * (1 / (2 * RADIUS_DIVISOR * B))
        fits = imm <= subtube
        chain_notes.append(
            f"10^-100/B <= (alpha/2)*radius_1396 for min-expression 1/B: {fits}"
        )
    certs.append(certificate("B", "B-max", B, inputs, provenance=provenance))
    certs.append(
        certificate(
            "r_imm",
            "1e-100/B",
            imm,
            {**inputs, "B": B},
            provenance=provenance,
            notes=chain_notes,
        )
    )
    if budget.emb is not None:
        Bstar = budget_Bstar(budget)
        certs.append(
            certificate(
                "Bstar",
                "Bstar-max",
                Bstar,
                inputs,
                provenance=provenance,
                notes=["the embedded statement assumes B* < inf"],
            )
        )
        certs.append(
            certificate(
                "r_emb",
                "1e-100/Bstar",
                r_emb(Bstar),
                {**inputs, "Bstar": Bstar},
                provenance=provenance,
            )
        )
        certs.append(
            certificate(
                "injectivity_bound",
                "injectivity-min",
                injectivity_radius_bound(budget),
                inputs,
                provenance=provenance,
            )
        )
    logger.info(
        "radius_k1=%.6g radius_d0=%.6g radius_1396=%.6g B=%.6g",
        r_k1,
        r_d0,
        r_1396,
        B,
    )
    return certs


# -- printed-number regressions -----------------------------------------------


def _prefix_gap(value: float, printed: str) -> float:
    """Distance of `value` from the truncation interval of a printed decimal prefix."""
    digits = printed.split(".")[1] if "." in printed else ""
    ulp = 10.0 ** (-len(digits))
    lo = abs(float(printed))
    mag = abs(value)
    if (value < 0) != printed.startswith("-"):
        return abs(value - float(printed))
    if mag < lo:
        return lo - mag
    if mag >= lo + ulp:
        return mag - (lo + ulp)
    return 0.0


def regression_table() -> list[tuple[str, float, str | None, float | None]]:
    """(label, value, printed prefix, upper bound) for every printed decimal."""
    e = math.e
    kappa_sum = 2 + 2 * (1 + 2) + 1 + 0.5 * (1 + 2) + (2 + 4) * 2 * e**2
    d0_sum = (20 + math.sqrt(2)) + 6 * 7**2 * 3 + 20 * 3 * 7 + 17 * 3 + 3 * 7
    return [
        ("(5/4)e^(1+1/(4e))", 1.25 * math.exp(1 + 1 / (4 * e)), "3.725", 4.0),
        ("1/(4e)+1/2", 1 / (4 * e) + 0.5, "0.5919", 1.0),
        ("(10.5+12e^2)e", (10.5 + 12 * e**2) * e, "269.56", None),
        (
            "rK1 coefficient sum at eps=1 (x e^-2)",
            kappa_sum,
            None,
            (10.5 + 12 * e**2) + 1e-12,
        ),
        ("1394+sqrt2", 1394 + math.sqrt(2), "1395.41", None),
        ("D0/Cbar0 coefficient sum", d0_sum, None, 1394 + math.sqrt(2) + 1e-12),
        ("e^(18/17)", math.exp(18 / 17), "2.88", 4.0),
        (
            "4(7/3)^2 e^(71/17)",
            4 * (7 / 3) ** 2 * math.exp(71 / 17),
            "1418.50",
            38.0**2,
        ),
        ("8 e^(124/17) (printed value)", 8 * math.exp(124 / 17), "11772.94", 109.0**2),
        ("4(2)^2 e^(124/17)", 16 * math.exp(124 / 17), "23545.88", 154.0**2),
        ("log10 printed alpha", float(printed_alpha().log10 or 0.0), "-87.78", -87.0),
        ("printed alpha lower", -float(printed_alpha().log10 or 0.0), None, 88.0),
    ]


def numeric_regressions() -> CheckReport:
    """Re-evaluate every printed decimal and the derived-constant chain."""
    samples = []
    for label, value, printed, upper in regression_table():
        if printed is not None:
            samples.append(Sample(_prefix_gap(value, printed), 0.0,
                                  {"label": label, "value": value, "printed": printed}))
        if upper is not None:
            info = {"label": label, "value": value, "bound": upper}
            samples.append(Sample(value, upper, info))
    return inequality_report(
        "numeric-regressions", "printed-constants", "Printed constants re-evaluated",
        samples, provenance="analytic",
    )
