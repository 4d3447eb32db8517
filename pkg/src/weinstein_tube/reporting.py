"""Assembly of CheckReport objects from sampled (lhs, rhs) pairs."""

import logging
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from weinstein_tube.errors import InputError
from weinstein_tube.models import CheckReport

logger = logging.getLogger(__name__)


@dataclass
class Sample:
    """One evaluated inequality lhs <= rhs with the state that produced it."""

    lhs: float
    rhs: float
    state: dict[str, Any] = field(default_factory=dict)


def _plain(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return [float(v) for v in value.ravel()]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    return value


def inequality_report(
    check_id: str,
    anchor: str,
    title: str,
    samples: list[Sample],
    *,
    slack: float = 0.0,
    check_margin: float = 0.0,
    seed: int | None = None,
    provenance: str = "sampled",
    inputs: dict[str, float | str | None] | None = None,
) -> CheckReport:
    """Report with margin min(rhs + slack - lhs) - check_margin over the samples."""
    worst: Sample | None = None
    worst_margin = math.inf
    for s in samples:
        margin = s.rhs + slack - s.lhs - check_margin
        if not math.isfinite(s.lhs):
            margin = -math.inf
        if margin < worst_margin or worst is None:
            worst, worst_margin = s, margin
    if worst is None:
        raise InputError(f"check {check_id} produced no samples")
    passed = worst_margin >= 0
    margin_value = worst_margin if math.isfinite(worst_margin) else -1e300
    report = CheckReport(
        check_id=check_id,
        anchor=anchor,
        title=title,
        n_samples=len(samples),
        worst_margin=margin_value,
        worst_lhs=worst.lhs if math.isfinite(worst.lhs) else None,
        worst_rhs=worst.rhs,
        verdict="pass" if passed else "fail",
        provenance=provenance,  # type: ignore[arg-type]
        seed=seed,
        inputs=dict(inputs or {}),
        failing_sample=(
            None if passed else {k: _plain(v) for k, v in worst.state.items()}
        ),
    )
    log = logger.info if passed else logger.warning
    log("%s: %s (worst margin %.3e over %d samples)", check_id, report.verdict,
        margin_value, len(samples))
    return report


def hypothesis_report(
    check_id: str,
    anchor: str,
    title: str,
    hypothesis: str,
    *,
    seed: int | None = None,
    inputs: dict[str, float | str | None] | None = None,
) -> CheckReport:
    """Report for a check whose radius hypothesis does not hold; nothing is sampled."""
    logger.info("%s: hypothesis %r not met, check skipped", check_id, hypothesis)
    return CheckReport(
        check_id=check_id,
        anchor=anchor,
        title=title,
        verdict="hypothesis-not-met",
        hypothesis=hypothesis,
        seed=seed,
        inputs=dict(inputs or {}),
    )
