"""Latitude circle on the round sphere.

At colatitude φ the circle is |u| = R cot(φ/2) in chart 0 when φ ≥ π/2 and
|u| = R tan(φ/2) in chart 1 otherwise, so it always stays far from the chart pole.
J∂θ points south along the meridians.
"""

import math

import numpy as np

from weinstein_tube.ambient import RoundSphere
from weinstein_tube.errors import InputError
from weinstein_tube.lagrangian.base import Jet, LagrangianScene
from weinstein_tube.models import ExtrinsicBudget


class LatitudeScene(LagrangianScene):
    kind = "latitude"
    constant_induced_metric = True
    parallel_second_fundamental_form = True

    def __init__(
        self,
        colatitude: float = math.pi / 2,
        sphere_radius: float = 1.0,
        fd_step: float = 1e-5,
    ) -> None:
        if not 0 < colatitude < math.pi:
            raise InputError(f"colatitude must lie in (0, π), got {colatitude}")
        self.sphere = RoundSphere(sphere_radius)
        super().__init__(self.sphere, fd_step)
        self.colatitude = float(colatitude)
        half = 0.5 * self.colatitude
        r = self.sphere.radius
        if self.colatitude >= math.pi / 2:
            self.chart_id, self.chart_radius = 0, r / math.tan(half)
        else:
            self.chart_id, self.chart_radius = 1, r * math.tan(half)

    @property
    def period(self) -> np.ndarray:
        return np.array([2 * math.pi])

    def jet(self, x: np.ndarray) -> Jet:
        c, s = math.cos(x[0]), math.sin(x[0])
        rho = self.chart_radius
        coords = rho * np.array([c, s])
        first = rho * np.array([[-s], [c]])
        second = -rho * np.array([c, s]).reshape(2, 1, 1)
        return self.chart_id, coords, first, second

    @property
    def circle_radius(self) -> float:
        """Radius R sin φ of the latitude circle in R³."""
        return self.sphere.radius * math.sin(self.colatitude)

    def exact_extrinsic_budget(self) -> ExtrinsicBudget:
        a0 = abs(math.cos(self.colatitude)) / self.circle_radius
        # the equator is a great circle
        return ExtrinsicBudget(A0=0.0 if a0 < 1e-14 else a0)

    def exact_intrinsic_distance(self, x1: np.ndarray, x2: np.ndarray) -> float:
        gap = abs(x1[0] - x2[0]) % (2 * math.pi)
        return self.circle_radius * min(gap, 2 * math.pi - gap)

    def extremal_pairs(self) -> list[tuple[np.ndarray, np.ndarray]]:
        return [
            (np.array([0.0]), np.array([math.pi])),
            (np.array([1.0]), np.array([1.0 + math.pi])),
        ]
