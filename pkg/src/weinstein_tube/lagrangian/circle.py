"""Round circle θ ↦ c + r(cos θ, sin θ) in ℂ¹."""

import math

import numpy as np

from weinstein_tube.ambient import FlatComplexSpace
from weinstein_tube.lagrangian.base import Jet, LagrangianScene
from weinstein_tube.models import ExtrinsicBudget


class CircleScene(LagrangianScene):
    kind = "circle"
    constant_induced_metric = True
    parallel_second_fundamental_form = True

    def __init__(
        self,
        radius: float = 1.0,
        center: tuple[float, float] = (0.0, 0.0),
        fd_step: float = 1e-5,
    ) -> None:
        super().__init__(FlatComplexSpace(1), fd_step)
        self.radius = float(radius)
        self.center = np.asarray(center, dtype=float)

    @property
    def period(self) -> np.ndarray:
        return np.array([2 * math.pi])

    def jet(self, x: np.ndarray) -> Jet:
        c, s = math.cos(x[0]), math.sin(x[0])
        r = self.radius
        coords = self.center + r * np.array([c, s])
        first = r * np.array([[-s], [c]])
        second = -r * np.array([c, s]).reshape(2, 1, 1)
        return 0, coords, first, second

    def exact_extrinsic_budget(self) -> ExtrinsicBudget:
        return ExtrinsicBudget(A0=1.0 / self.radius)

    def exact_intrinsic_distance(self, x1: np.ndarray, x2: np.ndarray) -> float:
        gap = abs(x1[0] - x2[0]) % (2 * math.pi)
        return self.radius * min(gap, 2 * math.pi - gap)

    def extremal_pairs(self) -> list[tuple[np.ndarray, np.ndarray]]:
        return [
            (np.array([a]), np.array([a + math.pi]))
            for a in np.linspace(0.0, 2 * math.pi, 8, endpoint=False)
        ]
