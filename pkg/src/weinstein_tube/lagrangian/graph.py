"""Graph of df for f(x) = ε sin(kx): the curve x ↦ (x, εk cos kx) in ℂ¹.

The curve is a line (non-compact); sampling uses one period [0, 2π/k]. ε = 0 gives the
real axis, whose tube is already symplectic.
"""

import math

import numpy as np

from weinstein_tube.ambient import FlatComplexSpace
from weinstein_tube.errors import InputError
from weinstein_tube.lagrangian.base import Jet, LagrangianScene
from weinstein_tube.models import ExtrinsicBudget


class GraphScene(LagrangianScene):
    kind = "graph"
    compact = False

    def __init__(
        self, amplitude: float = 0.05, frequency: float = 1.0, fd_step: float = 1e-5
    ) -> None:
        if amplitude < 0 or frequency <= 0:
            raise InputError(
                f"need amplitude >= 0 and frequency > 0, got {amplitude}, {frequency}"
            )
        super().__init__(FlatComplexSpace(1), fd_step)
        self.amplitude = float(amplitude)
        self.frequency = float(frequency)
        if self.amplitude == 0.0:
            self.constant_induced_metric = True
            self.parallel_second_fundamental_form = True

    @property
    def period(self) -> np.ndarray:
        return np.array([2 * math.pi / self.frequency])

    def jet(self, x: np.ndarray) -> Jet:
        eps, k = self.amplitude, self.frequency
        c, s = math.cos(k * x[0]), math.sin(k * x[0])
        coords = np.array([x[0], eps * k * c])
        first = np.array([[1.0], [-eps * k * k * s]])
        second = np.array([0.0, -eps * k**3 * c]).reshape(2, 1, 1)
        return 0, coords, first, second

    def exact_extrinsic_budget(self) -> ExtrinsicBudget | None:
        if self.amplitude == 0.0:
            return ExtrinsicBudget(A0=0.0)
        return None
