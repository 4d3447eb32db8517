"""Product torus: one round circle per complex coordinate of ℂⁿ."""

import math

import numpy as np

from weinstein_tube.ambient import FlatComplexSpace
from weinstein_tube.errors import InputError
from weinstein_tube.lagrangian.base import Jet, LagrangianScene
from weinstein_tube.models import ExtrinsicBudget


class TorusScene(LagrangianScene):
    """x ↦ (r₁cos x₁, r₁sin x₁, ..., rₙcos xₙ, rₙsin xₙ)."""

    kind = "torus"
    constant_induced_metric = True
    parallel_second_fundamental_form = True

    def __init__(self, radii: list[float] | np.ndarray, fd_step: float = 1e-5) -> None:
        radii = np.asarray(radii, dtype=float).reshape(-1)
        if radii.size == 0 or np.any(radii <= 0):
            raise InputError(f"torus radii must be positive, got {radii}")
        super().__init__(FlatComplexSpace(radii.size), fd_step)
        self.radii = radii

    @property
    def period(self) -> np.ndarray:
        return np.full(self.n, 2 * math.pi)

    def jet(self, x: np.ndarray) -> Jet:
        n = self.n
        coords = np.empty(2 * n)
        first = np.zeros((2 * n, n))
        second = np.zeros((2 * n, n, n))
        for i, (r, t) in enumerate(zip(self.radii, x)):
            c, s = math.cos(t), math.sin(t)
            coords[2 * i : 2 * i + 2] = r * c, r * s
            first[2 * i : 2 * i + 2, i] = -r * s, r * c
            second[2 * i : 2 * i + 2, i, i] = -r * c, -r * s
        return 0, coords, first, second

    def exact_extrinsic_budget(self) -> ExtrinsicBudget:
        return ExtrinsicBudget(A0=1.0 / float(np.min(self.radii)))

    def exact_intrinsic_distance(self, x1: np.ndarray, x2: np.ndarray) -> float:
        gap = np.abs(x1 - x2) % (2 * math.pi)
        gap = np.minimum(gap, 2 * math.pi - gap)
        return float(np.linalg.norm(self.radii * gap))

    def extremal_pairs(self) -> list[tuple[np.ndarray, np.ndarray]]:
        return [
            (np.full(self.n, a), np.full(self.n, a + math.pi))
            for a in np.linspace(0.0, 2 * math.pi, 4, endpoint=False)
        ]
