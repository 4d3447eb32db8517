"""Flat ℂⁿ with coordinates (x1, y1, ..., xn, yn)."""

import math
from collections.abc import Sequence

import numpy as np

from weinstein_tube.ambient.base import AmbientManifold, AmbientPoint


class FlatComplexSpace(AmbientManifold):
    """ℂⁿ with the Euclidean metric and J(x, y) = (-y, x) on each factor."""

    kind = "flat"

    def __init__(self, n: int = 1) -> None:
        super().__init__(n)
        block = np.array([[0.0, -1.0], [1.0, 0.0]])
        self._j = np.kron(np.eye(n), block)
        self._g = np.eye(2 * n)
        self._gamma = np.zeros((2 * n, 2 * n, 2 * n))

    def chart_contains(self, chart_id: int, coords: np.ndarray) -> bool:
        return chart_id == 0 and bool(np.all(np.isfinite(coords)))

    def metric_matrix(self, p: AmbientPoint) -> np.ndarray:
        return self._g

    def complex_matrix(self, p: AmbientPoint) -> np.ndarray:
        return self._j

    def christoffel(self, p: AmbientPoint) -> np.ndarray:
        return self._gamma

    def curvature_components(
        self, p: AmbientPoint, x: np.ndarray, y: np.ndarray, z: np.ndarray
    ) -> np.ndarray:
        return np.zeros(self.dimension_real)

    def curvature_derivative_components(
        self,
        p: AmbientPoint,
        directions: Sequence[np.ndarray],
        x: np.ndarray,
        y: np.ndarray,
        z: np.ndarray,
    ) -> np.ndarray:
        return np.zeros(self.dimension_real)

    def curvature_in_frame(
        self,
        p: AmbientPoint,
        frame: np.ndarray,
        x: np.ndarray,
        y: np.ndarray,
        z: np.ndarray,
    ) -> np.ndarray:
        return np.zeros_like(np.asarray(x, dtype=float))

    def geodesic_state(
        self, p: AmbientPoint, v: np.ndarray, s: float
    ) -> tuple[AmbientPoint, np.ndarray]:
        return AmbientPoint(0, p.coords + s * v), np.array(v, dtype=float)

    def transport_along_geodesic(
        self, p: AmbientPoint, v: np.ndarray, s: float, x: np.ndarray
    ) -> np.ndarray:
        return np.array(x, dtype=float)

    def log_map(self, p: AmbientPoint, q: AmbientPoint) -> np.ndarray:
        return q.coords - p.coords

    def distance(self, p: AmbientPoint, q: AmbientPoint) -> float:
        return float(np.linalg.norm(q.coords - p.coords))

    @property
    def injectivity_radius(self) -> float:
        return math.inf

    @property
    def constant_curvature(self) -> float | None:
        return 0.0

    def exact_curvature_sups(self) -> tuple[float, float, float]:
        return 0.0, 0.0, 0.0
