"""Round 2-sphere of radius R, viewed as the Kähler curve CP¹ with curvature 1/R².

Two stereographic charts: chart 0 projects from the north pole (the south pole sits at
u = 0), chart 1 from the south pole. Geodesics and transport are evaluated on the
embedded sphere in R³ and pulled back.
"""

import logging
import math
from collections.abc import Sequence

import numpy as np

from weinstein_tube.ambient.base import AmbientManifold, AmbientPoint
from weinstein_tube.errors import ChartExitError, InputError

logger = logging.getLogger(__name__)


class RoundSphere(AmbientManifold):
    kind = "sphere"

    # angular distance to the projection pole below which a chart refuses points
    pole_margin = 1e-2

    def __init__(self, radius: float = 1.0) -> None:
        if not radius > 0:
            raise InputError(f"sphere radius must be positive, got {radius}")
        super().__init__(1)
        self.radius = float(radius)

    # -- embedding ------------------------------------------------------------

    def _sign(self, chart_id: int) -> float:
        if chart_id not in (0, 1):
            raise ChartExitError(f"sphere has charts 0 and 1, got {chart_id}")
        return 1.0 if chart_id == 0 else -1.0

    def embed(self, p: AmbientPoint) -> np.ndarray:
        """Point of the sphere of radius R in R³."""
        r = self.radius
        u = p.coords
        d = u @ u + r * r
        return np.array(
            [2 * r * r * u[0] / d, 2 * r * r * u[1] / d,
             self._sign(p.chart_id) * r * (u @ u - r * r) / d]
        )

    def extrinsic_coordinates(self, p: AmbientPoint) -> np.ndarray:
        return self.embed(p)

    def embed_derivative(self, p: AmbientPoint) -> np.ndarray:
        """3x2 matrix dP/du."""
        r = self.radius
        u = p.coords
        d = u @ u + r * r
        top = 2 * r * r * (d * np.eye(2) - 2 * np.outer(u, u)) / d**2
        bottom = self._sign(p.chart_id) * 4 * r**3 * u / d**2
        return np.vstack([top, bottom])

    def from_embedding(
        self, xyz: np.ndarray, chart_id: int | None = None
    ) -> AmbientPoint:
        """Chart point of an R³ point on the sphere, in a chart away from its pole."""
        xyz = np.asarray(xyz, dtype=float)
        if chart_id is None:
            chart_id = 0 if xyz[2] <= 0 else 1
        denom = self.radius - self._sign(chart_id) * xyz[2]
        if denom <= 0:
            raise ChartExitError(f"{xyz} is the pole of chart {chart_id}")
        return self.point(chart_id, self.radius * xyz[:2] / denom)

    def _conformal_factor(self, p: AmbientPoint) -> float:
        u = p.coords
        return 2 * self.radius**2 / (u @ u + self.radius**2)

    def _pull_back(self, p: AmbientPoint, vec3: np.ndarray) -> np.ndarray:
        return self.embed_derivative(p).T @ vec3 / self._conformal_factor(p) ** 2

    # -- chart formulas -------------------------------------------------------

    def chart_contains(self, chart_id: int, coords: np.ndarray) -> bool:
        if chart_id not in (0, 1) or coords.shape != (2,):
            return False
        if not np.all(np.isfinite(coords)):
            return False
        r2 = self.radius**2
        q = float(coords @ coords)
        return (q - r2) / (q + r2) <= math.cos(self.pole_margin)

    def metric_matrix(self, p: AmbientPoint) -> np.ndarray:
        return self._conformal_factor(p) ** 2 * np.eye(2)

    def complex_matrix(self, p: AmbientPoint) -> np.ndarray:
        # J v = v x n for the outward unit normal n
        dp = self.embed_derivative(p)
        normal = self.embed(p) / self.radius
        turned = np.cross(dp.T, normal).T
        return dp.T @ turned / self._conformal_factor(p) ** 2

    def christoffel(self, p: AmbientPoint) -> np.ndarray:
        u = p.coords
        df = -2 * u / (u @ u + self.radius**2)
        eye = np.eye(2)
        return (
            np.einsum("ik,j->kij", eye, df)
            + np.einsum("jk,i->kij", eye, df)
            - np.einsum("ij,k->kij", eye, df)
        )

    @property
    def constant_curvature(self) -> float:
        return 1.0 / self.radius**2

    def curvature_components(
        self, p: AmbientPoint, x: np.ndarray, y: np.ndarray, z: np.ndarray
    ) -> np.ndarray:
        g = self.metric_matrix(p)
        yz = np.einsum("i...,ij,j...->...", y, g, z)
        xz = np.einsum("i...,ij,j...->...", x, g, z)
        return self.constant_curvature * (yz * x - xz * y)

    def curvature_in_frame(
        self,
        p: AmbientPoint,
        frame: np.ndarray,
        x: np.ndarray,
        y: np.ndarray,
        z: np.ndarray,
    ) -> np.ndarray:
        yz = np.einsum("i...,i...->...", y, z)
        xz = np.einsum("i...,i...->...", x, z)
        return self.constant_curvature * (yz * x - xz * y)

    def curvature_derivative_components(
        self,
        p: AmbientPoint,
        directions: Sequence[np.ndarray],
        x: np.ndarray,
        y: np.ndarray,
        z: np.ndarray,
    ) -> np.ndarray:
        return np.zeros_like(np.asarray(x, dtype=float))

    def exact_curvature_sups(self) -> tuple[float, float, float]:
        return self.constant_curvature, 0.0, 0.0

    # -- geodesics ------------------------------------------------------------

    def _great_circle(
        self, p: AmbientPoint, v: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray, float]:
        start = self.embed(p)
        vel = self.embed_derivative(p) @ v
        return start, vel, float(np.linalg.norm(vel))

    def _check_arc(
        self, chart_id: int, start: np.ndarray, e: np.ndarray, psi: float
    ) -> None:
        if psi < 0:
            e, psi = -e, -psi
        pole = np.array([0.0, 0.0, self._sign(chart_id)])
        a = float(start @ pole) / self.radius
        b = float(e @ pole)
        peak = math.atan2(b, a) % (2 * math.pi)
        if psi >= peak:
            highest = math.hypot(a, b)
        else:
            highest = max(a, a * math.cos(psi) + b * math.sin(psi))
        if highest > math.cos(self.pole_margin):
            raise ChartExitError(
                f"great circle arc of angle {psi:.6g} "
                f"reaches the pole of chart {chart_id}"
            )

    def geodesic_state(
        self, p: AmbientPoint, v: np.ndarray, s: float
    ) -> tuple[AmbientPoint, np.ndarray]:
        start, vel, speed = self._great_circle(p, v)
        if speed == 0.0:
            return p, np.zeros(2)
        e = vel / speed
        psi = speed * s / self.radius
        self._check_arc(p.chart_id, start, e, psi)
        end = math.cos(psi) * start + self.radius * math.sin(psi) * e
        end_vel = speed * (-math.sin(psi) * start / self.radius + math.cos(psi) * e)
        q = self.from_embedding(end, p.chart_id)
        return q, self._pull_back(q, end_vel)

    def transport_along_geodesic(
        self, p: AmbientPoint, v: np.ndarray, s: float, x: np.ndarray
    ) -> np.ndarray:
        start, vel, speed = self._great_circle(p, v)
        if speed == 0.0:
            return np.array(x, dtype=float)
        e = vel / speed
        psi = speed * s / self.radius
        x3 = self.embed_derivative(p) @ x
        along = float(x3 @ e)
        # the component along n x e is unchanged
        across = x3 - along * e
        e_end = -math.sin(psi) * start / self.radius + math.cos(psi) * e
        q, _ = self.geodesic_state(p, v, s)
        return self._pull_back(q, along * e_end + across)

    def log_map(self, p: AmbientPoint, q: AmbientPoint) -> np.ndarray:
        a, b = self.embed(p), self.embed(q)
        psi = math.atan2(float(np.linalg.norm(np.cross(a, b))), float(a @ b))
        direction = b - (a @ b) / self.radius**2 * a
        size = float(np.linalg.norm(direction))
        if size < 1e-15:
            if psi > 1.0:
                raise InputError("log map undefined between antipodal points")
            return np.zeros(2)
        return self._pull_back(p, self.radius * psi * direction / size)

    def distance(self, p: AmbientPoint, q: AmbientPoint) -> float:
        a, b = self.embed(p), self.embed(q)
        sine = float(np.linalg.norm(np.cross(a, b)))
        return self.radius * math.atan2(sine, float(a @ b))

    @property
    def injectivity_radius(self) -> float:
        return math.pi * self.radius
