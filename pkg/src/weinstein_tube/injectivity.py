"""Sampled collision search for the normal exponential map F on a tube."""

import logging
import math

import numpy as np
from scipy.optimize import minimize
from scipy.spatial.distance import pdist, squareform

from weinstein_tube.errors import CapabilityError, InputError
from weinstein_tube.jacobi import eval_F
from weinstein_tube.lagrangian import LagrangianScene
from weinstein_tube.models import CheckReport
from weinstein_tube.reporting import Sample, inequality_report
from weinstein_tube.sasaki import NormalBundle

logger = logging.getLogger(__name__)


def embedding_constant(
    scene: LagrangianScene, rng: np.random.Generator, pairs: int
) -> float:
    """Sampled emb(L) = sup d_L/d_M over `pairs` stratified pairs.

    The scene's extremal pairs are always included.
    """
    if pairs < 1:
        raise InputError(f"need at least one pair, got {pairs}")
    value = scene.embedding_constant(scene.sample_pairs(rng, pairs))
    logger.info("emb(%s) ~ %.6g from %d pairs", scene.kind, value, pairs)
    return value


def points_for_pairs(pairs: int) -> int:
    """Smallest m with m(m-1)/2 >= pairs."""
    return max(2, math.ceil((1 + math.sqrt(1 + 8 * pairs)) / 2))


class _TubeSampler:
    """Tube points in orthonormal fiber coordinates ζ, squashed into the open ball."""

    def __init__(self, bundle: NormalBundle, radius: float) -> None:
        self.bundle = bundle
        self.scene = bundle.scene
        self.radius = radius
        self.n = bundle.n

    def squash(self, w: np.ndarray) -> np.ndarray:
        """R^n onto the open ball of radius r."""
        return self.radius * w / (1.0 + np.linalg.norm(w))

    def unsquash(self, zeta: np.ndarray) -> np.ndarray:
        norm = float(np.linalg.norm(zeta))
        if norm == 0.0:
            return zeta.copy()
        ratio = min(norm / self.radius, 1 - 1e-9)
        return zeta / norm * ratio / (1 - ratio)

    def features(
        self, x: np.ndarray, zeta: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray]:
        """(F(v) in extrinsic coordinates, identity features (ι(x), ζ))."""
        ambient = self.scene.ambient
        v = self.bundle.from_orthonormal(x, zeta)
        image = ambient.extrinsic_coordinates(eval_F(self.bundle, v))
        base = ambient.extrinsic_coordinates(self.scene.immerse(x))
        return image, np.concatenate([base, zeta])


def _refine(
    sampler: _TubeSampler, first: tuple[np.ndarray, np.ndarray],
    second: tuple[np.ndarray, np.ndarray], min_sep: float,
) -> tuple[float, float, dict[str, list[float]]]:
    """Minimize |F(v₀) - F(v₁)| over pairs kept at least `min_sep` apart."""
    n = sampler.n

    def unpack(z: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        x0, x1 = z[:n], z[2 * n:3 * n]
        return x0, sampler.squash(z[n:2 * n]), x1, sampler.squash(z[3 * n:])

    def evaluate(z: np.ndarray) -> tuple[float, float]:
        x0, z0, x1, z1 = unpack(z)
        img0, id0 = sampler.features(x0, z0)
        img1, id1 = sampler.features(x1, z1)
        return float(np.linalg.norm(img0 - img1)), float(np.linalg.norm(id0 - id1))

    def objective(z: np.ndarray) -> float:
        gap, sep = evaluate(z)
        return gap + 10.0 * max(0.0, min_sep - sep)

    start = np.concatenate([first[0], sampler.unsquash(first[1]),
                            second[0], sampler.unsquash(second[1])])
    result = minimize(objective, start, method="Nelder-Mead",
                      options={"xatol": 1e-9, "fatol": 1e-12, "maxiter": 200 * 4 * n})
    gap, sep = evaluate(result.x)
    x0, z0, x1, z1 = unpack(result.x)
    logger.debug("collision refinement: gap %.3e, separation %.3e, %d iterations",
                 gap, sep, result.nit)
    state = {"x0": list(x0), "zeta0": list(z0), "x1": list(x1), "zeta1": list(z1)}
    return gap, sep, state


def injectivity_probe(
    bundle: NormalBundle,
    radius: float,
    rng: np.random.Generator,
    pairs: int = 10000,
    collision_tol: float = 1e-6,
    refine: int = 4,
    seed: int | None = None,
) -> CheckReport:
    """Look for v₀ ≠ v₁ in U_r(T⊥L) with |F(v₀) - F(v₁)| < collision_tol.

    Random pairs are screened with pairwise distances; the `refine` closest distinct
    pairs are then pushed together by Nelder-Mead. The report's margin is the minimum
    image separation found minus the tolerance.
    """
    scene = bundle.scene
    if not scene.embedded:
        raise CapabilityError(
            f"injectivity needs an embedded Lagrangian; {scene.kind} is immersed"
        )
    if not radius > 0:
        raise InputError(f"tube radius must be positive, got {radius}")
    sampler = _TubeSampler(bundle, radius)
    count = points_for_pairs(pairs)
    xs, zetas = bundle.sample_tube(rng, radius, count)
    feats = [sampler.features(x, z) for x, z in zip(xs, zetas)]
    images = np.stack([f[0] for f in feats])
    idents = np.stack([f[1] for f in feats])
    gaps = squareform(pdist(images))
    seps = squareform(pdist(idents))
    min_sep = 0.1 * radius
    rows, cols = np.triu_indices(count, k=1)
    distinct = seps[rows, cols] > min_sep
    rows, cols = rows[distinct], cols[distinct]
    if len(rows) == 0:
        raise InputError("no sampled pair is separated enough to test injectivity")

    samples = []
    for i, j in zip(rows, cols):
        samples.append(Sample(collision_tol, float(gaps[i, j]), {
            "x0": xs[i], "zeta0": zetas[i], "x1": xs[j], "zeta1": zetas[j],
            "separation": float(seps[i, j]),
        }))
    order = np.argsort(gaps[rows, cols])[:refine]
    for k in order:
        i, j = rows[k], cols[k]
        gap, sep, state = _refine(
            sampler, (xs[i], zetas[i]), (xs[j], zetas[j]), min_sep
        )
        if sep >= min_sep * (1 - 1e-6):
            state = {**state, "separation": sep, "refined": True}
            samples.append(Sample(collision_tol, gap, state))
    report = inequality_report(
        "injectivity-probe", "normal-exponential-injective",
        "No collisions of F on the tube", samples, seed=seed,
        inputs={"r": radius, "collision_tol": collision_tol, "pairs": len(rows),
                "min_separation": min(s.rhs for s in samples)},
    )
    return report
