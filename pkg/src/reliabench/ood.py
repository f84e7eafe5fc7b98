"""Distribution distances and the qualitative out-of-distribution ladder."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

_SYM_TOL = 1e-9
_PROB_TOL = 1e-9


class OodLevel(Enum):
    IN_DISTRIBUTION = "In-Distribution"
    NEAR_DISTRIBUTION = "Near-Distribution"
    SOMEWHAT_OOD = "Somewhat OOD"
    FAR_OOD = "Far OOD"
    VERY_FAR_OOD = "Very Far OOD"

    @classmethod
    def parse(cls, name: str) -> "OodLevel":
        for level in cls:
            if level.value == name:
                return level
        known = ", ".join(lv.value for lv in cls)
        raise ValueError(f"unknown OOD level {name!r}; expected one of: {known}")


OOD_LEVELS = tuple(OodLevel)


def _as_vector(x, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a nonempty 1-D vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


@dataclass(frozen=True)
class GaussianSummary:
    """Reference distribution as mean vector and covariance matrix."""

    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self) -> None:
        mean = _as_vector(self.mean, "mean")
        cov = np.asarray(self.covariance, dtype=np.float64)
        d = mean.size
        if cov.shape != (d, d):
            raise ValueError(f"covariance must be {d}x{d}, got shape {cov.shape}")
        if not np.all(np.isfinite(cov)):
            raise ValueError("covariance contains non-finite values")
        if not np.allclose(cov, cov.T, atol=_SYM_TOL, rtol=0):
            raise ValueError("covariance must be symmetric")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", cov)

    @property
    def dim(self) -> int:
        return self.mean.size

    def cholesky(self) -> np.ndarray:
        try:
            return np.linalg.cholesky(self.covariance)
        except np.linalg.LinAlgError:
            raise ValueError("covariance is not positive definite") from None


def mahalanobis(x, ref: GaussianSummary) -> float:
    """sqrt((x - mu)^T Sigma^-1 (x - mu)) via Cholesky solve, no inversion."""
    vec = _as_vector(x, "x")
    if vec.size != ref.dim:
        raise ValueError(f"x has dimension {vec.size}, reference has {ref.dim}")
    lower = ref.cholesky()
    # Sigma = L L^T, so the quadratic form is ||L^-1 (x - mu)||^2.
    y = np.linalg.solve(lower, vec - ref.mean)
    return float(np.sqrt(y @ y))


@dataclass(frozen=True)
class DiscreteDistribution:
    probabilities: np.ndarray

    def __post_init__(self) -> None:
        probs = _as_vector(self.probabilities, "probabilities")
        if np.any(probs < 0):
            raise ValueError("probabilities must be nonnegative")
        total = float(probs.sum())
        if abs(total - 1.0) > _PROB_TOL:
            raise ValueError(f"probabilities must sum to 1, got {total!r}")
        object.__setattr__(self, "probabilities", probs)

    def __len__(self) -> int:
        return self.probabilities.size


def kl_divergence(p: DiscreteDistribution, q: DiscreteDistribution) -> float:
    """Sum of p_i ln(p_i / q_i), with 0 ln(0/q) = 0. Natural log."""
    if len(p) != len(q):
        raise ValueError(f"length mismatch: p has {len(p)}, q has {len(q)}")
    pv = p.probabilities
    qv = q.probabilities
    support = pv > 0
    if np.any(qv[support] == 0):
        raise ValueError("q assigns zero probability where p is positive")
    terms = pv[support] * np.log(pv[support] / qv[support])
    return float(terms.sum())


def _as_points(points, name: str) -> np.ndarray:
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise ValueError(f"{name} must be a nonempty set of points, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def hausdorff(a, b) -> float:
    """Symmetric Hausdorff distance between finite point sets, Euclidean
    metric, exact over all pairs."""
    pa = _as_points(a, "A")
    pb = _as_points(b, "B")
    if pa.shape[1] != pb.shape[1]:
        raise ValueError(
            f"dimension mismatch: A has {pa.shape[1]}, B has {pb.shape[1]}"
        )
    diffs = pa[:, None, :] - pb[None, :, :]
    dists = np.sqrt((diffs * diffs).sum(axis=2))
    return float(max(dists.min(axis=1).max(), dists.min(axis=0).max()))


@dataclass(frozen=True)
class OodLadderConfig:
    """Four ascending thresholds cutting [0, inf) into the five levels.

    A distance lands in the level of the first threshold above it;
    boundary distances belong to the level above them ([t, next) bins).
    """

    thresholds: tuple[float, float, float, float]

    def __post_init__(self) -> None:
        ts = tuple(float(t) for t in self.thresholds)
        if len(ts) != 4:
            raise ValueError(f"exactly 4 thresholds required, got {len(ts)}")
        if not all(math.isfinite(t) and t > 0 for t in ts):
            raise ValueError(f"thresholds must be positive and finite, got {ts}")
        if not all(ts[i] < ts[i + 1] for i in range(3)):
            raise ValueError(f"thresholds must be strictly ascending, got {ts}")
        object.__setattr__(self, "thresholds", ts)


def bin_ood_level(distance: float, cfg: OodLadderConfig) -> OodLevel:
    if not (math.isfinite(distance) and distance >= 0):
        raise ValueError(f"distance must be finite and nonnegative, got {distance!r}")
    for level, threshold in zip(OOD_LEVELS, cfg.thresholds):
        if distance < threshold:
            return level
    return OodLevel.VERY_FAR_OOD
