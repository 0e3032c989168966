"""CUSUM objective on second-moment kernels and the restricted argmax estimator."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .covkern import FLOOR_GUARD, as_matrix, mode_weight

__all__ = [
    "ChangePointEstimate",
    "cusum_objective",
    "objective_curve",
    "objective_curve_from_outer_products",
    "estimate_changepoint",
]


@dataclass(frozen=True)
class ChangePointEstimate:
    """Restricted argmax of the CUSUM objective over candidate split indices."""

    k_hat: int
    theta_hat: float
    ks: np.ndarray
    objective: np.ndarray
    epsilon: float
    n_obs: int


def objective_curve_from_outer_products(outers: np.ndarray, weight: float) -> np.ndarray:
    """CUSUM objective f(k), k = 1..N-1, from per-observation outer products.

    ``outers`` has shape (N, R, R); entry n is the second-moment contribution
    of observation n.  One cumulative pass gives every split in O(N * R^2).
    """
    n = outers.shape[0]
    if n < 2:
        raise ValueError("the objective needs at least two observations")
    cum = np.cumsum(outers, axis=0)
    total = cum[-1]
    ks = np.arange(1, n)
    head_mean = cum[:-1] / ks[:, None, None]
    tail_mean = (total - cum[:-1]) / (n - ks)[:, None, None]
    dist_sq = weight**2 * ((head_mean - tail_mean) ** 2).sum(axis=(1, 2))
    return ks * (n - ks) / n**2 * dist_sq


def objective_curve(sample, *, mode: str = "coeff") -> np.ndarray:
    """CUSUM objective at every split index k = 1..N-1."""
    values, mode = as_matrix(sample, mode)
    weight = mode_weight(mode, values.shape[1])
    outers = np.einsum("ni,nj->nij", values, values)
    return objective_curve_from_outer_products(outers, weight)


def cusum_objective(sample, k: int, *, mode: str = "coeff") -> float:
    """Weighted squared kernel distance between the first k and last N-k observations."""
    values, mode = as_matrix(sample, mode)
    n = values.shape[0]
    if not 1 <= k <= n - 1:
        raise ValueError(f"split index must lie in [1, {n - 1}], got {k}")
    weight = mode_weight(mode, values.shape[1])
    head, tail = values[:k], values[k:]
    diff = head.T @ head / k - tail.T @ tail / (n - k)
    return float(k * (n - k) / n**2 * weight**2 * np.sum(diff * diff))


def search_range(n: int, epsilon: float) -> tuple[int, int]:
    """Inclusive candidate range [ceil(N*eps), floor(N*(1-eps))] clipped to [1, N-1]."""
    if not 0.0 <= epsilon < 0.5:
        raise ValueError(f"boundary trim must lie in [0, 0.5), got {epsilon}")
    lo = max(1, int(np.ceil(n * epsilon - FLOOR_GUARD)))
    hi = min(n - 1, int(np.floor(n * (1.0 - epsilon) + FLOOR_GUARD)))
    return lo, hi


def estimate_changepoint(sample, epsilon: float = 0.05, *,
                         mode: str = "coeff") -> ChangePointEstimate:
    """Estimate the change fraction as the restricted argmax of the CUSUM objective.

    Parameters
    ----------
    sample : sample of functions
        At least 4 observations.
    epsilon : float
        Boundary trim in [0, 0.5); candidate splits are restricted to
        [N*epsilon, N*(1-epsilon)].  With epsilon = 0 every split
        1 <= k <= N-1 is searched.

    Returns
    -------
    ChangePointEstimate
        Smallest maximizing index (deterministic tie-break) with the
        objective values over the searched range.
    """
    values, mode = as_matrix(sample, mode)
    n = values.shape[0]
    if n < 4:
        raise ValueError(f"change point estimation needs at least 4 observations, got {n}")
    lo, hi = search_range(n, epsilon)
    curve = objective_curve(values, mode=mode)
    ks = np.arange(lo, hi + 1)
    restricted = curve[lo - 1 : hi]
    k_hat = int(ks[int(np.argmax(restricted))])
    return ChangePointEstimate(
        k_hat=k_hat,
        theta_hat=k_hat / n,
        ks=ks,
        objective=restricted,
        epsilon=epsilon,
        n_obs=n,
    )
