"""Empirical covariance kernels of function samples.

A kernel is a symmetric R x R matrix in one of two representations:

* ``grid`` mode: entry (m, l) is the kernel value at midpoint nodes
  (t_m, t_l); double integrals carry the quadrature weight w = 1/M per axis.
* ``coeff`` mode: entry (k, l) is the coefficient of f_k(s) f_l(t) in an
  orthonormal basis expansion; integrals reduce to plain sums (w = 1).

Both modes run through identical code paths, differing only in w.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .funcspace import CoeffSeries, GridFunction

__all__ = [
    "CovKernel",
    "SplitSample",
    "as_matrix",
    "prefix_count",
    "sequential_kernel",
    "sequential_kernel_path",
    "kernel_distance_sq",
]

SYMMETRY_TOL = 1e-12

#: guard added before flooring n*lambda so that exactly representable
#: products (e.g. lambda = l/K with K | n) never lose a sample to rounding
FLOOR_GUARD = 1e-9


def mode_weight(mode: str, dim: int) -> float:
    if mode == "grid":
        return 1.0 / dim
    if mode == "coeff":
        return 1.0
    raise ValueError(f"unknown kernel mode {mode!r}; expected 'grid' or 'coeff'")


@dataclass(frozen=True)
class CovKernel:
    """Symmetric second-moment kernel with its quadrature weight."""

    matrix: np.ndarray
    mode: str
    weight: float

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError("kernel matrix must be square")
        if not np.all(np.isfinite(matrix)):
            raise ValueError("kernel matrix must be finite")
        scale = max(1.0, float(np.abs(matrix).max()))
        if np.abs(matrix - matrix.T).max() > SYMMETRY_TOL * scale:
            raise ValueError("kernel matrix is not symmetric within tolerance")
        expected_w = mode_weight(self.mode, matrix.shape[0])
        if not np.isclose(self.weight, expected_w, rtol=1e-12, atol=0.0):
            raise ValueError(
                f"weight {self.weight} inconsistent with {self.mode} mode "
                f"of dimension {matrix.shape[0]}"
            )
        object.__setattr__(self, "matrix", matrix)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def as_matrix(sample, mode: str = "coeff") -> tuple[np.ndarray, str]:
    """Normalize a sample of functions to an (n, R) matrix plus its mode.

    Accepts a CoeffSeries, a list of GridFunction, or a plain 2-d array
    (interpreted according to ``mode``).
    """
    if isinstance(sample, CoeffSeries):
        return sample.coeffs, "coeff"
    if isinstance(sample, (list, tuple)) and sample and isinstance(sample[0], GridFunction):
        return np.vstack([g.values for g in sample]), "grid"
    values = np.atleast_2d(np.asarray(sample, dtype=float))
    mode_weight(mode, values.shape[1])  # validates the mode name
    return values, mode


def prefix_count(n_seg: int, lam: float) -> int:
    """Number of leading observations entering the lambda-sequential kernel."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0,1], got {lam}")
    return int(np.floor(n_seg * lam + FLOOR_GUARD))


def _build_kernel(matrix: np.ndarray, mode: str) -> CovKernel:
    matrix = 0.5 * (matrix + matrix.T)  # remove rounding asymmetry
    return CovKernel(matrix=matrix, mode=mode, weight=mode_weight(mode, matrix.shape[0]))


def sequential_kernel(segment, lam: float, *, mode: str = "coeff",
                      center: bool = False) -> CovKernel:
    """Second-moment kernel of the first floor(n*lambda) segment members.

    Parameters
    ----------
    segment : sample of functions
        Anything accepted by :func:`as_matrix`; n >= 1 rows.
    lam : float
        Fraction in [0,1] of the segment to average; a zero prefix yields
        the zero kernel.
    mode : {'coeff', 'grid'}
        Representation of the rows.
    center : bool
        If true, subtract the mean of the *whole* segment (not of the
        lambda-prefix) from every row before averaging outer products.

    Returns
    -------
    CovKernel
    """
    values, mode = as_matrix(segment, mode)
    n = values.shape[0]
    if n < 1:
        raise ValueError("segment must contain at least one function")
    if center:
        values = values - values.mean(axis=0)
    m = prefix_count(n, lam)
    if m == 0:
        return _build_kernel(np.zeros((values.shape[1],) * 2), mode)
    head = values[:m]
    return _build_kernel(head.T @ head / m, mode)


def sequential_kernel_path(segment, lams, *, mode: str = "coeff",
                           center: bool = False) -> list[CovKernel]:
    """Sequential kernels at several lambda values in one accumulation pass."""
    values, mode = as_matrix(segment, mode)
    n = values.shape[0]
    if n < 1:
        raise ValueError("segment must contain at least one function")
    if center:
        values = values - values.mean(axis=0)
    counts = [prefix_count(n, lam) for lam in lams]
    r = values.shape[1]
    acc = np.zeros((r, r))
    snapshots: dict[int, np.ndarray] = {0: acc.copy()}
    done = 0
    for m in sorted(set(counts)):
        if m == 0:
            continue
        block = values[done:m]
        acc += block.T @ block
        snapshots[m] = acc / m
        done = m
    return [_build_kernel(snapshots[m], mode) for m in counts]


def kernel_distance_sq(c1: CovKernel, c2: CovKernel) -> float:
    """Quadrature value of the squared L2 distance between two kernels."""
    if c1.mode != c2.mode:
        raise ValueError(f"kernel modes differ: {c1.mode} vs {c2.mode}")
    if c1.dim != c2.dim:
        raise ValueError(f"kernel dimensions differ: {c1.dim} vs {c2.dim}")
    diff = c1.matrix - c2.matrix
    return float(c1.weight**2 * np.sum(diff * diff))


@dataclass(frozen=True)
class SplitSample:
    """Sample partitioned at an estimated change point."""

    pre: np.ndarray
    post: np.ndarray
    theta_hat: float
    mode: str = "coeff"

    def __post_init__(self):
        pre = np.atleast_2d(np.asarray(self.pre, dtype=float))
        post = np.atleast_2d(np.asarray(self.post, dtype=float))
        if pre.shape[0] < 1 or post.shape[0] < 1:
            raise ValueError("both parts of a split sample must be nonempty")
        if pre.shape[1] != post.shape[1]:
            raise ValueError("split parts must share their dimension")
        if not 0.0 < self.theta_hat < 1.0:
            raise ValueError(f"estimated change fraction must lie in (0,1), got {self.theta_hat}")
        mode_weight(self.mode, pre.shape[1])
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "post", post)

    @property
    def n_total(self) -> int:
        return self.pre.shape[0] + self.post.shape[0]

    @classmethod
    def at_index(cls, sample, k: int, *, mode: str = "coeff") -> "SplitSample":
        """Split a sample after its k-th observation (1-based)."""
        values, mode = as_matrix(sample, mode)
        n = values.shape[0]
        if not 1 <= k <= n - 1:
            raise ValueError(f"split index must lie in [1, {n - 1}], got {k}")
        return cls(pre=values[:k], post=values[k:], theta_hat=k / n, mode=mode)
