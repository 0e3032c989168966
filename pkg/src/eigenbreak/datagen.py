"""Synthetic functional time series with planted second-order breaks.

Observations are Fourier coefficient rows a_n drawn from centered Gaussian
innovations with variances tau_1 >= tau_2 >= ..., optionally filtered by a
first-order moving average, and optionally transformed after a break
fraction theta0: either the first four coordinates are downscaled (an
eigenvalue shift of the covariance kernel) or the first two coordinates are
rotated (an eigenfunction rotation at fixed eigenvalues).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .covkern import FLOOR_GUARD, CovKernel
from .funcspace import CoeffSeries, fourier_basis

__all__ = [
    "DGPSpec",
    "fma1_psi",
    "generate",
    "apply_eigenvalue_break",
    "apply_rotation_break",
    "rotation_matrix",
    "population_kernels",
]

DEPENDENCES = ("iid", "fma1")
BREAK_KINDS = ("none", "eigenvalue_shift", "rotation")
INNOVATIONS = ("gaussian", "student_t")

DEFAULT_ORDER = 21
DEFAULT_GRID = 200

#: number of leading coordinates affected by the eigenvalue-shift break
SHIFT_COORDS = 4


def default_tau(order: int) -> np.ndarray:
    """Default eigenvalue sequence 1/k^2, k = 1..T."""
    return 1.0 / np.arange(1, order + 1) ** 2


def fma1_psi(order: int) -> float:
    """MA coefficient variance solving E||Psi||_1 = 1 for the entrywise norm.

    A T x T matrix of N(0, psi) entries has expected entrywise absolute sum
    T^2 * sqrt(2 psi / pi); equal to one at psi = pi / (2 T^4).
    """
    return np.pi / (2.0 * order**4)


@dataclass(frozen=True)
class DGPSpec:
    """Parameters of one synthetic sample."""

    N: int
    T: int = DEFAULT_ORDER
    theta0: float = 0.5
    tau: np.ndarray | None = None
    dependence: str = "iid"
    break_kind: str = "none"
    magnitude: float = 0.0
    seed: int | None = None
    grid_size: int = DEFAULT_GRID
    innovations: str = "gaussian"
    t_dof: float = 5.0

    def __post_init__(self):
        if self.N < 4:
            raise ValueError(f"sample size must be at least 4, got {self.N}")
        if self.T < 1 or self.T % 2 == 0:
            raise ValueError(f"basis order must be odd and positive, got {self.T}")
        if not 0.0 < self.theta0 < 1.0:
            raise ValueError(f"break fraction must lie in (0,1), got {self.theta0}")
        tau = default_tau(self.T) if self.tau is None else np.asarray(self.tau, dtype=float)
        if tau.shape != (self.T,):
            raise ValueError(f"tau must have length {self.T}")
        if np.any(tau <= 0.0) or np.any(np.diff(tau) > 0.0):
            raise ValueError("tau must be strictly positive and non-increasing")
        if self.dependence not in DEPENDENCES:
            raise ValueError(f"unknown dependence {self.dependence!r}; expected one of {DEPENDENCES}")
        if self.break_kind not in BREAK_KINDS:
            raise ValueError(f"unknown break kind {self.break_kind!r}; expected one of {BREAK_KINDS}")
        if self.innovations not in INNOVATIONS:
            raise ValueError(f"unknown innovations {self.innovations!r}; expected one of {INNOVATIONS}")
        if self.break_kind == "eigenvalue_shift" and not 0.0 <= self.magnitude <= 1.0:
            raise ValueError(f"eigenvalue-shift magnitude must lie in [0,1], got {self.magnitude}")
        if self.innovations == "student_t" and self.t_dof <= 2.0:
            raise ValueError("student-t innovations need more than 2 degrees of freedom")
        object.__setattr__(self, "tau", tau)


def break_index(n: int, theta0: float) -> int:
    """Last pre-break observation index floor(N * theta0), 1-based."""
    return int(np.floor(n * theta0 + FLOOR_GUARD))


def _as_coeff_array(series):
    if isinstance(series, CoeffSeries):
        return series.coeffs, series.basis
    return np.atleast_2d(np.asarray(series, dtype=float)), None


def _rewrap(coeffs, basis):
    return CoeffSeries(coeffs, basis) if basis is not None else coeffs


def apply_eigenvalue_break(series, magnitude: float, theta0: float):
    """Downscale the first four coordinates of post-break rows by sqrt(1 - sqrt(E)).

    The resulting second-segment kernel has its leading four eigenvalues
    multiplied by (1 - sqrt(E)), giving squared eigenvalue differences
    E / j^4 for j <= 4 and zero beyond.
    """
    if not 0.0 <= magnitude <= 1.0:
        raise ValueError(f"eigenvalue-shift magnitude must lie in [0,1], got {magnitude}")
    coeffs, basis = _as_coeff_array(series)
    out = coeffs.copy()
    k0 = break_index(out.shape[0], theta0)
    cols = min(SHIFT_COORDS, out.shape[1])
    out[k0:, :cols] *= np.sqrt(1.0 - np.sqrt(magnitude))
    return _rewrap(out, basis)


def rotation_matrix(order: int, phi: float) -> np.ndarray:
    """Identity with a cos/sin rotation block on the first two coordinates."""
    rot = np.eye(order)
    c, s = np.cos(phi), np.sin(phi)
    rot[0, 0] = c
    rot[0, 1] = -s
    rot[1, 0] = s
    rot[1, 1] = c
    return rot


def apply_rotation_break(series, phi: float, theta0: float):
    """Rotate the first two coordinates of post-break rows by the angle phi."""
    coeffs, basis = _as_coeff_array(series)
    out = coeffs.copy()
    k0 = break_index(out.shape[0], theta0)
    a1 = out[k0:, 0].copy()
    a2 = out[k0:, 1].copy()
    c, s = np.cos(phi), np.sin(phi)
    out[k0:, 0] = c * a1 - s * a2
    out[k0:, 1] = s * a1 + c * a2
    return _rewrap(out, basis)


def generate(spec: DGPSpec, rng: np.random.Generator | None = None) -> CoeffSeries:
    """Draw one sample of N coefficient rows according to a specification.

    Parameters
    ----------
    spec : DGPSpec
        Sample size, basis order, eigenvalues, dependence, and break.
    rng : numpy.random.Generator, optional
        Source of randomness; overrides ``spec.seed`` (used by experiment
        drivers that manage replicate substreams themselves).

    Returns
    -------
    CoeffSeries
        N rows of coefficients; deterministic given (spec, seed).
    """
    if rng is None:
        rng = np.random.default_rng(spec.seed)
    scale = np.sqrt(spec.tau)
    size = (spec.N + 1, spec.T)
    if spec.innovations == "gaussian":
        eps = rng.standard_normal(size) * scale
    else:
        unit = rng.standard_t(spec.t_dof, size) * np.sqrt((spec.t_dof - 2.0) / spec.t_dof)
        eps = unit * scale
    if spec.dependence == "fma1":
        psi = fma1_psi(spec.T)
        ma_matrix = rng.normal(0.0, np.sqrt(psi), (spec.T, spec.T))
        coeffs = (eps[1:] + eps[:-1] @ ma_matrix.T) / np.sqrt(1.0 + psi)
    else:
        coeffs = eps[1:]
    if spec.break_kind == "eigenvalue_shift":
        coeffs = apply_eigenvalue_break(coeffs, spec.magnitude, spec.theta0)
    elif spec.break_kind == "rotation":
        coeffs = apply_rotation_break(coeffs, spec.magnitude, spec.theta0)
    return CoeffSeries(coeffs, fourier_basis(spec.T, spec.grid_size))


def population_kernels(spec: DGPSpec) -> tuple[CovKernel, CovKernel]:
    """Exact pre- and post-break covariance kernels in coefficient mode.

    These are the kernels targeted by the empirical estimators when the
    innovations are independent; useful for closed-form checks of kernel
    distances and eigensystems.
    """
    pre = np.diag(spec.tau)
    if spec.break_kind == "eigenvalue_shift":
        factors = np.ones(spec.T)
        factors[: min(SHIFT_COORDS, spec.T)] = 1.0 - np.sqrt(spec.magnitude)
        post = np.diag(spec.tau * factors)
    elif spec.break_kind == "rotation":
        rot = rotation_matrix(spec.T, spec.magnitude)
        post = rot @ np.diag(spec.tau) @ rot.T
    else:
        post = pre.copy()
    return (
        CovKernel(matrix=pre, mode="coeff", weight=1.0),
        CovKernel(matrix=post, mode="coeff", weight=1.0),
    )
