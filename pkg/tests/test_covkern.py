import numpy as np
import pytest

from eigenbreak.covkern import (
    CovKernel,
    SplitSample,
    kernel_distance_sq,
    prefix_count,
    sequential_kernel,
    sequential_kernel_path,
)
from eigenbreak.datagen import DGPSpec, population_kernels
from eigenbreak.funcspace import fourier_basis

TAU = 1.0 / np.arange(1, 22) ** 2


def brute_force_kernel(values, m):
    """Entrywise averaged outer products, written as plain loops."""
    r = values.shape[1]
    out = np.zeros((r, r))
    for n in range(m):
        for i in range(r):
            for j in range(r):
                out[i, j] += values[n, i] * values[n, j]
    return out / m


def test_single_function_rank_one():
    x = np.array([[1.0, 2.0, -1.0]])
    kernel = sequential_kernel(x, 1.0, mode="grid")
    np.testing.assert_allclose(kernel.matrix, np.outer(x[0], x[0]))
    assert kernel.weight == pytest.approx(1.0 / 3.0)


def test_small_lambda_gives_zero_kernel():
    rng = np.random.default_rng(0)
    segment = rng.standard_normal((5, 4))
    kernel = sequential_kernel(segment, 0.19, mode="coeff")
    np.testing.assert_array_equal(kernel.matrix, np.zeros((4, 4)))


def test_empty_segment_rejected():
    with pytest.raises(ValueError, match="at least one"):
        sequential_kernel(np.empty((0, 3)), 1.0, mode="coeff")


def test_full_kernel_matches_brute_force_exactly():
    rng = np.random.default_rng(42)
    segment = rng.standard_normal((50, 5)) * np.sqrt(1.0 / np.arange(1, 6) ** 2)
    kernel = sequential_kernel(segment, 1.0, mode="coeff")
    np.testing.assert_allclose(kernel.matrix, brute_force_kernel(segment, 50), atol=1e-13)


def test_iid_kernel_near_population_within_mc_tolerance():
    tau5 = 1.0 / np.arange(1, 6) ** 2
    rng = np.random.default_rng(3)
    segment = rng.standard_normal((50, 5)) * np.sqrt(tau5)
    kernel = sequential_kernel(segment, 1.0, mode="coeff")
    truth = np.diag(tau5)
    # Var(a_k a_l) = tau_k tau_l (+ 2 tau_k^2 on the diagonal)
    variances = np.outer(tau5, tau5) + 2.0 * np.diag(tau5**2)
    bound = 3.0 * np.sqrt(variances / 50)
    assert np.all(np.abs(kernel.matrix - truth) <= bound)


def test_prefix_count_floor_guard():
    # l/K with the segment length divisible by K must not lose a sample
    for n, K in ((40, 20), (300, 20), (123, 41)):
        for l in range(1, K):
            assert prefix_count(n, l / K) == (n * l) // K


def test_sequential_path_matches_single_lambda():
    rng = np.random.default_rng(11)
    segment = rng.standard_normal((37, 6))
    lams = [0.05, 0.3, 0.55, 1.0]
    path = sequential_kernel_path(segment, lams, mode="coeff")
    for lam, kernel in zip(lams, path):
        single = sequential_kernel(segment, lam, mode="coeff")
        np.testing.assert_allclose(kernel.matrix, single.matrix, atol=1e-13)


def test_centering_uses_full_segment_mean():
    rng = np.random.default_rng(5)
    segment = rng.standard_normal((24, 4)) + 3.0
    half = sequential_kernel(segment, 0.5, mode="coeff", center=True)
    mu = segment.mean(axis=0)
    demeaned = segment - mu
    expected = demeaned[:12].T @ demeaned[:12] / 12
    np.testing.assert_allclose(half.matrix, expected, atol=1e-13)


def test_centered_kernel_invariant_to_constant_shift():
    rng = np.random.default_rng(6)
    segment = rng.standard_normal((30, 5))
    shifted = segment.copy()
    shifted[:, 0] += 7.5  # constant function = first basis coefficient
    base = sequential_kernel(segment, 0.7, mode="coeff", center=True)
    moved = sequential_kernel(shifted, 0.7, mode="coeff", center=True)
    np.testing.assert_allclose(base.matrix, moved.matrix, atol=1e-10)
    grid = np.abs(rng.standard_normal((30, 8)))
    base_g = sequential_kernel(grid, 1.0, mode="grid", center=True)
    moved_g = sequential_kernel(grid + 2.0, 1.0, mode="grid", center=True)
    np.testing.assert_allclose(base_g.matrix, moved_g.matrix, atol=1e-10)


def test_distance_of_identical_kernels_is_zero():
    kernel = sequential_kernel(np.random.default_rng(1).standard_normal((10, 4)), 1.0)
    assert kernel_distance_sq(kernel, kernel) == 0.0


def test_eigenvalue_shift_distance_closed_form():
    # difference kernel is sqrt(E) * sum_{k<=4} tau_k f_k x f_k, so the
    # squared distance is E * sum_{k<=4} tau_k^2 (printed as 1.07875 E)
    constant = float(np.sum(TAU[:4] ** 2))
    assert constant == pytest.approx(1.07875, abs=5e-6)
    for e in (0.1, 0.5, 1.0):
        c1, c2 = population_kernels(
            DGPSpec(N=10, break_kind="eigenvalue_shift", magnitude=e)
        )
        assert kernel_distance_sq(c1, c2) == pytest.approx(constant * e, rel=1e-9)


def test_rotation_distance_closed_form():
    # rotating two eigendirections with eigenvalues tau1, tau2 by phi moves
    # the kernel by 2 (tau1 - tau2)^2 sin(phi)^2
    for phi in (np.pi / 8, np.pi / 4, np.pi / 2):
        c1, c2 = population_kernels(DGPSpec(N=10, break_kind="rotation", magnitude=phi))
        expected = 2.0 * (TAU[0] - TAU[1]) ** 2 * np.sin(phi) ** 2
        assert kernel_distance_sq(c1, c2) == pytest.approx(expected, rel=1e-9)


def test_mode_equivalence_of_distances():
    rng = np.random.default_rng(9)
    basis = fourier_basis(11, 64)
    a = rng.standard_normal((20, 11))
    b = rng.standard_normal((20, 11))
    coeff = kernel_distance_sq(
        sequential_kernel(a, 1.0, mode="coeff"), sequential_kernel(b, 1.0, mode="coeff")
    )
    grid = kernel_distance_sq(
        sequential_kernel(a @ basis.eval_matrix.T, 1.0, mode="grid"),
        sequential_kernel(b @ basis.eval_matrix.T, 1.0, mode="grid"),
    )
    assert grid == pytest.approx(coeff, abs=1e-8)


def test_distance_mode_mismatch():
    c_coeff = sequential_kernel(np.ones((3, 4)), 1.0, mode="coeff")
    c_grid = sequential_kernel(np.ones((3, 4)), 1.0, mode="grid")
    with pytest.raises(ValueError, match="modes differ"):
        kernel_distance_sq(c_coeff, c_grid)


def test_kernel_validation():
    with pytest.raises(ValueError, match="symmetric"):
        CovKernel(matrix=np.array([[1.0, 2.0], [0.0, 1.0]]), mode="coeff", weight=1.0)
    with pytest.raises(ValueError, match="finite"):
        CovKernel(matrix=np.array([[np.inf, 0.0], [0.0, 1.0]]), mode="coeff", weight=1.0)


def test_split_sample_construction():
    values = np.arange(20.0).reshape(10, 2)
    split = SplitSample.at_index(values, 4)
    assert split.pre.shape == (4, 2)
    assert split.post.shape == (6, 2)
    assert split.theta_hat == pytest.approx(0.4)
    assert split.n_total == 10
    with pytest.raises(ValueError, match="split index"):
        SplitSample.at_index(values, 10)
