import numpy as np
import pytest

from eigenbreak.covkern import CovKernel, kernel_distance_sq, sequential_kernel
from eigenbreak.eigensys import (
    aligned_distance,
    aligned_distance_sq,
    eigendecompose,
    gap_warning,
)
from eigenbreak.funcspace import fourier_basis

TAU = 1.0 / np.arange(1, 22) ** 2


def coeff_kernel(matrix):
    return CovKernel(matrix=matrix, mode="coeff", weight=1.0)


def test_zero_kernel_has_zero_spectrum():
    system = eigendecompose(coeff_kernel(np.zeros((5, 5))), 5)
    np.testing.assert_array_equal(system.eigenvalues, np.zeros(5))


def test_diagonal_kernel_is_exact():
    system = eigendecompose(coeff_kernel(np.diag([1.0, 0.25, 1.0 / 9.0])), 3)
    np.testing.assert_allclose(system.eigenvalues, [1.0, 0.25, 1.0 / 9.0], rtol=0, atol=1e-15)
    np.testing.assert_allclose(np.abs(system.eigenfunctions), np.eye(3), atol=1e-15)


def test_grid_mercer_kernel_recovers_spectrum():
    basis = fourier_basis(21, 200)
    f = basis.eval_matrix
    matrix = f @ np.diag(TAU) @ f.T
    kernel = CovKernel(matrix=matrix, mode="grid", weight=1.0 / 200)
    system = eigendecompose(kernel, 21)
    np.testing.assert_allclose(system.eigenvalues, TAU, atol=1e-8)
    for k in range(21):
        dist = aligned_distance(system.eigenfunctions[k], f[:, k], weight=1.0 / 200)
        assert dist <= 1e-6


def test_p_max_validation():
    kernel = coeff_kernel(np.eye(4))
    with pytest.raises(ValueError, match="p_max"):
        eigendecompose(kernel, 5)
    with pytest.raises(ValueError, match="p_max"):
        eigendecompose(kernel, 0)


def test_aligned_distance_sign_invariance():
    v = np.zeros(6)
    v[0] = 1.0
    assert aligned_distance(v, v) == 0.0
    assert aligned_distance(v, -v) == 0.0
    u = np.zeros(6)
    u[3] = 1.0
    assert aligned_distance(v, u) == pytest.approx(np.sqrt(2.0))
    assert aligned_distance(v, u) == aligned_distance(u, v)


def test_aligned_distance_quarter_rotation():
    v = np.array([1.0, 0.0])
    phi = np.pi / 4
    u = np.array([np.cos(phi), np.sin(phi)])
    assert aligned_distance(v, u) == pytest.approx(np.sqrt(2.0 - np.sqrt(2.0)))


def test_aligned_distance_requires_unit_norm():
    with pytest.raises(ValueError, match="unit"):
        aligned_distance(np.array([2.0, 0.0]), np.array([1.0, 0.0]))


def test_aligned_distance_sq_handles_zero_functions():
    v = np.zeros(3)
    u = np.array([1.0, 0.0, 0.0])
    assert aligned_distance_sq(v, u) == pytest.approx(1.0)
    assert aligned_distance_sq(v, v) == 0.0


def test_eigenvalue_sum_equals_trace():
    rng = np.random.default_rng(13)
    a = rng.standard_normal((8, 8))
    kernel = coeff_kernel(a @ a.T)
    system = eigendecompose(kernel, 8)
    assert system.eigenvalues.sum() == pytest.approx(np.trace(kernel.matrix), abs=1e-8)
    # grid mode: trace carries the quadrature weight
    g = rng.standard_normal((10, 10))
    grid_kernel = CovKernel(matrix=g @ g.T, mode="grid", weight=0.1)
    grid_system = eigendecompose(grid_kernel, 10)
    assert grid_system.eigenvalues.sum() == pytest.approx(0.1 * np.trace(grid_kernel.matrix), abs=1e-8)


def test_eigenvalues_are_lipschitz_in_the_kernel():
    # |tau_j(c1) - tau_j(c2)| <= ||c1 - c2|| for every j
    rng = np.random.default_rng(17)
    for _ in range(10):
        a = rng.standard_normal((6, 6))
        b = rng.standard_normal((6, 6))
        c1 = coeff_kernel(a @ a.T)
        c2 = coeff_kernel(b @ b.T)
        bound = np.sqrt(kernel_distance_sq(c1, c2))
        v1 = eigendecompose(c1, 6).eigenvalues
        v2 = eigendecompose(c2, 6).eigenvalues
        assert np.all(np.abs(v1 - v2) <= bound + 1e-12)


def test_eigenfunctions_are_quadrature_orthonormal():
    rng = np.random.default_rng(23)
    values = rng.standard_normal((40, 7))
    kernel = sequential_kernel(values, 1.0, mode="grid")
    system = eigendecompose(kernel, 7)
    gram = system.weight * system.eigenfunctions @ system.eigenfunctions.T
    np.testing.assert_allclose(gram, np.eye(7), atol=1e-8)


def test_aligned_distance_range_on_random_unit_vectors():
    rng = np.random.default_rng(29)
    for _ in range(25):
        v = rng.standard_normal(9)
        u = rng.standard_normal(9)
        v /= np.linalg.norm(v)
        u /= np.linalg.norm(u)
        dist = aligned_distance(v, u)
        assert 0.0 <= dist <= np.sqrt(2.0) + 1e-12
        assert dist == pytest.approx(aligned_distance(-v, u), abs=1e-12)


def test_gap_warning_on_degenerate_pair():
    assert gap_warning(np.array([1.0, 1.0, 0.5]), 1) is not None
    assert gap_warning(np.array([1.0, 0.5, 0.25]), 2) is None
    with pytest.raises(ValueError, match="outside"):
        gap_warning(np.array([1.0]), 2)
