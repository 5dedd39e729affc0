import numpy as np
import pytest
from numpy.testing import assert_allclose

from conftest import random_hermitian, random_orthonormal
from pseur.data import ArraySpec, steering_vector
from pseur.ops import (EigenSystem, NumericalError, bessel_j0, bessel_matrix,
                       hermitian_eig, ipn_matrix, lowrank_update_inverse,
                       woodbury_inverse)


def quadrature_outer_product(num_elements, num_points=100000):
    """(1/2pi) int_{-pi}^{pi} a(theta) a^H(theta) d theta, trapezoid rule."""
    theta = np.linspace(-np.pi, np.pi, num_points, endpoint=False)
    lags = np.arange(num_elements)
    steering = np.exp(-1j * np.pi * np.outer(lags, np.sin(theta)))
    return steering @ steering.conj().T / num_points


class TestHermitianEig:

    def test_identity(self):
        eig = hermitian_eig(np.eye(4))
        assert_allclose(eig.values, np.ones(4))
        assert_allclose(eig.vectors.conj().T @ eig.vectors, np.eye(4),
                        atol=1e-12)

    def test_rank_one_update(self):
        spec = ArraySpec(8)
        a = steering_vector(20.0, spec)
        mat = 3.0 * np.outer(a, a.conj()) + 0.5 * np.eye(8)
        eig = hermitian_eig(mat)
        assert eig.values[0] == pytest.approx(8 * 3.0 + 0.5, rel=1e-12)
        assert_allclose(eig.values[1:], 0.5, atol=1e-10)

    def test_random_residual(self, rng):
        mat = random_hermitian(rng, 8)
        eig = hermitian_eig(mat)
        residual = mat @ eig.vectors - eig.vectors * eig.values
        assert np.linalg.norm(residual) <= 1e-9 * np.linalg.norm(mat)
        assert np.all(np.diff(eig.values) <= 0)
        orth = eig.vectors.conj().T @ eig.vectors - np.eye(8)
        assert np.linalg.norm(orth) <= 1e-10 * 8
        assert eig.values.sum() == pytest.approx(
            np.trace(mat).real, rel=1e-9, abs=1e-12)

    def test_phase_convention(self, rng):
        eig = hermitian_eig(random_hermitian(rng, 6))
        for col in eig.vectors.T:
            pivot = col[np.argmax(np.abs(col))]
            assert abs(pivot.imag) < 1e-12
            assert pivot.real > 0

    def test_deterministic(self, rng):
        mat = random_hermitian(rng, 10)
        first, second = hermitian_eig(mat), hermitian_eig(mat)
        assert np.array_equal(first.values, second.values)
        assert np.array_equal(first.vectors, second.vectors)

    def test_psd_spectrum_nonnegative(self, rng):
        x = rng.standard_normal((12, 3)) + 1j * rng.standard_normal((12, 3))
        mat = x @ x.conj().T
        eig = hermitian_eig(mat)
        assert eig.values.min() >= -1e-10 * np.linalg.norm(mat)

    def test_rejects_non_hermitian(self, rng):
        mat = random_hermitian(rng, 4)
        mat[0, 1] += 1.0
        with pytest.raises(NumericalError, match='not Hermitian'):
            hermitian_eig(mat)

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            hermitian_eig(np.ones((2, 3)))

    def test_truncate(self):
        eig = EigenSystem(np.array([2.0, 1e-3, 1e-12]), np.eye(3))
        kept = eig.truncate(1e-8)
        assert kept.rank == 2
        assert_allclose(kept.reassemble(), np.diag([2.0, 1e-3, 0.0]))


class TestBessel:

    def test_origin(self):
        assert bessel_j0(0.0) == 1.0

    def test_first_zero(self):
        assert abs(bessel_j0(2.404825557695773)) <= 1e-9

    def test_pi_matches_quadrature(self):
        theta = np.linspace(-np.pi, np.pi, 100000, endpoint=False)
        oracle = np.mean(np.exp(1j * np.pi * np.sin(theta))).real
        assert bessel_j0(np.pi) == pytest.approx(oracle, abs=1e-9)
        assert bessel_j0(np.pi) == pytest.approx(-0.304242, abs=1e-6)

    def test_vectorized(self):
        x = np.arange(5) * np.pi
        assert bessel_j0(x).shape == (5, )

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            bessel_j0(np.inf)

    def test_matrix_single_element(self):
        assert_allclose(bessel_matrix(1), [[1.0]])

    def test_matrix_structure(self):
        mat = bessel_matrix(7)
        assert_allclose(np.diag(mat), np.ones(7))
        assert_allclose(mat, mat.T)
        assert mat[2, 5] == pytest.approx(bessel_j0(3 * np.pi), abs=1e-14)

    @pytest.mark.parametrize('num_elements', [4, 16, 32])
    def test_matrix_matches_quadrature(self, num_elements):
        oracle = quadrature_outer_product(num_elements)
        assert np.max(np.abs(oracle - bessel_matrix(num_elements))) <= 1e-6

    def test_matrix_rejects_empty(self):
        with pytest.raises(ValueError):
            bessel_matrix(0)


def random_eigensystem(rng, num_elements, rank):
    vectors = random_orthonormal(rng, num_elements, rank)
    values = np.sort(rng.uniform(0.01, 2.0, rank))[::-1]
    return EigenSystem(values, vectors)


class TestWoodbury:

    def test_empty_update(self):
        eig = EigenSystem(np.zeros(0), np.zeros((5, 0)))
        inverse = woodbury_inverse(0.5, 10.0, eig)
        assert_allclose(inverse, np.eye(5) / (2 * np.pi * 0.5))

    def test_rank_three(self, rng):
        eig = random_eigensystem(rng, 8, 3)
        inverse = woodbury_inverse(0.2, 500.0, eig)
        product = ipn_matrix(0.2, 500.0, eig) @ inverse
        assert np.linalg.norm(product - np.eye(8)) <= 1e-8

    def test_homogeneity(self, rng):
        eig = random_eigensystem(rng, 6, 2)
        base = woodbury_inverse(0.3, 30.0, eig)
        scaled = woodbury_inverse(0.3 * 7.0, 30.0 * 7.0, eig)
        assert_allclose(scaled, base / 7.0, rtol=1e-12, atol=1e-14)

    def test_matches_dense_inverse(self):
        rng = np.random.default_rng(0)
        for trial in range(100):
            num_elements = (8, 20)[trial % 2]
            rank = int(rng.integers(1, num_elements))
            eig = random_eigensystem(rng, num_elements, rank)
            gamma_low = rng.uniform(0.01, 1.0)
            gamma_high = gamma_low * rng.uniform(1.5, 1e4)
            inverse = woodbury_inverse(gamma_low, gamma_high, eig)
            dense = np.linalg.inv(ipn_matrix(gamma_low, gamma_high, eig))
            error = np.linalg.norm(inverse - dense) / np.linalg.norm(dense)
            assert error <= 1e-8

    def test_rejects_inverted_levels(self, rng):
        eig = random_eigensystem(rng, 4, 1)
        with pytest.raises(ValueError, match='gamma_high'):
            woodbury_inverse(1.0, 1.0, eig)
        with pytest.raises(ValueError):
            woodbury_inverse(0.0, 1.0, eig)

    def test_lowrank_update(self, rng):
        basis = rng.standard_normal((6, 2)) + 1j * rng.standard_normal(
            (6, 2))
        weights = np.array([3.0, 0.5])
        mat = 2.0 * np.eye(6) + (basis * weights) @ basis.conj().T
        assert_allclose(
            lowrank_update_inverse(2.0, basis, weights) @ mat,
            np.eye(6),
            atol=1e-10)
        with pytest.raises(ValueError):
            lowrank_update_inverse(-1.0, basis, weights)
        with pytest.raises(NumericalError):
            lowrank_update_inverse(1.0, basis, np.array([1.0, 0.0]))
