import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import taylor_expm
from qbrach import mat2
from qbrach.errors import DomainError, NonDiagonalizableError
from qbrach.mat2 import decompose, eig2, mat_exp, pauli, recompose
from qbrach.ptsym import PTHamiltonian

I2 = np.eye(2)


def random_matrix(rng, bound=2.0):
    M = rng.uniform(-1, 1, (2, 2)) + 1j * rng.uniform(-1, 1, (2, 2))
    return bound * M / np.max(np.abs(M))


def random_hermitian(rng):
    A = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    return (A + A.conj().T) / 2


class TestPauli:
    def test_sigma3_diagonal(self):
        np.testing.assert_array_equal(pauli(3), np.diag([1, -1]))

    @pytest.mark.parametrize("i", [1, 2, 3])
    def test_squares_to_identity(self, i):
        np.testing.assert_allclose(pauli(i) @ pauli(i), I2, atol=0)

    @pytest.mark.parametrize("i", [1, 2, 3])
    def test_traceless_hermitian_det(self, i):
        s = pauli(i)
        assert np.trace(s) == 0
        assert mat2.is_hermitian(s)
        assert np.linalg.det(s) == pytest.approx(-1)

    def test_orthogonality(self):
        assert np.trace(pauli(1) @ pauli(2)) == 0

    @pytest.mark.parametrize("bad", [0, 4, -1])
    def test_index_out_of_range(self, bad):
        with pytest.raises(DomainError):
            pauli(bad)


class TestDecompose:
    def test_identity(self):
        d = decompose(I2)
        assert d.scalar == 1
        np.testing.assert_array_equal(d.vector, [0, 0, 0])

    def test_sigma2(self):
        d = decompose(pauli(2))
        assert d.scalar == 0
        np.testing.assert_array_equal(d.vector, [0, 1, 0])

    def test_linear_combination(self):
        M = 0.5 * (3 * I2 + 4 * pauli(3))
        d = decompose(M)
        assert d.scalar == 1.5
        np.testing.assert_array_equal(d.vector, [0, 0, 2])

    def test_round_trip_random(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            M = random_matrix(rng, 5.0)
            np.testing.assert_allclose(recompose(decompose(M)), M, atol=1e-14, rtol=0)

    def test_hermitian_coefficients_real(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            assert decompose(random_hermitian(rng)).is_real()

    def test_rejects_wrong_shape(self):
        with pytest.raises(DomainError):
            decompose(np.eye(3))


class TestMatExp:
    def test_diagonal(self):
        np.testing.assert_allclose(mat_exp(pauli(3), -1j * math.pi / 2), np.diag([-1j, 1j]), atol=1e-15)

    def test_zero_scale(self):
        rng = np.random.default_rng(0)
        np.testing.assert_array_equal(mat_exp(random_matrix(rng), 0), I2)

    def test_pt_matrix_against_frozen_taylor(self):
        # Frozen from oracles.taylor_expm (50 terms, scaling and squaring).
        expected = np.array(
            [[1.087661675181036, -0.879604660657158j], [-0.879604660657158j, 0.208057014523878]]
        )
        H = PTHamiltonian(r=0.5, s=1.0, theta=math.pi / 2).matrix
        np.testing.assert_allclose(mat_exp(H, -1j), expected, atol=1e-10, rtol=0)

    def test_array_scale_broadcasts(self):
        M = pauli(1) + 0.3 * pauli(3)
        ts = np.linspace(0, 2, 7)
        batch = mat_exp(M, -1j * ts)
        assert batch.shape == (7, 2, 2)
        for t, U in zip(ts, batch):
            np.testing.assert_allclose(U, mat_exp(M, -1j * t), atol=1e-15)

    def test_series_branch_continuity(self):
        # Both sides of the series cutoff agree with the oracle.
        M = pauli(1) + 0.5j * pauli(2)
        mu_scale = np.sqrt(abs(np.sum(decompose(M).vector ** 2)))
        for target in (0.5e-4, 0.99e-4, 1.01e-4, 2e-4):
            s = target / mu_scale
            np.testing.assert_allclose(mat_exp(M, s), taylor_expm(s * M), atol=1e-15, rtol=0)

    def test_nilpotent(self):
        N = np.array([[0, 1], [0, 0]], dtype=complex)
        np.testing.assert_allclose(mat_exp(N, 3.0), [[1, 3], [0, 1]], atol=1e-15)

    def test_oracle_equivalence(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            M = random_matrix(rng)
            s = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            A = s * M
            # keep ||scale*M|| <= 5
            A *= min(1.0, 5.0 / np.linalg.norm(A, 2))
            np.testing.assert_allclose(mat_exp(A, 1.0), taylor_expm(A), atol=1e-10, rtol=0)

    def test_homomorphism(self):
        rng = np.random.default_rng(12)
        for _ in range(100):
            M = random_matrix(rng)
            s1, s2 = (complex(*rng.uniform(-1.4, 1.4, 2)) for _ in range(2))
            s1 *= min(1, 2 / abs(s1))
            s2 *= min(1, 2 / abs(s2))
            np.testing.assert_allclose(
                mat_exp(M, s1) @ mat_exp(M, s2), mat_exp(M, s1 + s2), atol=1e-10, rtol=0
            )

    @settings(max_examples=100, deadline=None)
    @given(
        st.lists(st.floats(-3, 3), min_size=4, max_size=4),
        st.floats(-10, 10),
    )
    def test_unitarity(self, coeffs, t):
        a, x, y, z = coeffs
        H = a * I2 + x * pauli(1) + y * pauli(2) + z * pauli(3)
        U = mat_exp(H, -1j * t)
        np.testing.assert_allclose(U.conj().T @ U, I2, atol=1e-12)

    def test_spectral_consistency(self):
        rng = np.random.default_rng(13)
        for _ in range(100):
            M = random_matrix(rng)
            s = complex(*rng.uniform(-1, 1, 2))
            vals, _ = eig2(M)
            got = np.sort_complex(np.linalg.eigvals(mat_exp(M, s)))
            np.testing.assert_allclose(got, np.sort_complex(np.exp(s * vals)), atol=1e-10)


class TestEig2:
    def test_diagonal(self):
        vals, vecs = eig2(np.diag([1.0, 3.0]))
        np.testing.assert_allclose(vals, [1, 3])
        np.testing.assert_allclose(vecs, I2, atol=1e-15)

    def test_sigma1(self):
        vals, vecs = eig2(pauli(1))
        np.testing.assert_allclose(vals, [-1, 1])
        r = 1 / math.sqrt(2)
        np.testing.assert_allclose(vecs[:, 0], [r, -r], atol=1e-15)
        np.testing.assert_allclose(vecs[:, 1], [r, r], atol=1e-15)

    def test_exceptional_point_is_defective(self):
        H = PTHamiltonian(r=1.0, s=1.0, theta=math.pi / 2)
        # discriminant s^2 - r^2 sin^2(theta) vanishes here
        assert H.discriminant == pytest.approx(0.0, abs=1e-15)
        with pytest.raises(NonDiagonalizableError):
            eig2(H.matrix)

    def test_jordan_block_is_defective(self):
        with pytest.raises(NonDiagonalizableError):
            eig2([[2.0, 1.0], [0.0, 2.0]])

    def test_scalar_matrix_is_diagonalizable(self):
        vals, vecs = eig2(2.5 * I2)
        np.testing.assert_allclose(vals, [2.5, 2.5])
        np.testing.assert_allclose(vecs, I2)

    def test_residual_and_ordering_random(self):
        rng = np.random.default_rng(14)
        for _ in range(300):
            M = random_matrix(rng)
            vals, vecs = eig2(M)
            for k in range(2):
                np.testing.assert_allclose(M @ vecs[:, k], vals[k] * vecs[:, k], atol=1e-10)
                assert np.linalg.norm(vecs[:, k]) == pytest.approx(1.0)
            assert vals[0].real <= vals[1].real + 1e-12

    def test_complex_conjugate_pair_ordered_by_imag(self):
        vals, _ = eig2(PTHamiltonian(r=2.0, s=1.0, theta=math.pi / 2).matrix)
        assert vals[0].real == pytest.approx(vals[1].real)
        assert vals[0].imag < vals[1].imag
        np.testing.assert_allclose(vals, [-1j * math.sqrt(3), 1j * math.sqrt(3)], atol=1e-12)
