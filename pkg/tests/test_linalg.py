"""Tests for the dense matrix kernel."""

import numpy as np
import pytest

from spptkit import linalg
from spptkit.errors import NotHermitian, NotNormal, NotPsd, NotSquare, ValidationError


def random_hermitian(n, rng):
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (m + m.conj().T) / 2


def random_complex(n, m, rng):
    return rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m))


class TestHermEig:
    def test_diagonal(self):
        res = linalg.herm_eig(np.diag([2.0, 1.0]))
        np.testing.assert_allclose(res.values, [1.0, 2.0])
        np.testing.assert_allclose(np.abs(res.vectors), [[0, 1], [1, 0]])

    def test_identity(self):
        res = linalg.herm_eig(np.eye(3))
        np.testing.assert_allclose(res.values, [1.0, 1.0, 1.0])

    def test_pauli_x(self):
        # characteristic polynomial lambda^2 - 1 = 0 by hand
        res = linalg.herm_eig(np.array([[0.0, 1.0], [1.0, 0.0]]))
        np.testing.assert_allclose(res.values, [-1.0, 1.0], atol=1e-14)

    def test_reconstruction_random(self):
        rng = np.random.default_rng(42)
        for n in range(2, 13):
            m = random_hermitian(n, rng)
            values, vectors = linalg.herm_eig(m)
            rebuilt = (vectors * values) @ vectors.conj().T
            assert linalg.frob(rebuilt - m) <= 1e-10 * linalg.frob(m)
            assert linalg.frob(vectors.conj().T @ vectors - np.eye(n)) <= 1e-12

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitian):
            linalg.herm_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_rejects_non_square(self):
        with pytest.raises(NotSquare):
            linalg.herm_eig(np.zeros((2, 3)))

    def test_rejects_nan(self):
        with pytest.raises(ValidationError):
            linalg.herm_eig(np.array([[np.nan, 0.0], [0.0, 1.0]]))


class TestSvd:
    def test_identity(self):
        res = linalg.svd(np.eye(4))
        np.testing.assert_allclose(res.sigma, np.ones(4))

    def test_diagonal(self):
        res = linalg.svd(np.diag([3.0, 0.0]))
        np.testing.assert_allclose(res.sigma, [3.0, 0.0])

    def test_nilpotent(self):
        # M M^dag = diag(1, 0) by hand, so singular values are (1, 0)
        res = linalg.svd(np.array([[0.0, 1.0], [0.0, 0.0]]))
        np.testing.assert_allclose(res.sigma, [1.0, 0.0], atol=1e-15)

    def test_diagonal_input_gives_exact_factors(self):
        m = np.diag([1.0, 1.0, 1.0, 1.0, 0.0]).astype(complex)
        u, sigma, v = linalg.svd(m)
        assert np.array_equal(u, np.eye(5, dtype=complex))
        assert np.array_equal(v, np.eye(5, dtype=complex))
        np.testing.assert_allclose(sigma, [1, 1, 1, 1, 0])

    def test_unsorted_complex_diagonal(self):
        m = np.diag([1.0j, -2.0, 0.5])
        u, sigma, v = linalg.svd(m)
        np.testing.assert_allclose(sigma, [2.0, 1.0, 0.5])
        np.testing.assert_allclose(u @ np.diag(sigma) @ v.conj().T, m, atol=1e-15)

    def test_reconstruction_random(self):
        rng = np.random.default_rng(43)
        for n in range(2, 13):
            m = random_complex(n, rng.integers(2, 13), rng)
            u, sigma, v = linalg.svd(m)
            smat = np.zeros(m.shape)
            np.fill_diagonal(smat, sigma)
            assert linalg.frob(u @ smat @ v.conj().T - m) <= 1e-10 * linalg.frob(m)
            assert np.all(np.diff(sigma) <= 1e-12)
            assert np.all(sigma >= 0)


class TestPsdCheck:
    def test_identity(self):
        rep = linalg.psd_check(np.eye(2))
        assert rep.is_psd and abs(rep.min_eig - 1.0) < 1e-14

    def test_indefinite(self):
        rep = linalg.psd_check(np.diag([1.0, -1.0]))
        assert not rep.is_psd and abs(rep.min_eig + 1.0) < 1e-14

    def test_2x2(self):
        # eigenvalues 1 and 3 by hand
        rep = linalg.psd_check(np.array([[2.0, 1.0], [1.0, 2.0]]))
        assert rep.is_psd and abs(rep.min_eig - 1.0) < 1e-14

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitian):
            linalg.psd_check(np.array([[1.0, 1.0], [0.0, 1.0]]))


class TestSqrtPsd:
    def test_diagonal(self):
        np.testing.assert_allclose(linalg.sqrt_psd(np.diag([4.0, 9.0])),
                                   np.diag([2.0, 3.0]), atol=1e-14)

    def test_identity(self):
        for d in (1, 3, 7):
            np.testing.assert_allclose(linalg.sqrt_psd(np.eye(d)), np.eye(d),
                                       atol=1e-14)

    def test_square_reproduces_input(self):
        m = np.array([[2.0, 1.0], [1.0, 2.0]])
        root = linalg.sqrt_psd(m)
        assert linalg.frob(root @ root - m) <= 1e-12

    def test_clamps_noise_but_rejects_indefinite(self):
        noisy = np.diag([1.0, -1e-12])
        root = linalg.sqrt_psd(noisy)
        assert root[1, 1] == 0.0
        with pytest.raises(NotPsd):
            linalg.sqrt_psd(np.diag([1.0, -1e-3]))


class TestPinvPsd:
    def test_diagonal(self):
        np.testing.assert_allclose(linalg.pinv_psd(np.diag([2.0, 0.0])),
                                   np.diag([0.5, 0.0]), atol=1e-15)

    def test_identity(self):
        np.testing.assert_allclose(linalg.pinv_psd(np.eye(3)), np.eye(3),
                                   atol=1e-15)

    def test_penrose_identities_rank_deficient(self):
        rng = np.random.default_rng(44)
        g = random_complex(4, 2, rng)
        m = g @ g.conj().T  # rank-2 PSD of size 4
        p = linalg.pinv_psd(m)
        assert linalg.frob(m @ p @ m - m) <= 1e-10 * linalg.frob(m)
        assert linalg.frob(p @ m @ p - p) <= 1e-9 * linalg.frob(p)
        assert linalg.frob((m @ p).conj().T - m @ p) <= 1e-9
        assert linalg.frob((p @ m).conj().T - p @ m) <= 1e-9


class TestRankOf:
    def test_zero(self):
        assert linalg.rank_of(np.zeros((3, 3))) == 0

    def test_diagonal(self):
        assert linalg.rank_of(np.diag([1.0, 1.0, 0.0, 0.0, 0.0])) == 2

    def test_unitary_invariance(self):
        rng = np.random.default_rng(45)
        for _ in range(10):
            n = int(rng.integers(2, 9))
            r = int(rng.integers(1, n + 1))
            g = random_complex(n, r, rng)
            m = g @ g.conj().T
            u = linalg.haar_unitary(n, rng)
            assert linalg.rank_of(m) == linalg.rank_of(u @ m @ u.conj().T) == r


class TestNullspace:
    def test_empty_rows(self):
        basis = linalg.nullspace(np.zeros((0, 4)))
        np.testing.assert_allclose(basis, np.eye(4))

    def test_shift(self):
        m = np.array([[0.0, 1.0, 0.0]])
        basis = linalg.nullspace(m)
        assert basis.shape == (3, 2)
        assert linalg.frob(m @ basis) <= 1e-14


class TestNormalEig:
    def test_normal_reconstruction(self):
        rng = np.random.default_rng(46)
        for trial in range(40):
            n = int(rng.integers(2, 9))
            u = linalg.haar_unitary(n, rng)
            lam = rng.normal(size=n) + 1j * rng.normal(size=n)
            if trial % 3 == 0 and n >= 4:
                lam[1] = lam[0]  # force a degenerate pair
            m = (u * lam) @ u.conj().T
            values, vectors = linalg.normal_eig(m)
            rebuilt = (vectors * values) @ vectors.conj().T
            assert linalg.frob(rebuilt - m) <= 1e-11 * linalg.frob(m)
            assert linalg.frob(vectors.conj().T @ vectors - np.eye(n)) <= 1e-12

    def test_rejects_non_normal(self):
        with pytest.raises(NotNormal):
            linalg.normal_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_deterministic_order(self):
        m = np.diag([2.0, -1.0, 0.5 + 0.5j])
        values, _ = linalg.normal_eig(m)
        assert values[0].real <= values[1].real <= values[2].real


def test_haar_unitary_is_unitary():
    rng = np.random.default_rng(47)
    u = linalg.haar_unitary(6, rng)
    assert linalg.frob(u.conj().T @ u - np.eye(6)) <= 1e-12
