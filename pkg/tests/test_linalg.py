"""Oracle tests for the dense linear-algebra kernel."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinseq.linalg import (
    check_density_matrix,
    evolve,
    expectation,
    is_hermitian,
    is_unitary,
    kron,
    propagator,
)

SIGMA_Z = np.diag([1.0, -1.0]).astype(complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex) / 2


def random_complex(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def random_hermitian(rng, n):
    m = random_complex(rng, n)
    return (m + m.conj().T) / 2


def random_density(rng, n):
    m = random_complex(rng, n)
    rho = m @ m.conj().T
    return rho / np.trace(rho)


class TestKron:
    def test_identity(self):
        np.testing.assert_array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))

    def test_sigma_z_pair(self):
        np.testing.assert_array_equal(
            kron(SIGMA_Z, SIGMA_Z), np.diag([1.0, -1.0, -1.0, 1.0])
        )

    @given(st.integers(0, 10**6))
    @settings(max_examples=25, deadline=None)
    def test_matches_index_formula(self, seed):
        # oracle: entry (in+k, jm+l) = a[i,j] * b[k,l]
        rng = np.random.default_rng(seed)
        a, b = random_complex(rng, 2), random_complex(rng, 2)
        got = kron(a, b)
        for i in range(2):
            for j in range(2):
                for k in range(2):
                    for l in range(2):
                        assert abs(got[2 * i + k, 2 * j + l] - a[i, j] * b[k, l]) <= 1e-15

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            kron(np.ones((2, 3)), np.eye(2))


def taylor_expm(h, t, terms=50):
    """Scaled-and-squared truncated series for exp(-i h t)."""
    squarings = 0
    x = -1j * h * t
    while np.linalg.norm(x) > 0.5:
        x = x / 2
        squarings += 1
    out = np.eye(h.shape[0], dtype=complex)
    term = np.eye(h.shape[0], dtype=complex)
    for k in range(1, terms):
        term = term @ x / k
        out = out + term
    for _ in range(squarings):
        out = out @ out
    return out


class TestPropagator:
    def test_zero_hamiltonian(self):
        np.testing.assert_allclose(propagator(np.zeros((4, 4)), 3.7), np.eye(4), atol=1e-15)

    def test_sz_pi(self):
        got = propagator(SIGMA_Z / 2, np.pi)
        np.testing.assert_allclose(
            got, np.diag([np.exp(-1j * np.pi / 2), np.exp(1j * np.pi / 2)]), atol=1e-14
        )

    def test_matches_series_oracle(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            h = random_hermitian(rng, 4)
            got = propagator(h, 0.37)
            np.testing.assert_allclose(got, taylor_expm(h, 0.37), atol=1e-12)

    def test_result_is_unitary(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            assert is_unitary(propagator(random_hermitian(rng, 8), 2.1))

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            propagator(np.array([[0.0, 1.0], [0.0, 0.0]]), 1.0)

    def test_rejects_negative_duration(self):
        with pytest.raises(ValueError):
            propagator(np.eye(2), -0.1)

    @given(st.integers(0, 10**6))
    @settings(max_examples=25, deadline=None)
    def test_additive_in_time(self, seed):
        rng = np.random.default_rng(seed)
        h = random_hermitian(rng, 4)
        t1, t2 = rng.uniform(0, 2, size=2)
        np.testing.assert_allclose(
            propagator(h, t1) @ propagator(h, t2), propagator(h, t1 + t2), atol=1e-10
        )

    def test_preserves_hermiticity_of_states(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            rho = random_density(rng, 4)
            out = evolve(rho, propagator(random_hermitian(rng, 4), 1.3))
            assert is_hermitian(out, 1e-10)


class TestEvolve:
    def test_identity(self):
        rng = np.random.default_rng(3)
        rho = random_density(rng, 4)
        np.testing.assert_array_equal(evolve(rho, np.eye(4)), rho)

    def test_pi_rotation_flips_spin(self):
        up = np.diag([1.0, 0.0]).astype(complex)
        down = np.diag([0.0, 1.0]).astype(complex)
        u = propagator(SX, np.pi / (1 / 2))  # angle pi at amplitude 1/2
        np.testing.assert_allclose(evolve(up, u), down, atol=1e-14)

    def test_spectrum_preserved(self):
        rng = np.random.default_rng(13)
        for _ in range(10):
            rho = random_density(rng, 4)
            u = propagator(random_hermitian(rng, 4), 0.9)
            out = evolve(rho, u)
            assert abs(np.trace(out) - 1.0) <= 1e-10
            np.testing.assert_allclose(
                np.linalg.eigvalsh(out), np.linalg.eigvalsh(rho), atol=1e-10
            )

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            evolve(np.eye(2) / 2, np.eye(4))


class TestExpectation:
    def test_maximally_mixed_traceless(self):
        assert expectation(np.eye(2) / 2, SIGMA_Z / 2) == 0.0

    def test_eigenstate(self):
        up = np.diag([1.0, 0.0]).astype(complex)
        assert expectation(up, SIGMA_Z / 2) == pytest.approx(0.5, abs=1e-15)

    def test_matches_double_sum(self):
        rng = np.random.default_rng(17)
        for _ in range(10):
            rho = random_density(rng, 4)
            obs = random_hermitian(rng, 4)
            oracle = sum(
                rho[i, j] * obs[j, i] for i in range(4) for j in range(4)
            ).real
            assert abs(expectation(rho, obs) - oracle) <= 1e-14

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            expectation(np.eye(2) / 2, np.eye(4))


class TestDensityChecks:
    def test_valid_state_passes(self):
        rng = np.random.default_rng(23)
        check_density_matrix(random_density(rng, 4))

    def test_bad_trace_rejected(self):
        with pytest.raises(ValueError, match="trace"):
            check_density_matrix(np.eye(4, dtype=complex))

    def test_negative_eigenvalue_rejected(self):
        with pytest.raises(ValueError, match="eigenvalue"):
            check_density_matrix(np.diag([1.5, -0.5, 0, 0]).astype(complex))
