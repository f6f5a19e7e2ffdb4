"""Dense complex linear algebra for small (2x2 .. 8x8) spin problems.

Everything here operates on plain ``numpy`` complex arrays.  Matrix
exponentials of Hermitian generators go through an eigendecomposition,
which keeps the resulting propagators unitary to solver precision and
needs no step-size control.  Default tolerances are module constants and
every check accepts an ``atol`` override.
"""

from __future__ import annotations

import numpy as np

HERMITIAN_ATOL = 1e-12
UNITARY_ATOL = 1e-10
TRACE_ATOL = 1e-12
EIGVAL_ATOL = 1e-10


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two square complex matrices."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"kron: first factor is not square, shape {a.shape}")
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise ValueError(f"kron: second factor is not square, shape {b.shape}")
    return np.kron(a, b)


def is_hermitian(m: np.ndarray, atol: float = HERMITIAN_ATOL) -> bool:
    m = np.asarray(m)
    return bool(np.max(np.abs(m - m.conj().T)) <= atol)


def is_unitary(m: np.ndarray, atol: float = UNITARY_ATOL) -> bool:
    m = np.asarray(m)
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) <= atol)


def check_density_matrix(
    rho: np.ndarray,
    trace_atol: float = TRACE_ATOL,
    herm_atol: float = HERMITIAN_ATOL,
    eig_atol: float = EIGVAL_ATOL,
) -> None:
    """Raise ``ValueError`` unless ``rho`` is a valid density matrix.

    Checks unit trace, Hermiticity and positivity (eigenvalues above
    ``-eig_atol``).
    """
    rho = np.asarray(rho, dtype=complex)
    tr = np.trace(rho)
    if abs(tr - 1.0) > trace_atol:
        raise ValueError(f"density matrix trace {tr} differs from 1")
    if not is_hermitian(rho, herm_atol):
        raise ValueError("density matrix is not Hermitian")
    evals = np.linalg.eigvalsh(rho)
    if evals.min() < -eig_atol:
        raise ValueError(f"density matrix has negative eigenvalue {evals.min()}")


def propagator(h: np.ndarray, t: float, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    """Unitary propagator ``exp(-i h t)`` of a Hermitian generator.

    Computed via the eigendecomposition of ``h``; rejects non-Hermitian
    input and negative durations.
    """
    h = np.asarray(h, dtype=complex)
    if t < 0:
        raise ValueError(f"propagator: negative duration {t}")
    if not is_hermitian(h, atol):
        raise ValueError("propagator: generator is not Hermitian")
    evals, vecs = np.linalg.eigh(h)
    phases = np.exp(-1j * evals * t)
    return (vecs * phases) @ vecs.conj().T


def evolve(rho: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Conjugate a density matrix by a unitary, ``u rho u^dag``."""
    rho = np.asarray(rho, dtype=complex)
    u = np.asarray(u, dtype=complex)
    if rho.shape != u.shape:
        raise ValueError(f"evolve: dimension mismatch {rho.shape} vs {u.shape}")
    return u @ rho @ u.conj().T


def expectation(rho: np.ndarray, obs: np.ndarray, imag_atol: float = 1e-12) -> float:
    """Real expectation value ``Tr(rho obs)`` of a Hermitian observable.

    The imaginary part must vanish within ``imag_atol``; it is checked
    and discarded.
    """
    rho = np.asarray(rho)
    obs = np.asarray(obs)
    if rho.shape != obs.shape:
        raise ValueError(f"expectation: dimension mismatch {rho.shape} vs {obs.shape}")
    val = np.trace(rho @ obs)
    if abs(val.imag) > imag_atol:
        raise ValueError(f"expectation has imaginary part {val.imag}")
    return float(val.real)
