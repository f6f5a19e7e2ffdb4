"""Spin operators, system Hamiltonians and the pseudo-spin correspondence.

Two physical pictures are provided:

* the 4-level picture of a target spin ``S`` driven in its rotating frame
  and coupled to a partner spin ``I`` of level splitting ``omega_i``
  (hyperpolarization with an electron source, target basis ``I (x) S``),
* the 8-level lab-frame picture of two equivalent hydrogens coupled by a
  scalar coupling ``j`` plus a heteronucleus (parahydrogen setting,
  basis ``I1 (x) I2 (x) S``).

The singlet/triplet combination of the two hydrogens splits their
4-level manifold into the transfer pseudo-spin ``I`` (span of ``|T0>``,
``|S0>``, splitting ``j``) and a spectator pseudo-spin ``Itilde`` (span
of ``|T+>``, ``|T->``), after which the lab-frame Hamiltonian takes the
driven two-spin form with ``omega_i = j`` and coupling ``j1 - j2``.
``pseudospin_identities_report`` and ``dynamical_equivalence_report``
verify this correspondence numerically.

Sign conventions, frozen here and used everywhere else:

* basis ordering puts the partner/pseudo spin first, ``I (x) S``, with
  spin-up as the first basis state;
* spin operators are ``sigma/2``; propagators are ``exp(-i H t)``;
* drive phase 0 points along ``+x`` (``cos(phi) Sx + sin(phi) Sy``);
* the rotating-frame Hamiltonian omits the ``omega_s Sz`` term and
  represents resonance offsets of the drive as ``delta * Sz``.

All frequencies are angular.  Dimensionless studies set the coupling
``a_perp = 1`` and quote ``omega_i``, drive amplitudes, offsets and time
in units of it.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .linalg import kron, propagator, evolve, expectation, is_hermitian

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
ID2 = np.eye(2, dtype=complex)


class RegimeWarning(UserWarning):
    """Parameters are outside the scale hierarchy the schemes assume."""


@dataclass(frozen=True)
class DnpParams:
    """Rotating-frame parameters of the driven two-spin system.

    ``omega_i`` is the level splitting of the undriven partner spin,
    ``a_perp`` the transverse coupling (both rad/s).  ``omega_s`` is the
    lab-frame splitting of the driven spin; it is eliminated by the
    rotating frame and kept only as metadata (the lab-frame equivalence
    check reinstates it).
    """

    omega_i: float
    a_perp: float
    omega_s: float = 0.0

    def __post_init__(self):
        if self.a_perp <= 0:
            warnings.warn(
                f"coupling a_perp = {self.a_perp} is not positive; "
                "no polarization transfer is possible for a_perp = 0",
                RegimeWarning,
                stacklevel=2,
            )
        elif self.omega_i < 4 * self.a_perp:
            warnings.warn(
                f"omega_i = {self.omega_i} < 4 a_perp = {4 * self.a_perp}: "
                "outside the recommended scale hierarchy",
                RegimeWarning,
                stacklevel=2,
            )


@dataclass(frozen=True)
class PhipParams:
    """Lab-frame parameters of the two-hydrogen + heteronucleus system.

    ``j`` is the hydrogen-hydrogen scalar coupling, ``j1``/``j2`` the
    couplings of each hydrogen to the heteronucleus, ``omega_i0`` and
    ``omega_s`` the Larmor frequencies (all rad/s).
    """

    omega_i0: float
    omega_s: float
    j: float
    j1: float
    j2: float

    def __post_init__(self):
        if self.j == 0:
            raise ValueError("inter-hydrogen coupling j must be nonzero")
        if abs(self.j) < 10 * abs(self.j1 - self.j2):
            warnings.warn(
                f"|j| = {abs(self.j)} is not large against |j1 - j2| = "
                f"{abs(self.j1 - self.j2)}: near-equivalence is strained",
                RegimeWarning,
                stacklevel=2,
            )


@dataclass(frozen=True)
class DriveSample:
    """Instantaneous drive value: Rabi amplitude (rad/s) and phase (rad)."""

    amplitude: float
    phase: float

    def __post_init__(self):
        if self.amplitude < 0:
            raise ValueError(f"drive amplitude must be >= 0, got {self.amplitude}")


@dataclass(frozen=True)
class ErrorModel:
    """Static drive errors: offset ``delta`` (rad/s) and relative Rabi error."""

    delta: float = 0.0
    rabi_rel: float = 0.0


IDEAL = ErrorModel(0.0, 0.0)


def spin_ops(n_spins: int, index: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """x/y/z spin-1/2 operators of spin ``index`` in an ``n_spins`` register.

    ``index`` is 1-based; the operators are ``sigma/2`` factors embedded
    with identities on every other site, so same-index components obey
    ``[Jx, Jy] = i Jz`` and operators of different spins commute.
    """
    if not 1 <= n_spins <= 3:
        raise ValueError(f"n_spins must be 1..3, got {n_spins}")
    if not 1 <= index <= n_spins:
        raise ValueError(f"spin index {index} out of range 1..{n_spins}")

    def embed(sigma):
        factors = [ID2] * n_spins
        factors[index - 1] = sigma / 2.0
        return reduce(kron, factors)

    return embed(SIGMA_X), embed(SIGMA_Y), embed(SIGMA_Z)


# 4-level operators of the driven picture, ordering I (x) S.
IX4, IY4, IZ4 = spin_ops(2, 1)
SX4, SY4, SZ4 = spin_ops(2, 2)


def dnp_hamiltonian(p: DnpParams, d: DriveSample, e: ErrorModel = IDEAL) -> np.ndarray:
    """Rotating-frame Hamiltonian of the driven pair for one drive sample.

        H = omega_i Iz + a_perp Sz Ix
            + (1 + rabi_rel) amplitude (cos(phase) Sx + sin(phase) Sy)
            + delta Sz
    """
    amp = (1.0 + e.rabi_rel) * d.amplitude
    return (
        p.omega_i * IZ4
        + p.a_perp * (SZ4 @ IX4)
        + amp * (np.cos(d.phase) * SX4 + np.sin(d.phase) * SY4)
        + e.delta * SZ4
    )


def phip_hamiltonian(p: PhipParams) -> np.ndarray:
    """Lab-frame Hamiltonian of two hydrogens and a heteronucleus.

        H = omega_i0 (I1z + I2z) + omega_s Sz + j I1.I2
            + j1 Sz I1z + j2 Sz I2z

    on the product basis ``I1 (x) I2 (x) S``.
    """
    i1 = spin_ops(3, 1)
    i2 = spin_ops(3, 2)
    _, _, sz = spin_ops(3, 3)
    dot = sum(a @ b for a, b in zip(i1, i2))
    return (
        p.omega_i0 * (i1[2] + i2[2])
        + p.omega_s * sz
        + p.j * dot
        + p.j1 * (sz @ i1[2])
        + p.j2 * (sz @ i2[2])
    )


def singlet_triplet_unitary() -> np.ndarray:
    """Product basis -> ``{|S0>, |T0>, |T+>, |T->} (x) S`` basis change.

    Rows of the returned 8x8 unitary are the new basis states expressed
    in the ``I1 (x) I2 (x) S`` product basis (spin-up first).
    """
    s = 1.0 / np.sqrt(2.0)
    # columns: uu, ud, du, dd
    w = np.array(
        [
            [0.0, s, -s, 0.0],  # S0
            [0.0, s, s, 0.0],  # T0
            [1.0, 0.0, 0.0, 0.0],  # T+
            [0.0, 0.0, 0.0, 1.0],  # T-
        ],
        dtype=complex,
    )
    return kron(w, ID2)


def _hydrogen_op(m4: np.ndarray) -> np.ndarray:
    """Embed a 4x4 hydrogen-manifold operator (S/T ordering) as 8x8."""
    return kron(m4, ID2)


def pseudospin_operators() -> dict[str, np.ndarray]:
    """Pseudo-spin operators on the ``{S0, T0, T+, T-} (x) S`` basis.

    ``iz``/``ix`` act on the transfer pseudo-spin (up = ``|T0>``, down =
    ``|S0>``), ``itz`` on the spectator pair, ``p_i``/``p_it`` project
    onto the two manifolds, and ``sz8``/``sx8``/``sy8`` act on the
    heteronucleus.
    """
    iz = np.diag([-0.5, 0.5, 0.0, 0.0]).astype(complex)
    ix = np.zeros((4, 4), dtype=complex)
    ix[0, 1] = ix[1, 0] = 0.5
    itz = np.diag([0.0, 0.0, 0.5, -0.5]).astype(complex)
    p_i = np.diag([1.0, 1.0, 0.0, 0.0]).astype(complex)
    p_it = np.diag([0.0, 0.0, 1.0, 1.0]).astype(complex)
    id4 = np.eye(4, dtype=complex)
    return {
        "iz": _hydrogen_op(iz),
        "ix": _hydrogen_op(ix),
        "itz": _hydrogen_op(itz),
        "p_i": _hydrogen_op(p_i),
        "p_it": _hydrogen_op(p_it),
        "sx8": kron(id4, SIGMA_X / 2),
        "sy8": kron(id4, SIGMA_Y / 2),
        "sz8": kron(id4, SIGMA_Z / 2),
    }


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    passed: bool
    max_residual: float


@dataclass(frozen=True)
class IdentityReport:
    checks: tuple[IdentityCheck, ...]
    atol: float

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {
            "atol": self.atol,
            "all_passed": self.all_passed,
            "checks": [
                {"name": c.name, "passed": c.passed, "max_residual": c.max_residual}
                for c in self.checks
            ],
        }


def pseudospin_identities_report(
    p: PhipParams | None = None, atol: float = 1e-13
) -> IdentityReport:
    """Verify the operator identities behind the pseudo-spin mapping.

    All checks are 8x8 matrix equalities on the ``{S0,T0,T+,T-} (x) S``
    basis: the single-hydrogen ``z`` operators against ``itz +- ix``, the
    scalar-coupling decomposition, the squared pseudo-spin projectors,
    manifold completeness, and finally that the transformed lab-frame
    Hamiltonian splits into a driven-pair part plus a spectator part with
    every spectator term commuting with every driven-pair term.

    ``p`` supplies the couplings for the Hamiltonian split (a generic
    default is used when omitted since the identities are parameter-free).
    """
    if p is None:
        p = PhipParams(omega_i0=1000.0, omega_s=250.0, j=24.0, j1=2.0, j2=1.0)

    u = singlet_triplet_unitary()
    ops = pseudospin_operators()
    iz, ix, itz = ops["iz"], ops["ix"], ops["itz"]
    p_i, p_it, sz8 = ops["p_i"], ops["p_it"], ops["sz8"]

    i1 = spin_ops(3, 1)
    i2 = spin_ops(3, 2)
    to_st = lambda m: u @ m @ u.conj().T  # noqa: E731
    dot12 = to_st(sum(a @ b for a, b in zip(i1, i2)))
    i1z = to_st(i1[2])
    i2z = to_st(i2[2])

    checks = []

    def check(name, lhs, rhs):
        res = float(np.max(np.abs(lhs - rhs)))
        checks.append(IdentityCheck(name, res <= atol, res))

    check("i1z = itz + ix", i1z, itz + ix)
    check("i2z = itz - ix", i2z, itz - ix)
    check("i1.i2 = p_it/4 - p_i/4 + iz", dot12, p_it / 4 - p_i / 4 + iz)
    check("itz^2 = p_it/4", itz @ itz, p_it / 4)
    check("iz^2 = p_i/4", iz @ iz, p_i / 4)
    check("p_i + p_it = 1", p_i + p_it, np.eye(8))

    # Transformed lab-frame Hamiltonian against its two commuting parts.
    h_st = to_st(phip_hamiltonian(p))
    pair_terms = {
        "j iz": p.j * iz,
        "omega_s sz": p.omega_s * sz8,
        "(j1-j2) ix sz": (p.j1 - p.j2) * (ix @ sz8),
    }
    spectator_terms = {
        "2 omega_i0 itz": 2.0 * p.omega_i0 * itz,
        "j/4 p_it": (p.j / 4) * p_it,
        "-j/4 p_i": -(p.j / 4) * p_i,
        "(j1+j2) itz sz": (p.j1 + p.j2) * (itz @ sz8),
    }
    total = sum(pair_terms.values()) + sum(spectator_terms.values())
    check("transformed H = pair + spectator", h_st, total)

    comm_res = 0.0
    for a in spectator_terms.values():
        for b in pair_terms.values():
            comm_res = max(comm_res, float(np.max(np.abs(a @ b - b @ a))))
    checks.append(
        IdentityCheck("spectator terms commute with pair terms", comm_res <= atol, comm_res)
    )

    return IdentityReport(tuple(checks), atol)


def map_phip_to_dnp(p: PhipParams) -> DnpParams:
    """Translate lab-frame couplings into driven-pair parameters.

    The pseudo-spin splitting is the scalar coupling ``j`` and the
    transverse coupling is the difference ``j1 - j2``; the heteronucleus
    splitting carries over unchanged.
    """
    if p.j1 == p.j2:
        warnings.warn(
            "j1 == j2: mapped coupling a_perp = 0, no transfer possible",
            RegimeWarning,
            stacklevel=2,
        )
    with warnings.catch_warnings():
        # Regime advisories of the mapped parameters duplicate the PHIP ones.
        warnings.simplefilter("ignore", RegimeWarning)
        return DnpParams(omega_i=p.j, a_perp=p.j1 - p.j2, omega_s=p.omega_s)


@dataclass(frozen=True)
class EquivalenceReport:
    """Deviations between lab-frame and pseudo-spin drive dynamics."""

    max_sz_deviation: float
    max_iz_deviation: float
    max_leakage: float
    n_boundaries: int

    def as_dict(self) -> dict:
        return {
            "max_sz_deviation": self.max_sz_deviation,
            "max_iz_deviation": self.max_iz_deviation,
            "max_leakage": self.max_leakage,
            "n_boundaries": self.n_boundaries,
        }


def _embed_pair_state(rho4: np.ndarray) -> np.ndarray:
    """Embed a pair-picture state (I up = |T0>) into the S/T-ordered 8-level space."""
    emb = np.zeros((8, 4), dtype=complex)
    emb[2, 0] = 1.0  # (I up, S up)   -> (T0, S up)
    emb[3, 1] = 1.0  # (I up, S dn)   -> (T0, S dn)
    emb[0, 2] = 1.0  # (I dn, S up)   -> (S0, S up)
    emb[1, 3] = 1.0  # (I dn, S dn)   -> (S0, S dn)
    return emb @ rho4 @ emb.conj().T


def dynamical_equivalence_report(
    p: PhipParams,
    drive: list[tuple[DriveSample, float]],
    rho4: np.ndarray | None = None,
) -> EquivalenceReport:
    """Propagate the same drive program in both pictures and compare.

    ``drive`` is a list of ``(DriveSample, duration)`` pieces applied to
    the heteronucleus only.  The 8-level side evolves under the full
    lab-frame Hamiltonian; the 4-level side under the mapped parameters
    with the ``omega_s Sz`` term reinstated (no rotating frame, so the
    two pictures share a clock).  Because the spectator terms commute
    with everything acting on the pair manifold, expectation values must
    agree to solver precision and no population may leak into the
    spectator triplet states.
    """
    if rho4 is None:
        # pseudo-spin down = singlet, heteronucleus unpolarized
        rho4 = np.diag([0.0, 0.0, 0.5, 0.5]).astype(complex)

    p4 = map_phip_to_dnp(p)
    ops = pseudospin_operators()
    u = singlet_triplet_unitary()
    h8_static = u @ phip_hamiltonian(p) @ u.conj().T
    id4 = np.eye(4, dtype=complex)

    rho8 = _embed_pair_state(rho4)
    max_sz = max_iz = max_leak = 0.0
    for sample, duration in drive:
        drive4 = sample.amplitude * (
            np.cos(sample.phase) * SX4 + np.sin(sample.phase) * SY4
        )
        h4 = (
            p4.omega_i * IZ4
            + p4.a_perp * (SZ4 @ IX4)
            + p4.omega_s * SZ4
            + drive4
        )
        h8 = h8_static + kron(id4, sample.amplitude * (
            np.cos(sample.phase) * SIGMA_X / 2 + np.sin(sample.phase) * SIGMA_Y / 2
        ))
        rho4 = evolve(rho4, propagator(h4, duration))
        rho8 = evolve(rho8, propagator(h8, duration))

        max_sz = max(max_sz, abs(expectation(rho4, SZ4) - expectation(rho8, ops["sz8"])))
        max_iz = max(max_iz, abs(expectation(rho4, IZ4) - expectation(rho8, ops["iz"])))
        max_leak = max(max_leak, expectation(rho8, ops["p_it"]))

    return EquivalenceReport(max_sz, max_iz, max_leak, len(drive))


__all__ = [
    "DnpParams",
    "PhipParams",
    "DriveSample",
    "ErrorModel",
    "IDEAL",
    "RegimeWarning",
    "spin_ops",
    "dnp_hamiltonian",
    "phip_hamiltonian",
    "singlet_triplet_unitary",
    "pseudospin_operators",
    "pseudospin_identities_report",
    "IdentityReport",
    "IdentityCheck",
    "map_phip_to_dnp",
    "dynamical_equivalence_report",
    "EquivalenceReport",
    "IX4",
    "IY4",
    "IZ4",
    "SX4",
    "SY4",
    "SZ4",
]
