"""Effective-coupling extraction from drive schedules.

Two independent routes measure the flip-flop coupling a sequence
generates between the spins:

* ``estimate_a_star`` times the first error-free transfer maximum and
  converts it via ``a_star = 2 pi / T`` (prelude/postlude excluded);
* ``cycle_effective_hamiltonian`` takes the principal matrix logarithm
  of one cycle's propagator and projects out the two-spin cross
  couplings.

The closed-form targets for ideal pulses are kept as exact expressions:
1 for the matched spin lock, 2/pi for pi-pulse trains and
2(2+sqrt(2))/(3 pi) for the composite-pulse pair sequence.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .hamiltonians import DnpParams, IDEAL, IX4, IY4, SX4, SY4, SZ4
from .linalg import is_unitary
from .propagate import (
    schedule_propagators,
    select_repetitions,
)
from .sequences import Schedule, SchemeSpec, build_schedule

A_STAR_THEORY = {
    "slic": 1.0,
    "s2hm_plain": 2.0 / math.pi,
    "pulsepol": 2.0 * (2.0 + math.sqrt(2.0)) / (3.0 * math.pi),
}


class BranchAmbiguityError(RuntimeError):
    """Cycle eigenphases approach the principal-branch cut of the log."""


@dataclass(frozen=True)
class EffectiveCouplingReport:
    scheme: str
    a_star_measured: float
    a_star_theory: float | None
    relative_deviation: float | None
    method: str
    n_reps: int
    transfer_time: float

    def as_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "a_star_measured": self.a_star_measured,
            "a_star_theory": self.a_star_theory,
            "relative_deviation": self.relative_deviation,
            "method": self.method,
            "n_reps": self.n_reps,
            "transfer_time": self.transfer_time,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.as_dict(), indent=indent)


def estimate_a_star(
    spec: SchemeSpec, p: DnpParams, n_max: int | None = None
) -> EffectiveCouplingReport:
    """Effective coupling from the first-maximum transfer time.

    Builds the scheme, scans repetitions error-free for the first
    polarization maximum at time ``T = N * block duration`` and reports
    ``a_star = 2 pi / T``.  Prelude/postlude pulses are bookkeeping, not
    transfer time, and are excluded.
    """
    sch = build_schedule(p, spec)
    n = select_repetitions(sch, p, n_max=n_max)
    t = n * sch.block_duration
    measured = 2.0 * math.pi / t
    theory = A_STAR_THEORY.get(spec.scheme)
    theory_value = theory * abs(p.a_perp) if theory is not None else None
    rel = (measured - theory_value) / theory_value if theory_value else None
    return EffectiveCouplingReport(
        scheme=spec.scheme,
        a_star_measured=measured,
        a_star_theory=theory_value,
        relative_deviation=rel,
        method="first-maximum",
        n_reps=n,
        transfer_time=t,
    )


# Normalized two-spin product operators; cross couplings between the
# partner-spin transverse components and the target spin.
_CROSS_OPS = [[IX4 @ SX4, IX4 @ SY4, IX4 @ SZ4], [IY4 @ SX4, IY4 @ SY4, IY4 @ SZ4]]


@dataclass(frozen=True)
class CycleReport:
    """Effective Hamiltonian of one sequence period."""

    h_eff: np.ndarray
    period: float
    flip_flop_coeff: float
    cross_singular_values: tuple[float, float]
    max_eigenphase: float

    def as_dict(self) -> dict:
        return {
            "period": self.period,
            "flip_flop_coeff": self.flip_flop_coeff,
            "cross_singular_values": list(self.cross_singular_values),
            "max_eigenphase": self.max_eigenphase,
            "h_eff_real": self.h_eff.real.tolist(),
            "h_eff_imag": self.h_eff.imag.tolist(),
        }


def cycle_effective_hamiltonian(
    sch: Schedule, p: DnpParams, branch_limit: float = 0.9 * math.pi
) -> CycleReport:
    """Principal-log effective Hamiltonian of one sequence period.

    The period is one block, except for the composite-pulse pair scheme
    where four composite pulses (two blocks) make up one phase cycle and
    leave all eigenphases near zero.  Eigenphases above ``branch_limit``
    raise :class:`BranchAmbiguityError` rather than silently picking a
    branch.

    The flip-flop strength is read off the 2x3 matrix of cross-coupling
    coefficients ``c[a, b] = 4 Tr(H_eff Ia Sb)``: an ideal transfer
    Hamiltonian of strength ``a*/2`` contributes two equal singular
    values ``a*/2`` regardless of which target-spin axes the sequence's
    rotating frame picked, so the mean of the two is reported.
    """
    n_blocks = 2 if sch.scheme == "pulsepol" else 1
    _, u_block, _ = schedule_propagators(sch, p, IDEAL)
    u = np.linalg.matrix_power(u_block, n_blocks)
    period = n_blocks * sch.block_duration
    if not is_unitary(u, 1e-9):
        raise ValueError("cycle propagator is not unitary")

    # Schur form of a unitary is diagonal with orthonormal vectors.
    t, z = scipy.linalg.schur(u, output="complex")
    phases = np.angle(np.diag(t))
    if np.max(np.abs(phases)) >= branch_limit:
        raise BranchAmbiguityError(
            f"period * ||H_eff|| = {np.max(np.abs(phases)):.3f} rad is too close "
            "to the principal branch cut at pi"
        )
    h_eff = (z * (-phases / period)) @ z.conj().T
    h_eff = (h_eff + h_eff.conj().T) / 2.0

    cross = np.array(
        [[4.0 * np.trace(h_eff @ op).real for op in row] for row in _CROSS_OPS]
    )
    sv = np.linalg.svd(cross, compute_uv=False)
    return CycleReport(
        h_eff=h_eff,
        period=period,
        flip_flop_coeff=float((sv[0] + sv[1]) / 2.0),
        cross_singular_values=(float(sv[0]), float(sv[1])),
        max_eigenphase=float(np.max(np.abs(phases))),
    )


def adapt_sideband_positions(p: DnpParams, s: SchemeSpec, k_max: int) -> list[float]:
    """Predicted detuning sideband centers of the pulsed-lock scheme.

    Sidebands repeat at the block repetition rate ``2 pi / (block
    duration)``; returns the comb ``k * 2 pi / T_block`` for k in
    [-k_max, k_max].  Diagnostic overlay only: the dynamics shifts each
    ridge by a few percent and modulates its height.
    """
    if s.scheme != "adapt":
        raise ValueError(f"sideband prediction applies to adapt, not {s.scheme}")
    sch = build_schedule(p, s)
    spacing = 2.0 * math.pi / sch.block_duration
    return [k * spacing for k in range(-k_max, k_max + 1)]


__all__ = [
    "A_STAR_THEORY",
    "BranchAmbiguityError",
    "EffectiveCouplingReport",
    "estimate_a_star",
    "CycleReport",
    "cycle_effective_hamiltonian",
    "adapt_sideband_positions",
]
