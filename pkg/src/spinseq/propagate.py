"""Density-matrix propagation of drive schedules.

Each segment's Hamiltonian is constant (ramps are sampled at their
midpoint), so time evolution is the ordered product of matrix
exponentials.  Observables are recorded at segment boundaries; the
transferred polarization is twice the final target-spin expectation
``<Sz>``.  The default initial state has the partner spin fully
polarized along +z and the target spin maximally mixed.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import IO, Iterable

import numpy as np

from .hamiltonians import (
    IDEAL,
    DnpParams,
    DriveSample,
    ErrorModel,
    IZ4,
    SZ4,
    dnp_hamiltonian,
)
from .linalg import evolve, expectation, propagator
from .sequences import Schedule, Segment


class NoMaximumFound(RuntimeError):
    """The repetition scan hit its cap without passing a local maximum."""


def initial_state() -> np.ndarray:
    """Partner spin up, target spin maximally mixed (I (x) S ordering)."""
    return np.diag([0.5, 0.5, 0.0, 0.0]).astype(complex)


def segment_propagator(
    seg: Segment, p: DnpParams, e: ErrorModel = IDEAL, refine: int = 1
) -> np.ndarray:
    """Propagator of one segment, optionally subdivided ``refine``-fold.

    Constant segments are exact for any ``refine``; ramped segments use
    per-piece midpoint amplitudes, so refining converges to the linear
    ramp.
    """
    if seg.duration == 0.0:
        return np.eye(4, dtype=complex)
    if refine < 1:
        raise ValueError(f"refine must be >= 1, got {refine}")
    if not seg.is_ramp and refine == 1:
        h = dnp_hamiltonian(p, DriveSample(seg.amp_start, seg.phase), e)
        return propagator(h, seg.duration)
    u = np.eye(4, dtype=complex)
    dt = seg.duration / refine
    span = seg.amp_end - seg.amp_start
    for i in range(refine):
        amp = seg.amp_start + span * (i + 0.5) / refine
        h = dnp_hamiltonian(p, DriveSample(amp, seg.phase), e)
        u = propagator(h, dt) @ u
    return u


class _SegmentCache:
    """Per-run propagator cache keyed on segment values."""

    def __init__(self, p: DnpParams, e: ErrorModel, refine: int = 1):
        self.p = p
        self.e = e
        self.refine = refine
        self._cache: dict[tuple, np.ndarray] = {}

    def __call__(self, seg: Segment) -> np.ndarray:
        key = (seg.duration, seg.amp_start, seg.amp_end, seg.phase)
        u = self._cache.get(key)
        if u is None:
            u = segment_propagator(seg, self.p, self.e, self.refine)
            self._cache[key] = u
        return u

    def product(self, segments: Iterable[Segment]) -> np.ndarray:
        u = np.eye(4, dtype=complex)
        for seg in segments:
            u = self(seg) @ u
        return u


@dataclass(frozen=True)
class Trajectory:
    """Observable time series of one simulated schedule."""

    times: np.ndarray
    sz: np.ndarray
    iz: np.ndarray
    final_state: np.ndarray
    transferred_polarization: float

    def write_csv(self, fh: IO[str]) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["time", "sz", "iz"])
        for t, s, i in zip(self.times, self.sz, self.iz):
            writer.writerow([repr(float(t)), repr(float(s)), repr(float(i))])


def simulate(
    sch: Schedule,
    p: DnpParams,
    e: ErrorModel = IDEAL,
    rho0: np.ndarray | None = None,
    refine: int = 1,
) -> Trajectory:
    """Propagate ``rho0`` through the full schedule, recording boundaries."""
    rho = initial_state() if rho0 is None else np.asarray(rho0, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"rho0 must be 4x4, got {rho.shape}")

    cache = _SegmentCache(p, e, refine)
    times = [0.0]
    sz = [expectation(rho, SZ4)]
    iz = [expectation(rho, IZ4)]
    t = 0.0
    playback = (
        list(sch.prelude) + list(sch.block) * sch.n_reps + list(sch.postlude)
    )
    for seg in playback:
        if seg.duration == 0.0:
            continue
        rho = evolve(rho, cache(seg))
        t += seg.duration
        times.append(t)
        sz.append(expectation(rho, SZ4))
        iz.append(expectation(rho, IZ4))

    return Trajectory(
        times=np.asarray(times),
        sz=np.asarray(sz),
        iz=np.asarray(iz),
        final_state=rho,
        transferred_polarization=2.0 * sz[-1],
    )


def schedule_propagators(
    sch: Schedule, p: DnpParams, e: ErrorModel = IDEAL
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(prelude, block, postlude) propagators of one schedule."""
    cache = _SegmentCache(p, e)
    return cache.product(sch.prelude), cache.product(sch.block), cache.product(sch.postlude)


def final_polarization(sch: Schedule, p: DnpParams, e: ErrorModel = IDEAL) -> float:
    """Transferred polarization ``2 <Sz>`` after the full schedule.

    Fast path for sweeps: the block propagator is raised to the
    repetition count instead of replaying every segment.
    """
    u_pre, u_block, u_post = schedule_propagators(sch, p, e)
    u = u_post @ np.linalg.matrix_power(u_block, sch.n_reps) @ u_pre
    return 2.0 * expectation(evolve(initial_state(), u), SZ4)


def select_repetitions(sch: Schedule, p: DnpParams, n_max: int | None = None) -> int:
    """Repetition count reaching the first error-free transfer maximum.

    The block is repeated while sampling the would-be final polarization
    (postlude applied to a copy) after every repetition; returns the
    first count whose value exceeds both neighbours.  Schemes that do
    not repeat (the amplitude sweep) return their fixed count without
    scanning.  Raises :class:`NoMaximumFound` once the cap is hit.
    """
    if not sch.repeatable:
        return sch.n_reps
    if n_max is None:
        n_max = sch.params.get("n_max") or max(
            4, math.ceil(10 * abs(p.omega_i) / abs(p.a_perp))
        )

    u_pre, u_block, u_post = schedule_propagators(sch, p, IDEAL)
    rho = evolve(initial_state(), u_pre)

    def sampled(r):
        return 2.0 * expectation(evolve(r, u_post), SZ4)

    history = [sampled(rho)]  # polarization with zero repetitions
    for n in range(1, n_max + 2):
        rho = evolve(rho, u_block)
        history.append(sampled(rho))
        if n >= 2 and history[n - 1] > history[n - 2] and history[n - 1] > history[n]:
            return n - 1
    raise NoMaximumFound(
        f"no polarization maximum within {n_max} repetitions of {sch.scheme}"
    )


def transfer_time(sch: Schedule, p: DnpParams, n_max: int | None = None) -> float:
    """Duration of the schedule at the selected repetition count.

    Includes prelude and postlude; the repetition selection itself only
    looks at whole blocks.
    """
    n = select_repetitions(sch, p, n_max=n_max)
    return sch.prelude_duration + n * sch.block_duration + sch.postlude_duration


__all__ = [
    "NoMaximumFound",
    "initial_state",
    "segment_propagator",
    "Trajectory",
    "simulate",
    "schedule_propagators",
    "final_polarization",
    "select_repetitions",
    "transfer_time",
]
