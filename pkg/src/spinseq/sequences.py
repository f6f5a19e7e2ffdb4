"""Piecewise-constant drive schedules and the five transfer-sequence builders.

A :class:`Schedule` is a prelude, a repeated block and a postlude, each a
tuple of :class:`Segment` values (duration, amplitude ramp, phase, label).
Builders produce the standard polarization-transfer families:

======================  =======================================================
``slic``                continuous spin lock at the partner splitting
                        (SLIC in PHIP / NOVEL in DNP), 2pi rotation per block
``s2hm_plain``          two trains of n same-phase pi pulses at tau = pi/omega_i
``s2hm_xy8``            fixed n=4+4 trains with XY8 phases, repeatable block
``pulsepol``            phase-shifted composite-pulse pair, tau = 3pi/omega_i
``adapt``               four pi/2 pulses per block at tau = pi/(2 omega_i)
                        (ADAPT in PHIP / TOP-DNP in DNP)
``b1_sweep``            linear adiabatic amplitude sweep across omega_i
======================  =======================================================

Timing follows a fixed recipe: each block is a whole number of
tau-sections, pulses played at the maximum available Rabi amplitude are
absorbed into the surrounding waits (centered pulses keep symmetric
waits; section-edge pulses eat into the adjacent section), so the block
duration stays an exact tau-multiple for any drive strength.  Pulse
phases are numeric with phase 0 along +x, ``Y`` = pi/2, ``-Y`` = 3pi/2.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Sequence

from .hamiltonians import DnpParams, RegimeWarning

SCHEMES = ("slic", "s2hm_plain", "s2hm_xy8", "pulsepol", "adapt", "b1_sweep")

SCHEME_ALIASES = {
    "novel": "slic",
    "slic_novel": "slic",
    "s2hm": "s2hm_xy8",
    "nv_init": "s2hm_xy8",
    "top_dnp": "adapt",
    "adapt_topdnp": "adapt",
    "ra_novel": "b1_sweep",
    "sweep": "b1_sweep",
}

# PHIP/DNP naming dictionary, exposed by the CLI `schemes` listing.
SCHEME_INFO = {
    "slic": {
        "phip_name": "SLIC (Spin-Lock Induced Crossing)",
        "dnp_name": "NOVEL (Nuclear spin Orientation Via Electron spin Locking)",
        "resonance": "spin-lock amplitude = omega_i",
    },
    "s2hm_plain": {
        "phip_name": "S2hM (Singlet to heteronuclear Magnetization), fixed phases",
        "dnp_name": "NV nuclear spin initialization (plain pi trains)",
        "resonance": "interpulse spacing tau = pi/omega_i",
    },
    "s2hm_xy8": {
        "phip_name": "S2hM with XY8 phase cycling",
        "dnp_name": "NV nuclear spin initialization, phase cycled",
        "resonance": "interpulse spacing tau = pi/omega_i",
    },
    "pulsepol": {
        "phip_name": "PulsePol",
        "dnp_name": "PulsePol",
        "resonance": "block duration tau = 3pi/omega_i",
    },
    "adapt": {
        "phip_name": "ADAPT (Alternating Delays Achieve Polarization Transfer)",
        "dnp_name": "TOP-DNP (Time-OPtimized DNP)",
        "resonance": "pulse spacing tau = pi/(2 omega_i), mean amplitude = omega_i",
    },
    "b1_sweep": {
        "phip_name": "adiabatic B1 amplitude sweep",
        "dnp_name": "RA-NOVEL (Ramped-Amplitude NOVEL)",
        "resonance": "amplitude swept through omega_i",
    },
}

PHASE_BY_NAME = {"X": 0.0, "Y": math.pi / 2, "-X": math.pi, "-Y": 3 * math.pi / 2}
ANGLE_BY_NAME = {"pi/2": math.pi / 2, "pi": math.pi, "2pi": 2 * math.pi}


class ScheduleError(ValueError):
    """A schedule cannot be built or fails its structural invariants."""


class NegativeWaitError(ScheduleError):
    """Pulse durations exceed the waiting window they must fit into."""


def canonical_scheme(name: str) -> str:
    key = name.strip().lower().replace("-", "_")
    key = SCHEME_ALIASES.get(key, key)
    if key not in SCHEMES:
        raise ScheduleError(f"unknown scheme {name!r}; known: {', '.join(SCHEMES)}")
    return key


def phase_name(phi: float, atol: float = 1e-12) -> str:
    """Cardinal phase name for ``phi`` (mod 2pi), or a numeric fallback."""
    phi = phi % (2 * math.pi)
    for name, value in PHASE_BY_NAME.items():
        if abs(phi - value) <= atol:
            return name
    return f"{phi:.6g}rad"


@dataclass(frozen=True)
class Segment:
    """One piecewise-constant (or linearly ramped) drive interval."""

    duration: float
    amp_start: float
    amp_end: float
    phase: float
    label: str

    def __post_init__(self):
        if self.duration < 0:
            raise ScheduleError(f"segment duration {self.duration} < 0 ({self.label})")
        if self.amp_start < 0 or self.amp_end < 0:
            raise ScheduleError(f"segment amplitude < 0 ({self.label})")

    @property
    def is_ramp(self) -> bool:
        return self.amp_start != self.amp_end


def pulse_segment(angle_name: str, phase: float, omega: float) -> Segment:
    """Constant rotation pulse of the named angle at amplitude ``omega``."""
    angle = ANGLE_BY_NAME[angle_name]
    if not omega > 0:
        raise ScheduleError("pulse amplitude must be positive")
    duration = angle / omega if math.isfinite(omega) else 0.0
    amp = omega if math.isfinite(omega) else 0.0
    return Segment(duration, amp, amp, phase % (2 * math.pi),
                   f"{angle_name}@{phase_name(phase)}")


def wait_segment(duration: float) -> Segment:
    return Segment(duration, 0.0, 0.0, 0.0, "wait")


@dataclass(frozen=True)
class DraftPulse:
    """A pulse at its nominal (zero-width) position in a timing draft.

    ``align`` states how the finite pulse is absorbed into the adjacent
    nominal waits: ``center`` takes half its duration from each side,
    ``start``/``end`` take all of it from the following/preceding wait.
    """

    angle_name: str
    phase: float
    align: str = "center"


def layout_timing(
    draft: Sequence[DraftPulse | float], omega_rabi: float
) -> tuple[Segment, ...]:
    """Realize a nominal timing draft with finite pulses at ``omega_rabi``.

    ``draft`` interleaves nominal wait durations (floats, the tau-section
    grid) with :class:`DraftPulse` entries.  Pulse durations are absorbed
    into the neighbouring waits per each pulse's alignment, so section
    boundaries and the total duration are preserved exactly.  Raises
    :class:`NegativeWaitError` if any wait cannot accommodate its share.
    With ``omega_rabi = inf`` (ideal pulses) the waits keep their nominal
    durations and pulses become zero-width markers.
    """
    waits = [float(item) for item in draft if not isinstance(item, DraftPulse)]
    scale = max(waits, default=0.0)
    items: list = [
        item if isinstance(item, DraftPulse) else [float(item)] for item in draft
    ]

    def take(slot_index: int, amount: float, what: str) -> None:
        if amount == 0.0:
            return
        if slot_index < 0 or slot_index >= len(items) or isinstance(items[slot_index], DraftPulse):
            raise NegativeWaitError(f"no waiting time adjacent to {what}")
        slot = items[slot_index]
        slot[0] -= amount
        if slot[0] < -1e-9 * max(scale, amount):
            raise NegativeWaitError(
                f"wait of {slot[0] + amount:.6g} cannot absorb {amount:.6g} of {what}"
            )
        slot[0] = max(slot[0], 0.0)

    for i, item in enumerate(items):
        if not isinstance(item, DraftPulse):
            continue
        duration = (
            ANGLE_BY_NAME[item.angle_name] / omega_rabi
            if math.isfinite(omega_rabi)
            else 0.0
        )
        if item.align == "center":
            take(i - 1, duration / 2, f"{item.angle_name} pulse")
            take(i + 1, duration / 2, f"{item.angle_name} pulse")
        elif item.align == "start":
            take(i + 1, duration, f"{item.angle_name} pulse")
        elif item.align == "end":
            take(i - 1, duration, f"{item.angle_name} pulse")
        else:
            raise ScheduleError(f"unknown pulse alignment {item.align!r}")

    segments = []
    for item in items:
        if isinstance(item, DraftPulse):
            segments.append(pulse_segment(item.angle_name, item.phase, omega_rabi))
        elif item[0] > 0.0:
            segments.append(wait_segment(item[0]))
    return tuple(segments)


@dataclass(frozen=True)
class Schedule:
    """A full drive program: prelude, N-fold repeated block, postlude."""

    scheme: str
    tau: float
    n_reps: int
    prelude: tuple[Segment, ...]
    block: tuple[Segment, ...]
    postlude: tuple[Segment, ...]
    params: dict = field(default_factory=dict)

    @property
    def prelude_duration(self) -> float:
        return sum(s.duration for s in self.prelude)

    @property
    def block_duration(self) -> float:
        return sum(s.duration for s in self.block)

    @property
    def postlude_duration(self) -> float:
        return sum(s.duration for s in self.postlude)

    @property
    def total_duration(self) -> float:
        return self.prelude_duration + self.n_reps * self.block_duration + self.postlude_duration

    @property
    def repeatable(self) -> bool:
        return bool(self.params.get("repeatable", True))

    def with_reps(self, n_reps: int) -> "Schedule":
        if n_reps < 1:
            raise ScheduleError(f"n_reps must be >= 1, got {n_reps}")
        return replace(self, n_reps=n_reps)

    def segments(self) -> tuple[Segment, ...]:
        """All segments in playback order, block repeated ``n_reps`` times."""
        return self.prelude + self.block * self.n_reps + self.postlude

    def to_json_dict(self) -> dict:
        params = dict(self.params)
        params["n_prelude"] = len(self.prelude)
        params["n_postlude"] = len(self.postlude)
        return {
            "scheme": self.scheme,
            "params": params,
            "segments": [
                {
                    "duration": s.duration,
                    "amp_start": s.amp_start,
                    "amp_end": s.amp_end,
                    "phase": s.phase,
                    "label": s.label,
                }
                for s in self.prelude + self.block + self.postlude
            ],
            "n_reps": self.n_reps,
            "tau": self.tau,
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "Schedule":
        params = dict(doc["params"])
        n_pre = params.pop("n_prelude")
        n_post = params.pop("n_postlude")
        segs = tuple(
            Segment(s["duration"], s["amp_start"], s["amp_end"], s["phase"], s["label"])
            for s in doc["segments"]
        )
        n_block = len(segs) - n_pre - n_post
        return cls(
            scheme=doc["scheme"],
            tau=doc["tau"],
            n_reps=doc["n_reps"],
            prelude=segs[:n_pre],
            block=segs[n_pre : n_pre + n_block],
            postlude=segs[n_pre + n_block :],
            params=params,
        )

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_json_dict(), indent=indent)

    @classmethod
    def from_json(cls, text: str) -> "Schedule":
        return cls.from_json_dict(json.loads(text))


def validate_schedule(sch: Schedule, atol: float = 1e-9) -> None:
    """Check the structural schedule invariants; raise on violation.

    Every rotation-labelled constant segment must realize its labelled
    angle as amplitude times duration, and the block duration must equal
    the scheme's stated tau-multiple (skipped for schemes without a
    resonance parameter, ``tau = 0``).
    """
    if sch.n_reps < 1:
        raise ScheduleError(f"n_reps must be >= 1, got {sch.n_reps}")
    for seg in sch.prelude + sch.block + sch.postlude:
        name = seg.label.split("@")[0]
        if name in ANGLE_BY_NAME and not seg.is_ramp and seg.duration > 0:
            angle = seg.amp_start * seg.duration
            if abs(angle - ANGLE_BY_NAME[name]) > atol:
                raise ScheduleError(
                    f"segment {seg.label!r} realizes angle {angle}, "
                    f"expected {ANGLE_BY_NAME[name]}"
                )
    multiple = sch.params.get("tau_multiple")
    if sch.tau and multiple is not None:
        expected = multiple * sch.tau
        if abs(sch.block_duration - expected) > atol:
            raise ScheduleError(
                f"block duration {sch.block_duration} differs from "
                f"{multiple} tau = {expected}"
            )


@dataclass(frozen=True)
class SchemeSpec:
    """Scheme selection plus the knobs a builder understands.

    ``omega_rabi`` is the maximum available Rabi amplitude, used for all
    pulses; schemes that prescribe their own amplitude (the spin lock,
    the sweep) ignore it for those parts.  ``n_reps = None`` leaves the
    repetition count to the first-maximum selection at run time.
    """

    scheme: str
    omega_rabi: float
    n_reps: int | None = None
    n_pulses: int | None = None  # s2hm_plain: pi pulses per train
    tau_factor: float = 3.0  # pulsepol: tau in units of pi/omega_i
    phase_shift: float = -math.pi / 2  # pulsepol: second sub-block shift
    sweep_range: tuple[float, float] = (0.6, 1.4)  # b1_sweep: in units of omega_i
    sweep_rate: float | None = None  # b1_sweep: default a_perp^2 / (4 pi)
    sweep_segments: int = 150
    sweep_duration: float | None = None  # b1_sweep: override (degenerate ranges)
    n_max: int | None = None  # repetition-selection cap

    def __post_init__(self):
        object.__setattr__(self, "scheme", canonical_scheme(self.scheme))
        if not self.omega_rabi > 0:
            raise ScheduleError("omega_rabi must be positive")
        if self.sweep_segments < 1:
            raise ScheduleError("sweep_segments must be >= 1")


def _check_pulsed_regime(p: DnpParams, s: SchemeSpec) -> None:
    if s.omega_rabi < p.omega_i:
        warnings.warn(
            f"omega_rabi = {s.omega_rabi} < omega_i = {p.omega_i}: below the "
            "regime the pulsed schemes are designed for",
            RegimeWarning,
            stacklevel=3,
        )


def _base_params(p: DnpParams, s: SchemeSpec, tau_multiple: float, **extra) -> dict:
    params = {
        "omega_i": p.omega_i,
        "a_perp": p.a_perp,
        "omega_rabi": s.omega_rabi,
        "tau_multiple": tau_multiple,
        "repeatable": True,
    }
    params.update(extra)
    return params


def build_slic(p: DnpParams, s: SchemeSpec) -> Schedule:
    """Spin lock at amplitude ``omega_i``, split into 2pi-rotation blocks.

    The lock amplitude is fixed by the partner splitting regardless of
    the available ``omega_rabi``, which only sets the speed of the
    bracketing pi/2 pulses.
    """
    if p.omega_i == 0:
        raise ScheduleError("slic needs omega_i != 0")
    _check_pulsed_regime(p, s)
    tau = 2 * math.pi / p.omega_i
    lock = Segment(tau, p.omega_i, p.omega_i, PHASE_BY_NAME["X"], "2pi@X")
    sch = Schedule(
        scheme="slic",
        tau=tau,
        n_reps=s.n_reps or 1,
        prelude=(pulse_segment("pi/2", PHASE_BY_NAME["Y"], s.omega_rabi),),
        block=(lock,),
        postlude=(pulse_segment("pi/2", PHASE_BY_NAME["-Y"], s.omega_rabi),),
        params=_base_params(p, s, 1.0),
    )
    validate_schedule(sch)
    return sch


def _pi_window(tau: float, phase: float) -> list:
    """One tau-section with a centered pi pulse."""
    return [tau / 2, DraftPulse("pi", phase), tau / 2]


def build_s2hm_plain(p: DnpParams, s: SchemeSpec) -> Schedule:
    """Two equal trains of same-phase pi pulses, suited to a single pass.

    The train length defaults to n = round(pi omega_i / (2 a_perp)), which
    makes one block transfer the full polarization.  Layout: each pi
    pulse is centered in a tau-section (tau = pi/omega_i); the two trains
    are joined by a tau/2 section opened by the transitory pi/2 pulse of
    phase X, and a final tau/2 wait precedes the closing pulse so the
    intermediate waits refocus for odd repetition counts.
    """
    _check_pulsed_regime(p, s)
    tau = math.pi / p.omega_i
    n = s.n_pulses or int(math.floor(math.pi * p.omega_i / (2 * p.a_perp) + 0.5))
    if n < 1:
        raise ScheduleError(f"s2hm_plain needs at least one pulse per train, got n={n}")

    train: list = []
    for _ in range(n):
        train += _pi_window(tau, PHASE_BY_NAME["X"])
    draft = (
        train
        + [DraftPulse("pi/2", PHASE_BY_NAME["X"], align="start"), tau / 2]
        + train
        + [tau / 2]
    )
    sch = Schedule(
        scheme="s2hm_plain",
        tau=tau,
        n_reps=s.n_reps or 1,
        prelude=(pulse_segment("pi/2", PHASE_BY_NAME["Y"], s.omega_rabi),),
        block=layout_timing(draft, s.omega_rabi),
        postlude=(pulse_segment("pi/2", PHASE_BY_NAME["-Y"], s.omega_rabi),),
        params=_base_params(p, s, 2 * n + 1.0, n_pulses=n),
    )
    validate_schedule(sch)
    return sch


def build_s2hm_xy8(p: DnpParams, s: SchemeSpec) -> Schedule:
    """Phase-cycled variant: 4+4 pi pulses per block forming an XY8 cycle.

    Train one runs X,Y,X,Y and train two Y,X,Y,X, so each block is one
    XY8 cycle.  The transitory pi/2 pulse of phase X opens a tau/2
    section whose remaining waiting time is split equally before the
    first and the fourth pulse of the second train, which keeps every
    waiting time refocused for any repetition count.
    """
    _check_pulsed_regime(p, s)
    tau = math.pi / p.omega_i
    t_half = math.pi / (2 * s.omega_rabi)
    extra = tau / 2 - t_half
    if extra < 0:
        raise NegativeWaitError(
            f"transitory pi/2 of duration {t_half:.6g} does not fit in tau/2 = {tau / 2:.6g}"
        )

    block: list[Segment] = []
    for phase in ("X", "Y", "X", "Y"):
        block += layout_timing(_pi_window(tau, PHASE_BY_NAME[phase]), s.omega_rabi)
    block.append(pulse_segment("pi/2", PHASE_BY_NAME["X"], s.omega_rabi))
    if extra > 0:
        block.append(wait_segment(extra / 2))
    for phase in ("Y", "X", "Y"):
        block += layout_timing(_pi_window(tau, PHASE_BY_NAME[phase]), s.omega_rabi)
    if extra > 0:
        block.append(wait_segment(extra / 2))
    block += layout_timing(_pi_window(tau, PHASE_BY_NAME["X"]), s.omega_rabi)

    sch = Schedule(
        scheme="s2hm_xy8",
        tau=tau,
        n_reps=s.n_reps or 1,
        prelude=(pulse_segment("pi/2", PHASE_BY_NAME["Y"], s.omega_rabi),),
        block=tuple(block),
        postlude=(pulse_segment("pi/2", PHASE_BY_NAME["-Y"], s.omega_rabi),),
        params=_base_params(p, s, 8.5),
    )
    validate_schedule(sch)
    return sch


def build_pulsepol(p: DnpParams, s: SchemeSpec) -> Schedule:
    """Composite-pulse block pair; resonance at tau = 3pi/omega_i.

    Each half of the block is a pi pulse surrounded by symmetric waits
    and bracketed by two pi/2 pulses at the section edges; the second
    half repeats the first with every phase shifted by ``phase_shift``.
    The default shift of -pi/2 turns the Y/X half into the X/Y half
    (the orientation that transfers polarization onto +z with the sign
    conventions used here); ``phase_shift = -pi/4`` pairs with
    ``tau_factor = 3.5`` for the widened-robustness variant.  Initial
    and final pulses are part of the block itself.
    """
    _check_pulsed_regime(p, s)
    tau = s.tau_factor * math.pi / p.omega_i

    def sub_block(shift: float) -> list:
        return [
            DraftPulse("pi/2", PHASE_BY_NAME["Y"] + shift, align="start"),
            tau / 4,
            DraftPulse("pi", PHASE_BY_NAME["X"] + shift),
            tau / 4,
            DraftPulse("pi/2", PHASE_BY_NAME["Y"] + shift, align="end"),
        ]

    block = layout_timing(sub_block(0.0) + sub_block(s.phase_shift), s.omega_rabi)
    sch = Schedule(
        scheme="pulsepol",
        tau=tau,
        n_reps=s.n_reps or 1,
        prelude=(),
        block=block,
        postlude=(),
        params=_base_params(
            p, s, 1.0, tau_factor=s.tau_factor, phase_shift=s.phase_shift
        ),
    )
    validate_schedule(sch)
    return sch


def build_adapt(p: DnpParams, s: SchemeSpec) -> Schedule:
    """Four pi/2 pulses of phase X per block, spaced by tau = pi/(2 omega_i).

    At this spacing the block-averaged drive amplitude equals ``omega_i``
    (the pulsed analogue of the spin-lock resonance) independent of the
    pulse amplitude.  Prelude and postlude pulses carry waits sized so
    that any two subsequent pulses see the same gap.
    """
    _check_pulsed_regime(p, s)
    tau = math.pi / (2 * p.omega_i)
    t_half = math.pi / (2 * s.omega_rabi)
    if t_half > tau:
        raise NegativeWaitError(
            f"pi/2 of duration {t_half:.6g} does not fit in tau = {tau:.6g}"
        )
    edge = (tau - t_half) / 2

    draft: list = []
    for _ in range(4):
        draft += [tau / 2, DraftPulse("pi/2", PHASE_BY_NAME["X"]), tau / 2]
    block = layout_timing(draft, s.omega_rabi)

    prelude = (pulse_segment("pi/2", PHASE_BY_NAME["Y"], s.omega_rabi),) + (
        (wait_segment(edge),) if edge > 0 else ()
    )
    postlude = ((wait_segment(edge),) if edge > 0 else ()) + (
        pulse_segment("pi/2", PHASE_BY_NAME["-Y"], s.omega_rabi),
    )
    sch = Schedule(
        scheme="adapt",
        tau=tau,
        n_reps=s.n_reps or 1,
        prelude=prelude,
        block=block,
        postlude=postlude,
        params=_base_params(p, s, 4.0),
    )
    validate_schedule(sch)
    return sch


def build_b1_sweep(p: DnpParams, s: SchemeSpec) -> Schedule:
    """Linear amplitude sweep across the lock resonance, one pass.

    The sweep runs over ``sweep_range`` (in units of ``omega_i``) and is
    discretized into ``sweep_segments`` constant-amplitude steps sampled
    at their midpoints.  The default rate ``a_perp^2 / (4 pi)`` keeps the
    crossing adiabatic enough for >= 0.98 error-free transfer; the twice
    faster ``a_perp^2 / (2 pi)`` halves the duration at a ~7% transfer
    cost.  Not a repeated sequence: the repetition count stays 1.
    """
    _check_pulsed_regime(p, s)
    lo, hi = (r * p.omega_i for r in s.sweep_range)
    if s.sweep_duration is not None:
        duration = s.sweep_duration
    else:
        rate = s.sweep_rate if s.sweep_rate is not None else p.a_perp**2 / (4 * math.pi)
        if rate <= 0:
            raise ScheduleError(f"sweep rate must be positive, got {rate}")
        duration = (hi - lo) / rate
    if duration <= 0:
        raise ScheduleError(
            "sweep duration is not positive; give sweep_duration for degenerate ranges"
        )

    k = s.sweep_segments
    step = (hi - lo) / k
    dt = duration / k
    segments = tuple(
        Segment(dt, lo + (i + 0.5) * step, lo + (i + 0.5) * step, PHASE_BY_NAME["X"], "sweep")
        for i in range(k)
    )
    sch = Schedule(
        scheme="b1_sweep",
        tau=0.0,
        n_reps=1,
        prelude=(pulse_segment("pi/2", PHASE_BY_NAME["Y"], s.omega_rabi),),
        block=segments,
        postlude=(pulse_segment("pi/2", PHASE_BY_NAME["-Y"], s.omega_rabi),),
        params=_base_params(
            p,
            s,
            0.0,
            repeatable=False,
            sweep_range=list(s.sweep_range),
            sweep_duration=duration,
        ),
    )
    validate_schedule(sch)
    return sch


_BUILDERS = {
    "slic": build_slic,
    "s2hm_plain": build_s2hm_plain,
    "s2hm_xy8": build_s2hm_xy8,
    "pulsepol": build_pulsepol,
    "adapt": build_adapt,
    "b1_sweep": build_b1_sweep,
}


def build_schedule(p: DnpParams, s: SchemeSpec) -> Schedule:
    """Dispatch to the builder for ``s.scheme``."""
    return _BUILDERS[s.scheme](p, s)


def reverse_schedule(sch: Schedule) -> Schedule:
    """Time-reversed, drive-negated echo counterpart of a schedule.

    Segments play in reverse order with flipped ramps and the phase of
    every segment mirrored about the y axis (``phi -> pi - phi``, which
    negates the x quadrature of the drive).  Sandwiched between pi
    rotations about x of both spins, the resulting propagator exactly
    inverts the original evolution, drive errors included; see the
    reversal property tests.
    """

    def flip(seg: Segment) -> Segment:
        return Segment(
            seg.duration,
            seg.amp_end,
            seg.amp_start,
            (math.pi - seg.phase) % (2 * math.pi),
            seg.label,
        )

    return Schedule(
        scheme=sch.scheme,
        tau=sch.tau,
        n_reps=sch.n_reps,
        prelude=tuple(flip(s) for s in reversed(sch.postlude)),
        block=tuple(flip(s) for s in reversed(sch.block)),
        postlude=tuple(flip(s) for s in reversed(sch.prelude)),
        params=dict(sch.params),
    )


__all__ = [
    "SCHEMES",
    "SCHEME_ALIASES",
    "SCHEME_INFO",
    "PHASE_BY_NAME",
    "ANGLE_BY_NAME",
    "ScheduleError",
    "NegativeWaitError",
    "canonical_scheme",
    "phase_name",
    "Segment",
    "pulse_segment",
    "wait_segment",
    "DraftPulse",
    "layout_timing",
    "Schedule",
    "validate_schedule",
    "SchemeSpec",
    "build_slic",
    "build_s2hm_plain",
    "build_s2hm_xy8",
    "build_pulsepol",
    "build_adapt",
    "build_b1_sweep",
    "build_schedule",
    "reverse_schedule",
]
