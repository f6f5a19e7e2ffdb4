"""Polarization-transfer robustness maps over drive errors.

A scan fixes the repetition count once at the error-free point, then
evaluates the final transferred polarization on a grid of relative
detunings (``delta / omega_rabi``) and relative Rabi errors.  Points are
independent pure computations; evaluation may be threaded but results
are merged in row-major order (rabi rows, detuning columns) so output
is bit-identical for any thread count.
"""

from __future__ import annotations

import csv
import datetime
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import IO

import numpy as np

from . import __version__
from .hamiltonians import DnpParams, ErrorModel
from .propagate import final_polarization, select_repetitions
from .sequences import SchemeSpec, build_schedule


@dataclass(frozen=True)
class ScanGrid:
    """Error-grid axes, both as fractions of the scheme's Rabi amplitude."""

    delta_over_omega: tuple[float, ...]
    rabi_rel: tuple[float, ...]

    def __post_init__(self):
        for name, axis in (
            ("delta_over_omega", self.delta_over_omega),
            ("rabi_rel", self.rabi_rel),
        ):
            if len(axis) == 0:
                raise ValueError(f"grid axis {name} is empty")
            if any(b <= a for a, b in zip(axis, axis[1:])):
                raise ValueError(f"grid axis {name} must be strictly increasing")

    @classmethod
    def regular(
        cls,
        delta_span: tuple[float, float] = (-0.5, 0.5),
        rabi_span: tuple[float, float] = (-0.3, 0.3),
        n_delta: int = 41,
        n_rabi: int = 41,
    ) -> "ScanGrid":
        return cls(
            tuple(np.linspace(*delta_span, n_delta)),
            tuple(np.linspace(*rabi_span, n_rabi)),
        )

    @classmethod
    def default(cls) -> "ScanGrid":
        return cls.regular()


@dataclass
class Heatmap:
    """Scan result: polarization per grid point plus run metadata."""

    grid: ScanGrid
    values: np.ndarray  # shape (len(rabi_rel), len(delta_over_omega))
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        expected = (len(self.grid.rabi_rel), len(self.grid.delta_over_omega))
        if self.values.shape != expected:
            raise ValueError(f"values shape {self.values.shape} != grid {expected}")
        finite = self.values[np.isfinite(self.values)]
        if finite.size and (finite.min() < -1 - 1e-9 or finite.max() > 1 + 1e-9):
            raise ValueError("polarization values outside [-1, 1]")

    def value_at(self, delta_over_omega: float, rabi_rel: float) -> float:
        i = self.grid.rabi_rel.index(rabi_rel)
        j = self.grid.delta_over_omega.index(delta_over_omega)
        return float(self.values[i, j])

    def write_csv(self, fh: IO[str]) -> None:
        """Long-format rows, row-major over (rabi_rel, delta)."""
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["delta_over_omega", "rabi_error_over_omega", "polarization"])
        for i, r in enumerate(self.grid.rabi_rel):
            for j, d in enumerate(self.grid.delta_over_omega):
                writer.writerow([repr(float(d)), repr(float(r)), repr(float(self.values[i, j]))])

    def write_metadata(self, fh: IO[str]) -> None:
        json.dump(self.metadata, fh, indent=2)
        fh.write("\n")


def _run_metadata(spec: SchemeSpec, p: DnpParams, n_reps: int, t_fin: float) -> dict:
    return {
        "scheme": spec.scheme,
        "parameters": {
            "omega_i": p.omega_i,
            "a_perp": p.a_perp,
            "omega_s": p.omega_s,
            "omega_rabi": spec.omega_rabi,
        },
        "n_reps": n_reps,
        "t_fin": t_fin,
        "created": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "code_version": __version__,
        "failures": [],
    }


def scan(
    spec: SchemeSpec,
    p: DnpParams,
    grid: ScanGrid | None = None,
    threads: int = 1,
) -> Heatmap:
    """Evaluate the transferred polarization over the error grid.

    The repetition count is selected once, error-free, and reused for
    every grid point.  Per-point failures are recorded in the metadata
    and leave a NaN; they never abort the scan.
    """
    grid = grid or ScanGrid.default()
    sch = build_schedule(p, spec)
    n = spec.n_reps or select_repetitions(sch, p, n_max=spec.n_max)
    sch = sch.with_reps(n)
    t_fin = sch.total_duration
    meta = _run_metadata(spec, p, n, t_fin)

    points = [
        (i, j, ErrorModel(delta=d * spec.omega_rabi, rabi_rel=r))
        for i, r in enumerate(grid.rabi_rel)
        for j, d in enumerate(grid.delta_over_omega)
    ]
    values = np.full((len(grid.rabi_rel), len(grid.delta_over_omega)), np.nan)

    def evaluate(point):
        i, j, err = point
        try:
            return i, j, final_polarization(sch, p, err), None
        except Exception as exc:  # per-point failure, recorded not raised
            return i, j, math.nan, str(exc)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(evaluate, points))
    else:
        results = [evaluate(pt) for pt in points]

    for i, j, value, error in results:
        values[i, j] = value
        if error is not None:
            meta["failures"].append(
                {
                    "rabi_rel": grid.rabi_rel[i],
                    "delta_over_omega": grid.delta_over_omega[j],
                    "reason": error,
                }
            )
    return Heatmap(grid=grid, values=values, metadata=meta)


def multi_regime_scan(
    spec: SchemeSpec,
    p: DnpParams,
    halvings: tuple[int, int],
    grid: ScanGrid | None = None,
    threads: int = 1,
) -> list[list[Heatmap]]:
    """Scan a panel array over coupling and splitting halvings.

    Panel ``(i, j)`` has the coupling halved ``i`` times and the level
    splitting halved ``j`` times, with its own re-selected repetition
    count.  Each panel's metadata records the total duration and its
    ratio to the ideal spin-lock reference ``2 pi / a_perp`` of that
    panel.
    """
    n_a, n_w = halvings
    if n_a < 0 or n_w < 0:
        raise ValueError("halvings must be non-negative")
    panels: list[list[Heatmap]] = []
    for i in range(n_a + 1):
        row = []
        for j in range(n_w + 1):
            p_ij = DnpParams(
                omega_i=p.omega_i / 2**j,
                a_perp=p.a_perp / 2**i,
                omega_s=p.omega_s,
            )
            hm = scan(spec, p_ij, grid=grid, threads=threads)
            t_ref = 2.0 * math.pi / abs(p_ij.a_perp)
            hm.metadata["panel"] = [i, j]
            hm.metadata["t_fin_slic_ref"] = t_ref
            hm.metadata["t_fin_ratio"] = hm.metadata["t_fin"] / t_ref
            row.append(hm)
        panels.append(row)
    return panels


__all__ = ["ScanGrid", "Heatmap", "scan", "multi_regime_scan"]
