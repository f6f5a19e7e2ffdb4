"""Run-configuration parsing and validation for the CLI.

Configs are JSON documents validated against the shipped schema
(``spinseq/schema/config.schema.json``) and then semantically checked:
exactly one parameter block (``dnp`` or ``phip``), mode-specific
requirements, strictly increasing grid axes.  Unknown keys are
rejected.  ``units: "hz"`` multiplies every frequency-like input by
2*pi on ingest so couplings can be quoted in Hz.
"""

from __future__ import annotations

import importlib.resources
import json
import math
import warnings
from dataclasses import dataclass, field

import jsonschema

from .hamiltonians import DnpParams, ErrorModel, PhipParams, RegimeWarning, map_phip_to_dnp
from .robustness import ScanGrid
from .sequences import SchemeSpec, ScheduleError, canonical_scheme

MODES = ("simulate", "scan", "multiscan", "verify", "astar")

TWO_PI = 2.0 * math.pi


class ConfigError(ValueError):
    """Invalid run configuration; carries a code and a JSON path."""

    def __init__(self, code: str, message: str, path: str = ""):
        super().__init__(f"{code} at '{path}': {message}" if path else f"{code}: {message}")
        self.code = code
        self.path = path
        self.reason = message


def _schema() -> dict:
    text = (
        importlib.resources.files("spinseq")
        .joinpath("schema/config.schema.json")
        .read_text()
    )
    return json.loads(text)


@dataclass(frozen=True)
class RunConfig:
    """Fully validated run description with defaults applied."""

    mode: str
    units: str
    dnp: DnpParams | None
    phip: PhipParams | None
    scheme: SchemeSpec | None
    error: ErrorModel
    grid: ScanGrid
    halvings: tuple[int, int]
    n_boundaries: int
    output: str
    threads: int | None
    plot: bool
    raw: dict = field(repr=False, default_factory=dict)

    @property
    def system(self) -> DnpParams:
        """Driven-pair parameters, mapping lab-frame inputs if needed."""
        if self.dnp is not None:
            return self.dnp
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RegimeWarning)
            return map_phip_to_dnp(self.phip)

    def effective_dict(self) -> dict:
        """Normalized configuration that reparses to an equal RunConfig.

        Values are emitted in the internal angular units, so the
        round-trip document always carries ``units: "a_perp"``.
        """
        doc: dict = {"mode": self.mode, "units": "a_perp"}
        if self.dnp is not None:
            doc["dnp"] = {
                "omega_i": self.dnp.omega_i,
                "a_perp": self.dnp.a_perp,
                "omega_s": self.dnp.omega_s,
            }
        if self.phip is not None:
            doc["phip"] = {
                "omega_i0": self.phip.omega_i0,
                "omega_s": self.phip.omega_s,
                "j": self.phip.j,
                "j1": self.phip.j1,
                "j2": self.phip.j2,
            }
        if self.scheme is not None:
            doc["scheme"] = {
                "name": self.scheme.scheme,
                "omega_rabi": self.scheme.omega_rabi,
                "n_reps": self.scheme.n_reps,
                "n_pulses": self.scheme.n_pulses,
                "tau_factor": self.scheme.tau_factor,
                "phase_shift": self.scheme.phase_shift,
                "sweep_range": list(self.scheme.sweep_range),
                "sweep_rate": self.scheme.sweep_rate,
                "sweep_segments": self.scheme.sweep_segments,
                "sweep_duration": self.scheme.sweep_duration,
                "n_max": self.scheme.n_max,
            }
        doc["error"] = {"delta": self.error.delta, "rabi_rel": self.error.rabi_rel}
        doc["grid"] = {
            "delta_over_omega": list(self.grid.delta_over_omega),
            "rabi_rel": list(self.grid.rabi_rel),
        }
        doc["halvings"] = list(self.halvings)
        doc["n_boundaries"] = self.n_boundaries
        doc["output"] = self.output
        doc["threads"] = self.threads
        doc["plot"] = self.plot
        return doc


def _axis_values(node, path: str) -> tuple[float, ...]:
    if isinstance(node, dict):
        lo, hi, count = node["min"], node["max"], node["count"]
        if count == 1:
            values = ((lo + hi) / 2.0,)
        else:
            step = (hi - lo) / (count - 1)
            values = tuple(lo + k * step for k in range(count))
    else:
        values = tuple(float(v) for v in node)
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ConfigError("BadValue", "axis values must be strictly increasing", path)
    return values


def parse_config(doc: dict | str, mode: str | None = None) -> RunConfig:
    """Validate a config document and apply defaults.

    ``mode`` (from the CLI subcommand) fills in or must agree with the
    document's own ``mode`` field.  Raises :class:`ConfigError` with a
    code (``MissingField``/``BadValue``) and the offending JSON path.
    """
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ConfigError("BadValue", f"invalid JSON: {exc}", "") from exc
    if not isinstance(doc, dict):
        raise ConfigError("BadValue", "config root must be an object", "")

    try:
        jsonschema.validate(doc, _schema())
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path)
        code = "MissingField" if exc.validator == "required" else "BadValue"
        raise ConfigError(code, exc.message, path) from exc

    cfg_mode = doc.get("mode")
    if mode is not None and cfg_mode is not None and mode != cfg_mode:
        raise ConfigError(
            "BadValue", f"config mode {cfg_mode!r} conflicts with subcommand {mode!r}", "mode"
        )
    mode = mode or cfg_mode
    if mode is None:
        raise ConfigError("MissingField", "no mode given (subcommand or config field)", "mode")

    units = doc.get("units", "a_perp")
    f = TWO_PI if units == "hz" else 1.0

    if ("dnp" in doc) == ("phip" in doc):
        raise ConfigError(
            "BadValue", "exactly one of 'dnp' and 'phip' must be present", "dnp"
        )

    dnp = phip = None
    if "dnp" in doc:
        d = doc["dnp"]
        dnp = DnpParams(
            omega_i=f * d["omega_i"],
            a_perp=f * d["a_perp"],
            omega_s=f * d.get("omega_s", 0.0),
        )
    else:
        d = doc["phip"]
        phip = PhipParams(
            omega_i0=f * d["omega_i0"],
            omega_s=f * d["omega_s"],
            j=f * d["j"],
            j1=f * d["j1"],
            j2=f * d["j2"],
        )

    scheme = None
    if "scheme" in doc:
        s = doc["scheme"]
        try:
            scheme = SchemeSpec(
                scheme=canonical_scheme(s["name"]),
                omega_rabi=f * s["omega_rabi"],
                n_reps=s.get("n_reps"),
                n_pulses=s.get("n_pulses"),
                tau_factor=s.get("tau_factor", 3.0),
                phase_shift=s.get("phase_shift", -math.pi / 2),
                sweep_range=tuple(s.get("sweep_range", (0.6, 1.4))),
                sweep_rate=(f * s["sweep_rate"] if s.get("sweep_rate") is not None else None),
                sweep_segments=s.get("sweep_segments", 150),
                sweep_duration=s.get("sweep_duration"),
                n_max=s.get("n_max"),
            )
        except ScheduleError as exc:
            raise ConfigError("BadValue", str(exc), "scheme") from exc
    elif mode in ("simulate", "scan", "multiscan"):
        raise ConfigError("MissingField", f"mode {mode!r} needs a scheme", "scheme")

    if mode == "verify" and phip is None:
        raise ConfigError(
            "BadValue", "verify mode checks the lab-frame mapping and needs 'phip'", "phip"
        )

    err = doc.get("error", {})
    error = ErrorModel(delta=f * err.get("delta", 0.0), rabi_rel=err.get("rabi_rel", 0.0))

    g = doc.get("grid", {})
    default = ScanGrid.default()
    grid = ScanGrid(
        delta_over_omega=(
            _axis_values(g["delta_over_omega"], "grid/delta_over_omega")
            if "delta_over_omega" in g
            else default.delta_over_omega
        ),
        rabi_rel=(
            _axis_values(g["rabi_rel"], "grid/rabi_rel")
            if "rabi_rel" in g
            else default.rabi_rel
        ),
    )

    halvings = tuple(doc.get("halvings", (1, 1)))
    output = doc.get("output", "spinseq_out")
    if not output:
        raise ConfigError("BadValue", "output prefix must be non-empty", "output")

    return RunConfig(
        mode=mode,
        units=units,
        dnp=dnp,
        phip=phip,
        scheme=scheme,
        error=error,
        grid=grid,
        halvings=halvings,
        n_boundaries=doc.get("n_boundaries", 100),
        output=output,
        threads=doc.get("threads"),
        plot=doc.get("plot", True),
        raw=dict(doc),
    )


def apply_overrides(doc: dict, overrides: list[str]) -> dict:
    """Apply ``--set key.path=value`` overrides to a raw config dict.

    Values parse as JSON when possible and fall back to bare strings,
    so ``--set scheme.omega_rabi=200`` and ``--set output=run2`` both
    work.
    """
    out = json.loads(json.dumps(doc))
    for item in overrides:
        if "=" not in item:
            raise ConfigError("BadValue", f"override {item!r} is not key=value", "")
        key, raw_value = item.split("=", 1)
        try:
            value = json.loads(raw_value)
        except json.JSONDecodeError:
            value = raw_value
        node = out
        parts = key.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigError("BadValue", f"cannot descend into {part!r}", key)
        node[parts[-1]] = value
    return out


__all__ = ["MODES", "ConfigError", "RunConfig", "parse_config", "apply_overrides"]
