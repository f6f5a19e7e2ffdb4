"""Command-line front end.

Subcommand per run mode (``simulate``, ``scan``, ``multiscan``,
``verify``, ``astar``, plus the informational ``schemes``), each driven
by a JSON config (``--config``) with dotted-path overrides (``--set``).
Data files are CSV/JSON; report figures are rendered next to them
unless ``--no-plot``.  Scan parallelism: ``--threads`` overrides the
``SPINSEQ_THREADS`` environment variable, which overrides the config;
results are identical for any thread count.

Exit codes: 0 success, 2 configuration errors, 1 runtime failures; all
failures emit a one-line JSON error object on stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .analysis import (
    A_STAR_THEORY,
    BranchAmbiguityError,
    cycle_effective_hamiltonian,
    estimate_a_star,
)
from .config import MODES, ConfigError, RunConfig, apply_overrides, parse_config
from .hamiltonians import (
    DriveSample,
    dynamical_equivalence_report,
    pseudospin_identities_report,
)
from .propagate import NoMaximumFound, select_repetitions, simulate
from .robustness import multi_regime_scan, scan
from .sequences import SCHEME_INFO, SCHEMES, ScheduleError, build_schedule


def _resolve_threads(cfg: RunConfig, flag: int | None) -> int:
    if flag is not None:
        return flag
    env = os.environ.get("SPINSEQ_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError("BadValue", f"SPINSEQ_THREADS={env!r} is not an integer", "")
    return cfg.threads or 1


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _resolved_schedule(cfg: RunConfig):
    p = cfg.system
    sch = build_schedule(p, cfg.scheme)
    n = cfg.scheme.n_reps or select_repetitions(sch, p, n_max=cfg.scheme.n_max)
    return p, sch.with_reps(n)


def _run_simulate(cfg: RunConfig, threads: int) -> list[str]:
    p, sch = _resolved_schedule(cfg)
    traj = simulate(sch, p, cfg.error)
    files = [f"{cfg.output}.csv", f"{cfg.output}.schedule.json", f"{cfg.output}.json"]
    with open(files[0], "w") as fh:
        traj.write_csv(fh)
    with open(files[1], "w") as fh:
        fh.write(sch.to_json())
        fh.write("\n")
    _write_json(
        files[2],
        {
            "scheme": sch.scheme,
            "n_reps": sch.n_reps,
            "total_duration": sch.total_duration,
            "transferred_polarization": traj.transferred_polarization,
            "error": {"delta": cfg.error.delta, "rabi_rel": cfg.error.rabi_rel},
            "code_version": __version__,
        },
    )
    if cfg.plot:
        from .plotting import trajectory_figure

        trajectory_figure(traj, f"{cfg.output}.png", title=f"{sch.scheme} N={sch.n_reps}")
        files.append(f"{cfg.output}.png")
    return files


def _run_scan(cfg: RunConfig, threads: int) -> list[str]:
    hm = scan(cfg.scheme, cfg.system, cfg.grid, threads=threads)
    files = [f"{cfg.output}.csv", f"{cfg.output}.json"]
    with open(files[0], "w") as fh:
        hm.write_csv(fh)
    with open(files[1], "w") as fh:
        hm.write_metadata(fh)
    if cfg.plot:
        from .plotting import heatmap_figure

        heatmap_figure(hm, f"{cfg.output}.png")
        files.append(f"{cfg.output}.png")
    return files


def _run_multiscan(cfg: RunConfig, threads: int) -> list[str]:
    panels = multi_regime_scan(
        cfg.scheme, cfg.system, cfg.halvings, grid=cfg.grid, threads=threads
    )
    files = []
    index = []
    for i, column in enumerate(panels):
        for j, hm in enumerate(column):
            stem = f"{cfg.output}_a{i}w{j}"
            with open(f"{stem}.csv", "w") as fh:
                hm.write_csv(fh)
            with open(f"{stem}.json", "w") as fh:
                hm.write_metadata(fh)
            files += [f"{stem}.csv", f"{stem}.json"]
            index.append(
                {
                    "panel": [i, j],
                    "files": [f"{stem}.csv", f"{stem}.json"],
                    "t_fin": hm.metadata["t_fin"],
                    "t_fin_ratio": hm.metadata["t_fin_ratio"],
                }
            )
    _write_json(f"{cfg.output}.json", {"panels": index, "code_version": __version__})
    files.append(f"{cfg.output}.json")
    if cfg.plot:
        from .plotting import multiscan_figure

        multiscan_figure(panels, f"{cfg.output}.png")
        files.append(f"{cfg.output}.png")
    return files


def _verify_drive(p, n_boundaries: int):
    """Deterministic pseudo-random drive program for the equivalence check."""
    rng = np.random.default_rng(181321)
    scale = abs(p.j)
    return [
        (
            DriveSample(rng.uniform(0.0, 4.0 * scale), rng.uniform(0.0, 2.0 * math.pi)),
            rng.uniform(0.05, 0.5) * math.pi / scale,
        )
        for _ in range(n_boundaries)
    ]


def _run_verify(cfg: RunConfig, threads: int) -> list[str]:
    identities = pseudospin_identities_report(cfg.phip)
    equivalence = dynamical_equivalence_report(
        cfg.phip, _verify_drive(cfg.phip, cfg.n_boundaries)
    )
    mapped = cfg.system
    payload = {
        "identities": identities.as_dict(),
        "equivalence": equivalence.as_dict(),
        "mapped_params": {
            "omega_i": mapped.omega_i,
            "a_perp": mapped.a_perp,
            "omega_s": mapped.omega_s,
        },
        "passed": bool(
            identities.all_passed
            and equivalence.max_sz_deviation <= 1e-10
            and equivalence.max_iz_deviation <= 1e-10
            and equivalence.max_leakage <= 1e-12
        ),
        "code_version": __version__,
    }
    path = f"{cfg.output}.json"
    _write_json(path, payload)
    if not payload["passed"]:
        raise RuntimeError("verification failed; see report " + path)
    return [path]


def _run_astar(cfg: RunConfig, threads: int) -> list[str]:
    p = cfg.system
    if cfg.scheme is not None:
        specs = [cfg.scheme]
    else:
        omega = 4.0 * abs(p.omega_i)
        from .sequences import SchemeSpec

        specs = [SchemeSpec(name, omega) for name in ("slic", "s2hm_plain", "pulsepol")]
    reports = []
    for spec in specs:
        rep = estimate_a_star(spec, p)
        entry = rep.as_dict()
        try:
            cyc = cycle_effective_hamiltonian(build_schedule(p, spec), p)
            entry["cycle_flip_flop_coeff"] = cyc.flip_flop_coeff
        except (BranchAmbiguityError, ValueError) as exc:
            entry["cycle_flip_flop_coeff"] = None
            entry["cycle_error"] = str(exc)
        reports.append(entry)
    path = f"{cfg.output}.json"
    _write_json(
        path,
        {
            "theory": {k: v for k, v in A_STAR_THEORY.items()},
            "reports": reports,
            "code_version": __version__,
        },
    )
    return [path]


_RUNNERS = {
    "simulate": _run_simulate,
    "scan": _run_scan,
    "multiscan": _run_multiscan,
    "verify": _run_verify,
    "astar": _run_astar,
}


def run(cfg: RunConfig, threads: int | None = None) -> list[str]:
    """Execute a parsed configuration; returns the files written."""
    return _RUNNERS[cfg.mode](cfg, _resolve_threads(cfg, threads))


def _print_schemes(as_json: bool) -> None:
    if as_json:
        print(json.dumps(SCHEME_INFO, indent=2))
        return
    for name in SCHEMES:
        info = SCHEME_INFO[name]
        print(f"{name}")
        print(f"    PHIP:      {info['phip_name']}")
        print(f"    DNP:       {info['dnp_name']}")
        print(f"    resonance: {info['resonance']}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinseq",
        description=(
            "Polarization-transfer sequence simulator for coupled spin-1/2 pairs. "
            "Frequencies are angular, in units of the coupling a_perp "
            "(set units='hz' in the config to quote Hz instead; inputs are then "
            "multiplied by 2*pi)."
        ),
    )
    parser.add_argument("--version", action="version", version=f"spinseq {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    for mode in MODES:
        sp = sub.add_parser(mode, help=f"run {mode} mode")
        sp.add_argument("--config", required=True, help="JSON config path")
        sp.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override a config entry by dotted path (JSON-parsed value)",
        )
        sp.add_argument("--output", help="output path prefix (overrides config)")
        sp.add_argument(
            "--threads",
            type=int,
            help="scan parallelism (overrides SPINSEQ_THREADS and config)",
        )
        sp.add_argument(
            "--no-plot", action="store_true", help="skip figure rendering"
        )

    sp = sub.add_parser("schemes", help="list the sequence families and their names")
    sp.add_argument("--json", action="store_true", help="machine-readable listing")
    return parser


def _fail(code: str, message: str, path: str = "", exit_code: int = 1) -> int:
    payload = {"error": {"code": code, "message": message}}
    if path:
        payload["error"]["path"] = path
    print(json.dumps(payload), file=sys.stderr)
    return exit_code


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "schemes":
        _print_schemes(args.json)
        return 0

    try:
        with open(args.config) as fh:
            doc = json.load(fh)
    except OSError as exc:
        return _fail("IoError", f"cannot read config: {exc}", exit_code=2)
    except json.JSONDecodeError as exc:
        return _fail("BadValue", f"config is not valid JSON: {exc}", exit_code=2)

    try:
        doc = apply_overrides(doc, args.overrides)
        if args.output:
            doc["output"] = args.output
        cfg = parse_config(doc, mode=args.command)
        files = run(cfg, threads=args.threads)
    except ConfigError as exc:
        return _fail(exc.code, exc.reason, exc.path, exit_code=2)
    except (ScheduleError, NoMaximumFound, BranchAmbiguityError) as exc:
        return _fail(type(exc).__name__, str(exc))
    except OSError as exc:
        return _fail("IoError", str(exc))
    except RuntimeError as exc:
        return _fail("RuntimeError", str(exc))

    for path in files:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
