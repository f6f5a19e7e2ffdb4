"""Polarization-transfer sequence simulator for coupled spin-1/2 systems.

Builds the driven two-spin Hamiltonians of low-field polarization
transfer (and the lab-frame three-spin picture they derive from),
compiles the standard sequence families into piecewise-constant drive
schedules, propagates density matrices through them, extracts effective
couplings, and maps transfer robustness over drive errors.
"""

__version__ = "0.1.0"

from .hamiltonians import (
    DnpParams,
    PhipParams,
    DriveSample,
    ErrorModel,
    IDEAL,
    RegimeWarning,
    spin_ops,
    dnp_hamiltonian,
    phip_hamiltonian,
    singlet_triplet_unitary,
    pseudospin_operators,
    pseudospin_identities_report,
    map_phip_to_dnp,
    dynamical_equivalence_report,
)
from .linalg import kron, propagator, evolve, expectation
from .sequences import (
    SCHEMES,
    SCHEME_INFO,
    Segment,
    Schedule,
    SchemeSpec,
    ScheduleError,
    NegativeWaitError,
    build_schedule,
    build_slic,
    build_s2hm_plain,
    build_s2hm_xy8,
    build_pulsepol,
    build_adapt,
    build_b1_sweep,
    layout_timing,
    reverse_schedule,
    validate_schedule,
)
from .propagate import (
    NoMaximumFound,
    Trajectory,
    initial_state,
    simulate,
    final_polarization,
    select_repetitions,
    transfer_time,
)
from .robustness import ScanGrid, Heatmap, scan, multi_regime_scan
from .analysis import (
    A_STAR_THEORY,
    BranchAmbiguityError,
    EffectiveCouplingReport,
    CycleReport,
    estimate_a_star,
    cycle_effective_hamiltonian,
    adapt_sideband_positions,
)
from .config import RunConfig, ConfigError, parse_config
