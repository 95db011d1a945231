"""Entangled coherent states of two superconducting LC modes via a flux qubit.

Two engines, one protocol: an exact coherent-label algebra producing the
closed-form protocol states and concurrences, and a truncated-Fock numerical
simulator that propagates the full Hamiltonian through the pulse sequence.
The runner executes both side by side and serializes reproducible reports.
"""

from .coherent import (
    Branch,
    CoherentSuperposition,
    ModeParams,
    coherent_overlap,
    delta_phase,
    free_rotate,
    kappa,
    single_branch,
    superposition_norm,
)
from .fock import (
    FockState,
    PulseSegment,
    TruncationConfig,
    build_hamiltonian,
    coherent_vector,
    embed,
    embed_pair,
    fidelity_mod_phase,
    fock_cutoff,
    i_concurrence,
    measure_qubit,
    poisson_tail,
    propagate,
    qubit_x90,
    reduced_density,
    run_schedule,
    sample_measurement,
    standard_schedule,
)
from .protocol import (
    DeviceParams,
    EcsBranchPair,
    collapse,
    concurrence_eq8,
    concurrence_eq11,
    concurrence_general,
    default_device_params,
    kappa_zero,
    protocol_phase,
    state_after_first_pulse,
    state_after_second_pulse,
    tripartite_state,
)
from .runner import (
    ProtocolReport,
    ProtocolSpec,
    run_protocol,
    sweep,
    timing_report,
)
from .validation import validate

__version__ = "0.1.0"

__all__ = [
    "Branch",
    "CoherentSuperposition",
    "DeviceParams",
    "EcsBranchPair",
    "FockState",
    "ModeParams",
    "ProtocolReport",
    "ProtocolSpec",
    "PulseSegment",
    "TruncationConfig",
    "build_hamiltonian",
    "coherent_overlap",
    "coherent_vector",
    "collapse",
    "concurrence_eq8",
    "concurrence_eq11",
    "concurrence_general",
    "default_device_params",
    "delta_phase",
    "embed",
    "embed_pair",
    "fidelity_mod_phase",
    "fock_cutoff",
    "free_rotate",
    "i_concurrence",
    "kappa",
    "kappa_zero",
    "measure_qubit",
    "poisson_tail",
    "propagate",
    "protocol_phase",
    "qubit_x90",
    "reduced_density",
    "run_protocol",
    "run_schedule",
    "sample_measurement",
    "single_branch",
    "standard_schedule",
    "state_after_first_pulse",
    "state_after_second_pulse",
    "superposition_norm",
    "sweep",
    "timing_report",
    "tripartite_state",
    "validate",
]
