"""Fidelity statistics of quantum state transfer on disordered chains."""

from .chain import (
    ChainSpec,
    ConsistencyError,
    DisorderSpec,
    InvalidChainError,
    NumericFailureError,
    RealizedHamiltonian,
    SpectralDecomposition,
    TransferOutcome,
    chain_couplings,
    eigendecompose,
    ideal_hamiltonian,
    ideal_phase,
    propagate_excitation,
    pst_couplings,
    realize_disorder,
    transfer_amplitude,
    transfer_outcome,
    transfer_time,
    wrap_phase,
)
from .ensemble import (
    DEFAULT_BETA2_GRID,
    FEATURED_BETA2,
    WORKERS_ENV_VAR,
    EnsembleConfig,
    EnsembleStats,
    Histogram,
    RealizationRecord,
    aggregate,
    child_stream,
    delta_intervals,
    histogram,
    prob_window,
    run_ensemble,
)
from .fidelity import (
    F_CLASSICAL,
    MinFidelityResult,
    classical_threshold,
    fidelity_avg,
    fidelity_coefficients,
    fidelity_input,
    fidelity_min,
    min_fidelity_maps,
    stationary_weight,
)

__version__ = "0.1.0"

__all__ = [
    "ChainSpec",
    "ConsistencyError",
    "DisorderSpec",
    "InvalidChainError",
    "NumericFailureError",
    "RealizedHamiltonian",
    "SpectralDecomposition",
    "TransferOutcome",
    "chain_couplings",
    "eigendecompose",
    "ideal_hamiltonian",
    "ideal_phase",
    "propagate_excitation",
    "pst_couplings",
    "realize_disorder",
    "transfer_amplitude",
    "transfer_outcome",
    "transfer_time",
    "wrap_phase",
    "DEFAULT_BETA2_GRID",
    "FEATURED_BETA2",
    "WORKERS_ENV_VAR",
    "EnsembleConfig",
    "EnsembleStats",
    "Histogram",
    "RealizationRecord",
    "aggregate",
    "child_stream",
    "delta_intervals",
    "histogram",
    "prob_window",
    "run_ensemble",
    "F_CLASSICAL",
    "MinFidelityResult",
    "classical_threshold",
    "fidelity_avg",
    "fidelity_coefficients",
    "fidelity_input",
    "fidelity_min",
    "min_fidelity_maps",
    "stationary_weight",
    "__version__",
]
