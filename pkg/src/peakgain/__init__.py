"""Worst-case gain estimation for discrete-time LTI systems from batch data.

The package estimates the peak frequency-response magnitude (the H-infinity
norm) of a stable SISO plant purely from input/output batch experiments. The
main algorithm operates the plant continuously, without resets: holding a
periodic input makes the plant act as a circulant matrix on one input period,
and a power iteration on its time-reversed (symmetric) counterpart converges
to the peak gain over the batch frequency grid. The classical reset-based
baseline and the spectral machinery to verify both are included.
"""

from .estimator import (
    EstimateTrace,
    EstimationError,
    PowerIterationConfig,
    init_input,
    iterate_reset_based,
    iterate_reset_free,
    select_shift,
    write_trace_csv,
    write_update_snapshots,
)
from .lifting import (
    CirculantSpec,
    LiftedBatchSystem,
    circulant_coefficients,
    lift,
    periodic_response_matrix,
)
from .lti import (
    RationalTransferFunction,
    StateSpace,
    SystemSpecError,
    freq_response,
    hinf_grid_oracle,
    hinf_peak,
    parse_system_file,
    parse_system_text,
    simulate,
    spectral_radius,
    tf_to_ss,
)
from .plant import (
    RESET_FREE,
    RESET_PER_BATCH,
    BatchRecord,
    PlantSession,
    SteadyStatePlant,
    export_batch_log,
    is_settled,
    new_session,
    relative_batch_change,
    steady_state_response,
)
from .spectral import (
    circulant,
    circulant_eigenvalues,
    diagonalization_residual,
    dft_matrix,
    dominant_bin,
    max_gain_reset_based,
    reversed_circulant,
    reversed_spectrum,
    symmetric_eig_oracle,
    time_reversal_matrix,
    time_reverse,
)

__version__ = "0.1.0"

__all__ = [
    "BatchRecord",
    "CirculantSpec",
    "EstimateTrace",
    "EstimationError",
    "LiftedBatchSystem",
    "PlantSession",
    "PowerIterationConfig",
    "RESET_FREE",
    "RESET_PER_BATCH",
    "RationalTransferFunction",
    "StateSpace",
    "SteadyStatePlant",
    "SystemSpecError",
    "circulant",
    "circulant_coefficients",
    "circulant_eigenvalues",
    "dft_matrix",
    "diagonalization_residual",
    "dominant_bin",
    "export_batch_log",
    "freq_response",
    "hinf_grid_oracle",
    "hinf_peak",
    "init_input",
    "is_settled",
    "iterate_reset_based",
    "iterate_reset_free",
    "lift",
    "max_gain_reset_based",
    "new_session",
    "parse_system_file",
    "parse_system_text",
    "periodic_response_matrix",
    "relative_batch_change",
    "reversed_circulant",
    "reversed_spectrum",
    "select_shift",
    "simulate",
    "spectral_radius",
    "steady_state_response",
    "symmetric_eig_oracle",
    "tf_to_ss",
    "time_reversal_matrix",
    "time_reverse",
    "write_trace_csv",
    "write_update_snapshots",
]
