"""Broadband CPMG refocusing pulses by optimal control.

Design shaped refocusing pulses with gradient-ascent pulse engineering
over a static (offset, RF-scale) ensemble, simulate the resulting echo
trains, and characterize cumulative pulse error as a Pauli dephasing
channel.
"""

__version__ = "0.1.0"

from .pulses import (
    EnsembleDistribution,
    PulseWaveform,
    clip_amplitudes,
    hard_pulse,
    symmetrize_excitation,
    uniform_ladder_distribution,
    waveform_template,
)
from .propagation import (
    bloch_trajectory,
    cycle_propagator,
    cycle_propagators,
    ensemble_propagators,
    free_propagator,
    pulse_propagator,
    pulse_propagators,
    step_hamiltonian,
)
from .metrics import (
    TARGET_PI_Y,
    CpmgCriteria,
    average_fidelity,
    cp_overlap_orders,
    cpmg_criteria,
    criteria_sweep,
    retained_signal_model,
    tilted_pulse_avg_hamiltonian,
    unitary_fidelity,
)
from .grape import (
    GrapeConfig,
    GrapeReport,
    Termination,
    fidelity_and_gradients,
    grape_ascend,
    multistart_histogram,
    random_waveform,
)
from .ladder import (
    LadderResult,
    LadderRung,
    LadderStop,
    add_rfi_and_reoptimize,
    run_ladder,
    select_best_rung,
)
from .echo_train import EchoTrainResult, echo_visibility_sweep, simulate_train
from .channel import (
    PauliChannelFit,
    SuperoperatorMatrix,
    asymptotic_channel,
    build_superoperator,
    choi_kraus,
    cycle_time,
    fit_pauli_model,
    pauli_probabilities,
    superoperator_sequence,
)
from .su2 import (
    RotationDecomposition,
    axis_angle,
    expm_su2,
    trace_overlap,
)
from .fileio import (
    load_waveform_csv,
    load_waveform_json,
    reference_waveform,
    save_waveform_csv,
    save_waveform_json,
)
