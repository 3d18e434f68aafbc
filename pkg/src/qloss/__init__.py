"""Non-Markovianity of qubit dynamical maps via the quantum loss of a Bell pair."""

from .channels import (
    ChannelModel,
    LorentzianBath,
    RateFunction,
    StepSizeError,
    amplitude_damping_channel,
    amplitude_damping_loss,
    amplitude_damping_rate,
    decoherence_amplitude,
    decoherence_amplitude_derivative,
    dephasing_channel,
    dephasing_loss,
    evolve_bell,
    gamma_integral,
    generic_channel,
    integrate_bell_grid,
    integrate_master_equation,
    pauli_channel,
    pauli_loss,
    pauli_state_eigenvalues,
)
from .entropy import (
    EntropySnapshot,
    binary_entropy,
    coherent_information,
    conditional_entropy,
    entropy_exchange,
    mutual_entanglement,
    mutual_information,
    quantum_loss,
    quantum_noise,
    von_neumann_entropy,
)
from .qmath import (
    HermitianEigen,
    hermitian_eigensystem,
    hermitian_eigenvalues,
    kron,
    partial_trace,
)
from .states import (
    StateValidationError,
    ValidationReport,
    bell_state,
    projector,
    purify,
    require_density,
    validate,
)
from .witness import (
    DecreaseInterval,
    NonMarkovReport,
    Trajectory,
    analytic_verdict,
    detect_intervals,
    loss_at,
    measure,
    mutual_info_at,
    mutual_info_witness,
    sample_trajectory,
)

__version__ = "0.1.0"
