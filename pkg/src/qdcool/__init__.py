"""Digital cooling of simulated qubit Hamiltonians through a reset ancilla."""

__version__ = "0.1.0"

from .cooling import (
    EXACT,
    CoolingStepParams,
    StepEngine,
    TransitionProbabilities,
    analytic_resonant_probabilities,
    bangbang_gamma,
    build_step_unitary,
    commutator_gap_estimate,
    cooling_step,
    coupling_time,
    logsweep_trotter_number,
    perpendicular_norm,
    rabi_frequency,
    simulate_1p1_probabilities,
    strong_coupling_gamma,
    weak_coupling_trotter_number,
)
from .models import (
    AXES,
    CouplingDescriptor,
    TfimParams,
    assemble_full_hamiltonian,
    build_coupling_operator,
    build_random_axis,
    build_tfim,
    build_two_level,
    tfim_from_ratio,
)
from .operators import (
    DenseOperator,
    DensityMatrix,
    EigenSystem,
    append_fridge_ground,
    basis_state,
    conjugate,
    evolve,
    expectation,
    fidelity,
    ground_manifold_projector,
    hermitian,
    hermitian_eig,
    identity,
    kron,
    maximally_mixed,
    pure_state,
    trace_out_fridge,
    unitary,
    von_neumann_entropy,
)
from .protocols import (
    LogSweepConfig,
    Schedule,
    TrajectoryRecord,
    bangbang_schedule,
    default_energy_band,
    logsweep_energies,
    logsweep_linewidths,
    logsweep_schedule,
    run_protocol,
)
