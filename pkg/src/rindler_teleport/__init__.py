"""Teleportation from an inertial to a uniformly accelerated observer,
simulated on truncated Fock spaces of the two Rindler wedges."""

__version__ = "0.1.0"

from .fock import (
    CompositionError,
    ContractViolation,
    DensityOp,
    FockKet,
    ModeSpec,
    Tolerances,
    TOL,
    apply_ladder,
    eigenvalues_hermitian,
    fidelity_pure,
    make_ket,
    outer,
    partial_trace,
    reduced_density,
    tensor,
)
from .rindler import (
    DomainError,
    SqueezeParam,
    WorldlineEvent,
    apply_proper_time_phase,
    cutoff_for,
    minkowski_one_particle,
    r_from_omega,
    r_from_physical,
    rindler_to_minkowski,
    squeeze,
    squeezed_vacuum,
    thermal_vacuum,
    unruh_annihilator_defect,
    unruh_temperature,
    worldline,
)
from .teleport import (
    InputState,
    OutcomeCoeffs,
    RobState,
    averaged_fidelity,
    averaged_fidelity_closed_form,
    fidelity_closed_form,
    fidelity_numeric,
    outcome_coefficients,
    rob_state_analytic,
    rob_state_numeric,
)
from .entropy import (
    EntropyReport,
    info_gain,
    post_measurement_state,
    pre_measurement_state,
    two_state_model_gain,
    vacuum_entropy,
    von_neumann_entropy,
)
