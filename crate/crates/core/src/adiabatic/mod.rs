//! Photon storage and retrieval by sweeping the drive `Ω(t)` through zero.
//!
//! Starting at large positive `Ω` the polaritons `D₃, D₄` are photon-like and
//! end up atom-like at large negative `Ω`, so a slow sweep maps `a → −C`,
//! `b → −A` once the dynamic phase `∫ε₃ dt` is a multiple of `2π`.

mod integrator;
mod passage;
mod phase;
mod schedule;

pub use integrator::{
    exact_timeordered_evolve, exact_timeordered_evolve_with, IntegratorOptions, SectorGenerator, TimeOrderedOutcome,
};
pub use passage::{
    adiabatic_evolve, adiabatic_evolve_with, atomic_basis, basis_at, decomposition_coefficients,
    ideal_transfer_state, inverse_passage, inverse_passage_with, mode_following_map, photonic_basis,
    polariton_superposition, retrieval_target, squared_binomial_coefficients, storage_target, PassageOptions,
    PassageResult,
};
pub use phase::{
    distance_to_lattice, dynamic_phase, dynamic_phases, integrate, phase_tuned, phase_tuned_to, DynamicPhases,
    PHASE_TOLERANCE,
};
pub use schedule::{
    polariton_energies, Family, Interpolation, Ramp, RampParams, Schedule, ScheduleFile, STORAGE_GRADE_RATIO,
};
