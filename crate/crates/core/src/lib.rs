//! Quantum search by adiabatic evolution, at desk scale.
//!
//! The search Hamiltonian `H(s) = c[(1-s)(I - |psi0><psi0|) + s(I - |m><m|)]`
//! leaves the plane spanned by the initial state and the marked item
//! invariant, so spectra and dynamics are exact in a 2x2 block at any
//! database size. On top of that reduction this crate provides:
//!
//! - [`model`]: prior partitions and initial states (`a_x = sqrt(p_i/n_i)`),
//! - [`spectral`]: the effective Hamiltonian, eigenvalues, and gap,
//! - [`schedule`]: linear and locally adiabatic schedules with the arctan
//!   closed-form running time and the prior-weighted time formulas,
//! - [`dynamics`]: Schrödinger integration with norm-drift diagnostics,
//! - [`grover`]: the discrete-iteration baseline.
//!
//! The running time depends on the initial state only through the marked
//! amplitude, scales as `sqrt(N)` for uniform states, improves with a prior
//! partition, and divides by any factor applied to both Hamiltonians.

pub mod dynamics;
pub mod error;
pub mod grover;
pub mod model;
pub mod schedule;
pub mod spectral;

pub use dynamics::{
    evolve, evolve_fixed, evolve_full, evolve_full_fixed, fidelity_sweep, EvolutionResult,
    QuantumState2D, TracePoint,
};
pub use error::{Error, Result};
pub use grover::{
    grover_optimal_iterations, grover_simulate, success_probability_closed_form, GroverRun,
};
pub use model::{
    build_prior_state, marked_amplitude, uniform_state, InitialState, PriorPartition, Subset,
};
pub use schedule::{
    adiabaticity_report, local_time_of_s, mean_time, theorem2_time, theorem2_time_exact,
    total_time, total_time_approx, AdiabaticityReport, Schedule, ScheduleKind,
};
pub use spectral::{full_matrix, oracle_cap, EffectiveHamiltonian, SpectralSample};
