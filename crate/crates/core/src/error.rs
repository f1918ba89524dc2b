//! Error type shared by all simulator modules.

use thiserror::Error;

/// Errors reported by the simulator.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A prior partition failed validation (sizes, probabilities, or both).
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    /// An initial state failed validation (normalization or marked amplitude).
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A scalar argument is outside its admissible range.
    #[error("{name} = {value} out of range: {expected}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// A full-space operation was requested above the configured oracle cap.
    #[error("full-space dimension {n} exceeds oracle cap {cap} (set ADIASEARCH_ORACLE_CAP to raise)")]
    OracleCapExceeded { n: usize, cap: usize },

    /// A schedule and a Hamiltonian (or state) disagree on shared parameters.
    #[error("mismatched parameters: {0}")]
    ParameterMismatch(String),

    /// The integrator step ladder did not converge within its budget.
    #[error("integration did not converge: {0}")]
    NonConvergent(String),

    /// A textual input (e.g. a `p:n` partition list) could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
