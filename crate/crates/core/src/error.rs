use std::fmt;

use thiserror::Error;

use crate::channels::ChannelKind;

/// Which density-matrix invariant a candidate state broke, and by how much.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateViolation {
    /// Max entrywise |M - M^dagger|.
    Hermiticity { deviation: f64 },
    /// Measured trace (real part); imaginary part is covered by hermiticity.
    Trace { trace: f64 },
    /// Smallest eigenvalue found.
    Positivity { min_eigenvalue: f64 },
}

impl fmt::Display for StateViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateViolation::Hermiticity { deviation } => {
                write!(f, "not hermitian: max |M - M^dagger| = {deviation:e}")
            }
            StateViolation::Trace { trace } => write!(f, "trace is {trace}, expected 1"),
            StateViolation::Positivity { min_eigenvalue } => {
                write!(f, "not positive semidefinite: min eigenvalue {min_eigenvalue:e}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite matrix or scalar entry")]
    NonFinite,

    #[error("eigen-solver did not converge after {iterations} iterations (residual {residual:e})")]
    SolverFailure { iterations: usize, residual: f64 },

    #[error("{name} = {value} is outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("invalid density matrix: {0}")]
    InvalidState(StateViolation),

    #[error("Kraus set is not trace preserving: completeness deviation {deviation:e}")]
    IncompleteChannel { deviation: f64 },

    #[error("numerical integrity: {detail}")]
    Integrity { detail: String },

    #[error("not an X-state: |rho[{row}][{col}]| = {magnitude:e}")]
    NotXState {
        row: usize,
        col: usize,
        magnitude: f64,
    },

    #[error("{kind} closed form: {location} is {value:e} (must be >= 0)")]
    FormulaDomain {
        kind: ChannelKind,
        location: &'static str,
        value: f64,
    },

    #[error("invalid sweep configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// True for failures that indicate broken numerics rather than bad input.
    pub fn is_integrity(&self) -> bool {
        matches!(
            self,
            Error::NonFinite
                | Error::SolverFailure { .. }
                | Error::InvalidState(_)
                | Error::IncompleteChannel { .. }
                | Error::Integrity { .. }
                | Error::NotXState { .. }
                | Error::FormulaDomain { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
