//! Error type shared by all modules.

use alloc::string::String;
use core::fmt;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes of the kernel and the analysis layers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Evaluation or integration outside the represented domain.
    OutOfDomain { t: f64, start: f64, end: f64 },
    /// `tau` at or below the oscillation threshold `1/e` (plus guard).
    BelowThreshold { tau: f64 },
    /// A problem definition violates its own invariants.
    InvalidSpec(String),
    /// A runtime invariant was violated (e.g. `tau(t) > t` detected).
    InvariantViolation(String),
    /// An iterative method failed to converge.
    Numeric(String),
    /// Shift comparison of functions whose periods do not match.
    PeriodMismatch { a: f64, b: f64 },
    /// Semicycle analysis of a trajectory with fewer than three zeros.
    NotOscillatory { zeros: usize },
    /// A requested construction is infeasible for the given parameters.
    Construction(String),
    /// Parameter outside the documented range of an operation.
    BadParameter(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::OutOfDomain { t, start, end } => {
                write!(f, "t = {t} outside domain [{start}, {end}]")
            }
            Error::BelowThreshold { tau } => {
                write!(f, "tau = {tau} is at or below the 1/e threshold")
            }
            Error::InvalidSpec(msg) => write!(f, "invalid spec: {msg}"),
            Error::InvariantViolation(msg) => write!(f, "invariant violation: {msg}"),
            Error::Numeric(msg) => write!(f, "numeric failure: {msg}"),
            Error::PeriodMismatch { a, b } => {
                write!(f, "incommensurate periods: {a} vs {b}")
            }
            Error::NotOscillatory { zeros } => {
                write!(f, "trajectory has {zeros} zeros; need at least 3")
            }
            Error::Construction(msg) => write!(f, "construction error: {msg}"),
            Error::BadParameter(msg) => write!(f, "bad parameter: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
