use thiserror::Error;

/// Errors produced by the chain, oracle and simulation routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid coupling pattern: {0}")]
    InvalidPattern(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} exceeds the size guard ({size} > {limit})")]
    SizeGuard {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("{routine} failed to converge ({detail})")]
    NoConvergence {
        routine: &'static str,
        detail: String,
    },

    #[error("non-physical state: {0}")]
    NonPhysical(String),

    #[error("critical temperature search is unbounded: fidelity still above 2/3 at T = {ceiling}")]
    Unbounded { ceiling: f64 },
}

impl Error {
    /// Numerical failures (as opposed to bad input) map to a distinct CLI exit code.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. } | Error::NonPhysical(_) | Error::Unbounded { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
