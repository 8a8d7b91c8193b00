//! Error type shared across the crate.

use thiserror::Error;

/// Errors raised by simulation, likelihood evaluation and estimation.
#[derive(Debug, Error)]
pub enum HjmError {
    /// Parameter outside its admissible range.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Inconsistent array/lattice dimensions between inputs.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Lattice index outside the stored domain.
    #[error("lattice index (k={k}, ell={ell}) outside the domain")]
    OutOfDomain { k: usize, ell: usize },

    /// The normal matrix of the risk-parameter subproblem is singular.
    #[error("singular normal matrix in the risk-parameter solve")]
    SingularSystem,

    /// Optimizer could not proceed (non-finite objective, bad start grid).
    #[error("optimization failed: {0}")]
    Optimization(String),

    /// A Monte Carlo run was aborted.
    #[error("monte carlo aborted: {0}")]
    MonteCarlo(String),

    /// Malformed surface or report file.
    #[error("file format error: {0}")]
    FileFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, HjmError>;
