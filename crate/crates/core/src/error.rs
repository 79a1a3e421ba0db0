use thiserror::Error;

/// Errors produced by the distribution, fitting and diagnostic routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("design matrix {matrix} is rank deficient (rank {rank} < {cols} columns)")]
    RankDeficient {
        matrix: &'static str,
        rank: usize,
        cols: usize,
    },

    #[error("invalid model specification: {0}")]
    InvalidSpec(String),

    #[error("inadmissible parameter vector: {0}")]
    Inadmissible(String),

    #[error("observed information matrix is singular or not positive definite")]
    SingularInformation,

    #[error("fit did not converge (gradient max-norm {gradient_norm:.3e} after {iterations} iterations)")]
    NotConverged {
        iterations: usize,
        gradient_norm: f64,
    },

    #[error("{failed} of {total} replicate fits failed")]
    TooManyFailures { failed: usize, total: usize },

    #[error("zero variance")]
    ZeroVariance,

    #[error("{0}")]
    Data(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(what: &'static str, value: f64) -> Error {
    Error::Domain { what, value }
}
