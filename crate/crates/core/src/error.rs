use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("parameters on the boundary of the admissible region: {0}")]
    Boundary(String),

    #[error("information matrix is singular or not positive definite")]
    SingularInformation,

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("bootstrap failed: {failed} of {requested} replicates could not be refitted (limit {limit})")]
    BootstrapFailures {
        failed: usize,
        requested: usize,
        limit: usize,
    },

    #[error("data error: {0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, Error>;
