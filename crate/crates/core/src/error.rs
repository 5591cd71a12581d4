use thiserror::Error;

/// Failures raised by the estimator, inventory and oracle routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("degenerate mean: {0}")]
    DegenerateMean(&'static str),
    #[error("degenerate auxiliary variance")]
    DegenerateAuxVariance,
    #[error("collinear auxiliaries")]
    CollinearAuxiliaries,
    #[error("degenerate scaling constant for {0}")]
    DegenerateScaling(&'static str),
    #[error("degenerate T-matrix")]
    DegenerateTMatrix,
    #[error("bias-cancellation system singular")]
    SingularWeights,
    #[error("two-phase data required")]
    TwoPhaseRequired,
    #[error("non-canonical fuzzy number")]
    NonCanonicalFuzzy,
    #[error("fuzzy division by zero-touching number")]
    FuzzyDivisionByZero,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("K-release optimum undefined (requires F > H)")]
    KReleaseUndefined,
    #[error("configuration error: {0}")]
    Config(String),
    #[error("t_r root not bracketed (model infeasible for these params)")]
    TrNotBracketed,
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("non-finite function value at {0}")]
    NonFinite(String),
    #[error("infeasible correlation matrix (not positive definite)")]
    NonPsd,
    #[error("generator failed to meet targets after {0} attempts")]
    GeneratorRetries(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
