use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("point outside the unit ball: |X| = {0}")]
    OutsideBall(f64),
    #[error("rho must be positive, got {0}")]
    NonPositiveRho(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("the complex hyperbolic factor is empty for n = 1")]
    EmptyBase,
    #[error("Gram matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("finite-difference stencil leaves the chart along coordinate {coordinate} (step {step})")]
    StencilOutOfChart { coordinate: usize, step: f64 },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("no closed-form flow for {0}")]
    UnsupportedFlow(String),
    #[error("vector field is not real: {0}")]
    NotReal(String),
    #[error("matrix does not preserve the Hermitian form")]
    NotFormPreserving,
    #[error("invalid radicand: {0}")]
    InvalidRadicand(String),
    #[error("{0} is not prime")]
    NotPrime(i64),
    #[error("reduced norm is {0}, expected 1")]
    NormNotOne(i64),
    #[error("quaternion parameters differ")]
    ParamsMismatch,
    #[error("interval bounds out of order: {0} >= {1}")]
    BoundsOrder(f64, f64),
    #[error("lambda must be non-negative")]
    NegativeLambda,
    #[error("operation requires c > 0")]
    ZeroDeformation,
    #[error("{0}")]
    Lattice(String),
}

pub type Result<T> = std::result::Result<T, Error>;
