use num_complex::Complex64;
use thiserror::Error;

use crate::chebcore::Kind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("expected a {expected:?} series, got {found:?}")]
    KindMismatch { expected: Kind, found: Kind },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The trapezoidal rule needs more nodes than the target Fourier mode.
    #[error("sampling condition violated: n = {n} needs m >= {required}, got m = {m}")]
    SamplingCondition { n: usize, m: usize, required: usize },

    #[error("radius {rho} is outside the analyticity region (rho_max = {rho_max})")]
    Analyticity { rho: f64, rho_max: f64 },

    #[error("non-finite function value at node {node} (z = {z})")]
    Evaluation { node: usize, z: Complex64 },

    #[error("registry error: {0}")]
    Registry(String),

    #[error("function `{0}` has no exact-coefficient oracle")]
    NoOracle(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("cannot evaluate `{subexpr}`: {message}")]
    ExprDomain { subexpr: String, message: String },

    #[error("series is identically zero")]
    NoPolynomial,

    #[error("QR iteration did not converge for eigenvalue index {index}")]
    Convergence { index: usize },
}
