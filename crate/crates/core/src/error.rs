use crate::expr::{EvalError, ParseError};

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Eval(#[from] EvalError),

    #[error("invalid interval [{a}, {b}]: need a < b")]
    InvalidDomain { a: f64, b: f64 },

    #[error("{what} must be at least {min}, got {value}")]
    InvalidCount {
        what: &'static str,
        value: usize,
        min: usize,
    },

    #[error("epsilon must be positive and finite, got {0}")]
    InvalidEpsilon(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),

    #[error("weight is not positive at x = {x} (value {value})")]
    NonPositiveWeight { x: f64, value: f64 },

    #[error("mass matrix is not positive definite: pivot {index} is {pivot:e}")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("jacobi rotations did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    JacobiNotConverged { sweeps: usize, off_norm: f64 },

    #[error("{dofs} degrees of freedom exceed the dense solver cap of {cap}")]
    DenseCapExceeded { dofs: usize, cap: usize },

    #[error("eigensolver did not converge in {iterations} iterations (worst residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("eigensolver breakdown: search block became rank deficient")]
    Breakdown,

    #[error("reference not converged for k = {k}: extrapolated change {change:e} exceeds {threshold:e}")]
    ReferenceNotConverged { k: usize, change: f64, threshold: f64 },

    #[error("every sampled pair sits on the tangent pole")]
    PoleSaturated,
}

impl Error {
    /// True for failures of the numerics (solver, factorization, reference
    /// guard) rather than of the inputs.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NotPositiveDefinite { .. }
                | Error::JacobiNotConverged { .. }
                | Error::NotConverged { .. }
                | Error::Breakdown
                | Error::ReferenceNotConverged { .. }
        )
    }
}
