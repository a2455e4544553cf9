//! Error taxonomy shared by every module of the crate.

use thiserror::Error;

/// Errors produced by the numerical routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument was outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A quadrature routine exhausted its evaluation budget. Carries the
    /// best estimate obtained so far and its error estimate.
    #[error("quadrature did not converge: best estimate {estimate:e}, error estimate {err_est:e} after {evals} evaluations")]
    NonConvergence {
        estimate: f64,
        err_est: f64,
        evals: usize,
    },

    /// The tail of a semi-infinite integral shows no sign of decay.
    #[error("integral appears to diverge: {0}")]
    Divergence(String),

    /// A density whose normalization integral does not converge.
    #[error("density is not normalizable: {0}")]
    NonNormalizable(String),

    /// Pointwise evaluation was requested for a point-mass (delta) density.
    #[error("point-mass density has no pointwise value; use measure-aware operations (moments, transforms, sampling)")]
    PointMass,

    /// The requested moment integral diverges.
    #[error("moment does not exist: {0}")]
    MomentDoesNotExist(String),

    /// The operation is not supported for the given arguments.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// External-field entries too close together for the closed-form kernel.
    #[error("degenerate external field: min gap {min_gap:e} below tolerance {tol:e}; use the confluent GUE-limit kernel or separate the entries")]
    DegenerateField { min_gap: f64, tol: f64 },

    /// No closed-form spread function is known for the family.
    #[error("spread function unavailable for this density family")]
    SpreadUnavailable,

    /// The iterative eigensolver failed to converge.
    #[error("eigensolver failed to converge after {0} iterations")]
    EigenNonConvergence(usize),

    /// Generic numerical failure with context.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// Invalid input data (grids, configs, files).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
