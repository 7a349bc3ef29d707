//! Bilinear (Strassen-like) recursive matrix multiplication and the
//! Bini–Lotti style forward-error bounds for stationary and non-stationary
//! recursions.

mod bounds;
mod multiply;
mod scheme;

use thiserror::Error;

use crate::matcore::MatrixError;

pub use bounds::{
    error_bound_nonstationary, error_bound_prepost, error_bound_stationary, naive_mu, stationary_levels,
};
pub use multiply::{multiply_nonstationary, multiply_padded, multiply_stationary, padded_order, Schedule};
pub use scheme::{
    load_scheme_json, naive_scheme, scheme_stats, scheme_to_json, strassen_scheme, trivial_scheme, verify_scheme,
    BilinearScheme, SchemeDefect, SchemeFile, SchemeStats,
};

/// Default order at or below which recursion stops and the naive product runs.
pub const DEFAULT_BASE_THRESHOLD: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BilinearError {
    #[error("malformed scheme: {0}")]
    SchemeShape(String),
    #[error("scheme is not an exact product algorithm: {0}")]
    SchemeRejected(SchemeDefect),
    #[error("base threshold must be positive")]
    InvalidThreshold,
    #[error("a scheme with k = 1 never reduces the order and cannot recurse stationarily")]
    NonReducingScheme,
    #[error("order {n} is not base·{k}^p with base ≤ {threshold}; pad the inputs first")]
    IncompatibleOrder { n: usize, k: usize, threshold: usize },
    #[error("order {n} does not match the schedule (∏k = {product}, base threshold {threshold})")]
    ScheduleMismatch { n: usize, product: usize, threshold: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}
