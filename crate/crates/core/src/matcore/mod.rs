//! Dense complex matrices at working (binary32) and reference (binary64)
//! precision, the max-entry and Frobenius norms, and the naive product used
//! as the exact-order oracle.

mod matrix;
mod scalar;
mod sum;
pub mod text;

use thiserror::Error;

pub use matrix::{convert_precision, naive_multiply, norm, norm_of_difference, pad_to, Matrix, NormKind};
pub use scalar::{complex_from_f64, complex_to_f64, flops, modulus, Counted, Precision, Real, Scalar};
pub use sum::{ceil_log2, pairwise_sum};
pub(crate) use sum::tree_sum;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatrixError {
    #[error("dimension mismatch: {left:?} × {right:?}")]
    DimensionMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("matrix dimensions must be positive, got {rows}×{cols}")]
    EmptyShape { rows: usize, cols: usize },
    #[error("data length {got} does not match shape ({expected} entries)")]
    DataLength { expected: usize, got: usize },
    #[error("cannot pad {from:?} down to {to:?}")]
    ShrinkRequest { from: (usize, usize), to: (usize, usize) },
    #[error("pairwise sum of an empty sequence")]
    EmptySum,
    #[error("matrix text: {0}")]
    Parse(String),
}
