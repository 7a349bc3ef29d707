//! Experiment plumbing: seeded precision experiments that compare a
//! working-precision product against a reference-precision naive product,
//! exponent regressions, the `verify` suite, flop benchmarks, and the CSV and
//! JSON report formats.

mod experiment;
mod fit;
mod verify;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bilinear::{BilinearError, DEFAULT_BASE_THRESHOLD};
use crate::matcore::MatrixError;
use crate::stpalg::StpError;

pub use experiment::{
    bench, predicted_mu, random_matrix, reports_to_csv, reports_to_json, run_error_experiment, BenchRecord, ErrorReport,
    TrialRecord, REPORT_SCHEMA,
};
pub use fit::{fit_exponent, ExponentFit};
pub use verify::{run_verify, CheckOutcome};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarnessError {
    #[error("unknown algorithm `{0}` (expected naive, strassen or stp:M,N)")]
    UnknownAlgorithm(String),
    #[error("invalid size list `{0}`")]
    InvalidSizes(String),
    #[error("order {n} is not supported by {algorithm}: {reason}")]
    IncompatibleSize { algorithm: String, n: usize, reason: String },
    #[error("exponent fit needs at least 3 distinct sizes spanning 2 octaves, got {sizes} sizes spanning a factor {span}")]
    DegenerateSpan { sizes: usize, span: f64 },
    #[error("exponent fit needs positive finite values, got ({n}, {value})")]
    NonPositive { n: f64, value: f64 },
    #[error("{algorithm} at n = {n}, trial {trial}: measured {measured:e} exceeds predicted {predicted:e}")]
    BoundViolated { algorithm: String, n: usize, trial: usize, measured: f64, predicted: f64 },
    #[error(transparent)]
    Stp(#[from] StpError),
    #[error(transparent)]
    Bilinear(#[from] BilinearError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Algorithm under test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Algorithm {
    Naive,
    /// Stationary Strassen recursion down to blocks of at most `base_threshold`.
    Strassen { base_threshold: usize },
    /// One level of the wreath-product algorithm with naive block products.
    Stp { m: u32, n_wreath: usize },
}

impl Algorithm {
    pub fn strassen() -> Self {
        Self::Strassen { base_threshold: DEFAULT_BASE_THRESHOLD }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Naive => f.write_str("naive"),
            Self::Strassen { .. } => f.write_str("strassen"),
            Self::Stp { m, n_wreath } => write!(f, "stp:{m},{n_wreath}"),
        }
    }
}

impl FromStr for Algorithm {
    type Err = HarnessError;

    /// Parses `naive`, `strassen` or `stp:M,N`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || HarnessError::UnknownAlgorithm(s.to_string());
        match s.trim() {
            "naive" => Ok(Self::Naive),
            "strassen" => Ok(Self::strassen()),
            other => {
                let rest = other.strip_prefix("stp:").ok_or_else(bad)?;
                let (m, n) = rest.split_once(',').ok_or_else(bad)?;
                Ok(Self::Stp { m: m.trim().parse().map_err(|_| bad())?, n_wreath: n.trim().parse().map_err(|_| bad())? })
            }
        }
    }
}

/// Parses a size list: `a:b` is every power of two from `a` to `b`
/// (both powers of two), otherwise a comma-separated list of orders.
pub fn parse_sizes(s: &str) -> Result<Vec<usize>, HarnessError> {
    let bad = || HarnessError::InvalidSizes(s.to_string());
    let sizes: Vec<usize> = if let Some((a, b)) = s.split_once(':') {
        let (a, b): (usize, usize) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        if !a.is_power_of_two() || !b.is_power_of_two() || a > b {
            return Err(bad());
        }
        std::iter::successors(Some(a), |&n| n.checked_mul(2)).take_while(|&n| n <= b).collect()
    } else {
        s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
    };
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(bad());
    }
    Ok(sizes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_algorithms() {
        assert_eq!("naive".parse::<Algorithm>().unwrap(), Algorithm::Naive);
        assert_eq!("strassen".parse::<Algorithm>().unwrap(), Algorithm::strassen());
        assert_eq!("stp:4,2".parse::<Algorithm>().unwrap(), Algorithm::Stp { m: 4, n_wreath: 2 });
        for bad in ["", "stp", "stp:4", "stp:a,2", "winograd"] {
            assert!(bad.parse::<Algorithm>().is_err(), "{bad}");
        }
        assert_eq!(Algorithm::Stp { m: 3, n_wreath: 2 }.to_string(), "stp:3,2");
    }

    #[test]
    fn parse_size_lists() {
        assert_eq!(parse_sizes("2:16").unwrap(), vec![2, 4, 8, 16]);
        assert_eq!(parse_sizes("8, 18").unwrap(), vec![8, 18]);
        for bad in ["3:16", "16:2", "", "0", "a,b"] {
            assert!(parse_sizes(bad).is_err(), "{bad}");
        }
    }
}
