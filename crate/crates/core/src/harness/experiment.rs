use std::fmt::Write as _;
use std::time::Instant;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Algorithm, HarnessError};
use crate::bilinear::{error_bound_stationary, multiply_padded, naive_mu, padded_order, strassen_scheme};
use crate::matcore::{convert_precision, flops, naive_multiply, norm, norm_of_difference, Counted, Matrix, NormKind, Real};
use crate::stpalg::{build_config, predicted_bound_final, stp_multiply, InnerMultiplier, StpConfig};

/// Version of the JSON report layout.
pub const REPORT_SCHEMA: u32 = 1;

/// One trial: normalized error `‖ΔC‖/(‖A‖‖B‖)` against the predicted `μ(n)·ε`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub n: usize,
    pub trial: usize,
    pub measured: f64,
    pub predicted: f64,
    pub ratio: f64,
}

/// Aggregate of all trials at one order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorReport {
    pub algorithm: String,
    pub n: usize,
    pub trials: usize,
    pub norm: NormKind,
    pub measured_max: f64,
    pub measured_mean: f64,
    pub predicted: f64,
    pub eps: f64,
    pub seed: u64,
    pub elapsed_ms: f64,
    pub records: Vec<TrialRecord>,
}

impl ErrorReport {
    /// The first trial whose error exceeds the prediction (a NaN error counts
    /// as exceeding it).
    pub fn violation(&self) -> Option<HarnessError> {
        use std::cmp::Ordering::{Equal, Less};
        self.records.iter().find(|r| !matches!(r.measured.partial_cmp(&r.predicted), Some(Less | Equal))).map(|r| HarnessError::BoundViolated {
            algorithm: self.algorithm.clone(),
            n: r.n,
            trial: r.trial,
            measured: r.measured,
            predicted: r.predicted,
        })
    }
}

/// `n × n` matrix with real entries drawn uniformly from `[−1, 1]` and rounded
/// to `T`.
pub fn random_matrix<T: Real>(n: usize, rng: &mut impl Rng) -> Matrix<T> {
    Matrix::from_fn(n, n, |_, _| Complex::new(T::from_f64(rng.random_range(-1.0..=1.0)), T::zero()))
}

/// An algorithm resolved for a run: the configuration it needs and its
/// error model.
enum Prepared {
    Naive,
    Strassen(usize),
    Stp(Box<StpConfig>),
}

impl Prepared {
    fn new(alg: Algorithm) -> Result<Self, HarnessError> {
        Ok(match alg {
            Algorithm::Naive => Self::Naive,
            Algorithm::Strassen { base_threshold } => Self::Strassen(base_threshold),
            Algorithm::Stp { m, n_wreath } => Self::Stp(Box::new(build_config(m, n_wreath)?)),
        })
    }

    fn norm(&self) -> NormKind {
        match self {
            Self::Stp(_) => NormKind::Frobenius,
            _ => NormKind::MaxEntry,
        }
    }

    fn check(&self, alg: Algorithm, n: usize) -> Result<(), HarnessError> {
        let reason = match self {
            Self::Strassen(0) => Some("the base threshold must be positive".to_string()),
            Self::Stp(cfg) if n > cfg.n() => Some(format!("the configuration serves orders up to {}", cfg.n())),
            _ => None,
        };
        match reason {
            Some(reason) => Err(HarnessError::IncompatibleSize { algorithm: alg.to_string(), n, reason }),
            None => Ok(()),
        }
    }

    /// Coefficient `μ(n)` of `ε` in the normwise bound of [`Self::norm`].
    /// Zero padding leaves both norms unchanged, so padded runs use the
    /// bound of the padded order.
    fn mu(&self, n: usize) -> Result<f64, HarnessError> {
        Ok(match self {
            Self::Naive => naive_mu(n, NormKind::MaxEntry),
            Self::Strassen(thr) => {
                let order = padded_order(n, 2, *thr);
                error_bound_stationary(&strassen_scheme(), order).max(naive_mu(order, NormKind::MaxEntry))
            }
            Self::Stp(cfg) => {
                let inner = InnerMultiplier::Naive.mu_frobenius(cfg.block_order())?;
                predicted_bound_final(cfg, inner, 1.0)
            }
        })
    }

    fn multiply<T: Real>(&self, a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>, HarnessError> {
        Ok(match self {
            Self::Naive => naive_multiply(a, b)?,
            Self::Strassen(thr) => multiply_padded(a, b, &strassen_scheme(), *thr)?,
            Self::Stp(cfg) => stp_multiply(a, b, cfg, &InnerMultiplier::Naive)?,
        })
    }
}

/// `μ(n)` of the algorithm and the norm it is stated in: max-entry for the
/// naive and Strassen products, Frobenius for the wreath-product algorithm.
pub fn predicted_mu(alg: Algorithm, n: usize) -> Result<(f64, NormKind), HarnessError> {
    let prepared = Prepared::new(alg)?;
    prepared.check(alg, n)?;
    Ok((prepared.mu(n)?, prepared.norm()))
}

fn rng_for(seed: u64, n: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(n as u64);
    rng
}

/// Runs `trials` products of random `n × n` inputs at working precision for
/// every order in `sizes`, measuring against a reference-precision naive
/// product. Inputs depend only on `(seed, n, trial)`.
///
/// Bound violations are recorded, not raised: see [`ErrorReport::violation`].
pub fn run_error_experiment(
    alg: Algorithm,
    sizes: &[usize],
    trials: usize,
    seed: u64,
) -> Result<Vec<ErrorReport>, HarnessError> {
    let prepared = Prepared::new(alg)?;
    for &n in sizes {
        prepared.check(alg, n)?;
    }
    let kind = prepared.norm();
    let mut reports = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let start = Instant::now();
        let predicted = prepared.mu(n)? * <f32 as Real>::EPSILON;
        let mut rng = rng_for(seed, n);
        let mut records = Vec::with_capacity(trials);
        for trial in 0..trials {
            let a = random_matrix::<f32>(n, &mut rng);
            let b = random_matrix::<f32>(n, &mut rng);
            let computed = prepared.multiply(&a, &b)?;
            let reference = naive_multiply(&convert_precision::<f32, f64>(&a), &convert_precision::<f32, f64>(&b))?;
            let scale = norm(&a, kind) * norm(&b, kind);
            let measured = norm_of_difference(&computed, &reference, kind)? / scale;
            records.push(TrialRecord { n, trial, measured, predicted, ratio: measured / predicted });
        }
        let measured_max = records.iter().map(|r| r.measured).fold(0.0, f64::max);
        let measured_mean = if trials == 0 { 0.0 } else { records.iter().map(|r| r.measured).sum::<f64>() / trials as f64 };
        reports.push(ErrorReport {
            algorithm: alg.to_string(),
            n,
            trials,
            norm: kind,
            measured_max,
            measured_mean,
            predicted,
            eps: <f32 as Real>::EPSILON,
            seed,
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
            records,
        });
    }
    Ok(reports)
}

/// `n,trial,measured,predicted,ratio` rows ordered by `(n, trial)`. Contains
/// no timings, so it is bitwise reproducible for a given seed.
pub fn reports_to_csv(reports: &[ErrorReport]) -> String {
    let mut rows: Vec<&TrialRecord> = reports.iter().flat_map(|r| &r.records).collect();
    rows.sort_by_key(|r| (r.n, r.trial));
    let mut out = String::from("n,trial,measured,predicted,ratio\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{:e},{:e},{:e}", r.n, r.trial, r.measured, r.predicted, r.ratio);
    }
    out
}

/// `{"schema": 1, "reports": [...]}`.
pub fn reports_to_json(reports: &[ErrorReport]) -> String {
    serde_json::to_string_pretty(&serde_json::json!({ "schema": REPORT_SCHEMA, "reports": reports }))
        .expect("reports serialize")
}

/// Exact operation count (over [`Counted`]) and working-precision wall time
/// of one product at order `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    pub n: usize,
    pub flops: u64,
    pub elapsed_ms: f64,
}

pub fn bench(alg: Algorithm, sizes: &[usize], seed: u64) -> Result<Vec<BenchRecord>, HarnessError> {
    let prepared = Prepared::new(alg)?;
    for &n in sizes {
        prepared.check(alg, n)?;
    }
    let mut out = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let mut rng = rng_for(seed, n);
        let a = random_matrix::<f32>(n, &mut rng);
        let b = random_matrix::<f32>(n, &mut rng);
        let start = Instant::now();
        prepared.multiply(&a, &b)?;
        let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
        let widen = |m: &Matrix<f32>| Matrix::<Counted>::from_fn(n, n, |i, j| {
            let z = m.get(i, j);
            Complex::new(Counted(z.re as f64), Counted(z.im as f64))
        });
        let (ac, bc) = (widen(&a), widen(&b));
        flops::reset();
        prepared.multiply(&ac, &bc)?;
        out.push(BenchRecord { n, flops: flops::read(), elapsed_ms });
    }
    Ok(out)
}
