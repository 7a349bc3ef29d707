use serde::Serialize;

use super::HarnessError;

/// Least-squares line through `(log n, log value)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentFit {
    pub pairs: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Fits `value ≈ e^intercept · n^slope`. Needs at least three distinct orders
/// with the largest at least four times the smallest.
pub fn fit_exponent(pairs: &[(f64, f64)]) -> Result<ExponentFit, HarnessError> {
    for &(n, value) in pairs {
        if !(n > 0.0 && value > 0.0 && n.is_finite() && value.is_finite()) {
            return Err(HarnessError::NonPositive { n, value });
        }
    }
    let mut sizes: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    sizes.sort_by(f64::total_cmp);
    sizes.dedup();
    let span = match (sizes.first(), sizes.last()) {
        (Some(lo), Some(hi)) => hi / lo,
        _ => 0.0,
    };
    if sizes.len() < 3 || span < 4.0 {
        return Err(HarnessError::DegenerateSpan { sizes: sizes.len(), span });
    }
    let pts: Vec<(f64, f64)> = pairs.iter().map(|&(n, v)| (n.ln(), v.ln())).collect();
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(ExponentFit { pairs: pairs.to_vec(), slope, intercept, r_squared })
}
