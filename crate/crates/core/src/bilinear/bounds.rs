//! First-order forward-error multipliers `μ`: a product computed in working
//! precision satisfies `‖ΔC‖ ≤ μ·ε·‖A‖·‖B‖`.

use super::{BilinearScheme, Schedule};
use crate::matcore::{ceil_log2, NormKind};

/// Number of recursion levels `log_k(n/base)` for an order `base·k^p`.
pub fn stationary_levels(n: usize, k: usize, base_threshold: usize) -> u32 {
    let mut levels = 0;
    let mut m = n;
    while m > base_threshold && k > 1 {
        m /= k;
        levels += 1;
    }
    levels
}

/// Multiplier for the naive product with pairwise summation.
///
/// Each product `a_il·b_lj` is rounded with relative error below `2√2·ε < 3ε`,
/// and the pairwise tree adds at most `⌈log₂ n⌉·ε` to every term, so entrywise
/// `|ΔC| ≤ (⌈log₂ n⌉ + 3)·ε·|A||B|`. In the max-entry norm that gives a factor
/// `n`; in the Frobenius norm `‖|A||B|‖_F ≤ ‖A‖_F‖B‖_F`.
pub fn naive_mu(n: usize, norm: NormKind) -> f64 {
    let base = f64::from(ceil_log2(n.max(1))) + 3.0;
    match norm {
        NormKind::MaxEntry => n as f64 * base,
        NormKind::Frobenius => base,
    }
}

/// `μ(n) = (1 + max_{r,s}(α_s+β_s+γ_r+3)·log_k n)·(ê‖U‖‖V‖‖W‖)^{log_k n}`
/// for the stationary recursion in the max-entry norm.
pub fn error_bound_stationary(scheme: &BilinearScheme, n: usize) -> f64 {
    let st = scheme.stats();
    let levels = (n as f64).ln() / (scheme.k() as f64).ln();
    (1.0 + f64::from(st.max_exponent_sum()) * levels) * st.growth_factor().powf(levels)
}

/// `μ = (1 + Σ_j max_{r,s}(α_s+β_s+γ_r+3)_j)·∏_j ê_j‖U_j‖‖V_j‖‖W_j‖` for a
/// non-stationary schedule; the empty schedule gives `1`.
pub fn error_bound_nonstationary(schedule: &Schedule) -> f64 {
    let sum: u32 = schedule.levels.iter().map(|s| s.stats().max_exponent_sum()).sum();
    let growth: f64 = schedule.levels.iter().map(|s| s.stats().growth_factor()).product();
    (1.0 + f64::from(sum)) * growth
}

/// Multiplier for an algorithm of the form *pre-process, multiply `t` pairs of
/// blocks, post-process*, given the multipliers of its stages:
///
/// `μ = μ_inner·t·μ_post·μ_pre² + 2·f_pre·t·μ_post + f_post·μ_pre²`
///
/// where `μ_pre`, `μ_post` are the operator-norm growth factors of the two
/// linear maps and `f_pre`, `f_post` their rounding-error multipliers.
pub fn error_bound_prepost(mu_inner: f64, t: f64, pre: f64, post: f64, f_pre: f64, f_post: f64) -> f64 {
    mu_inner * t * post * pre * pre + 2.0 * f_pre * t * post + f_post * pre * pre
}
