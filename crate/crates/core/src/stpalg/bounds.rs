use serde::Serialize;

use super::{StpConfig, StpError};
use crate::grouplib::{family_growth, factorial, GrowthParameters};
use crate::wreathfft::FftStats;

/// Inputs of the per-level bounds: `|H|`, `N`, `N!` and `f(|H|^N)`.
fn level_terms(cfg: &StpConfig) -> (f64, f64, f64) {
    let nf = cfg.block_order() as f64;
    let h_half = (cfg.h_order() as f64).powf(cfg.n_wreath() as f64 / 2.0);
    let f = FftStats::for_modulus(cfg.group().m as usize).f_bound(cfg.hn());
    (nf, h_half, f)
}

/// `[f(|H|^N) + 2·N!·|H|^{N/2}·f(|H|^N) + N!·|H|^{N/2}·μ(N!)]·ε`, the Frobenius
/// bound `‖ΔC‖_F / (‖A‖_F‖B‖_F)` of one level given the inner multiplier's `μ`.
pub fn predicted_bound_final(cfg: &StpConfig, mu_inner: f64, eps: f64) -> f64 {
    let (nf, h_half, f) = level_terms(cfg);
    bound_final_terms(nf, h_half, f, mu_inner) * eps
}

pub(crate) fn bound_final_terms(nf: f64, h_half: f64, f: f64, mu: f64) -> f64 {
    f + 2.0 * nf * h_half * f + nf * h_half * mu
}

/// `[|H|^{3N/2}·μ(N!) + 2·|H|^N·(N!)^{−1/2}·f + N!·|H|^{N/2}·f]·ε`, the same
/// bound obtained by treating steps 1–3 and 5–7 as generic pre- and
/// post-processing maps. It dominates [`predicted_bound_final`] once `|H| ≥ N!`.
pub fn predicted_bound_crude(cfg: &StpConfig, mu_inner: f64, eps: f64) -> f64 {
    let (nf, h_half, f) = level_terms(cfg);
    bound_crude_terms(nf, h_half, f, mu_inner) * eps
}

pub(crate) fn bound_crude_terms(nf: f64, h_half: f64, f: f64, mu: f64) -> f64 {
    h_half.powi(3) * mu + 2.0 * h_half * h_half / nf.sqrt() * f + nf * h_half * f
}

/// Exponents implied by growth parameters `(α, β)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExponentReport {
    pub alpha: f64,
    pub beta: f64,
    /// `(α − 1)/β`.
    pub runtime_exp: f64,
    /// `(α + 2)/(2β)`.
    pub frobenius_err_exp: f64,
    /// Frobenius exponent `+ 1`.
    pub maxnorm_err_exp: f64,
    /// `3α/(2β)`, the sum of the runtime and Frobenius exponents.
    pub combined_exp: f64,
}

impl ExponentReport {
    pub fn from_growth(alpha: f64, beta: f64) -> Result<Self, StpError> {
        if beta.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) || !alpha.is_finite() {
            return Err(StpError::Degenerate);
        }
        let runtime_exp = (alpha - 1.0) / beta;
        let frobenius_err_exp = (alpha + 2.0) / (2.0 * beta);
        Ok(Self {
            alpha,
            beta,
            runtime_exp,
            frobenius_err_exp,
            maxnorm_err_exp: frobenius_err_exp + 1.0,
            combined_exp: runtime_exp + frobenius_err_exp,
        })
    }
}

/// Exponents of the bundled family over `(Z/m)^3`.
pub fn exponent_report(m: u32) -> Result<ExponentReport, StpError> {
    match family_growth(m) {
        GrowthParameters::Regular { alpha, beta } => ExponentReport::from_growth(alpha, beta),
        GrowthParameters::Degenerate { .. } => Err(StpError::Degenerate),
    }
}

/// Operation-count model of one level: `|Ξ|·(N!)³` for the block products plus
/// `N!·|H|^N·log₂|H|^N` for the transforms.
pub fn flop_model(cfg: &StpConfig) -> f64 {
    let nf = factorial(cfg.n_wreath()).unwrap_or(usize::MAX) as f64;
    let hn = cfg.hn() as f64;
    cfg.xi_count() as f64 * nf.powi(3) + nf * hn * hn.log2()
}
