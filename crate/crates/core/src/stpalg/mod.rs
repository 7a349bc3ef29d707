//! The seven-step group-theoretic multiplication over `H ≀ Sym_N`:
//! embed, transform, assemble, multiply blocks, disassemble, inverse
//! transform, output. Also evaluates its per-level error bounds and the
//! exponents implied by a family's growth parameters.
//!
//! Conventions. `H ≀ Sym_N` multiplies as `(h,π)(h',π') = (h + π·h', ππ')`.
//! Arrays are indexed `[π][h]` for the element `(h, π)`, and `u⁻¹v` for
//! `u = (h_u, σ)`, `v = (h_v, τ)` is `(σ⁻¹·(h_v − h_u), σ⁻¹τ)`. Characters act by
//! `(κ·χ)_j = χ_{κ⁻¹(j)}`. With these, the transformed product satisfies
//! `ĉ[ρ][χ] = Σ_σ â[σ][χ]·b̂[σ⁻¹ρ][σ⁻¹·χ]`, which is the block product
//! `C^{χ₀} = A^{χ₀}B^{χ₀}` with `A^{χ₀}_{κλ} = â[κλ⁻¹][κ·χ₀]`,
//! `B^{χ₀}_{λν} = b̂[λν⁻¹][λ·χ₀]` and `ĉ[ρ][κ·χ₀] = C^{χ₀}_{κ, ρ⁻¹κ}`.

mod bounds;
mod config;
mod pipeline;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bilinear::{error_bound_stationary, naive_mu, padded_order, strassen_scheme, BilinearError};
use crate::grouplib::GroupError;
use crate::matcore::{MatrixError, NormKind};

pub use bounds::{exponent_report, flop_model, predicted_bound_crude, predicted_bound_final, ExponentReport};
pub use config::{
    binomial, budget_from_env, build_config, build_config_with_budget, config_to_json, estimate_bytes, load_config_json,
    ConfigFile, IndexSet, StpConfig, BUDGET_ENV, DEFAULT_BUDGET_BYTES,
};
pub use pipeline::{
    assemble, disassemble, embed, fourier, multiply_batch, output, stp_multiply, stp_multiply_with_report, ChiMatrixBatch,
    FlopReport, WreathArray, STEPS,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StpError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("estimated {needed} bytes exceeds the memory budget of {budget} bytes (set WREATHMUL_BUDGET_BYTES to override)")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("the family is degenerate (β = 0): every subset is a singleton")]
    Degenerate,
    #[error("entry ({row}, {col}) embeds into an occupied slot; the triples are broken")]
    Collision { row: usize, col: usize },
    #[error("inputs of shape {got:?} do not fit a configuration serving order {served}")]
    OrderMismatch { got: (usize, usize), served: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Bilinear(#[from] BilinearError),
}

/// How the `N! × N!` block products of step 4 are computed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InnerMultiplier {
    Naive,
    Strassen { base_threshold: usize },
    /// Another level of this algorithm, for structural testing.
    Stp { m: u32, n_wreath: usize, inner: Box<InnerMultiplier> },
}

impl InnerMultiplier {
    /// Frobenius-norm multiplier `μ` of the block product of the given order.
    ///
    /// For Strassen the max-entry bound converts through
    /// `‖ΔC‖_F ≤ n·‖ΔC‖_max` and `‖A‖_max ≤ ‖A‖_F`.
    pub fn mu_frobenius(&self, order: usize) -> Result<f64, StpError> {
        Ok(match self {
            Self::Naive => naive_mu(order, NormKind::Frobenius),
            Self::Strassen { base_threshold } => {
                let padded = padded_order(order, 2, *base_threshold);
                let mu_max = error_bound_stationary(&strassen_scheme(), padded).max(naive_mu(padded, NormKind::MaxEntry));
                order as f64 * mu_max
            }
            Self::Stp { m, n_wreath, inner } => {
                let cfg = build_config(*m, *n_wreath)?;
                predicted_bound_final(&cfg, inner.mu_frobenius(cfg.block_order())?, 1.0)
            }
        })
    }

    pub fn label(&self) -> String {
        match self {
            Self::Naive => "naive".into(),
            Self::Strassen { .. } => "strassen".into(),
            Self::Stp { m, n_wreath, inner } => format!("stp:{m},{n_wreath}/{}", inner.label()),
        }
    }
}
