use std::collections::BTreeMap;

use num_complex::Complex;
use serde::Serialize;

use super::config::{build_config_with_budget, IndexSet};
use super::{InnerMultiplier, StpConfig, StpError};
use crate::bilinear::{multiply_padded, strassen_scheme};
use crate::matcore::{flops, naive_multiply, pad_to, Matrix, Real};
use crate::wreathfft::DftPlan;

/// `N!` arrays over `H^N`, one per permutation coordinate: an element of
/// `C[H ≀ Sym_N]` (or, after the transform, of `C[Ĥ^N ⋊ Sym_N]`).
#[derive(Clone, Debug, PartialEq)]
pub struct WreathArray<T: Real> {
    m: usize,
    dims: usize,
    perms: usize,
    len: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> WreathArray<T> {
    pub fn zeros(cfg: &StpConfig) -> Self {
        let len = cfg.hn();
        let perms = cfg.block_order();
        Self { m: cfg.group().m as usize, dims: cfg.dims(), perms, len, data: vec![zero(); perms * len] }
    }

    /// Number of permutation coordinates.
    pub fn perms(&self) -> usize {
        self.perms
    }

    /// `|H|^N`, the length of each coordinate array.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// The array for the permutation of rank `p`.
    pub fn slice(&self, p: usize) -> &[Complex<T>] {
        &self.data[p * self.len..(p + 1) * self.len]
    }

    pub fn slice_mut(&mut self, p: usize) -> &mut [Complex<T>] {
        &mut self.data[p * self.len..(p + 1) * self.len]
    }

    #[inline]
    pub fn get(&self, p: usize, h: usize) -> Complex<T> {
        self.data[p * self.len + h]
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    /// `Σ |entries|²`, accumulated at binary64.
    pub fn squared_mass(&self) -> f64 {
        squared_mass(&self.data)
    }
}

/// One `N! × N!` matrix per orbit representative, stored contiguously.
#[derive(Clone, Debug, PartialEq)]
pub struct ChiMatrixBatch<T: Real> {
    order: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ChiMatrixBatch<T> {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn count(&self) -> usize {
        self.data.len() / (self.order * self.order)
    }

    pub fn entries(&self, r: usize) -> &[Complex<T>] {
        let s = self.order * self.order;
        &self.data[r * s..(r + 1) * s]
    }

    pub fn matrix(&self, r: usize) -> Matrix<T> {
        Matrix::new(self.order, self.order, self.entries(r).to_vec()).expect("square block")
    }

    /// `Σ_χ ‖M^χ‖_F²`, accumulated at binary64.
    pub fn squared_mass(&self) -> f64 {
        squared_mass(&self.data)
    }
}

fn zero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

fn squared_mass<T: Real>(data: &[Complex<T>]) -> f64 {
    data.iter()
        .map(|z| {
            let (re, im) = (z.re.to_f64(), z.im.to_f64());
            re * re + im * im
        })
        .sum()
}

fn embed_one<T: Real>(a: &Matrix<T>, rows: &IndexSet, cols: &IndexSet, cfg: &StpConfig) -> Result<WreathArray<T>, StpError> {
    let mut out = WreathArray::zeros(cfg);
    let mut filled = vec![false; out.data.len()];
    for i in 0..a.rows() {
        let (hu, su) = rows.row(i);
        for (j, &v) in a.row(i).iter().enumerate() {
            let (hv, sv) = cols.row(j);
            let (p, h) = cfg.slot(hu, su, hv, sv);
            let at = p * out.len + h;
            if std::mem::replace(&mut filled[at], true) {
                return Err(StpError::Collision { row: i, col: j });
            }
            out.data[at] = v;
        }
    }
    Ok(out)
}

/// Step 1: `a = Σ A_xy e_{x⁻¹y}` and `b = Σ B_yz e_{y⁻¹z}`. Pure placement; a
/// slot hit twice means the triples are broken and is reported as an error.
pub fn embed<T: Real>(a: &Matrix<T>, b: &Matrix<T>, cfg: &StpConfig) -> Result<(WreathArray<T>, WreathArray<T>), StpError> {
    for m in [a, b] {
        if m.rows() != cfg.n() || m.cols() != cfg.n() {
            return Err(StpError::OrderMismatch { got: (m.rows(), m.cols()), served: cfg.n() });
        }
    }
    Ok((embed_one(a, cfg.x_set(), cfg.y_set(), cfg)?, embed_one(b, cfg.y_set(), cfg.z_set(), cfg)?))
}

/// Step 2 (and 6 with `inverse`): transform every permutation coordinate.
pub fn fourier<T: Real>(a: &mut WreathArray<T>, inverse: bool) {
    let mut plan = DftPlan::new(a.m);
    for p in 0..a.perms {
        let dims = a.dims;
        let slice = a.slice_mut(p);
        if inverse {
            plan.inverse_in_place(slice, dims);
        } else {
            plan.forward_in_place(slice, dims);
        }
    }
}

/// Step 3: `M^{χ₀}_{κλ} = x̂[κλ⁻¹][κ·χ₀]` for every representative `χ₀`.
/// The same index pattern yields both `A^{χ₀}` (from `â`) and `B^{χ₀}` (from `b̂`).
pub fn assemble<T: Real>(hat: &WreathArray<T>, cfg: &StpConfig) -> ChiMatrixBatch<T> {
    let nf = cfg.block_order();
    let mut data = Vec::with_capacity(cfg.xi_count() * nf * nf);
    let mut chi = vec![0usize; nf];
    for r in 0..cfg.xi_count() {
        for (k, c) in chi.iter_mut().enumerate() {
            *c = cfg.act_on_rep(k, r);
        }
        for (k, &c) in chi.iter().enumerate() {
            for l in 0..nf {
                data.push(hat.get(cfg.compose(k, cfg.inverse(l)), c));
            }
        }
    }
    ChiMatrixBatch { order: nf, data }
}

/// Step 4: `C^χ = A^χ B^χ` with the chosen multiplier.
pub fn multiply_batch<T: Real>(a: &ChiMatrixBatch<T>, b: &ChiMatrixBatch<T>, inner: &InnerMultiplier) -> Result<ChiMatrixBatch<T>, StpError> {
    if a.order != b.order || a.data.len() != b.data.len() {
        return Err(StpError::InvalidParameters("mismatched batches".into()));
    }
    let mut mult = BlockMultiplier::new(inner)?;
    let mut data = Vec::with_capacity(a.data.len());
    for r in 0..a.count() {
        let c = mult.multiply(&a.matrix(r), &b.matrix(r))?;
        data.extend_from_slice(c.data());
    }
    Ok(ChiMatrixBatch { order: a.order, data })
}

/// The inner multiplier with any nested configuration built once.
enum BlockMultiplier {
    Naive,
    Strassen(usize),
    Stp(Box<StpConfig>, Box<BlockMultiplier>),
}

impl BlockMultiplier {
    fn new(inner: &InnerMultiplier) -> Result<Self, StpError> {
        Ok(match inner {
            InnerMultiplier::Naive => Self::Naive,
            InnerMultiplier::Strassen { base_threshold } => Self::Strassen(*base_threshold),
            InnerMultiplier::Stp { m, n_wreath, inner } => {
                let cfg = build_config_with_budget(*m, *n_wreath, super::config::budget_from_env())?;
                Self::Stp(Box::new(cfg), Box::new(Self::new(inner)?))
            }
        })
    }

    fn multiply<T: Real>(&mut self, a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>, StpError> {
        match self {
            Self::Naive => Ok(naive_multiply(a, b)?),
            Self::Strassen(thr) => Ok(multiply_padded(a, b, &strassen_scheme(), *thr)?),
            Self::Stp(cfg, inner) => Ok(run(a, b, cfg, inner)?.0),
        }
    }
}

/// Step 5: `ĉ[ρ][χ] = C^{χ₀}_{κ, ρ⁻¹κ}` where `χ = κ·χ₀` with the least `κ`.
pub fn disassemble<T: Real>(c: &ChiMatrixBatch<T>, cfg: &StpConfig) -> WreathArray<T> {
    let nf = cfg.block_order();
    let mut out = WreathArray::zeros(cfg);
    for chi in 0..cfg.hn() {
        let (r, k) = cfg.orbit_of(chi);
        let block = c.entries(r);
        for rho in 0..nf {
            out.data[rho * out.len + chi] = block[k * nf + cfg.compose(cfg.inverse(rho), k)];
        }
    }
    out
}

/// Step 7: `C_xz = c[x⁻¹z]`.
pub fn output<T: Real>(c: &WreathArray<T>, cfg: &StpConfig) -> Matrix<T> {
    let n = cfg.n();
    Matrix::from_fn(n, n, |i, j| {
        let (hx, sx) = cfg.x_set().row(i);
        let (hz, sz) = cfg.z_set().row(j);
        let (p, h) = cfg.slot(hx, sx, hz, sz);
        c.get(p, h)
    })
}

/// Scalar operations spent in each step, as counted by the instrumented scalar.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct FlopReport(pub BTreeMap<String, u64>);

impl FlopReport {
    pub fn get(&self, step: &str) -> u64 {
        self.0.get(step).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

pub const STEPS: [&str; 7] = ["embed", "fourier", "assemble", "multiply", "disassemble", "inverse_fourier", "output"];

fn run<T: Real>(a: &Matrix<T>, b: &Matrix<T>, cfg: &StpConfig, inner: &mut BlockMultiplier) -> Result<(Matrix<T>, FlopReport), StpError> {
    let n = cfg.n();
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() || a.rows() > n {
        return Err(StpError::OrderMismatch { got: (a.rows(), b.cols()), served: n });
    }
    let order = a.rows();
    let mut report = FlopReport::default();
    let mut mark = flops::read();
    let mut record = |step: &str| {
        let now = flops::read();
        report.0.insert(step.to_string(), now - mark);
        mark = now;
    };

    let (a, b) = (pad_to(a, n, n)?, pad_to(b, n, n)?);
    let (mut ea, mut eb) = embed(&a, &b, cfg)?;
    record(STEPS[0]);
    fourier(&mut ea, false);
    fourier(&mut eb, false);
    record(STEPS[1]);
    let ba = assemble(&ea, cfg);
    drop(ea);
    let bb = assemble(&eb, cfg);
    drop(eb);
    record(STEPS[2]);
    let mut data = Vec::with_capacity(ba.data.len());
    for r in 0..ba.count() {
        data.extend_from_slice(inner.multiply(&ba.matrix(r), &bb.matrix(r))?.data());
    }
    let bc = ChiMatrixBatch { order: ba.order, data };
    drop((ba, bb));
    record(STEPS[3]);
    let mut c = disassemble(&bc, cfg);
    drop(bc);
    record(STEPS[4]);
    fourier(&mut c, true);
    record(STEPS[5]);
    let out = output(&c, cfg).truncate(order, order);
    record(STEPS[6]);
    Ok((out, report))
}

/// The full seven-step product. Inputs smaller than `cfg.n()` are zero-padded
/// and the result truncated back.
pub fn stp_multiply<T: Real>(a: &Matrix<T>, b: &Matrix<T>, cfg: &StpConfig, inner: &InnerMultiplier) -> Result<Matrix<T>, StpError> {
    Ok(stp_multiply_with_report(a, b, cfg, inner)?.0)
}

/// [`stp_multiply`] plus per-step operation counts (non-zero only for the
/// instrumented scalar type).
pub fn stp_multiply_with_report<T: Real>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    cfg: &StpConfig,
    inner: &InnerMultiplier,
) -> Result<(Matrix<T>, FlopReport), StpError> {
    let mut mult = BlockMultiplier::new(inner)?;
    run(a, b, cfg, &mut mult)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stpalg::build_config;

    fn int_matrix(n: usize, seed: usize) -> Matrix<f64> {
        Matrix::from_fn(n, n, |i, j| Complex::new(((i * 7 + j * 13 + seed * 5) % 9) as f64 - 4.0, 0.0))
    }

    fn max_diff(a: &Matrix<f64>, b: &Matrix<f64>) -> f64 {
        a.data().iter().zip(b.data()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn matches_naive_product() {
        for (m, n_wreath) in [(3, 2), (4, 2), (2, 3)] {
            let cfg = build_config(m, n_wreath).unwrap();
            let (a, b) = (int_matrix(cfg.n(), 1), int_matrix(cfg.n(), 2));
            let got = stp_multiply(&a, &b, &cfg, &InnerMultiplier::Naive).unwrap();
            let want = naive_multiply(&a, &b).unwrap();
            assert!(max_diff(&got, &want) < 1e-9, "(m,N)=({m},{n_wreath})");
        }
    }

    #[test]
    fn pads_smaller_inputs() {
        let cfg = build_config(3, 2).unwrap();
        let (a, b) = (int_matrix(5, 3), int_matrix(5, 4));
        let got = stp_multiply(&a, &b, &cfg, &InnerMultiplier::Naive).unwrap();
        assert!(max_diff(&got, &naive_multiply(&a, &b).unwrap()) < 1e-9);
        assert!(matches!(
            stp_multiply(&int_matrix(9, 0), &int_matrix(9, 0), &cfg, &InnerMultiplier::Naive),
            Err(StpError::OrderMismatch { .. })
        ));
    }

    #[test]
    fn placement_steps_do_no_arithmetic() {
        use crate::matcore::Counted;
        let cfg = build_config(3, 2).unwrap();
        let a = Matrix::<Counted>::from_fn(8, 8, |i, j| Complex::new(Counted((i + j) as f64), Counted(0.0)));
        let (c, report) = stp_multiply_with_report(&a, &a, &cfg, &InnerMultiplier::Naive).unwrap();
        for step in ["embed", "assemble", "disassemble", "output"] {
            assert_eq!(report.get(step), 0, "{step}");
        }
        assert!(report.get("fourier") > 0 && report.get("multiply") > 0 && report.get("inverse_fourier") > 0);
        assert_eq!(c.rows(), 8);
    }

    #[test]
    fn frobenius_mass() {
        let cfg = build_config(4, 2).unwrap();
        let a = int_matrix(cfg.n(), 5);
        let (mut ea, _) = embed(&a, &a, &cfg).unwrap();
        let fro2: f64 = a.data().iter().map(|z| z.norm_sqr()).sum();
        assert_eq!(ea.squared_mass(), fro2);
        fourier(&mut ea, false);
        let batch = assemble(&ea, &cfg);
        let bound = cfg.block_order() as f64 * cfg.hn() as f64 * fro2;
        assert!(batch.squared_mass() <= bound * (1.0 + 1e-12));
    }
}
