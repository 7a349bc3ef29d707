//! Multidimensional discrete Fourier transform over `(Z/m)^D`.
//!
//! Sign convention: the forward transform uses the kernel `exp(+2πi⟨i,j⟩/m)`
//! and is unnormalized; the inverse uses `exp(−2πi⟨i,j⟩/m)` and carries the
//! factor `1/m^D`. Arrays are row-major with axis 0 most significant, and axes
//! are transformed in order `0, 1, …, D−1`.
//!
//! Each length-`m` axis is transformed by mixed-radix decimation in time:
//! split by the smallest prime `p | n`, transform the `p` interleaved
//! subsequences of length `q = n/p`, then combine
//! `X[k] = Σ_r w_n^{rk}·Y_r[k mod q]` with a pairwise sum over `r`. Prime
//! lengths are thereby computed as a direct DFT. Twiddles `exp(2πit/m)` are
//! computed at binary64 and rounded once to the working type.

use num_complex::Complex;
use thiserror::Error;

use crate::matcore::{ceil_log2, complex_from_f64, Real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FftError {
    #[error("array of {got} entries is not {m}^{dims}")]
    Shape { m: usize, dims: usize, got: usize },
    #[error("modulus must be at least 1")]
    Modulus,
}

/// `m^D` complex values indexed by `(Z/m)^D`, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupArray<T: Real> {
    m: usize,
    dims: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> GroupArray<T> {
    pub fn new(m: usize, dims: usize, data: Vec<Complex<T>>) -> Result<Self, FftError> {
        if m == 0 {
            return Err(FftError::Modulus);
        }
        match m.checked_pow(dims as u32) {
            Some(len) if len == data.len() => Ok(Self { m, dims, data }),
            _ => Err(FftError::Shape { m, dims, got: data.len() }),
        }
    }

    pub fn zeros(m: usize, dims: usize) -> Self {
        Self { m, dims, data: vec![Complex::new(T::zero(), T::zero()); m.pow(dims as u32)] }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<Complex<T>> {
        self.data
    }

    /// Flat index of the tuple `idx` (each entry reduced mod `m`).
    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.m + i % self.m)
    }
}

/// Reusable twiddles and scratch for transforms of one modulus.
#[derive(Clone, Debug)]
pub struct DftPlan<T: Real> {
    m: usize,
    /// `exp(2πit/m)` for `t ∈ [0, m)`.
    twiddles: Vec<Complex<T>>,
    conj_twiddles: Vec<Complex<T>>,
    out: Vec<Complex<T>>,
    tmp: Vec<Complex<T>>,
    terms: Vec<Complex<T>>,
}

impl<T: Real> DftPlan<T> {
    pub fn new(m: usize) -> Self {
        let twiddles: Vec<Complex<T>> = (0..m)
            .map(|t| {
                let theta = std::f64::consts::TAU * t as f64 / m as f64;
                complex_from_f64(Complex::new(theta.cos(), theta.sin()))
            })
            .collect();
        let conj_twiddles = twiddles.iter().map(|w| w.conj()).collect();
        Self { m, twiddles, conj_twiddles, out: Vec::new(), tmp: Vec::new(), terms: Vec::new() }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Unnormalized transform of `data`, viewed as `m^dims` row-major, with the
    /// `+` kernel (`inverse_sign = false`) or the `−` kernel.
    ///
    /// Axis `a` splits the data into contiguous `m × m^{dims−1−a}` blocks whose
    /// columns are the lines to transform; each block is transformed as `m`
    /// rows at once, so every line sees the same operations in the same order.
    pub fn transform(&mut self, data: &mut [Complex<T>], dims: usize, inverse_sign: bool) {
        let m = self.m;
        debug_assert_eq!(Some(data.len()), m.checked_pow(dims as u32));
        if m == 1 {
            return;
        }
        let Self { twiddles, conj_twiddles, out, tmp, terms, .. } = self;
        let tw = if inverse_sign { &*conj_twiddles } else { &*twiddles };
        let zero = Complex::new(T::zero(), T::zero());
        let max_p = prime_factors(m).into_iter().max().unwrap_or(1);
        for axis in 0..dims {
            let width = m.pow((dims - 1 - axis) as u32);
            let block = m * width;
            out.resize(block, zero);
            tmp.resize(block, zero);
            terms.resize(max_p * width, zero);
            for chunk in data.chunks_exact_mut(block) {
                decimate(chunk, width, 1, m, &mut out[..block], &mut tmp[..block], tw, 1, terms);
                chunk.copy_from_slice(&out[..block]);
            }
        }
    }

    pub fn forward_in_place(&mut self, data: &mut [Complex<T>], dims: usize) {
        self.transform(data, dims, false);
    }

    /// Inverse transform including the `1/m^dims` factor (rounded once).
    pub fn inverse_in_place(&mut self, data: &mut [Complex<T>], dims: usize) {
        self.transform(data, dims, true);
        let scale = T::from_f64(1.0 / (self.m as f64).powi(dims as i32));
        for v in data.iter_mut() {
            *v = *v * scale;
        }
    }
}

/// Writes the length-`n` DFT of the rows `x_0, x_s, x_{2s}, …` (each `w` wide,
/// row `j` at `x[j·w..]`) into the `n` rows of `out`, using `tmp` (also `n`
/// rows) as scratch. `step = m/n` maps `w_n^e` to `twiddles[e·step]`.
#[allow(clippy::too_many_arguments)]
fn decimate<T: Real>(
    x: &[Complex<T>],
    w: usize,
    s: usize,
    n: usize,
    out: &mut [Complex<T>],
    tmp: &mut [Complex<T>],
    twiddles: &[Complex<T>],
    step: usize,
    terms: &mut [Complex<T>],
) {
    if n == 1 {
        out[..w].copy_from_slice(&x[..w]);
        return;
    }
    let p = smallest_prime_factor(n);
    let q = n / p;
    // Y_r = DFT_q(x_r, x_{r+p}, …) into rows r·q.. of tmp; for q = 1 that is
    // row r of the input itself.
    if q > 1 {
        for r in 0..p {
            let (y, scratch) = (&mut tmp[r * q * w..(r + 1) * q * w], &mut out[r * q * w..(r + 1) * q * w]);
            decimate(&x[r * s * w..], w, s * p, q, y, scratch, twiddles, step * p, terms);
        }
    }
    let source = |r: usize, k: usize| -> &[Complex<T>] {
        if q > 1 { &tmp[(r * q + k % q) * w..][..w] } else { &x[r * s * w..][..w] }
    };
    for k in 0..n {
        let dst = &mut out[k * w..(k + 1) * w];
        if p == 2 {
            let (t0, t1) = (twiddles[0], twiddles[(k % n) * step]);
            for ((d, a), b) in dst.iter_mut().zip(source(0, k)).zip(source(1, k)) {
                *d = t0 * *a + t1 * *b;
            }
            continue;
        }
        for r in 0..p {
            let t = twiddles[(r * k % n) * step];
            for (d, v) in terms[r * w..(r + 1) * w].iter_mut().zip(source(r, k)) {
                *d = t * *v;
            }
        }
        row_tree_sum(&mut terms[..p * w], p, w);
        dst.copy_from_slice(&terms[..w]);
    }
}

/// Column-wise [`tree_sum`] of `p` rows of width `w`, left in the first row.
fn row_tree_sum<T: Real>(rows: &mut [Complex<T>], p: usize, w: usize) {
    if p == 1 {
        return;
    }
    let mid = p.div_ceil(2);
    let (head, rest) = rows.split_at_mut(mid * w);
    row_tree_sum(head, mid, w);
    row_tree_sum(rest, p - mid, w);
    for (a, b) in head[..w].iter_mut().zip(&rest[..w]) {
        *a = *a + *b;
    }
}

fn smallest_prime_factor(n: usize) -> usize {
    (2..).take_while(|p| p * p <= n).find(|p| n.is_multiple_of(*p)).unwrap_or(n)
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    while n > 1 {
        let p = smallest_prime_factor(n);
        out.push(p);
        n /= p;
    }
    out
}

pub fn dft_forward<T: Real>(a: &GroupArray<T>) -> GroupArray<T> {
    let mut out = a.clone();
    DftPlan::new(a.m).forward_in_place(&mut out.data, a.dims);
    out
}

pub fn dft_inverse<T: Real>(a: &GroupArray<T>) -> GroupArray<T> {
    let mut out = a.clone();
    DftPlan::new(a.m).inverse_in_place(&mut out.data, a.dims);
    out
}

/// The transform's certified error function
/// `‖fl(F)x − Fx‖₂ ≤ f(n)·ε·‖Fx‖₂ = f(n)·ε·√n·‖x‖₂` with `f(n) = c_f·⌈log₂ n⌉`.
///
/// Derivation. A combine stage of radix `p` is `√p` times a unitary map. Each
/// output term is a rounded twiddle (error `ε`) times a value (complex product,
/// error `2√2·ε`), summed pairwise (`⌈log₂ p⌉·ε` per term), so the stage's
/// error is at most `√p·(1 + 2√2 + ⌈log₂ p⌉)·ε` relative to its exact output.
/// Stages compose to first order, and the radices' `log₂ p` add up to `log₂ n`.
/// The constant is therefore `max_p √p·(3.83 + ⌈log₂ p⌉)/log₂ p` over the radices
/// used, which is at most 8 whenever every prime factor of `m` is ≤ 13.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct FftStats {
    pub c_f: f64,
}

impl FftStats {
    /// `f(n) = c_f·⌈log₂ n⌉`, with `f(1) = 0`.
    pub fn f_bound(&self, n: usize) -> f64 {
        if n <= 1 {
            0.0
        } else {
            self.c_f * f64::from(ceil_log2(n))
        }
    }

    /// Constant valid for the radices of modulus `m`: at least 8, larger if `m`
    /// has a prime factor above 13.
    pub fn for_modulus(m: usize) -> Self {
        let per_stage = |p: usize| {
            let pf = p as f64;
            pf.sqrt() * (1.0 + 2.0 * std::f64::consts::SQRT_2 + f64::from(ceil_log2(p))) / pf.log2()
        };
        let c = prime_factors(m).into_iter().map(per_stage).fold(DEFAULT_C_F, f64::max);
        Self { c_f: c }
    }
}

const DEFAULT_C_F: f64 = 8.0;

/// `c_f = 8`, certified for moduli whose prime factors are all ≤ 13.
pub fn fft_error_constant() -> FftStats {
    FftStats { c_f: DEFAULT_C_F }
}
