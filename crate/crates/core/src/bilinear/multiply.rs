use num_complex::Complex;

use super::{BilinearError, BilinearScheme};
use crate::matcore::{naive_multiply, pad_to, tree_sum, Matrix, MatrixError, Real};

/// A non-stationary recursion: level `j` splits with `levels[j]`, and the
/// remaining order, at most `base_threshold`, is multiplied naively.
#[derive(Clone, Debug)]
pub struct Schedule {
    pub levels: Vec<BilinearScheme>,
    pub base_threshold: usize,
}

impl Schedule {
    pub fn new(levels: Vec<BilinearScheme>, base_threshold: usize) -> Self {
        Self { levels, base_threshold }
    }

    /// `∏_j k_j`.
    pub fn block_product(&self) -> usize {
        self.levels.iter().map(BilinearScheme::k).product()
    }
}

fn square_order<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Result<usize, BilinearError> {
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return Err(MatrixError::DimensionMismatch { left: (a.rows(), a.cols()), right: (b.rows(), b.cols()) }.into());
    }
    Ok(a.rows())
}

fn stationary_compatible(mut n: usize, k: usize, threshold: usize) -> bool {
    while n > threshold {
        if !n.is_multiple_of(k) {
            return false;
        }
        n /= k;
    }
    true
}

/// Recursive bilinear product with the same scheme at every level, stopping
/// once the order is at most `base_threshold`. The order must be
/// `base·k^p` with `base ≤ base_threshold`; see [`multiply_padded`] otherwise.
pub fn multiply_stationary<T: Real>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    scheme: &BilinearScheme,
    base_threshold: usize,
) -> Result<Matrix<T>, BilinearError> {
    let n = square_order(a, b)?;
    if base_threshold == 0 {
        return Err(BilinearError::InvalidThreshold);
    }
    if scheme.k() < 2 {
        return Err(BilinearError::NonReducingScheme);
    }
    if !stationary_compatible(n, scheme.k(), base_threshold) {
        return Err(BilinearError::IncompatibleOrder { n, k: scheme.k(), threshold: base_threshold });
    }
    Ok(stationary(a, b, scheme, base_threshold))
}

fn stationary<T: Real>(a: &Matrix<T>, b: &Matrix<T>, s: &BilinearScheme, threshold: usize) -> Matrix<T> {
    if a.rows() <= threshold {
        naive_multiply(a, b).expect("square blocks of equal order")
    } else {
        one_level(a, b, s, |x, y| stationary(x, y, s, threshold))
    }
}

/// Smallest `base_threshold·k^p ≥ n`, or `n` itself when no recursion is needed.
pub fn padded_order(n: usize, k: usize, base_threshold: usize) -> usize {
    if n <= base_threshold {
        return n;
    }
    let mut order = base_threshold;
    while order < n {
        order *= k;
    }
    order
}

/// Stationary product for conformable inputs of any shape: everything is
/// zero-padded to a common compatible square order and the result truncated.
pub fn multiply_padded<T: Real>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    scheme: &BilinearScheme,
    base_threshold: usize,
) -> Result<Matrix<T>, BilinearError> {
    if a.cols() != b.rows() {
        return Err(MatrixError::DimensionMismatch { left: (a.rows(), a.cols()), right: (b.rows(), b.cols()) }.into());
    }
    if base_threshold == 0 {
        return Err(BilinearError::InvalidThreshold);
    }
    if scheme.k() < 2 {
        return Err(BilinearError::NonReducingScheme);
    }
    let n = a.rows().max(a.cols()).max(b.cols());
    let order = padded_order(n, scheme.k(), base_threshold);
    let c = multiply_stationary(&pad_to(a, order, order)?, &pad_to(b, order, order)?, scheme, base_threshold)?;
    Ok(c.truncate(a.rows(), b.cols()))
}

/// Recursive product using `schedule.levels[j]` at level `j`. The order must be
/// divisible by `∏k_j` with quotient at most `base_threshold`.
pub fn multiply_nonstationary<T: Real>(a: &Matrix<T>, b: &Matrix<T>, schedule: &Schedule) -> Result<Matrix<T>, BilinearError> {
    let n = square_order(a, b)?;
    let product = schedule.block_product();
    if n % product != 0 || n / product > schedule.base_threshold {
        return Err(BilinearError::ScheduleMismatch { n, product, threshold: schedule.base_threshold });
    }
    Ok(nonstationary(a, b, &schedule.levels))
}

fn nonstationary<T: Real>(a: &Matrix<T>, b: &Matrix<T>, levels: &[BilinearScheme]) -> Matrix<T> {
    match levels.split_first() {
        None => naive_multiply(a, b).expect("square blocks of equal order"),
        Some((s, rest)) => one_level(a, b, s, |x, y| nonstationary(x, y, rest)),
    }
}

/// One level of the scheme: form the `t` block operands, multiply each pair
/// with `inner`, and recombine. Every linear combination multiplies by the
/// coefficient first and then sums the terms pairwise.
fn one_level<T, F>(a: &Matrix<T>, b: &Matrix<T>, s: &BilinearScheme, mut inner: F) -> Matrix<T>
where
    T: Real,
    F: FnMut(&Matrix<T>, &Matrix<T>) -> Matrix<T>,
{
    let (k, t) = (s.k(), s.t());
    let nb = a.rows() / k;
    // blocks enumerated column by column
    let split = |m: &Matrix<T>| -> Vec<Matrix<T>> { (0..k * k).map(|i| m.block((i % k) * nb, (i / k) * nb, nb, nb)).collect() };
    let (ab, bb) = (split(a), split(b));

    let products: Vec<Option<Matrix<T>>> = (0..t)
        .map(|p| {
            let lhs = combine(&ab, (0..k * k).map(|i| (i, s.u(i, p))), nb)?;
            let rhs = combine(&bb, (0..k * k).map(|j| (j, s.v(j, p))), nb)?;
            Some(inner(&lhs, &rhs))
        })
        .collect();

    let mut c = Matrix::zeros(a.rows(), a.rows());
    for r in 0..k * k {
        let terms = (0..t).filter_map(|p| products[p].as_ref().map(|m| (m, s.w(r, p))));
        if let Some(block) = combine_refs(terms, nb) {
            c.set_block((r / k) * nb, (r % k) * nb, &block);
        }
    }
    c
}

fn combine<T: Real>(blocks: &[Matrix<T>], coeffs: impl Iterator<Item = (usize, f64)>, nb: usize) -> Option<Matrix<T>> {
    combine_refs(coeffs.map(|(i, c)| (&blocks[i], c)), nb)
}

/// `Σ c_j·M_j` over the nonzero coefficients, or `None` if there are none.
fn combine_refs<'a, T: Real + 'a>(terms: impl Iterator<Item = (&'a Matrix<T>, f64)>, nb: usize) -> Option<Matrix<T>> {
    let terms: Vec<(&Matrix<T>, T)> = terms.filter(|(_, c)| *c != 0.0).map(|(m, c)| (m, T::from_f64(c))).collect();
    match terms.as_slice() {
        [] => None,
        [(m, c)] if *c == T::one() => Some((*m).clone()),
        _ => {
            let mut buf: Vec<Complex<T>> = Vec::with_capacity(terms.len());
            let data = (0..nb * nb)
                .map(|e| {
                    buf.clear();
                    buf.extend(terms.iter().map(|(m, c)| m.data()[e] * *c));
                    tree_sum(&buf)
                })
                .collect();
            Some(Matrix::new(nb, nb, data).expect("block shape"))
        }
    }
}
