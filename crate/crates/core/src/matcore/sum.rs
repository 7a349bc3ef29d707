use num_complex::Complex;

use super::{MatrixError, Real};

/// Balanced-tree sum: `sum(first ⌈n/2⌉) + sum(rest)`, recursively.
///
/// Every term passes through at most `⌈log₂ n⌉` additions, so the rounding
/// error is bounded by `max|x_j|·⌈log₂ n⌉·ε` to first order.
pub fn pairwise_sum<T: Real>(xs: &[Complex<T>]) -> Result<Complex<T>, MatrixError> {
    if xs.is_empty() {
        return Err(MatrixError::EmptySum);
    }
    Ok(tree_sum(xs))
}

/// [`pairwise_sum`] for callers that have already ruled out the empty case.
#[inline]
pub(crate) fn tree_sum<T: Real>(xs: &[Complex<T>]) -> Complex<T> {
    match xs.len() {
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let mid = n.div_ceil(2);
            tree_sum(&xs[..mid]) + tree_sum(&xs[mid..])
        }
    }
}

/// Vector form of the same tree: `out[j] = Σ_l term(l, j)` summed over
/// `l ∈ [lo, hi)` with the split of [`pairwise_sum`], for all `j` at once.
///
/// `leaf(l, buf)` writes the `l`-th term vector into `buf`. `scratch` must
/// hold at least `⌈log₂(hi−lo)⌉` buffers of `out.len()` entries.
pub(crate) fn tree_sum_rows<T, F>(
    lo: usize,
    hi: usize,
    out: &mut [Complex<T>],
    scratch: &mut [Vec<Complex<T>>],
    leaf: &mut F,
) where
    T: Real,
    F: FnMut(usize, &mut [Complex<T>]),
{
    debug_assert!(hi > lo);
    if hi - lo == 1 {
        leaf(lo, out);
        return;
    }
    let mid = lo + (hi - lo).div_ceil(2);
    let (head, rest) = scratch.split_first_mut().expect("scratch depth");
    tree_sum_rows(lo, mid, out, rest, leaf);
    tree_sum_rows(mid, hi, head, rest, leaf);
    for (o, r) in out.iter_mut().zip(head.iter()) {
        *o = *o + *r;
    }
}

/// `⌈log₂ n⌉` for `n ≥ 1`.
#[inline]
pub fn ceil_log2(n: usize) -> u32 {
    debug_assert!(n >= 1);
    usize::BITS - (n - 1).leading_zeros()
}
