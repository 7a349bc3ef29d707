use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::sum::{ceil_log2, tree_sum_rows};
use super::{modulus, MatrixError, Real};

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    MaxEntry,
    Frobenius,
}

impl<T: Real> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::EmptyShape { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(MatrixError::DataLength { expected: rows * cols, got: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self { rows, cols, data: vec![Complex::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Real matrix from row-major binary64 values, rounded to `T`.
    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Result<Self, MatrixError> {
        let data = values.iter().map(|&x| Complex::new(T::from_f64(x), T::zero())).collect();
        Self::new(rows, cols, data)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex<T>) {
        self.data[i * self.cols + j] = value;
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

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Copy of the `rows × cols` block whose top-left corner is `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "block out of range");
        let mut data = Vec::with_capacity(rows * cols);
        for i in r0..r0 + rows {
            data.extend_from_slice(&self.data[i * self.cols + c0..i * self.cols + c0 + cols]);
        }
        Self { rows, cols, data }
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix<T>) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        for i in 0..block.rows {
            let dst = (r0 + i) * self.cols + c0;
            self.data[dst..dst + block.cols].copy_from_slice(block.row(i));
        }
    }

    /// Leading `rows × cols` block.
    pub fn truncate(&self, rows: usize, cols: usize) -> Self {
        self.block(0, 0, rows, cols)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn precision(&self) -> super::Precision {
        T::PRECISION
    }
}

/// Textbook triple-loop product; every inner product is accumulated with
/// [`pairwise_sum`](super::pairwise_sum) in index order.
pub fn naive_multiply<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>, MatrixError> {
    if a.cols != b.rows {
        return Err(MatrixError::DimensionMismatch {
            left: (a.rows, a.cols),
            right: (b.rows, b.cols),
        });
    }
    let inner = a.cols;
    let width = b.cols;
    let mut out = Matrix::zeros(a.rows, width);
    let mut scratch = vec![vec![Complex::zero(); width]; ceil_log2(inner) as usize];
    for i in 0..a.rows {
        let a_row = a.row(i);
        let out_row = &mut out.data[i * width..(i + 1) * width];
        // term l of every entry in row i is a[i][l]·b[l][j]; computing a whole
        // row of terms at once keeps the inner loop on contiguous memory
        tree_sum_rows(0, inner, out_row, &mut scratch, &mut |l, buf: &mut [Complex<T>]| {
            let x = a_row[l];
            for (dst, y) in buf.iter_mut().zip(b.row(l)) {
                *dst = x * *y;
            }
        });
    }
    Ok(out)
}

/// Matrix norm, accumulated in binary64.
pub fn norm<T: Real>(a: &Matrix<T>, kind: NormKind) -> f64 {
    match kind {
        NormKind::MaxEntry => a.data.iter().map(|&z| modulus(z)).fold(0.0, f64::max),
        NormKind::Frobenius => {
            let sq: Vec<Complex<f64>> = a
                .data
                .iter()
                .map(|z| {
                    let (re, im) = (z.re.to_f64(), z.im.to_f64());
                    Complex::new(re * re + im * im, 0.0)
                })
                .collect();
            super::sum::tree_sum(&sq).re.sqrt()
        }
    }
}

/// Norm of `a − b` with both operands widened to binary64 first.
pub fn norm_of_difference<S: Real, T: Real>(a: &Matrix<S>, b: &Matrix<T>, kind: NormKind) -> Result<f64, MatrixError> {
    if a.rows != b.rows || a.cols != b.cols {
        return Err(MatrixError::DimensionMismatch {
            left: (a.rows, a.cols),
            right: (b.rows, b.cols),
        });
    }
    let diff = Matrix::<f64>::from_fn(a.rows, a.cols, |i, j| {
        super::complex_to_f64(a.get(i, j)) - super::complex_to_f64(b.get(i, j))
    });
    Ok(norm(&diff, kind))
}

/// Zero-padded copy with the original entries in the leading block.
pub fn pad_to<T: Real>(a: &Matrix<T>, rows: usize, cols: usize) -> Result<Matrix<T>, MatrixError> {
    if rows < a.rows || cols < a.cols {
        return Err(MatrixError::ShrinkRequest {
            from: (a.rows, a.cols),
            to: (rows, cols),
        });
    }
    if rows == a.rows && cols == a.cols {
        return Ok(a.clone());
    }
    let mut out = Matrix::zeros(rows, cols);
    out.set_block(0, 0, a);
    Ok(out)
}

/// Entrywise rounding to another precision (widening is exact).
pub fn convert_precision<S: Real, T: Real>(a: &Matrix<S>) -> Matrix<T> {
    Matrix {
        rows: a.rows,
        cols: a.cols,
        data: a.data.iter().map(|&z| super::complex_from_f64(super::complex_to_f64(z))).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::pairwise_sum;

    fn int_matrix(n: usize, m: usize, vals: &[i32]) -> Matrix<f64> {
        Matrix::from_real(n, m, &vals.iter().map(|&v| v as f64).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn identity_squared() {
        let i2 = Matrix::<f64>::identity(2);
        assert_eq!(naive_multiply(&i2, &i2).unwrap(), i2);
    }

    #[test]
    fn two_by_two_hand_product() {
        let a = int_matrix(2, 2, &[1, 2, 3, 4]);
        let b = int_matrix(2, 2, &[5, 6, 7, 8]);
        assert_eq!(naive_multiply(&a, &b).unwrap(), int_matrix(2, 2, &[19, 22, 43, 50]));
    }

    #[test]
    fn times_zero_is_zero() {
        let a = Matrix::<f32>::from_fn(5, 5, |i, j| Complex::new((i * 7 + j) as f32 * 0.37 - 3.0, 0.25 * j as f32));
        let z = Matrix::<f32>::zeros(5, 5);
        assert_eq!(naive_multiply(&a, &z).unwrap(), z);
    }

    #[test]
    fn dimension_mismatch() {
        let a = Matrix::<f64>::zeros(2, 3);
        assert!(matches!(naive_multiply(&a, &a), Err(MatrixError::DimensionMismatch { .. })));
    }

    #[test]
    fn rectangular_product() {
        let a = int_matrix(2, 3, &[1, 0, 2, -1, 3, 1]);
        let b = int_matrix(3, 1, &[3, 2, 1]);
        assert_eq!(naive_multiply(&a, &b).unwrap(), int_matrix(2, 1, &[5, 4]));
    }

    #[test]
    fn entries_use_pairwise_tree() {
        let n = 11;
        let a = Matrix::<f32>::from_fn(3, n, |i, l| Complex::new(1.0 / (1.0 + i as f32 + l as f32), 0.3 * l as f32));
        let b = Matrix::<f32>::from_fn(n, 4, |l, j| Complex::new((l as f32 - j as f32).sin(), 1.0 / (2.0 + l as f32)));
        let c = naive_multiply(&a, &b).unwrap();
        for i in 0..3 {
            for j in 0..4 {
                let terms: Vec<_> = (0..n).map(|l| a.get(i, l) * b.get(l, j)).collect();
                assert_eq!(c.get(i, j), pairwise_sum(&terms).unwrap());
            }
        }
    }

    #[test]
    fn norms_of_identity() {
        let i3 = Matrix::<f64>::identity(3);
        assert_eq!(norm(&i3, NormKind::MaxEntry), 1.0);
        assert!((norm(&i3, NormKind::Frobenius) - 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(norm(&int_matrix(1, 2, &[3, 4]), NormKind::Frobenius), 5.0);
    }

    #[test]
    fn padding() {
        let a = int_matrix(2, 2, &[1, 2, 3, 4]);
        assert_eq!(pad_to(&a, 2, 2).unwrap(), a);
        let c = Matrix::<f64>::from_fn(1, 1, |_, _| Complex::new(2.5, -1.0));
        let p = pad_to(&c, 2, 2).unwrap();
        assert_eq!(p.data(), &[Complex::new(2.5, -1.0), Complex::zero(), Complex::zero(), Complex::zero()]);
        assert!(matches!(pad_to(&a, 1, 2), Err(MatrixError::ShrinkRequest { .. })));
    }

    #[test]
    fn padded_product_truncates_to_original() {
        let a = int_matrix(3, 3, &[1, -2, 3, 0, 4, -1, 2, 2, 2]);
        let b = int_matrix(3, 3, &[-1, 0, 5, 3, 1, -2, 1, 1, 1]);
        let padded = naive_multiply(&pad_to(&a, 4, 4).unwrap(), &pad_to(&b, 4, 4).unwrap()).unwrap();
        assert_eq!(padded.truncate(3, 3), naive_multiply(&a, &b).unwrap());
    }

    #[test]
    fn precision_conversion() {
        let w = Matrix::<f32>::from_fn(3, 2, |i, j| Complex::new(i as f32 / 3.0, -(j as f32) / 7.0));
        let r: Matrix<f64> = convert_precision(&w);
        assert_eq!(convert_precision::<f64, f32>(&r), w);

        let tiny = Matrix::<f64>::from_real(1, 1, &[1.0 + 2f64.powi(-30)]).unwrap();
        assert_eq!(convert_precision::<f64, f32>(&tiny).get(0, 0), Complex::new(1.0f32, 0.0));

        let ints: Vec<f64> = (0..=20).map(|p| 2f64.powi(p) - 1.0).collect();
        let big = Matrix::<f64>::from_real(1, ints.len(), &ints).unwrap();
        assert_eq!(convert_precision::<f32, f64>(&convert_precision::<f64, f32>(&big)), big);
    }

    #[test]
    fn shape_validation() {
        assert!(matches!(Matrix::<f64>::new(2, 2, vec![Complex::zero(); 3]), Err(MatrixError::DataLength { .. })));
        assert!(matches!(Matrix::<f64>::new(0, 2, vec![]), Err(MatrixError::EmptyShape { .. })));
    }
}
