//! Plain-text matrix fixtures.
//!
//! ```text
//! 2 2
//! 1+0i 2.5-1i
//! -3+0.25i 0+0i
//! ```
//!
//! Values are written with the shortest decimal that round-trips at binary64.

use std::fmt::Write as _;

use num_complex::Complex;

use super::{complex_from_f64, complex_to_f64, Matrix, MatrixError, Real};

pub fn write_text<T: Real>(a: &Matrix<T>) -> String {
    let mut out = format!("{} {}\n", a.rows(), a.cols());
    for i in 0..a.rows() {
        let line: Vec<String> = a.row(i).iter().map(|&z| format_scalar(complex_to_f64(z))).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

pub fn parse_text<T: Real>(text: &str) -> Result<Matrix<T>, MatrixError> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| MatrixError::Parse("missing header".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| MatrixError::Parse(format!("bad dimension `{t}`"))))
        .collect::<Result<_, _>>()?;
    let [rows, cols] = dims[..] else {
        return Err(MatrixError::Parse(format!("header must be `rows cols`, got `{header}`")));
    };
    let mut data = Vec::with_capacity(rows * cols);
    for (i, line) in lines.enumerate() {
        if i >= rows {
            return Err(MatrixError::Parse(format!("more than {rows} rows")));
        }
        let before = data.len();
        for tok in line.split_whitespace() {
            data.push(complex_from_f64(parse_scalar(tok)?));
        }
        if data.len() - before != cols {
            return Err(MatrixError::Parse(format!("row {i} has {} entries, expected {cols}", data.len() - before)));
        }
    }
    Matrix::new(rows, cols, data)
}

fn format_scalar(z: Complex<f64>) -> String {
    if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// Parses `re+imi` / `re-imi`; exponents such as `1e-3` are allowed in either part.
fn parse_scalar(tok: &str) -> Result<Complex<f64>, MatrixError> {
    let bad = || MatrixError::Parse(format!("bad scalar `{tok}`"));
    let body = tok.strip_suffix('i').ok_or_else(bad)?;
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&p| matches!(bytes[p], b'+' | b'-') && !matches!(bytes[p - 1], b'e' | b'E'))
        .ok_or_else(bad)?;
    let re: f64 = body[..split].parse().map_err(|_| bad())?;
    let im: f64 = body[split..].parse().map_err(|_| bad())?;
    Ok(Complex::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_signs_and_exponents() {
        assert_eq!(parse_scalar("1+2i").unwrap(), Complex::new(1.0, 2.0));
        assert_eq!(parse_scalar("-1.5-0.25i").unwrap(), Complex::new(-1.5, -0.25));
        assert_eq!(parse_scalar("1e-3+2E+2i").unwrap(), Complex::new(1e-3, 200.0));
        assert_eq!(parse_scalar("-0-1e-310i").unwrap(), Complex::new(-0.0, -1e-310));
        assert!(parse_scalar("12").is_err());
        assert!(parse_scalar("i").is_err());
    }

    #[test]
    fn round_trip_reference_precision() {
        let a = Matrix::<f64>::from_fn(3, 2, |i, j| Complex::new(1.0 / (i as f64 + 3.0), -(j as f64).exp() * 1e-7));
        let text = write_text(&a);
        assert_eq!(parse_text::<f64>(&text).unwrap(), a);
    }

    #[test]
    fn rejects_ragged_rows() {
        assert!(parse_text::<f64>("2 2\n1+0i 2+0i\n3+0i\n").is_err());
        assert!(parse_text::<f64>("1 1\n1+0i\n2+0i\n").is_err());
        assert!(parse_text::<f64>("").is_err());
    }
}
