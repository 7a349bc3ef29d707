use serde::{Deserialize, Serialize};

use super::BilinearError;
use crate::matcore::ceil_log2;

/// Coefficients `(U, V, W)` of a bilinear algorithm for `k × k` blocks using
/// `t` block products:
///
/// `P_s = (Σ_i u_is x_i)(Σ_j v_js y_j)`, `c_r = Σ_s w_rs P_s`.
///
/// `x_i` and `y_j` enumerate the blocks of `A` and `B` column by column
/// (`i = col·k + row`), while `r = h·k + l` enumerates the blocks `C_hl` of the
/// product row by row. All three matrices are `k² × t`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct BilinearScheme {
    name: String,
    k: usize,
    t: usize,
    u: Vec<f64>,
    v: Vec<f64>,
    w: Vec<f64>,
    /// Absolute tolerance used by [`verify_scheme`]; zero for schemes with
    /// dyadic coefficients, which verify exactly.
    tolerance: f64,
}

/// Per-scheme counts that drive the error bounds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchemeStats {
    /// Nonzeros per column of `U`.
    pub a: Vec<usize>,
    /// Nonzeros per column of `V`.
    pub b: Vec<usize>,
    /// Nonzeros per row of `W`.
    pub c: Vec<usize>,
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
    pub gamma: Vec<u32>,
    /// `e_r = Σ_s a_s b_s ξ_rs` with `ξ_rs = [w_rs ≠ 0]`.
    pub e: Vec<usize>,
    pub e_max: usize,
    pub u_norm: f64,
    pub v_norm: f64,
    pub w_norm: f64,
}

impl SchemeStats {
    /// `max_{r,s}(α_s + β_s + γ_r + 3)`.
    pub fn max_exponent_sum(&self) -> u32 {
        let ab = self.alpha.iter().zip(&self.beta).map(|(a, b)| a + b).max().unwrap_or(0);
        ab + self.gamma.iter().copied().max().unwrap_or(0) + 3
    }

    /// `ê·‖U‖·‖V‖·‖W‖`, the per-level growth factor of the bound.
    pub fn growth_factor(&self) -> f64 {
        self.e_max as f64 * self.u_norm * self.v_norm * self.w_norm
    }
}

/// First output block at which a scheme disagrees with the true product.
#[derive(Clone, Debug, PartialEq)]
pub struct SchemeDefect {
    /// Output block row and column, 0-based.
    pub h: usize,
    pub l: usize,
    /// Elementary inputs `A = E_(a_row, a_col)`, `B = E_(b_row, b_col)` exposing it.
    pub a_entry: (usize, usize),
    pub b_entry: (usize, usize),
    pub expected: f64,
    pub got: f64,
}

impl std::fmt::Display for SchemeDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "output entry (h,l)=({},{}) is {} instead of {} for A=E{:?}, B=E{:?}",
            self.h + 1,
            self.l + 1,
            self.got,
            self.expected,
            (self.a_entry.0 + 1, self.a_entry.1 + 1),
            (self.b_entry.0 + 1, self.b_entry.1 + 1)
        )
    }
}

impl BilinearScheme {
    /// Builds a scheme after checking shapes and exactness.
    pub fn new(name: impl Into<String>, k: usize, t: usize, u: Vec<f64>, v: Vec<f64>, w: Vec<f64>) -> Result<Self, BilinearError> {
        Self::with_tolerance(name, k, t, u, v, w, 0.0)
    }

    pub fn with_tolerance(
        name: impl Into<String>,
        k: usize,
        t: usize,
        u: Vec<f64>,
        v: Vec<f64>,
        w: Vec<f64>,
        tolerance: f64,
    ) -> Result<Self, BilinearError> {
        let scheme = Self::unchecked(name, k, t, u, v, w, tolerance)?;
        scheme.check().map_err(BilinearError::SchemeRejected)?;
        Ok(scheme)
    }

    /// Shape-checked but not verified; used to build deliberately broken schemes.
    pub fn unchecked(
        name: impl Into<String>,
        k: usize,
        t: usize,
        u: Vec<f64>,
        v: Vec<f64>,
        w: Vec<f64>,
        tolerance: f64,
    ) -> Result<Self, BilinearError> {
        if k == 0 || t == 0 {
            return Err(BilinearError::SchemeShape(format!("k={k} and t={t} must be positive")));
        }
        for (label, m) in [("U", &u), ("V", &v), ("W", &w)] {
            if m.len() != k * k * t {
                return Err(BilinearError::SchemeShape(format!(
                    "{label} has {} entries, expected k²·t = {}",
                    m.len(),
                    k * k * t
                )));
            }
            if m.iter().any(|x| !x.is_finite()) {
                return Err(BilinearError::SchemeShape(format!("{label} has a non-finite entry")));
            }
        }
        Ok(Self { name: name.into(), k, t, u, v, w, tolerance })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    #[inline]
    pub fn u(&self, i: usize, s: usize) -> f64 {
        self.u[i * self.t + s]
    }

    #[inline]
    pub fn v(&self, j: usize, s: usize) -> f64 {
        self.v[j * self.t + s]
    }

    #[inline]
    pub fn w(&self, r: usize, s: usize) -> f64 {
        self.w[r * self.t + s]
    }

    pub fn set_w(&mut self, r: usize, s: usize, value: f64) {
        self.w[r * self.t + s] = value;
    }

    /// Evaluates the scheme on every pair of elementary matrices `E_ij`, `E_kl`;
    /// by bilinearity that decides exactness on all inputs.
    pub fn check(&self) -> Result<(), SchemeDefect> {
        let k = self.k;
        let kk = k * k;
        for r in 0..kk {
            let (h, l) = (r / k, r % k);
            for p in 0..kk {
                let (ar, ac) = (p % k, p / k);
                for q in 0..kk {
                    let (br, bc) = (q % k, q / k);
                    let got: f64 = (0..self.t).map(|s| self.w(r, s) * self.u(p, s) * self.v(q, s)).sum();
                    let expected = if ac == br && ar == h && bc == l { 1.0 } else { 0.0 };
                    if (got - expected).abs() > self.tolerance {
                        return Err(SchemeDefect { h, l, a_entry: (ar, ac), b_entry: (br, bc), expected, got });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn stats(&self) -> SchemeStats {
        let (k2, t) = (self.k * self.k, self.t);
        let a: Vec<usize> = (0..t).map(|s| (0..k2).filter(|&i| self.u(i, s) != 0.0).count()).collect();
        let b: Vec<usize> = (0..t).map(|s| (0..k2).filter(|&j| self.v(j, s) != 0.0).count()).collect();
        let c: Vec<usize> = (0..k2).map(|r| (0..t).filter(|&s| self.w(r, s) != 0.0).count()).collect();
        let e: Vec<usize> = (0..k2)
            .map(|r| (0..t).filter(|&s| self.w(r, s) != 0.0).map(|s| a[s] * b[s]).sum())
            .collect();
        let clog = |n: &usize| if *n == 0 { 0 } else { ceil_log2(*n) };
        let max_abs = |m: &[f64]| m.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        SchemeStats {
            alpha: a.iter().map(clog).collect(),
            beta: b.iter().map(clog).collect(),
            gamma: c.iter().map(clog).collect(),
            e_max: e.iter().copied().max().unwrap_or(0),
            u_norm: max_abs(&self.u),
            v_norm: max_abs(&self.v),
            w_norm: max_abs(&self.w),
            a,
            b,
            c,
            e,
        }
    }
}

pub fn verify_scheme(s: &BilinearScheme) -> bool {
    s.check().is_ok()
}

pub fn scheme_stats(s: &BilinearScheme) -> SchemeStats {
    s.stats()
}

/// Strassen's 7-product scheme.
///
/// Products, in this order:
/// `M1=(A11+A22)(B11+B22)`, `M2=(A21+A22)B11`, `M3=A11(B12−B22)`,
/// `M4=A22(B21−B11)`, `M5=(A11+A12)B22`, `M6=(A21−A11)(B11+B12)`,
/// `M7=(A12−A22)(B21+B22)`; outputs
/// `C11=M1+M4−M5+M7`, `C12=M3+M5`, `C21=M2+M4`, `C22=M1−M2+M3+M6`.
pub fn strassen_scheme() -> BilinearScheme {
    // block indices, column-major: 11 → 0, 21 → 1, 12 → 2, 22 → 3
    const U: [[f64; 7]; 4] = [
        [1., 0., 1., 0., 1., -1., 0.],
        [0., 1., 0., 0., 0., 1., 0.],
        [0., 0., 0., 0., 1., 0., 1.],
        [1., 1., 0., 1., 0., 0., -1.],
    ];
    const V: [[f64; 7]; 4] = [
        [1., 1., 0., -1., 0., 1., 0.],
        [0., 0., 0., 1., 0., 0., 1.],
        [0., 0., 1., 0., 0., 1., 0.],
        [1., 0., -1., 0., 1., 0., 1.],
    ];
    // output indices, row-major: 11 → 0, 12 → 1, 21 → 2, 22 → 3
    const W: [[f64; 7]; 4] = [
        [1., 0., 0., 1., -1., 0., 1.],
        [0., 0., 1., 0., 1., 0., 0.],
        [0., 1., 0., 1., 0., 0., 0.],
        [1., -1., 1., 0., 0., 1., 0.],
    ];
    let flat = |m: &[[f64; 7]; 4]| m.iter().flatten().copied().collect::<Vec<_>>();
    BilinearScheme::new("strassen", 2, 7, flat(&U), flat(&V), flat(&W)).expect("Strassen coefficients are exact")
}

/// The definition of the product written as a bilinear scheme: `t = k³`
/// products `A_ij B_jl`, ordered by `(i, j, l)`.
pub fn naive_scheme(k: usize) -> BilinearScheme {
    let (k2, t) = (k * k, k * k * k);
    let mut u = vec![0.0; k2 * t];
    let mut v = vec![0.0; k2 * t];
    let mut w = vec![0.0; k2 * t];
    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                let s = (i * k + j) * k + l;
                u[(j * k + i) * t + s] = 1.0;
                v[(l * k + j) * t + s] = 1.0;
                w[(i * k + l) * t + s] = 1.0;
            }
        }
    }
    BilinearScheme::new(format!("naive{k}"), k, t, u, v, w).expect("naive scheme is exact")
}

/// `k = 1`, `t = 1`: scalar multiplication.
pub fn trivial_scheme() -> BilinearScheme {
    naive_scheme(1)
}

/// JSON form: `{"k": 2, "t": 7, "U": [[...]], "V": [[...]], "W": [[...]]}` with
/// every coefficient an exact decimal string and each matrix given as `k²`
/// rows of `t` entries.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SchemeFile {
    #[serde(default)]
    pub name: Option<String>,
    pub k: usize,
    pub t: usize,
    #[serde(rename = "U")]
    pub u: Vec<Vec<String>>,
    #[serde(rename = "V")]
    pub v: Vec<Vec<String>>,
    #[serde(rename = "W")]
    pub w: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl SchemeFile {
    pub fn from_scheme(s: &BilinearScheme) -> Self {
        let rows = |m: &[f64]| -> Vec<Vec<String>> { m.chunks(s.t).map(|row| row.iter().map(|x| format!("{x}")).collect()).collect() };
        Self {
            name: Some(s.name.clone()),
            k: s.k,
            t: s.t,
            u: rows(&s.u),
            v: rows(&s.v),
            w: rows(&s.w),
            tolerance: (s.tolerance > 0.0).then_some(s.tolerance),
        }
    }

    /// Parses the coefficients and runs [`verify_scheme`]; a failing scheme is
    /// rejected with the first wrong output entry.
    pub fn into_scheme(self) -> Result<BilinearScheme, BilinearError> {
        let flatten = |label: &str, m: &[Vec<String>]| -> Result<Vec<f64>, BilinearError> {
            if m.len() != self.k * self.k || m.iter().any(|row| row.len() != self.t) {
                return Err(BilinearError::SchemeShape(format!("{label} must be {}×{}", self.k * self.k, self.t)));
            }
            m.iter()
                .flatten()
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| BilinearError::SchemeShape(format!("{label}: `{s}` is not a decimal number")))
                })
                .collect()
        };
        let (u, v, w) = (flatten("U", &self.u)?, flatten("V", &self.v)?, flatten("W", &self.w)?);
        BilinearScheme::with_tolerance(self.name.clone().unwrap_or_else(|| "scheme".into()), self.k, self.t, u, v, w, self.tolerance.unwrap_or(0.0))
    }
}

pub fn load_scheme_json(text: &str) -> Result<BilinearScheme, BilinearError> {
    let file: SchemeFile = serde_json::from_str(text).map_err(|e| BilinearError::SchemeShape(e.to_string()))?;
    file.into_scheme()
}

pub fn scheme_to_json(s: &BilinearScheme) -> String {
    serde_json::to_string_pretty(&SchemeFile::from_scheme(s)).expect("scheme serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_scheme_verifies() {
        let s = trivial_scheme();
        assert!(verify_scheme(&s));
        let st = s.stats();
        assert_eq!((st.a.clone(), st.b.clone(), st.c.clone(), st.e_max), (vec![1], vec![1], vec![1], 1));
    }

    #[test]
    fn strassen_verifies() {
        assert!(verify_scheme(&strassen_scheme()));
    }

    #[test]
    fn strassen_counts() {
        let st = strassen_scheme().stats();
        assert_eq!(st.a, vec![2, 2, 1, 1, 2, 2, 2]);
        assert_eq!(st.b, vec![2, 1, 2, 2, 1, 2, 2]);
        assert_eq!(st.c, vec![4, 2, 2, 4]);
        assert_eq!(st.e, vec![12, 4, 4, 12]);
        assert_eq!(st.e_max, 12);
        assert_eq!((st.u_norm, st.v_norm, st.w_norm), (1.0, 1.0, 1.0));
        assert_eq!(st.max_exponent_sum(), 7);
        assert!((st.growth_factor().log2() - 3.584_962_500_721_156).abs() < 1e-12);
    }

    #[test]
    fn broken_strassen_is_rejected() {
        let mut s = strassen_scheme();
        s.set_w(3, 5, 0.0); // drop M6 from C22
        assert!(!verify_scheme(&s));
        let defect = s.check().unwrap_err();
        assert_eq!((defect.h, defect.l), (1, 1));
    }

    #[test]
    fn naive_schemes_verify() {
        for k in 1..=4 {
            let s = naive_scheme(k);
            assert!(verify_scheme(&s), "k={k}");
            let st = s.stats();
            assert_eq!(st.e_max, k);
        }
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let s = strassen_scheme();
        let text = scheme_to_json(&s);
        assert_eq!(load_scheme_json(&text).unwrap(), s);

        let mut broken = SchemeFile::from_scheme(&s);
        broken.w[0][0] = "0".into();
        let err = broken.into_scheme().unwrap_err();
        match err {
            BilinearError::SchemeRejected(d) => assert_eq!((d.h, d.l), (0, 0)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(load_scheme_json(r#"{"k":1,"t":1,"U":[["x"]],"V":[["1"]],"W":[["1"]]}"#).is_err());
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(
            BilinearScheme::new("bad", 2, 7, vec![0.0; 27], vec![0.0; 28], vec![0.0; 28]),
            Err(BilinearError::SchemeShape(_))
        ));
    }
}
