use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{run_error_experiment, Algorithm};
use crate::bilinear::{naive_scheme, strassen_scheme, verify_scheme};
use crate::grouplib::{check_stpp, running_example_triples, stpp_family, GroupError};
use crate::matcore::{naive_multiply, norm, norm_of_difference, NormKind};
use crate::stpalg::{build_config, stp_multiply, InnerMultiplier, StpError};
use crate::wreathfft::{dft_forward, dft_inverse, GroupArray};

/// Result of one `verify` check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }

    fn from_result(name: impl Into<String>, r: Result<String, String>) -> Self {
        match r {
            Ok(detail) => Self::new(name, true, detail),
            Err(detail) => Self::new(name, false, detail),
        }
    }
}

/// Scheme verification, STPP checks of the bundled triples, transform
/// contracts, oracle equivalence of the wreath-product algorithm, and a short
/// bound experiment per algorithm. `quick` trims trial counts and sizes.
pub fn run_verify(quick: bool) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    for s in [strassen_scheme(), naive_scheme(2), naive_scheme(3)] {
        out.push(CheckOutcome::new(format!("scheme {} verifies", s.name()), verify_scheme(&s), ""));
    }
    let mut corrupted = strassen_scheme();
    corrupted.set_w(0, 0, corrupted.w(0, 0) + 1.0);
    out.push(CheckOutcome::new("corrupted strassen scheme is rejected", !verify_scheme(&corrupted), ""));

    out.push(CheckOutcome::from_result("stpp running example m=16", stpp_check(running_example_triples(16))));
    let max_n = if quick { 3 } else { 4 };
    for m in 2..=4 {
        for n in 1..=max_n {
            out.push(CheckOutcome::from_result(format!("stpp family N={n} m={m}"), stpp_check(stpp_family(n, m))));
        }
    }

    let dims: &[usize] = if quick { &[1, 2] } else { &[1, 3] };
    for m in [3usize, 4, 16] {
        for &d in dims {
            out.push(CheckOutcome::from_result(format!("fft contracts m={m} D={d}"), fft_check(m, d)));
        }
    }

    let trials = if quick { 2 } else { 10 };
    for (m, n) in [(3, 2), (4, 2), (2, 3)] {
        out.push(CheckOutcome::from_result(format!("stp oracle ({m},{n})"), oracle_check(m, n, trials)));
    }

    let experiments = [
        (Algorithm::Naive, vec![16, 64]),
        (Algorithm::strassen(), if quick { vec![16, 64] } else { vec![16, 64, 256] }),
        (Algorithm::Stp { m: 3, n_wreath: 2 }, vec![8]),
    ];
    for (alg, sizes) in experiments {
        let r = run_error_experiment(alg, &sizes, trials, 0).map_err(|e| e.to_string()).and_then(|reports| {
            match reports.iter().find_map(|r| r.violation()) {
                Some(v) => Err(v.to_string()),
                None => {
                    let worst = reports.iter().map(|r| r.measured_max / r.predicted).fold(0.0, f64::max);
                    Ok(format!("max ratio {worst:.3e}"))
                }
            }
        });
        out.push(CheckOutcome::from_result(format!("bound holds for {alg}"), r));
    }
    out
}

fn stpp_check(t: Result<crate::grouplib::StppTriples, GroupError>) -> Result<String, String> {
    let t = t.map_err(|e| e.to_string())?;
    match check_stpp(&t) {
        Ok(true) => Ok(format!("{} triples in (Z/{})^{}", t.n(), t.group().m, t.group().d)),
        Ok(false) => Err("violated".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn random_array(m: usize, d: usize, rng: &mut ChaCha8Rng) -> GroupArray<f64> {
    let data = (0..m.pow(d as u32))
        .map(|_| Complex::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)))
        .collect();
    GroupArray::new(m, d, data).expect("shape")
}

fn rel_l2(a: &[Complex<f64>], b: &[Complex<f64>]) -> f64 {
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let base: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    (diff / base).sqrt()
}

/// Brute-force `Σ_x a[x]·exp(2πi⟨x, χ⟩/m)` by direct summation.
fn brute_force_dft(a: &GroupArray<f64>) -> Vec<Complex<f64>> {
    let (m, d) = (a.m(), a.dims());
    let digits = |mut i: usize| {
        let mut v = vec![0usize; d];
        for k in (0..d).rev() {
            v[k] = i % m;
            i /= m;
        }
        v
    };
    let len = a.data().len();
    (0..len)
        .map(|chi| {
            let c = digits(chi);
            (0..len)
                .map(|x| {
                    let dot: usize = digits(x).iter().zip(&c).map(|(p, q)| p * q).sum::<usize>() % m;
                    a.data()[x] * Complex::from_polar(1.0, 2.0 * std::f64::consts::PI * dot as f64 / m as f64)
                })
                .sum()
        })
        .collect()
}

fn fft_check(m: usize, d: usize) -> Result<String, String> {
    const TOL: f64 = 1e-12;
    let mut rng = ChaCha8Rng::seed_from_u64((m * 31 + d) as u64);
    let (a, b) = (random_array(m, d, &mut rng), random_array(m, d, &mut rng));
    let (fa, fb) = (dft_forward(&a), dft_forward(&b));
    let len = a.data().len();

    let round_trip = rel_l2(dft_inverse(&fa).data(), a.data());
    let mass = |x: &[Complex<f64>]| x.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let parseval = (mass(fa.data()) / (len as f64 * mass(a.data())) - 1.0).abs();
    let brute = if len <= 4096 { rel_l2(fa.data(), &brute_force_dft(&a)) } else { 0.0 };

    let mut conv = vec![Complex::new(0.0, 0.0); len];
    let sub = |g: usize, h: usize| {
        let (mut r, mut p, mut g, mut h) = (0, 1, g, h);
        for _ in 0..d {
            r += ((g % m + m - h % m) % m) * p;
            p *= m;
            g /= m;
            h /= m;
        }
        r
    };
    for (g, c) in conv.iter_mut().enumerate() {
        *c = (0..len).map(|h| a.data()[h] * b.data()[sub(g, h)]).sum();
    }
    let conv_hat = dft_forward(&GroupArray::new(m, d, conv).expect("shape"));
    let pointwise: Vec<Complex<f64>> = fa.data().iter().zip(fb.data()).map(|(x, y)| x * y).collect();
    let convolution = rel_l2(conv_hat.data(), &pointwise);

    let worst = round_trip.max(parseval).max(brute).max(convolution);
    let detail = format!("round trip {round_trip:.1e}, parseval {parseval:.1e}, brute force {brute:.1e}, convolution {convolution:.1e}");
    if worst <= TOL { Ok(detail) } else { Err(detail) }
}

fn oracle_check(m: u32, n_wreath: usize, trials: usize) -> Result<String, String> {
    let run = || -> Result<f64, StpError> {
        let cfg = build_config(m, n_wreath)?;
        let mut rng = ChaCha8Rng::seed_from_u64(u64::from(m) * 10 + n_wreath as u64);
        let mut worst = 0.0f64;
        for _ in 0..trials {
            let a = super::random_matrix::<f64>(cfg.n(), &mut rng);
            let b = super::random_matrix::<f64>(cfg.n(), &mut rng);
            let got = stp_multiply(&a, &b, &cfg, &InnerMultiplier::Naive)?;
            let want = naive_multiply(&a, &b)?;
            worst = worst.max(norm_of_difference(&got, &want, NormKind::Frobenius)? / norm(&want, NormKind::Frobenius));
        }
        Ok(worst)
    };
    match run() {
        Ok(w) if w <= 1e-10 => Ok(format!("max relative difference {w:.1e}")),
        Ok(w) => Err(format!("max relative difference {w:.1e} exceeds 1e-10")),
        Err(e) => Err(e.to_string()),
    }
}
