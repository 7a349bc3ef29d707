use std::f64::consts::PI;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wreathmul::wreathfft::{dft_forward, dft_inverse, fft_error_constant, FftStats, GroupArray};

const CASES: [(usize, usize); 8] = [(3, 1), (3, 3), (3, 6), (4, 1), (4, 3), (4, 6), (16, 1), (16, 3)];

fn random_array(m: usize, d: usize, rng: &mut impl Rng) -> GroupArray<f64> {
    let data = (0..m.pow(d as u32)).map(|_| Complex::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))).collect();
    GroupArray::new(m, d, data).unwrap()
}

fn digits(mut i: usize, m: usize, d: usize) -> Vec<usize> {
    let mut v = vec![0; d];
    for k in (0..d).rev() {
        v[k] = i % m;
        i /= m;
    }
    v
}

/// Character table of `(Z/m)^d`: `χ_c(x) = exp(2πi⟨x, c⟩/m)`.
fn characters(m: usize, d: usize) -> Vec<Vec<Complex<f64>>> {
    let len = m.pow(d as u32);
    (0..len)
        .map(|c| {
            let dc = digits(c, m, d);
            (0..len)
                .map(|x| {
                    let dot: usize = digits(x, m, d).iter().zip(&dc).map(|(a, b)| a * b).sum::<usize>() % m;
                    Complex::from_polar(1.0, 2.0 * PI * dot as f64 / m as f64)
                })
                .collect()
        })
        .collect()
}

fn l2(v: &[Complex<f64>]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn rel(a: &[Complex<f64>], b: &[Complex<f64>]) -> f64 {
    let d: Vec<Complex<f64>> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    l2(&d) / l2(b)
}

#[test]
fn agrees_with_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (m, d) in CASES {
        let a = random_array(m, d, &mut rng);
        let table = characters(m, d);
        let want: Vec<Complex<f64>> = table.iter().map(|row| row.iter().zip(a.data()).map(|(c, x)| c * x).sum()).collect();
        assert!(rel(dft_forward(&a).data(), &want) < 1e-12, "m={m} D={d}");
    }
}

#[test]
fn round_trip_and_parseval() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for (m, d) in CASES {
        let a = random_array(m, d, &mut rng);
        let fa = dft_forward(&a);
        assert!(rel(dft_inverse(&fa).data(), a.data()) < 1e-12, "m={m} D={d}");
        // ‖Fa‖₂ = |H|^{1/2}‖a‖₂, i.e. |H^N|^{N/2} on arrays over H^N.
        let h = a.data().len() as f64;
        assert!((l2(fa.data()) / (h.sqrt() * l2(a.data())) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn convolution_theorem_and_linearity() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (m, d) in [(3, 3), (4, 3), (16, 1), (16, 2)] {
        let (a, b) = (random_array(m, d, &mut rng), random_array(m, d, &mut rng));
        let len = a.data().len();
        let sub = |x: usize, y: usize| {
            let (dx, dy) = (digits(x, m, d), digits(y, m, d));
            dx.iter().zip(&dy).fold(0, |acc, (p, q)| acc * m + (p + m - q) % m)
        };
        let conv: Vec<Complex<f64>> =
            (0..len).map(|g| (0..len).map(|h| a.data()[h] * b.data()[sub(g, h)]).sum()).collect();
        let lhs = dft_forward(&GroupArray::new(m, d, conv).unwrap());
        let (fa, fb) = (dft_forward(&a), dft_forward(&b));
        let rhs: Vec<Complex<f64>> = fa.data().iter().zip(fb.data()).map(|(x, y)| x * y).collect();
        assert!(rel(lhs.data(), &rhs) < 1e-12, "m={m} D={d}");

        let s = Complex::new(0.5, -2.0);
        let combo: Vec<Complex<f64>> = a.data().iter().zip(b.data()).map(|(x, y)| x * s + y).collect();
        let f_combo = dft_forward(&GroupArray::new(m, d, combo).unwrap());
        let want: Vec<Complex<f64>> = fa.data().iter().zip(fb.data()).map(|(x, y)| x * s + y).collect();
        assert!(rel(f_combo.data(), &want) < 1e-12);
    }
}

#[test]
fn forward_then_conjugate_kernel_is_scaled_identity() {
    // F applied to the conjugate of F·e_k gives |H|·e_k, i.e. F·F̄ = |H|·I.
    for (m, d) in [(3, 2), (4, 2), (6, 2)] {
        let len = m * m;
        for k in [0, 1, len - 1] {
            let mut e = GroupArray::<f64>::zeros(m, d);
            e.data_mut()[k] = Complex::new(1.0, 0.0);
            let mut conj = dft_forward(&e);
            for z in conj.data_mut() {
                *z = z.conj();
            }
            let col = dft_forward(&conj);
            for (i, z) in col.data().iter().enumerate() {
                let want = if i == k { len as f64 } else { 0.0 };
                assert!((z - Complex::new(want, 0.0)).norm() < 1e-12, "m={m} k={k} i={i}");
            }
        }
    }
}

#[test]
fn working_precision_error_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (m, d) = (16usize, 3usize);
    let f = fft_error_constant().f_bound(m.pow(d as u32));
    assert_eq!(FftStats::for_modulus(m).c_f, fft_error_constant().c_f);
    let eps = 2f64.powi(-24);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let a = random_array(m, d, &mut rng);
        let a32 = GroupArray::new(m, d, a.data().iter().map(|z| Complex::new(z.re as f32, z.im as f32)).collect()).unwrap();
        let exact_in = GroupArray::new(m, d, a32.data().iter().map(|z| Complex::new(z.re as f64, z.im as f64)).collect()).unwrap();
        let want = dft_forward(&exact_in);
        let got: Vec<Complex<f64>> = dft_forward(&a32).data().iter().map(|z| Complex::new(z.re as f64, z.im as f64)).collect();
        let ratio = rel(&got, want.data()) / (f * eps);
        worst = worst.max(ratio);
    }
    assert!(worst <= 1.0, "worst ratio {worst}");
}

#[test]
fn rejects_bad_shapes() {
    assert!(GroupArray::<f64>::new(3, 2, vec![Complex::new(0.0, 0.0); 8]).is_err());
    assert!(GroupArray::<f64>::new(0, 1, vec![]).is_err());
}
