use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wreathmul::grouplib::{factorial, wreath_inverse, wreath_multiply, GroupSpec, Permutation, WreathElement};
use wreathmul::harness::{fit_exponent, run_error_experiment, Algorithm};
use wreathmul::matcore::{flops, naive_multiply, norm, norm_of_difference, Counted, Matrix, NormKind};
use wreathmul::stpalg::{
    assemble, build_config, build_config_with_budget, disassemble, embed, estimate_bytes, flop_model, fourier,
    multiply_batch, predicted_bound_crude, predicted_bound_final, stp_multiply, stp_multiply_with_report,
    InnerMultiplier, StpConfig, StpError,
};

fn random_matrix(n: usize, rng: &mut impl Rng) -> Matrix<f64> {
    Matrix::from_fn(n, n, |_, _| Complex::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)))
}

fn rel_frobenius(got: &Matrix<f64>, want: &Matrix<f64>) -> f64 {
    norm_of_difference(got, want, NormKind::Frobenius).unwrap() / norm(want, NormKind::Frobenius)
}

#[test]
fn matches_the_naive_product() {
    for (m, n) in [(3, 2), (4, 2), (5, 2), (2, 3)] {
        let cfg = build_config(m, n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(u64::from(m));
        for _ in 0..5 {
            let (a, b) = (random_matrix(cfg.n(), &mut rng), random_matrix(cfg.n(), &mut rng));
            let got = stp_multiply(&a, &b, &cfg, &InnerMultiplier::Naive).unwrap();
            assert!(rel_frobenius(&got, &naive_multiply(&a, &b).unwrap()) < 1e-10, "(m,N)=({m},{n})");
        }
    }
}

#[test]
fn identity_is_neutral() {
    let cfg = build_config(4, 2).unwrap();
    let a = random_matrix(cfg.n(), &mut ChaCha8Rng::seed_from_u64(9));
    let id = Matrix::identity(cfg.n());
    assert!(rel_frobenius(&stp_multiply(&id, &a, &cfg, &InnerMultiplier::Naive).unwrap(), &a) < 1e-12);
    assert!(rel_frobenius(&stp_multiply(&a, &id, &cfg, &InnerMultiplier::Naive).unwrap(), &a) < 1e-12);
}

#[test]
fn inner_multipliers_agree() {
    let cfg = build_config(3, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (a, b) = (random_matrix(cfg.n(), &mut rng), random_matrix(cfg.n(), &mut rng));
    let want = naive_multiply(&a, &b).unwrap();
    for inner in [
        InnerMultiplier::Naive,
        InnerMultiplier::Strassen { base_threshold: 1 },
        InnerMultiplier::Stp { m: 3, n_wreath: 2, inner: Box::new(InnerMultiplier::Naive) },
    ] {
        let got = stp_multiply(&a, &b, &cfg, &inner).unwrap();
        assert!(rel_frobenius(&got, &want) < 1e-10, "{}", inner.label());
    }
}

/// The embedding slot of `(u, v)` is the group element `u⁻¹v`.
#[test]
fn slots_are_group_quotients() {
    let cfg = build_config(4, 2).unwrap();
    let spec = *cfg.group();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..500 {
        let mut el = || {
            let h = (0..2)
                .map(|_| spec.element(&[rng.random_range(0..4), rng.random_range(0..4), rng.random_range(0..4)]).unwrap())
                .collect();
            WreathElement::new(&spec, h, Permutation::from_rank(2, rng.random_range(0..2)).unwrap()).unwrap()
        };
        let (u, v) = (el(), el());
        let q = wreath_multiply(&spec, &wreath_inverse(&spec, &u), &v).unwrap();
        let (p, flat) = cfg.slot_of(&u, &v);
        assert_eq!(cfg.perms()[p], q.perm);
        assert_eq!(cfg.decode_h(flat), q.h);
    }
}

/// The swapped-rows pair over `(Z/16)^3`: `x⁻¹y` and `y·x⁻¹` computed with the
/// group law, pinning which of the two quotients the embedding uses.
#[test]
fn swapped_rows_quotients() {
    let spec = GroupSpec::new(16, 3).unwrap();
    let el = |a: [i64; 3], b: [i64; 3], swap: bool| {
        let perm = if swap { Permutation::new(vec![1, 0]).unwrap() } else { Permutation::identity(2) };
        WreathElement::new(&spec, vec![spec.element(&a).unwrap(), spec.element(&b).unwrap()], perm).unwrap()
    };
    let x = el([9, 0, 0], [0, 5, 0], true);
    let y = el([0, 11, 0], [0, 0, 4], false);
    let xinv = wreath_inverse(&spec, &x);
    assert_eq!(wreath_multiply(&spec, &xinv, &y).unwrap(), el([0, 11, 4], [7, 11, 0], true));
    assert_eq!(wreath_multiply(&spec, &y, &xinv).unwrap(), el([0, 6, 0], [7, 0, 4], true));
}

#[test]
fn placement_costs_no_arithmetic() {
    let cfg = build_config(4, 2).unwrap();
    let a = Matrix::<Counted>::from_fn(cfg.n(), cfg.n(), |i, j| Complex::new(Counted((i * j) as f64), Counted(1.0)));
    let (_, report) = stp_multiply_with_report(&a, &a, &cfg, &InnerMultiplier::Naive).unwrap();
    for step in ["embed", "assemble", "disassemble", "output"] {
        assert_eq!(report.get(step), 0, "{step}");
    }
    let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(json["multiply"].as_u64().unwrap(), report.get("multiply"));
}

#[test]
fn frobenius_mass_through_the_pipeline() {
    let cfg = build_config(4, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let a = random_matrix(cfg.n(), &mut rng);
    let fro2 = norm(&a, NormKind::Frobenius).powi(2);
    let (mut ea, _) = embed(&a, &a, &cfg).unwrap();
    assert!((ea.squared_mass() / fro2 - 1.0).abs() < 1e-12);
    fourier(&mut ea, false);
    // Parseval per coordinate.
    assert!((ea.squared_mass() / (cfg.hn() as f64 * fro2) - 1.0).abs() < 1e-12);
    // Each transformed entry lands in at most N! block matrices.
    let batch = assemble(&ea, &cfg);
    assert!(batch.squared_mass() <= cfg.block_order() as f64 * cfg.hn() as f64 * fro2 * (1.0 + 1e-12));
}

/// For `N = 2` the block matrix of `χ₀` is
/// `[[x̂(id, χ₀), x̂(s, χ₀)], [x̂(s, s·χ₀), x̂(id, s·χ₀)]]` with `s` the swap.
#[test]
fn two_by_two_blocks() {
    let cfg = build_config(3, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let a = random_matrix(cfg.n(), &mut rng);
    let (mut ea, _) = embed(&a, &a, &cfg).unwrap();
    fourier(&mut ea, false);
    let batch = assemble(&ea, &cfg);
    let (id, s) = (0, 1);
    assert!(cfg.perms()[s].apply(0) == 1);
    for r in 0..cfg.xi_count() {
        let chi = cfg.act_on_rep(id, r);
        let schi = cfg.act_on_rep(s, r);
        let rep = cfg.xi_rep(r);
        assert_eq!(chi, rep[0] as usize * cfg.h_order() + rep[1] as usize);
        assert_eq!(schi, rep[1] as usize * cfg.h_order() + rep[0] as usize);
        let m = batch.entries(r);
        assert_eq!(m, &[ea.get(id, chi), ea.get(s, chi), ea.get(s, schi), ea.get(id, schi)]);
    }
}

/// Characters fixed by a permutation have several witnesses `κ`; all of them
/// read the same value out of the block product.
#[test]
fn stabilized_characters_are_consistent() {
    let cfg = build_config(3, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (a, b) = (random_matrix(cfg.n(), &mut rng), random_matrix(cfg.n(), &mut rng));
    let (mut ea, mut eb) = embed(&a, &b, &cfg).unwrap();
    fourier(&mut ea, false);
    fourier(&mut eb, false);
    let c = multiply_batch(&assemble(&ea, &cfg), &assemble(&eb, &cfg), &InnerMultiplier::Naive).unwrap();
    let hat = disassemble(&c, &cfg);
    let nf = cfg.block_order();
    let mut fixed = 0;
    for r in 0..cfg.xi_count() {
        let rep = cfg.xi_rep(r);
        if rep[0] != rep[1] {
            continue;
        }
        fixed += 1;
        let chi = cfg.act_on_rep(0, r);
        assert_eq!(cfg.orbit_of(chi), (r, 0));
        let block = c.entries(r);
        for rho in 0..nf {
            let rho_inv = (0..nf).find(|&q| cfg.perms()[q].compose(&cfg.perms()[rho]).is_identity()).unwrap();
            for k in 0..nf {
                let col = cfg.perms().iter().position(|p| *p == cfg.perms()[rho_inv].compose(&cfg.perms()[k])).unwrap();
                assert!((block[k * nf + col] - hat.get(rho, chi)).norm() < 1e-9);
            }
        }
    }
    assert_eq!(fixed, cfg.h_order());
}

#[test]
fn bounds_hold_at_working_precision() {
    for (m, n) in [(3, 2), (4, 2)] {
        let cfg = build_config(m, n).unwrap();
        let reports = run_error_experiment(Algorithm::Stp { m, n_wreath: n }, &[cfg.n()], 10, 11).unwrap();
        assert!(reports[0].violation().is_none());
        let mu = InnerMultiplier::Naive.mu_frobenius(cfg.block_order()).unwrap();
        assert_eq!(reports[0].predicted, predicted_bound_final(&cfg, mu, 2f64.powi(-24)));
    }
}

#[test]
fn crude_bound_dominates_final() {
    for (m, n) in [(3, 2), (4, 2), (5, 2), (2, 3)] {
        let cfg = build_config(m, n).unwrap();
        let mu = InnerMultiplier::Naive.mu_frobenius(cfg.block_order()).unwrap();
        assert!(cfg.h_order() >= cfg.block_order());
        assert!(predicted_bound_crude(&cfg, mu, 1.0) >= predicted_bound_final(&cfg, mu, 1.0));
    }
}

fn counted_flops(cfg: &StpConfig) -> u64 {
    let a = Matrix::<Counted>::from_fn(cfg.n(), cfg.n(), |i, j| Complex::new(Counted((i + j) as f64), Counted(0.0)));
    flops::reset();
    stp_multiply(&a, &a, cfg, &InnerMultiplier::Naive).unwrap();
    flops::read()
}

#[test]
fn flops_track_the_operation_model() {
    let pairs: Vec<(f64, f64)> = [(2, 2), (3, 2), (4, 2), (5, 2), (6, 2)]
        .iter()
        .map(|&(m, n)| {
            let cfg = build_config(m, n).unwrap();
            (flop_model(&cfg), counted_flops(&cfg) as f64)
        })
        .collect();
    let fit = fit_exponent(&pairs).unwrap();
    assert!((fit.slope - 1.0).abs() < 0.1, "slope {}", fit.slope);
}

#[test]
fn memory_guard() {
    assert!(matches!(build_config_with_budget(16, 2, 1 << 20), Err(StpError::BudgetExceeded { .. })));
    let est = estimate_bytes(16, 2).unwrap();
    assert!(est < 4 << 30);
    assert_eq!(factorial(2), Some(2));
    assert!(matches!(build_config(3, 1), Err(StpError::InvalidParameters(_))));
}
