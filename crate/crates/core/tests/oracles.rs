//! Library results against the independent reference computations.

use contraction_groups::classify::{omega_p_contractive, schur_cohn, theta_x, RationalPoly};
use contraction_groups::cocycle::{eval_basis_omega, eval_eta};
use contraction_groups::selftest::oracle;
use contraction_groups::{random, Modulus};
use num::BigRational;
use rand::Rng;

#[test]
fn basis_omega_matches_dense_loop() {
    let mut rng = random::rng(11);
    for &(p, m) in &[(2, 1), (3, 2), (5, 1)] {
        let r = Modulus::new(p, m).unwrap();
        for _ in 0..300 {
            let n = rng.gen_range(-4..=4);
            let x = random::series(&mut rng, r, -5, 5);
            let y = random::series(&mut rng, r, -5, 5);
            let lib = eval_basis_omega(n, &x, &y).unwrap();
            let dense = oracle::basis_omega(n, &x, &y);
            assert!(lib.agrees_with(&dense).unwrap(), "n={n} x={x} y={y}: {lib} vs {dense}");
            assert!(lib.is_exact());
        }
    }
}

#[test]
fn eta_matches_per_degree_sum() {
    let mut rng = random::rng(12);
    for &p in &[2, 3] {
        let r = Modulus::new(p, 1).unwrap();
        for _ in 0..300 {
            let len = rng.gen_range(1..=8);
            let s = random::bits(&mut rng, len);
            let x = random::series(&mut rng, r, -4, 6);
            let y = random::series(&mut rng, r, -4, 6);
            let lib = eval_eta(&s, &x, &y).unwrap();
            let dense = oracle::eta(&s, &x, &y);
            assert_eq!(lib.sub(&dense).unwrap().valuation(), None, "s={} x={x} y={y}", s.to_bit_string());
        }
    }
}

#[test]
fn theta_matches_shift_sum() {
    let mut rng = random::rng(13);
    let r = Modulus::new(3, 2).unwrap();
    for _ in 0..200 {
        let x = random::series(&mut rng, r, -3, 5);
        let z = random::series(&mut rng, r, 0, 4);
        assert_eq!(theta_x(&x, &z).unwrap(), oracle::theta(&x, &z));
    }
}

#[test]
fn schur_cohn_matches_root_moduli() {
    let mut rng = random::rng(14);
    let mut agreed = 0;
    for _ in 0..400 {
        let d = rng.gen_range(1..=4);
        let lower: Vec<BigRational> = (0..d)
            .map(|_| BigRational::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=8).into()))
            .collect();
        let roots = oracle::roots(&lower);
        let max = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
        // Skip polynomials with a root too close to the circle for floats.
        if (max - 1.0).abs() < 1e-6 {
            continue;
        }
        let f = RationalPoly::monic(lower).unwrap();
        assert_eq!(schur_cohn(&f), max < 1.0, "{f}: max |root| = {max}");
        agreed += 1;
    }
    assert!(agreed > 300);
}

#[test]
fn valuation_test_matches_companion_power() {
    let mut rng = random::rng(15);
    for &p in &[2u64, 3, 5] {
        for _ in 0..200 {
            let d = rng.gen_range(1..=4);
            let lower: Vec<i64> = (0..d).map(|_| rng.gen_range(-12..=12)).collect();
            let f = RationalPoly::monic_int(&lower).unwrap();
            assert_eq!(
                omega_p_contractive(&f, p),
                oracle::companion_nilpotent_mod_p(&lower, p),
                "{f} at p={p}"
            );
        }
    }
}
