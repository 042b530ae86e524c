//! Runs every acceptance criterion at its pinned sample sizes and prints one
//! pass/fail line per criterion.

use contraction_groups::selftest::{self, CriterionOutcome};

const SEED: u64 = 20240601;

fn run(outcome: CriterionOutcome) {
    println!("{outcome}");
    assert!(outcome.passed, "{outcome}");
}

#[test]
fn criterion_01_cocycle_laws() {
    run(selftest::criterion_1(SEED));
}

#[test]
fn criterion_02_ultrametric_bounds() {
    run(selftest::criterion_2(SEED));
}

#[test]
fn criterion_03_parameter_round_trip() {
    run(selftest::criterion_3(SEED));
}

#[test]
fn criterion_04_extension_axioms() {
    run(selftest::criterion_4(SEED));
}

#[test]
fn criterion_05_center_dichotomy() {
    run(selftest::criterion_5(SEED));
}

#[test]
fn criterion_06_bit_recovery() {
    run(selftest::criterion_6(SEED));
}

#[test]
fn criterion_07_sections() {
    run(selftest::criterion_7(SEED));
}

#[test]
fn criterion_08_classification() {
    run(selftest::criterion_8(SEED));
}

#[test]
fn criterion_09_contractivity_oracles() {
    run(selftest::criterion_9(SEED));
}

#[test]
fn criterion_10_theta_morphisms() {
    run(selftest::criterion_10(SEED));
}

#[test]
fn all_criteria_summary() {
    let outcomes = selftest::run_all(SEED);
    for o in &outcomes {
        println!("{o}");
    }
    assert!(outcomes.iter().all(|o| o.passed));
}
