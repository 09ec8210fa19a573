use std::sync::{Mutex, OnceLock};

use symgraph::acceptance::Runner;
use symgraph::classify::ClassifyConfig;

fn runner() -> &'static Mutex<Runner> {
    static RUNNER: OnceLock<Mutex<Runner>> = OnceLock::new();
    RUNNER.get_or_init(|| Mutex::new(Runner::new(ClassifyConfig::default())))
}

fn check(id: u8) {
    let outcome = runner().lock().unwrap_or_else(|e| e.into_inner()).run(id).expect("criterion ran");
    println!("{outcome}");
    assert!(outcome.passed, "criterion {id} failed: {}", outcome.summary);
}

#[test]
fn criterion_01_enumeration_counts() {
    check(1);
}

#[test]
fn criterion_02_four_edge_classification() {
    check(2);
}

#[test]
fn criterion_03_six_edge_classification() {
    check(3);
}

#[test]
fn criterion_04_discriminant_anchors() {
    check(4);
}

#[test]
fn criterion_05_gap_two_discriminants() {
    check(5);
}

#[test]
fn criterion_06_discriminants_in_square_cone() {
    check(6);
}

#[test]
fn criterion_07_coefficient_formulas() {
    check(7);
}

#[test]
fn criterion_08_basis_structure() {
    check(8);
}

#[test]
fn criterion_09_coloring_oracle() {
    check(9);
}

#[test]
fn criterion_10_extension_property() {
    check(10);
}
