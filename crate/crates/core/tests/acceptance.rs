//! The acceptance checklist as an integration test target: one test per
//! criterion, one printed pass/fail line each. Criteria 2, 5, 6 and 8
//! share a single sweep (minutes-scale on one core).

use isolens_core::acceptance::{criterion, needs_sweep, sweep_data, SweepData};
use once_cell::sync::Lazy;

static SWEEP: Lazy<SweepData> = Lazy::new(sweep_data);

fn run(id: usize) {
    let data = if needs_sweep(id) { Some(&*SWEEP) } else { None };
    let result = criterion(id, data);
    println!("{}", result.line());
    assert!(result.passed, "{}", result.line());
}

#[test]
fn criterion_01_golden_example() {
    run(1);
}

#[test]
fn criterion_02_theorem_sweep() {
    run(2);
}

#[test]
fn criterion_03_cusp_bifurcation() {
    run(3);
}

#[test]
fn criterion_04_cubic_facts() {
    run(4);
}

#[test]
fn criterion_05_index_bounds() {
    run(5);
}

#[test]
fn criterion_06_classifier_consistency() {
    run(6);
}

#[test]
fn criterion_07_region_existence() {
    run(7);
}

#[test]
fn criterion_08_perturbation_stability() {
    run(8);
}

#[test]
fn criterion_09_basins() {
    run(9);
}

#[test]
fn criterion_10_symmetry_suite() {
    run(10);
}
