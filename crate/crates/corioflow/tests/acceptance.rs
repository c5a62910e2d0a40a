//! One test per acceptance criterion. Each prints a single verdict line with
//! the measured values before asserting, so a full run reads as a report.

use corioflow::acceptance::{run_criterion, CriterionOutcome};

fn check(outcome: CriterionOutcome) {
    let line = outcome.line();
    println!("{line}");
    assert!(outcome.passed, "{line}");
}

#[test]
fn c01_regime_trichotomy() {
    check(run_criterion(1));
}

#[test]
fn c02_growth_rate_curve() {
    check(run_criterion(2));
}

#[test]
fn c03_multiplier_closed_forms() {
    check(run_criterion(3));
}

#[test]
fn c04_m_bound_constants() {
    check(run_criterion(4));
}

#[test]
fn c05_enhanced_dissipation_envelope() {
    check(run_criterion(5));
}

#[test]
fn c06_inviscid_damping_bound() {
    check(run_criterion(6));
}

#[test]
fn c07_dispersive_decay_fit() {
    check(run_criterion(7));
}

#[test]
fn c08_instability_growth_rate() {
    check(run_criterion(8));
}

#[test]
fn c09_linearization_deviation() {
    check(run_criterion(9));
}

#[test]
fn c10_bootstrap_and_heat_identity() {
    check(run_criterion(10));
}

#[test]
fn c11_threshold_scan_baselines() {
    check(run_criterion(11));
}
