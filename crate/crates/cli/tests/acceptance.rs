//! Runs the full acceptance suite once and checks each criterion separately.
//! Every test prints its own pass/fail line, bypassing output capture.

use std::io::Write;
use std::sync::OnceLock;

use dcchaos::{run_suite, RunConfig, Status, SuiteReport};

fn suite() -> &'static SuiteReport {
    static SUITE: OnceLock<SuiteReport> = OnceLock::new();
    SUITE.get_or_init(|| run_suite(&RunConfig::default()).expect("suite runs"))
}

fn check(id: u32) {
    let c = suite().criterion(id).expect("criterion present");
    let _ = writeln!(std::io::stderr(), "{}", c.line());
    assert_eq!(c.status, Status::Pass, "{}\nmeasured: {:#}", c.line(), c.measured);
}

#[test]
fn criterion_1_o1_fixed_point_profile() {
    check(1);
}

#[test]
fn criterion_2_g_pair_checkpoints() {
    check(2);
}

#[test]
fn criterion_3_h_pairs_and_square() {
    check(3);
}

#[test]
fn criterion_4_exact_identities() {
    check(4);
}

#[test]
fn criterion_5_counting_inequalities() {
    check(5);
}

#[test]
fn criterion_6_dc2half_iteration_invariance() {
    check(6);
}

#[test]
fn criterion_7_paper_literal_schedule_separation() {
    check(7);
}

#[test]
fn criterion_8_ramsey_monochromatic() {
    check(8);
}

#[test]
fn criterion_9_classifier_soundness() {
    check(9);
}
