use std::collections::BTreeSet;

use mpcore::harness::{render_report, run_suite, Format, SuiteParams, VerificationReport, ALL_OPS, SUITES};
use mpcore::Error;

fn small(primes: &[u64]) -> SuiteParams {
    SuiteParams {
        n_max: 2,
        primes: primes.to_vec(),
        trials: 20,
        ..SuiteParams::default()
    }
}

#[test]
fn full_run_exercises_every_operation() {
    let r = run_suite("all", &small(&[2, 3])).unwrap();
    let missing: Vec<_> = ALL_OPS.iter().filter(|op| !r.ops.contains(**op)).collect();
    assert!(missing.is_empty(), "not exercised: {missing:?}");
    let suites: BTreeSet<_> = r.cases.iter().map(|c| c.suite.as_str()).collect();
    assert_eq!(suites, SUITES.iter().copied().collect());
    assert!(r.pass, "{}", render_report(&r, Format::Text));
}

#[test]
fn json_round_trip() {
    let r = run_suite("cocycle-table", &small(&[3])).unwrap();
    let back: VerificationReport = serde_json::from_str(&render_report(&r, Format::Json)).unwrap();
    assert_eq!(back, r);
}

#[test]
fn same_seed_same_report() {
    let p = small(&[2, 5]);
    let a = render_report(&run_suite("mp-associativity", &p).unwrap(), Format::Json);
    let b = render_report(&run_suite("mp-associativity", &p).unwrap(), Format::Json);
    assert_eq!(a, b);
    let other = SuiteParams { seed: 1, ..p };
    let c = render_report(&run_suite("mp-associativity", &other).unwrap(), Format::Json);
    assert_ne!(a, c);
}

#[test]
fn summary_matches_cases() {
    let r = run_suite("bruhat", &small(&[2])).unwrap();
    assert_eq!(r.summary.total, r.cases.len());
    assert_eq!(r.summary.passed, r.cases.iter().filter(|c| c.pass).count());
    assert_eq!(r.pass, r.summary.failed == 0);
}

#[test]
fn rank_one_ls_case() {
    let r = run_suite("prop-ls-sp", &small(&[2])).unwrap();
    assert!(r.pass);
    let c = r
        .cases
        .iter()
        .find(|c| c.name == "ls-equals-target" && c.params["n"] == 1 && c.params["k"] == 1)
        .unwrap();
    assert_eq!(c.computed, "([[0/1,1/1],[-1/1,0/1]], 1)");
    assert_eq!(c.computed, c.expected);
}

#[test]
fn cocycle_table_at_three_is_trivial() {
    let r = run_suite("cocycle-table", &small(&[3])).unwrap();
    assert!(r.pass);
}

#[test]
fn bad_requests() {
    assert!(matches!(run_suite("nonexistent", &small(&[2])), Err(Error::UnknownSuite(_))));
    assert!(run_suite("bruhat", &SuiteParams { n_max: 0, ..small(&[2]) }).is_err());
    assert!(run_suite("bruhat", &small(&[4])).is_err());
}

#[test]
fn text_report_shows_failures_verbatim() {
    let mut r = run_suite("hilbert-laws", &small(&[2])).unwrap();
    r.cases[0].pass = false;
    r.cases[0].computed = "bogus value".into();
    let r = VerificationReport::new(&r.suite, r.params.clone(), r.cases.clone(), r.ops.clone());
    assert!(!r.pass);
    assert!(render_report(&r, Format::Text).contains("bogus value"));
    assert!(render_report(&r, Format::Json).contains("bogus value"));
}
