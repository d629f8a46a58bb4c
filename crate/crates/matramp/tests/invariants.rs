//! The module-level invariants, run as one suite. Each check prints its
//! outcome; any failure fails the target.

use matramp::verify::run_invariant_suite;

#[test]
fn invariant_suite_is_green() {
    let results = run_invariant_suite(7);
    assert_eq!(results.len(), 27);
    let mut failed = Vec::new();
    for r in &results {
        let tag = if r.pass { "PASS" } else { "FAIL" };
        println!("{tag} {} {}", r.name, r.detail);
        if !r.pass {
            failed.push(r.name);
        }
    }
    assert!(failed.is_empty(), "failing checks: {failed:?}");
}

#[test]
fn suite_is_seed_stable() {
    // A different seed must not change the verdicts, only the details.
    let results = run_invariant_suite(20240);
    let failed: Vec<_> = results.iter().filter(|r| !r.pass).map(|r| r.name).collect();
    assert!(failed.is_empty(), "failing checks: {failed:?}");
}
