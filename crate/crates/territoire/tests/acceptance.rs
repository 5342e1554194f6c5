//! The acceptance suite as a test target: one pass/fail line per criterion.

use territoire::acceptance;
use territoire::config::RunConfig;

#[test]
fn acceptance_criteria() {
    let cfg = RunConfig::default();
    let results = acceptance::run_all(&cfg).expect("acceptance suite must complete");
    assert_eq!(results.len(), 10);
    let mut all_pass = true;
    for r in &results {
        println!(
            "criterion {:>2} [{}]: {} — {}",
            r.id,
            if r.pass { "PASS" } else { "FAIL" },
            r.name,
            r.details.replace('\n', "; ")
        );
        all_pass &= r.pass;
    }
    assert!(all_pass, "at least one acceptance criterion failed");
}
