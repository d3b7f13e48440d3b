use steinberg_core::suite::{self, Profile, SuiteOptions};

#[test]
fn tampered_rewriting_is_caught() {
    let opts = SuiteOptions { tamper: true, ..SuiteOptions::new(0, Profile::Quick) };
    let centraliser = suite::diagonal_centraliser_suite(&opts);
    assert!(!centraliser.passed);
    assert!(!centraliser.witnesses.is_empty());
    let rewriting = suite::rewriting_suite(&opts);
    assert!(!rewriting.passed);
    assert!(!suite::bridge_suite(&opts).passed);
    // the groupoid suites do not rewrite and are unaffected
    assert!(suite::unit_space_suite(&opts).passed);
}

#[test]
fn reports_are_deterministic() {
    let opts = SuiteOptions::new(1, Profile::Quick);
    for run in [suite::diagonal_centraliser_suite, suite::rewriting_suite, suite::uniqueness_suite] {
        let a = serde_json::to_string(&run(&opts)).unwrap();
        let b = serde_json::to_string(&run(&opts)).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn seeds_change_the_sample() {
    let a = suite::uniqueness_suite(&SuiteOptions::new(1, Profile::Quick));
    let b = suite::uniqueness_suite(&SuiteOptions::new(2, Profile::Quick));
    assert!(a.passed && b.passed);
    assert_ne!(a.stats, b.stats);
}
