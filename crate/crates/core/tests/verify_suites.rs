use cremona::verify::{run_all, SUITES};

#[test]
fn every_suite_passes() {
    let reports = run_all();
    assert_eq!(reports.len(), SUITES.len());
    for r in reports {
        assert!(r.passed(), "{}", r.to_json());
    }
}
