use paleylab::harness::cache::CliqueCache;
use paleylab::harness::report::{VerificationReport, SCHEMA_VERSION};
use paleylab::harness::suites::{verify_gauss_formulas, verify_main, verify_peisert, SuiteOptions};
use serde_json::json;

#[test]
fn cached_and_uncached_reports_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cached = SuiteOptions { cache: Some(CliqueCache::new(dir.path())), ..SuiteOptions::default() };
    let cold = verify_main(&[9, 25, 49], &cached).unwrap().to_json().unwrap();
    let warm = verify_main(&[9, 25, 49], &cached).unwrap().to_json().unwrap();
    let plain = verify_main(&[9, 25, 49], &SuiteOptions::default()).unwrap().to_json().unwrap();
    assert_eq!(cold, warm);
    assert_eq!(cold, plain);
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
}

#[test]
fn report_schema_fields() {
    let r = verify_main(&[9], &SuiteOptions::default()).unwrap();
    let v: serde_json::Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
    assert_eq!(v["schema_version"], json!(SCHEMA_VERSION));
    assert_eq!(v["suite"], json!("main"));
    assert_eq!(v["provenance"][0]["descriptor"], json!("3^2/1,0,1/4"));
    assert_eq!(v["totals"]["failed"], json!(0));
    for case in v["cases"].as_array().unwrap() {
        assert!(case["verdict"] == json!("PASS") || case["verdict"] == json!("FAIL"));
    }
    let back: VerificationReport = serde_json::from_value(v).unwrap();
    assert_eq!(back, r);
}

#[test]
fn non_square_orders_are_rejected() {
    assert!(verify_main(&[27], &SuiteOptions::default()).is_err());
    assert!(verify_main(&[10], &SuiteOptions::default()).is_err());
}

#[test]
fn gauss_table_examples() {
    let (report, rows) = verify_gauss_formulas(49, &SuiteOptions::default()).unwrap();
    assert!(report.passed(), "{}", report.summary());
    let value = |q: u32, d: u32, case: &str| {
        rows.iter().find(|r| r.q == q && r.d == d && r.j == 1 && r.case == case).map(|r| r.formula.clone())
    };
    assert_eq!(value(25, 3, "stickelberger").as_deref(), Some("+5"));
    assert_eq!(value(49, 4, "stickelberger").as_deref(), Some("+7"));
    assert_eq!(value(49, 4, "peisert-quartic").as_deref(), Some("+7"));
    // no closed form at (9, 8): the direct value alone is recorded
    let row = rows.iter().find(|r| r.q == 9 && r.d == 8).unwrap();
    assert!(row.case.is_empty() && !row.direct.is_empty());
    assert!(report.cases_tagged("gauss-sum-modulus").any(|c| c.inputs == json!({"q": 9, "d": 8, "j": 1}) && c.passed()));
}

#[test]
fn peisert_suite_without_scan_field() {
    let r = verify_peisert(&[9, 49], 20, 5, &SuiteOptions::default()).unwrap();
    assert!(r.passed(), "{}", r.summary());
    assert_eq!(r.cases_tagged("vanishing-criterion").count(), 20);
    assert_eq!(r.cases_tagged("kernel-criterion-equivalence").count(), 0);
}
