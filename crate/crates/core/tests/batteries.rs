use addcomb::verify::{self, Config, Report};
use addcomb::{Exec, GroupFn, Result};

fn reflected_correlate(f: &GroupFn, g: &GroupFn) -> Result<GroupFn> {
    Ok(addcomb::transform::correlate(f, g)?.reflect())
}

#[test]
fn full_report_is_deterministic_and_round_trips() {
    let cfg = Config::new(7, 6);
    let a = verify::run_all(&cfg, 10, &[7, 13]).unwrap();
    let b = verify::run_all(&Config { exec: Exec::Sequential, ..cfg }, 10, &[7, 13]).unwrap();
    assert!(a.pass);
    let (ja, jb) = (a.to_json().unwrap(), b.to_json().unwrap());
    assert_eq!(ja, jb);
    assert_eq!(Report::from_json(&ja).unwrap(), a);
    assert!(a.metadata.timestamp.is_none());
    assert!(a.suites.iter().all(|s| s.summary.runtime_ms.is_none()));
}

#[test]
fn seeds_change_instances() {
    let a = verify::run_identity_suite(1, 4).unwrap();
    let b = verify::run_identity_suite(2, 4).unwrap();
    assert_ne!(a.record("parseval").unwrap().instance, b.record("parseval").unwrap().instance);
}

#[test]
fn mutated_correlation_yields_replayable_counterexample() {
    let cfg = Config { correlate: reflected_correlate, ..Config::new(1, 10) };
    let s = verify::run_identity_suite_with(&cfg).unwrap();
    assert!(!s.pass);
    let cx = s.counterexample.as_ref().unwrap();
    let json = serde_json::to_string(cx).unwrap();
    assert!(json.contains("\"paper_eq\":\"fourier-of-correlation\""));
    assert!(json.contains("\"instance\""));
    assert!(!cx.check.pass);
}

#[test]
fn timing_is_opt_in() {
    let cfg = Config { timing: true, ..Config::new(1, 2) };
    assert!(verify::run_identity_suite_with(&cfg).unwrap().summary.runtime_ms.is_some());
}
