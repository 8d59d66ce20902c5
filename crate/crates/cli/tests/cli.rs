use std::process::Command;

fn addcomb() -> Command {
    Command::new(env!("CARGO_BIN_EXE_addcomb"))
}

#[test]
fn verify_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = addcomb().args(["verify", "--seed", "3", "--trials", "3", "--primes", "7,13", "--json"]).arg(&path).output().unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["suites"].as_array().unwrap().len(), 3);
    assert_eq!(report["metadata"]["seed"], 3);
}

#[test]
fn bad_arguments_fail() {
    assert!(!addcomb().args(["verify", "--trials", "0"]).output().unwrap().status.success());
    assert!(!addcomb().args(["level-profile", "--p", "7", "--t", "4"]).output().unwrap().status.success());
    assert!(!addcomb().args(["level-profile", "--p", "9", "--t", "2"]).output().unwrap().status.success());
    assert!(!addcomb().args(["subgroup-scan", "--pmax", "20000"]).output().unwrap().status.success());
}

#[test]
fn subgroup_scan_csv_to_stdout() {
    let out = addcomb().args(["subgroup-scan", "--pmax", "7", "--tmin", "3", "--tmax", "3"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "p,t,e2,e3,sum,diff,ratio_52,ratio_229,ratio_sumw,lower,lower_ok,max_fourier");
    assert!(lines[1].starts_with("7,3,15,33,6,7,"));
    assert_eq!(lines.len(), 2);
}

#[test]
fn level_profile_golden() {
    let out = addcomb().args(["level-profile", "--p", "7", "--t", "3"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let nonempty: Vec<&str> = text.lines().skip(1).filter(|l| l.split(',').nth(1) != Some("0")).collect();
    assert_eq!(nonempty.len(), 1);
    assert!(nonempty[0].starts_with("4,6,"));
}

#[test]
fn doubling_stats_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let sets = dir.path().join("sets.txt");
    std::fs::write(&sets, "# geometric\n1 2 4 8 16\n1\n").unwrap();
    let out = addcomb().args(["doubling-stats", "--file"]).arg(&sets).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0][2], "9");
    assert_eq!(&rows[1][..4], ["1", "1", "1", "1"]);
    std::fs::write(&sets, "0 1 2\n").unwrap();
    assert!(!addcomb().args(["doubling-stats", "--file"]).arg(&sets).output().unwrap().status.success());
}

#[test]
fn remaining_subcommands_run() {
    for args in [
        vec!["coverage-6gamma", "--pmax", "31"],
        vec!["convex-scan", "--nmax", "40", "--generator", "perturbed", "--seed", "9"],
        vec!["ap-scan", "--pmax", "31"],
        vec!["expansion-scan", "--p", "31", "--t", "10", "--trials", "5"],
        vec!["stepanov-table", "--pmax", "31"],
        vec!["--sequential", "subgroup-scan", "--pmax", "31"],
    ] {
        let out = addcomb().args(&args).output().unwrap();
        assert!(out.status.success(), "{args:?}");
        assert!(String::from_utf8(out.stdout).unwrap().lines().count() > 1, "{args:?}");
    }
}
