use std::path::Path;

use szego_lab::experiments::{check_run, run_scenario, Overrides, Scenario, Summary};

fn small(s: Scenario, dir: &Path) -> Summary {
    let o = Overrides { n: Some(64), t_max: Some(2.0), ..Default::default() };
    run_scenario(s, o, dir).unwrap()
}

#[test]
fn check_reproduces_stored_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let first = small(Scenario::CrossingL1, dir.path());
    let again = check_run(dir.path()).unwrap();
    assert_eq!(first.failed, 0);
    assert_eq!(first.checks.len(), again.checks.len());
    for (a, b) in first.checks.iter().zip(&again.checks) {
        assert_eq!(a.name, b.name);
        assert_eq!(a.passed, b.passed);
        assert!((a.value - b.value).abs() <= 1e-12 * a.value.abs().max(1e-300), "{}: {} {}", a.name, a.value, b.value);
    }
}

#[test]
fn check_sees_edited_tables() {
    let dir = tempfile::tempdir().unwrap();
    small(Scenario::CrossingL1, dir.path());
    let path = dir.path().join("invariants.csv");
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let header: Vec<&str> = lines[0].split(',').collect();
    let col = header.iter().position(|h| *h == "Q").unwrap();
    let mut row: Vec<String> = lines[3].split(',').map(String::from).collect();
    row[col] = "5.0".into();
    lines[3] = row.join(",");
    std::fs::write(&path, lines.join("\n") + "\n").unwrap();
    let again = check_run(dir.path()).unwrap();
    assert!(!again.check("drift Q").unwrap().passed);
    assert_eq!(again.failed, 1);
}

#[test]
fn schema_version_is_enforced() {
    let dir = tempfile::tempdir().unwrap();
    small(Scenario::CrossingL1, dir.path());
    let path = dir.path().join("summary.json");
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    v["schema_version"] = 99.into();
    std::fs::write(&path, v.to_string()).unwrap();
    assert!(check_run(dir.path()).is_err());
}

#[test]
fn datum_file_drives_crossing_run() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("p.json");
    std::fs::write(&data, r#"{"A": [[-0.3, 0.0], [1.0, 0.0]], "B": [[1.0, 0.0], [-0.3, 0.0]]}"#).unwrap();
    let o = Overrides { n: Some(64), t_max: Some(2.0), data: Some(data), ..Default::default() };
    let s = run_scenario(Scenario::CrossingL1, o, &dir.path().join("run")).unwrap();
    assert_eq!(s.failed, 0, "{:?}", s.checks.iter().filter(|c| !c.passed).map(|c| c.line()).collect::<Vec<_>>());
    assert!((s.report["oracle"]["p"][0].as_f64().unwrap() - 0.3).abs() < 1e-15);
}

#[test]
fn involution_is_seeded() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let o = || Overrides { seed: Some(3), ..Default::default() };
    let x = run_scenario(Scenario::InvolutionAudit, o(), a.path()).unwrap();
    let y = run_scenario(Scenario::InvolutionAudit, o(), b.path()).unwrap();
    assert_eq!(
        std::fs::read_to_string(a.path().join("brackets.csv")).unwrap(),
        std::fs::read_to_string(b.path().join("brackets.csv")).unwrap()
    );
    assert_eq!(x.failed, 0);
    assert_eq!(y.failed, 0);
}

/// Conservation at α = 1 from 1 + z over T = 50: the datum has L₁ = 0, so
/// the norms grow exponentially and the truncated run leaves its resolved
/// range long before the horizon. Kept as the literal requirement.
#[test]
#[ignore = "unattainable: exponential growth outruns every truncation before T = 50"]
fn conservation_alpha_one_to_horizon() {
    let dir = tempfile::tempdir().unwrap();
    let o = Overrides { alpha: Some(1.0), t_max: Some(50.0), rel_tol: Some(1e-11), ..Default::default() };
    let s = run_scenario(Scenario::ConservationAudit, o, dir.path()).unwrap();
    assert_eq!(s.failed, 0, "{:?}", s.checks.iter().filter(|c| !c.passed).map(|c| c.line()).collect::<Vec<_>>());
}
