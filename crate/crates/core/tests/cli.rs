use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_szego-lab"))
}

#[test]
fn run_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let run = bin()
        .args(["run", "crossing_L1", "--N", "64", "--tmax", "2", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert_eq!(run.status.code(), Some(0), "{stdout}\n{}", String::from_utf8_lossy(&run.stderr));
    assert!(stdout.contains("[PASS] oracle sup"));
    for f in ["summary.json", "events.json", "trajectory.csv", "invariants.csv", "spectral.csv"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let check = bin().arg("check").arg(&out).output().unwrap();
    assert_eq!(check.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&check.stdout), stdout);
}

#[test]
fn exit_code_counts_failures() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"alpha": 1.0, "N": 32, "t_max": 5.0}"#).unwrap();
    // the flag overrides the config file's α
    let run = bin()
        .args(["run", "conservation_audit", "--alpha", "1", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("run"))
        .output()
        .unwrap();
    let stdout = String::from_utf8_lossy(&run.stdout);
    let failed = stdout.lines().filter(|l| l.starts_with("[FAIL]")).count();
    assert!(failed >= 1, "{stdout}");
    assert_eq!(run.status.code(), Some(failed as i32));
}

#[test]
fn errors_exit_125() {
    let dir = tempfile::tempdir().unwrap();
    let run = bin().arg("check").arg(dir.path()).output().unwrap();
    assert_eq!(run.status.code(), Some(125));
    let bad = bin()
        .args(["run", "crossing_L1", "--alpha", "-1", "--out"])
        .arg(dir.path().join("x"))
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(125));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("α = 1"));
}

#[test]
fn unknown_scenario_is_a_usage_error() {
    let run = bin().args(["run", "nope"]).output().unwrap();
    assert_eq!(run.status.code(), Some(2));
}
