use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../golden")
}

fn diffeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diffeo"))
        .args(args)
        .arg("--golden-dir")
        .arg(golden_dir())
        .output()
        .expect("binary runs")
}

#[test]
fn bn_suite_passes_against_golden() {
    let out = diffeo(&["run", "--suite", "bn", "--n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("b5") || text.contains("n=5"), "{text}");
    assert!(text.contains("-120*a4 + 360*a2^2 + 720*a1*a3 - 2520*a1^2*a2 + 1680*a1^4"));
}

#[test]
fn vanish_suite_in_both_modes() {
    assert_eq!(diffeo(&["run", "--suite", "vanish", "--n", "3"]).status.code(), Some(0));
    let out = diffeo(&["run", "--suite", "vanish", "--n", "6", "--mode", "random", "--seeds", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(diffeo(&["run", "--suite", "nonsense"]).status.code(), Some(2));
    assert_eq!(diffeo(&["run", "--suite", "vanish", "--n", "1"]).status.code(), Some(2));
    assert_eq!(diffeo(&["run", "--suite", "bn", "--mode", "random", "--seeds", "0"]).status.code(), Some(2));
    assert_eq!(diffeo(&["run", "--suite", "bell", "--grading-cutoff", "2"]).status.code(), Some(2));
}

#[test]
fn verification_failure_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let bn = std::fs::read_to_string(golden_dir().join("bn.txt")).unwrap();
    std::fs::write(dir.path().join("bn.txt"), bn.replace("b2 = -2*a1", "b2 = 2*a1")).unwrap();
    std::fs::copy(golden_dir().join("census.txt"), dir.path().join("census.txt")).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_diffeo"))
        .args(["run", "--suite", "bn", "--n", "3", "--golden-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn json_report_and_regenerated_golden() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let gold = dir.path().join("golden");
    let out = Command::new(env!("CARGO_BIN_EXE_diffeo"))
        .args(["run", "--suite", "interacting", "--regen-golden", "--json"])
        .arg(&json)
        .arg("--golden-dir")
        .arg(&gold)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["schema"], 1);
    assert_eq!(report["suite"], "interacting");
    assert!(report.get("wall_time").is_none());
    assert!(report["cases"].as_array().is_some_and(|c| !c.is_empty()));
    for name in ["bn.txt", "census.txt"] {
        let fresh = std::fs::read_to_string(gold.join(name)).unwrap();
        let committed = std::fs::read_to_string(golden_dir().join(name)).unwrap();
        assert_eq!(fresh, committed, "{name}");
    }
}
