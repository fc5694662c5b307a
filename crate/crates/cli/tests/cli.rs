use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn twistforge(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_twistforge"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("TWISTFORGE_THREADS", t),
        None => cmd.env_remove("TWISTFORGE_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn out_arg(dir: &Path) -> String {
    dir.to_str().unwrap().to_string()
}

#[test]
fn build_so9_writes_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = twistforge(&["build", "--preset", "so9", "--out", &out_arg(dir.path())], None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let chain = read_json(&dir.path().join("chain.json"));
    let labels: Vec<&str> =
        chain["twist"]["factors"].as_array().unwrap().iter().map(|f| f["label"].as_str().unwrap()).collect();
    assert_eq!(labels.first(), Some(&"Phi_E1[3]"));
    assert_eq!(labels.last(), Some(&"Phi_J0"));
    assert_eq!(chain["stamp"]["spec"]["algebra"]["series"], "B");
    assert_eq!(chain["stamp"]["basis"], "raw");
    let r = read_json(&dir.path().join("rmatrix.json"));
    assert_eq!(r["R"]["dim"], 81);
    let cr = read_json(&dir.path().join("classical_r.json"));
    assert_eq!(cr["terms"].as_array().unwrap().len(), 8);
}

#[test]
fn xi_reaches_the_jordanian_factor() {
    let dir = tempfile::tempdir().unwrap();
    let out = twistforge(&["build", "--preset", "sl4", "--xi", "1/2", "--out", &out_arg(dir.path())], None);
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("chain.json")).unwrap();
    assert!(text.contains("log1p([1/2] E_{1-2})"), "{text}");
}

#[test]
fn empty_levels_warn_and_give_identity() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("empty.json");
    std::fs::write(&spec, r#"{"algebra": {"series": "D", "rank": 3}, "levels": []}"#).unwrap();
    let out = twistforge(&["build", "--spec", spec.to_str().unwrap(), "--out", &out_arg(dir.path())], None);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let chain = read_json(&dir.path().join("chain.json"));
    assert!(chain["twist"]["factors"].as_array().unwrap().is_empty());
}

#[test]
fn invalid_spec_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("bad.json");
    std::fs::write(&spec, r#"{"algebra": {"series": "B", "rank": 4}, "levels": [{"initial_root": [1, -1, 0, 0]}]}"#).unwrap();
    let out = twistforge(&["build", "--spec", spec.to_str().unwrap(), "--out", &out_arg(dir.path())], None);
    assert_eq!(out.status.code(), Some(2));
    std::fs::write(&spec, "{not json").unwrap();
    let out = twistforge(&["verify", "--spec", spec.to_str().unwrap(), "--out", &out_arg(dir.path())], None);
    assert_eq!(out.status.code(), Some(2));
    let out = twistforge(&["verify", "--preset", "so11", "--out", &out_arg(dir.path())], None);
    assert_eq!(out.status.code(), Some(2));
    let out = twistforge(&["verify", "--preset", "so9", "--eta-list", "1,2,3", "--out", &out_arg(dir.path())], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_so9_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = twistforge(&["verify", "--preset", "so9", "--out", &out_arg(dir.path())], None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = read_json(&dir.path().join("report.json"));
    assert_eq!(report["summary"]["outcome"], "pass");
    assert_eq!(report["summary"]["failed"], 0);
    let checks: Vec<&str> = report["results"].as_array().unwrap().iter().map(|r| r["check"].as_str().unwrap()).collect();
    for c in ["counit", "twist_equation", "triangular", "qybe", "cybe", "semiclassical", "antipode"] {
        assert!(checks.contains(&c), "{c} missing");
    }
}

#[test]
fn counterexample_is_expected_fail_and_split_half_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = twistforge(&["verify", "--preset", "sp6-counterexample", "--out", &out_arg(dir.path())], None);
    assert_eq!(out.status.code(), Some(0));
    let report = read_json(&dir.path().join("report.json"));
    assert_eq!(report["summary"]["outcome"], "expected-fail");
    assert_eq!(report["results"][0]["check"], "twist_equation");
    assert_eq!(report["results"][0]["pass"], false);
    let out = twistforge(&["verify", "--preset", "sp6-split", "--out", &out_arg(dir.path())], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(read_json(&dir.path().join("report.json"))["summary"]["outcome"], "pass");
}

#[test]
fn golden_passes_and_stage_filter_works() {
    let dir = tempfile::tempdir().unwrap();
    let out = twistforge(&["golden", "--out", &out_arg(dir.path())], None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rep = read_json(&dir.path().join("golden_report.json"));
    assert_eq!(rep["summary"]["lines"], 65);
    assert_eq!(rep["summary"]["near_misses_rejected"], 5);
    let out = twistforge(&["golden", "--stage", "J1E0J0", "--out", &out_arg(dir.path())], None);
    assert!(out.status.success());
    assert_eq!(read_json(&dir.path().join("golden_report.json"))["summary"]["lines"], 16);
}

#[test]
fn golden_sign_flip_exits_5_with_line_pointer() {
    let dir = tempfile::tempdir().unwrap();
    let text = include_str!("../../core/data/so9_golden.jsonl");
    let (idx, line) = text
        .lines()
        .enumerate()
        .find(|(_, l)| l.contains("\"stage\": \"E0J0\"") && l.contains("\"generator\": \"H_{1+2}\""))
        .unwrap();
    let flipped = line.replacen("- 1/2*", "+ 1/2*", 1);
    let mut lines: Vec<&str> = text.lines().collect();
    lines[idx] = &flipped;
    let path = dir.path().join("flipped.jsonl");
    std::fs::write(&path, lines.join("\n")).unwrap();
    let out = twistforge(&["golden", "--file", path.to_str().unwrap(), "--out", &out_arg(dir.path())], None);
    assert_eq!(out.status.code(), Some(5));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(&format!("flipped.jsonl:{}:", idx + 1)), "{err}");
    assert!(err.contains("H_{1+2}"), "{err}");
}

#[test]
fn reports_are_byte_identical_across_thread_counts() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = |d: &Path| vec!["verify".to_string(), "--sweep".into(), "--max-rank".into(), "3".into(), "--out".into(), out_arg(d)];
    let run = |d: &Path, t| {
        let v = args(d);
        let refs: Vec<&str> = v.iter().map(String::as_str).collect();
        assert!(twistforge(&refs, Some(t)).status.success());
        std::fs::read(d.join("report.json")).unwrap()
    };
    assert_eq!(run(a.path(), "1"), run(b.path(), "4"));
}
