use std::path::PathBuf;
use std::process::{Command, Output};

fn eisenlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eisenlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn scan_level_eleven() {
    let out = eisenlab(&[
        "scan",
        "--level",
        "11",
        "--precision",
        "60",
        "--prime-bound",
        "20",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    assert_eq!(v["reports"][0]["eisenstein_primes"], serde_json::json!([5]));
    assert_eq!(v["reports"][0]["cuspidal_order"], "5");
    assert!(v["reports"][0].get("timing_ms").is_none());
}

#[test]
fn scan_to_file_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for name in ["a.json", "b.json"] {
        let path = dir.path().join(name);
        let p = path.display().to_string();
        let out = eisenlab(&[
            "scan",
            "--level",
            "9",
            "--precision",
            "40",
            "--prime-bound",
            "10",
            "--out",
            &p,
        ]);
        assert_eq!(out.status.code(), Some(0));
        texts.push(std::fs::read_to_string(&path).unwrap().replace(&p, ""));
    }
    assert_eq!(texts[0], texts[1]);
    let v: serde_json::Value = serde_json::from_str(&texts[0]).unwrap();
    assert_eq!(v["reports"].as_array().unwrap().len(), 3);
}

#[test]
fn scan_csv() {
    let out = eisenlab(&[
        "scan",
        "--level",
        "15",
        "--precision",
        "30",
        "--prime-bound",
        "7",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("row,conductor,chi_index"));
    assert_eq!(text.lines().filter(|l| l.starts_with("summary")).count(), 3);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(eisenlab(&["scan", "--level", "10"]).status.code(), Some(2));
    assert_eq!(
        eisenlab(&["scan", "--level", "11", "--precision", "5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(eisenlab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        eisenlab(&["expand", "--level", "11", "--mbar", "1", "--lbar", "11"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        eisenlab(&[
            "congruence",
            "--table",
            "/nonexistent.csv",
            "--level",
            "11",
            "--q",
            "5"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn expand_prints_expansion() {
    let out = eisenlab(&[
        "expand",
        "--level",
        "11",
        "--mbar",
        "11",
        "--precision",
        "12",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["level"], 11);
    assert_eq!(v["denominator"], 1);
    assert_eq!(v["coefficients"][0], serde_json::json!([0, 1, "5/12"]));
    assert_eq!(v["coefficients"][1], serde_json::json!([1, 1, "1"]));
}

#[test]
fn cusps_listing() {
    let v = json(&eisenlab(&["cusps", "--level", "45"]));
    assert_eq!(v["count"], 8);
    assert_eq!(v["width_sum"], 72);
}

#[test]
fn congruence_fixture() {
    let good = fixture("level11.csv");
    let out = eisenlab(&["congruence", "--table", &good, "--level", "11", "--q", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let bad = fixture("level11_corrupted.csv");
    let out = eisenlab(&["congruence", "--table", &bad, "--level", "11", "--q", "5"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let failed: Vec<u64> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["passed"] == false)
        .map(|r| r["ell"].as_u64().unwrap())
        .collect();
    assert_eq!(failed, vec![17]);
    let out = eisenlab(&["congruence", "--table", &good, "--level", "11", "--q", "3"]);
    assert_eq!(out.status.code(), Some(2));
}
