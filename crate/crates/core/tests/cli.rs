use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::atomic::{AtomicUsize, Ordering};

use serde_json::Value;
use spectral_glue::cli::{run, Outcome};

static NEXT: AtomicUsize = AtomicUsize::new(0);

/// A fresh directory holding the standard fixtures.
fn fixtures() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("spectral-glue-cli-{}-{}", std::process::id(), NEXT.fetch_add(1, Ordering::SeqCst)));
    fs::create_dir_all(&dir).unwrap();
    let files = [
        ("pv.json", r#"{"elements": ["p", "m1", "m2"], "leq": [["p", "m1"], ["p", "m2"]]}"#),
        ("good.json", r#"{"poset": {"elements": ["p", "m1", "m2"], "leq": [["p", "m1"], ["p", "m2"]]}, "exceptions": {"m1": ["p", "m1"], "m2": ["p", "m2"]}}"#),
        ("bad.json", r#"{"poset": {"elements": ["p", "m1", "m2"], "leq": [["p", "m1"], ["p", "m2"]]}, "exceptions": {"m1": ["p", "m1"], "m2": ["m2"]}}"#),
        ("z12.json", r#"{"kind": "zmod", "n": 12}"#),
        ("F.json", r#"{"low_tail": "full", "breakpoints": [{"n": 0, "set": ["(2)"]}], "high_tail": "empty"}"#),
        ("Fpv.json", r#"{"low_tail": "full", "breakpoints": [{"n": 0, "set": ["m1", "m2"]}, {"n": 1, "set": ["m1"]}], "high_tail": "empty"}"#),
        ("z3stalk.json", r#"{"terms": {"0": {"generators": 1, "relations": [[3]]}}}"#),
        ("z4stalk.json", r#"{"terms": {"0": {"generators": 1, "relations": [[4]]}}}"#),
        ("k2.json", r#"{"terms": {"-1": {"free": 1}, "0": {"free": 1}}, "differentials": {"-1": [[2]]}}"#),
        ("c3.json", r#"{"module": {"generators":1,"relations":[[3]]}, "q0": {"generators":1,"relations":[[3]]}, "q1": {"generators":1,"relations":[[4]]}, "eta": [[0]]}"#),
        ("broken.json", r#"{"elements": ["p""#),
    ];
    for (name, body) in files {
        fs::write(dir.join(name), body).unwrap();
    }
    dir
}

fn go(dir: &Path, args: &[&str]) -> Outcome {
    let mut argv = vec!["spectral-glue".to_string()];
    for a in args {
        argv.push(if a.ends_with(".json") { dir.join(a).to_string_lossy().into_owned() } else { a.to_string() });
    }
    run(argv)
}

#[test]
fn glue_compatible_family() {
    let d = fixtures();
    let out = go(&d, &["glue", "--family", "good.json"]);
    assert_eq!(out.code, 0, "{}{}", out.stdout, out.stderr);
    assert!(out.stdout.contains("{m1, m2, p}"), "{}", out.stdout);
}

#[test]
fn compat_check_reports_witness() {
    let d = fixtures();
    let out = go(&d, &["compat-check", "--family", "bad.json"]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("(m1, m2, p)"), "{}", out.stdout);
    let out = go(&d, &["compat-check", "--family", "bad.json", "--json"]);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "fail");
    assert!(!v["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn coaisle_membership_exit_codes() {
    let d = fixtures();
    let out = go(&d, &["coaisle-test", "--ring", "z12.json", "--filtration", "F.json", "--complex", "z3stalk.json"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    let out = go(&d, &["coaisle-test", "--ring", "z12.json", "--filtration", "F.json", "--complex", "z4stalk.json"]);
    assert_eq!(out.code, 1, "{}", out.stdout);
}

#[test]
fn derived_hom_value() {
    let d = fixtures();
    let out = go(&d, &["derived-hom", "--ring", "z12.json", "--source", "k2.json", "--complex", "z4stalk.json", "--degree", "0", "--json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "value");
    assert!(v.to_string().contains("Z/2"), "{v}");
}

#[test]
fn cosilting_set_and_split_roundtrip() {
    let d = fixtures();
    let out = go(&d, &["cosilting-set", "--ring", "z12.json", "--module", "c3.json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("{(2)}"), "{}", out.stdout);
    let split = go(&d, &["cosilting-split", "--ring", "z12.json", "--module", "c3.json", "--json"]);
    assert_eq!(split.code, 0, "{}", split.stderr);
    let v: Value = serde_json::from_str(&split.stdout).unwrap();
    fs::write(d.join("comps.json"), v["result"].to_string()).unwrap();
    let glued = go(&d, &["cosilting-glue", "--family", "comps.json", "--json"]);
    assert_eq!(glued.code, 0, "{}{}", glued.stdout, glued.stderr);
}

#[test]
fn reports_are_deterministic() {
    let d = fixtures();
    let runs = [
        vec!["spec", "--ring", "z12.json"],
        vec!["localize", "--poset", "pv.json", "--filtration", "Fpv.json"],
        vec!["compat-check", "--family", "bad.json", "--json"],
        vec!["tstr-classify", "--ring", "z12.json", "--filtration", "F.json", "--json"],
        vec!["fuzz", "--max-poset", "3", "--max-ring", "4", "--window", "1"],
    ];
    for args in runs {
        let a = go(&d, &args);
        let b = go(&d, &args);
        assert!(a.code < 2, "{args:?}: {}", a.stderr);
        assert_eq!(a.code, b.code, "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn parse_errors_name_the_file() {
    let d = fixtures();
    let out = go(&d, &["spec", "--poset", "broken.json"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("broken.json"), "{}", out.stderr);
    let out = go(&d, &["glue", "--family", "missing.json"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("missing.json"), "{}", out.stderr);
    let out = go(&d, &["no-such-command"]);
    assert_eq!(out.code, 2);
    let out = go(&d, &["glue"]);
    assert_eq!(out.code, 2, "{}", out.stdout);
}

#[test]
fn fuzz_gluing_properties() {
    let d = fixtures();
    let out = go(&d, &["fuzz", "--max-poset", "5", "--max-ring", "6", "--window", "1"]);
    assert_eq!(out.code, 0, "{}{}", out.stdout, out.stderr);
    assert!(out.stdout.contains("gluing-sets"), "{}", out.stdout);
    let out = go(&d, &["fuzz", "--max-poset", "9"]);
    assert_eq!(out.code, 2);
}

#[test]
fn binary_matches_library() {
    let d = fixtures();
    let bin = env!("CARGO_BIN_EXE_spectral-glue");
    let out = Command::new(bin)
        .args(["glue", "--family"])
        .arg(d.join("good.json"))
        .env("SPECTRAL_GLUE_JOBS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let lib = go(&d, &["glue", "--family", "good.json"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), lib.stdout);
}
