use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use gsnn_core::architect::ArchitectureJson;
use gsnn_core::group::GroupSpec;
use gsnn_core::reps::SignedPermRep;
use gsnn_core::{BigRational, Tolerances};
use serde_json::Value;

fn gsnn(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gsnn"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn arch_files(out: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(out.join("architectures"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    names
}

#[test]
fn enumerate_counts() {
    for (group, n) in [("C6", 6), ("D6", 14), ("trivial", 1)] {
        let dir = tempfile::tempdir().unwrap();
        let o = gsnn(dir.path(), &["--group", group, "enumerate"]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(arch_files(dir.path()).len(), n, "{group}");
        let csv = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
        assert_eq!(csv.lines().count(), n + 1);
    }
}

#[test]
fn c6_names() {
    let dir = tempfile::tempdir().unwrap();
    gsnn(dir.path(), &["--group", "C6", "enumerate"]);
    assert_eq!(
        arch_files(dir.path()),
        ["0.0", "1.0", "1.1", "2.0", "3.0", "3.1"].map(|s| format!("{s}.json"))
    );
}

#[test]
fn outputs_are_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [&a, &b] {
        for cmd in ["enumerate", "verify", "graph"] {
            assert_eq!(code(&gsnn(dir.path(), &["--group", "D4", "--seed", "7", cmd])), 0);
        }
    }
    for f in ["summary.csv", "verify.json", "morphisms.dot", "morphisms.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
    for f in arch_files(a.path()) {
        let p = Path::new("architectures").join(&f);
        assert_eq!(fs::read(a.path().join(&p)).unwrap(), fs::read(b.path().join(&p)).unwrap(), "{f}");
    }
}

#[test]
fn architecture_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    gsnn(dir.path(), &["--group", "D4", "enumerate"]);
    let g = GroupSpec::preset("D4").unwrap().build::<BigRational>(48, Tolerances::default()).unwrap();
    for f in arch_files(dir.path()) {
        let text = fs::read_to_string(dir.path().join("architectures").join(&f)).unwrap();
        let json: ArchitectureJson = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string_pretty(&json).unwrap(), text);
        let rep = SignedPermRep::from_json(&json.rep).unwrap();
        assert_eq!(rep.degree, json.hidden);
        assert_eq!(rep.images.len(), 8);
        assert!(rep.check_homomorphism(&g), "{f}");
    }
}

#[test]
fn describe_spec_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&gsnn(dir.path(), &["--group", "C2xC4", "describe"])), 0);
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("describe.json")).unwrap()).unwrap();
    let spec: GroupSpec = serde_json::from_value(v["group"].clone()).unwrap();
    let spec_file = dir.path().join("spec.json");
    fs::write(&spec_file, serde_json::to_string(&spec).unwrap()).unwrap();
    let again = dir.path().join("again");
    let o = gsnn(&again, &["--group-file", spec_file.to_str().unwrap(), "describe"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let w: Value = serde_json::from_str(&fs::read_to_string(again.join("describe.json")).unwrap()).unwrap();
    assert_eq!(v, w);
    assert_eq!(v["order"], 8);
}

#[test]
fn verify_passes_and_zero_c_fails() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&gsnn(dir.path(), &["--group", "C6", "--trials", "50", "verify"])), 0);
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("verify.json")).unwrap()).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(code(&gsnn(dir.path(), &["--group", "C6", "--trials", "50", "verify", "--zero-c"])), 1);
}

#[test]
fn rotation_group_runs_in_float_mode() {
    let dir = tempfile::tempdir().unwrap();
    let o = gsnn(dir.path(), &["--group", "D6-rot@15", "verify"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(code(&gsnn(dir.path(), &["--group", "D6-rot", "--mode", "exact", "enumerate"])), 2);
}

#[test]
fn bad_input_exits_with_usage_code() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&gsnn(dir.path(), &["--group", "Z99", "enumerate"])), 2);
    assert_eq!(code(&gsnn(dir.path(), &["enumerate"])), 2);
    assert_eq!(code(&gsnn(dir.path(), &["--group", "C2", "--eps=-1", "enumerate"])), 2);
    assert_eq!(code(&gsnn(dir.path(), &["--group", "{\"bogus\":1}", "enumerate"])), 2);
}

#[test]
fn empty_table_has_header_only() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&gsnn(dir.path(), &["table", "--groups", ""])), 0);
    let csv = fs::read_to_string(dir.path().join("table.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1);
}

#[test]
fn table_reports_failing_group() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&gsnn(dir.path(), &["table", "--groups", "C2,Z99"])), 1);
}

#[test]
fn graph_files() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&gsnn(dir.path(), &["--group", "C6", "graph"])), 0);
    let dot = fs::read_to_string(dir.path().join("morphisms.dot")).unwrap();
    assert_eq!(dot.lines().filter(|l| l.contains("label=") && !l.contains("->")).count(), 6);
    assert_eq!(dot.matches("color=\"red:red\"").count(), 2);
    assert_eq!(fs::read_dir(dir.path().join("cohomology")).unwrap().count(), 6);

    let d6 = tempfile::tempdir().unwrap();
    assert_eq!(code(&gsnn(d6.path(), &["--group", "D6", "graph"])), 0);
    let m: Value = serde_json::from_str(&fs::read_to_string(d6.path().join("morphisms.json")).unwrap()).unwrap();
    assert_eq!(m["nodes"].as_array().unwrap().len(), 14);
}
