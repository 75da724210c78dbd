use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

const TELEPORT: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/tests/data/teleport.qasm");

fn qcuml(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcuml")).args(args).output().unwrap()
}

fn qcuml_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qcuml"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn teleport_xmi(dir: &Path) -> PathBuf {
    let path = dir.join("teleport.xmi");
    let out = qcuml(&["qasm2uml", TELEPORT, "-o", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

/// Drops the constraint whose target is the `z` accept action.
fn without_cz_constraint(xmi: &str) -> String {
    let z_line = xmi.lines().find(|l| l.contains("mnemonic=\"z\"")).unwrap();
    let id = z_line.split("xmi:id=\"").nth(1).unwrap().split('"').next().unwrap();
    let target = format!(" {id}\"");
    xmi.lines()
        .filter(|l| !(l.contains("<ownedRule ") && l.contains(&target)))
        .map(|l| format!("{l}\n"))
        .collect()
}

#[test]
fn qasm2uml_writes_a_model() {
    let dir = tempfile::tempdir().unwrap();
    let path = teleport_xmi(dir.path());
    let text = fs::read_to_string(path).unwrap();
    assert!(text.starts_with("<?xml"));
    assert!(text.contains("name=\"teleport\""));
    assert_eq!(text.matches("<QuantumUML:quantumGate ").count(), 6);
}

#[test]
fn roundtrip_succeeds() {
    let out = qcuml(&["roundtrip", TELEPORT]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("OPENQASM 2.0;\n"));
}

#[test]
fn uml2qasm_regenerates_the_listing() {
    let dir = tempfile::tempdir().unwrap();
    let path = teleport_xmi(dir.path());
    let out = qcuml(&["uml2qasm", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("cx q[1], q[2];\nbarrier q[0], q[1], q[2];\n"));
    assert_eq!(text.lines().count(), 15);
}

#[test]
fn validate_reports_broken_model() {
    let dir = tempfile::tempdir().unwrap();
    let good = fs::read_to_string(teleport_xmi(dir.path())).unwrap();
    let broken = dir.path().join("broken.xmi");
    fs::write(&broken, without_cz_constraint(&good)).unwrap();

    let out = qcuml(&["validate", broken.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&out), 1);
    let raw = stdout(&out);
    let report: serde_json::Value = serde_json::from_str(&raw).unwrap();
    let diagnostics = report["diagnostics"].as_array().unwrap();
    assert!(!diagnostics.is_empty());
    assert!(diagnostics.iter().all(|d| d["rule"] == "R4" && d["severity"] == "error"));
    let first = &raw[raw.find('{').unwrap() + 1..];
    let first = &first[first.find('{').unwrap()..first.find('}').unwrap()];
    let at = |key: &str| first.find(&format!("\"{key}\"")).unwrap();
    assert!(at("rule") < at("severity") && at("severity") < at("elements") && at("elements") < at("message"));

    let text = qcuml(&["validate", broken.to_str().unwrap()]);
    assert_eq!(code(&text), 1);
    assert!(String::from_utf8_lossy(&text.stderr).contains("error R4"));

    let out = qcuml(&["uml2qasm", broken.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
}

#[test]
fn validate_clean_model_as_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = teleport_xmi(dir.path());
    let out = qcuml(&["validate", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "{\n  \"diagnostics\": []\n}\n");
}

#[test]
fn render_outputs_plantuml() {
    let dir = tempfile::tempdir().unwrap();
    let path = teleport_xmi(dir.path());
    let out = qcuml(&["render", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("@startuml\n") && text.ends_with("@enduml\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with('|')).count(), 3);
}

#[test]
fn stdin_pipeline_is_deterministic() {
    let source = fs::read_to_string(TELEPORT).unwrap();
    let first = qcuml_stdin(&["qasm2uml", "-"], &source);
    let second = qcuml_stdin(&["qasm2uml", "-"], &source);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    assert!(stdout(&first).contains("name=\"circuit\""));
    let back = qcuml_stdin(&["uml2qasm", "-"], &stdout(&first));
    assert_eq!(code(&back), 0);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&qcuml(&[])), 4);
    assert_eq!(code(&qcuml(&["frobnicate", "x"])), 4);
    assert_eq!(code(&qcuml(&["validate"])), 4);
    assert_eq!(code(&qcuml(&["validate", "x.xmi", "--format", "yaml"])), 4);
    assert_eq!(code(&qcuml(&["--help"])), 0);
    assert_eq!(code(&qcuml(&["validate", "/definitely/missing.xmi"])), 3);
    assert_eq!(code(&qcuml_stdin(&["qasm2uml", "-"], "OPENQASM 2.0; qreg q[1]; swap q[0];")), 2);
    assert_eq!(code(&qcuml_stdin(&["validate", "-"], "not xml")), 2);
    let dir = tempfile::tempdir().unwrap();
    let unwritable = dir.path().join("missing-dir/out.xmi");
    assert_eq!(code(&qcuml(&["qasm2uml", TELEPORT, "-o", unwritable.to_str().unwrap()])), 3);
}
