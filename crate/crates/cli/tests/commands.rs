use std::process::{Command, Output};

use qcomm_core::hopf::{HopfData, HopfJson};
use qcomm_core::qplane::{build_qplane, ModuleAlgebra, ModuleJson};
use qcomm_core::uqsl2::build_uqsl2;
use std::sync::Arc;

fn qcomm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcomm")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let o = qcomm(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap().trim_end().to_string()
}

#[test]
fn evaluates_reference_expressions() {
    assert_eq!(stdout(&["eval", "[x, dx]", "--space", "E"]), "-q^2");
    assert_eq!(stdout(&["eval", "[x, x]"]), "(1-q^2) x^2");
    assert_eq!(stdout(&["eval", "chi(y, x)"]), "q * x (x) y");
    assert_eq!(stdout(&["comm", "dx", "x", "--space", "E"]), "1 + (q^2-1) y dy + (q^2-q) x dx");
    assert_eq!(stdout(&["eval", "q^2 * x * y"]), "q^2 * x y");
}

#[test]
fn braiding_table_on_the_extension() {
    let table = [
        ("x", "dx", "(q^2-q) dy (x) y + q * dx (x) x"),
        ("dy", "y", "q * y (x) dy + (q-1) x (x) dx"),
        ("dy", "dx", "(q^2-1) dy (x) dx + q * dx (x) dy"),
        ("dx", "dy", "q * dy (x) dx"),
    ];
    for (l, r, want) in table {
        assert_eq!(stdout(&["chi", l, r, "--space", "E"]), want);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(qcomm(&["eval", "[x, K]"]).status.code(), Some(2));
    assert_eq!(qcomm(&["eval", "x +"]).status.code(), Some(2));
    assert_eq!(qcomm(&["verify", "everything"]).status.code(), Some(2));
    assert_eq!(qcomm(&["eval", "x", "--order", "4"]).status.code(), Some(2));
    assert_eq!(qcomm(&["build", "--space", "E", "--order", "5"]).status.code(), Some(2));
    assert_eq!(qcomm(&["verify", "all"]).status.code(), Some(0));
    let err = String::from_utf8(qcomm(&["eval", "x $"]).stderr).unwrap();
    assert!(err.contains("column 3"), "{err}");
}

#[test]
fn jacobi_suite_on_both_kinds_of_h() {
    let j: serde_json::Value = serde_json::from_str(&stdout(&["verify", "jacobi", "--json"])).unwrap();
    assert_eq!(j["passed"], true);
    let notes: Vec<&str> = j["notes"].as_array().unwrap().iter().map(|n| n.as_str().unwrap()).collect();
    assert!(notes.contains(&"residual at (x, x, x) = -3q^2"), "{notes:?}");
    let j: serde_json::Value = serde_json::from_str(&stdout(&["verify", "jacobi", "--space", "Z3", "--json"])).unwrap();
    assert_eq!(j["passed"], true);
    let notes = j["notes"].to_string();
    assert!(notes.contains("vanishes identically") && !notes.contains("first nonzero residual"), "{notes}");
}

#[test]
fn qlie_exports() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let p = path.to_str().unwrap();
    stdout(&["export", "qlie", "--space", "A0", "--out", p]);
    let first = std::fs::read(&path).unwrap();
    let j: serde_json::Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(j["closed"], true);
    assert_eq!(j["basis"].as_array().unwrap().len(), 9);
    assert_eq!(j["N"], 3);
    stdout(&["export", "qlie", "--space", "A0", "--out", p]);
    assert_eq!(std::fs::read(&path).unwrap(), first, "export is not deterministic");

    let j: serde_json::Value = serde_json::from_str(&stdout(&["export", "qlie", "--space", "x,y"])).unwrap();
    assert_eq!(j["closed"], false);
    assert_eq!(qcomm(&["export", "qlie", "--space", "x,nope"]).status.code(), Some(2));
}

#[test]
fn hopf_and_module_exports_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let hp = dir.path().join("h.json");
    stdout(&["export", "hopf", "--out", hp.to_str().unwrap()]);
    let j: HopfJson = serde_json::from_slice(&std::fs::read(&hp).unwrap()).unwrap();
    let h = HopfData::from_json(&j).unwrap();
    assert_eq!(h.to_json(), build_uqsl2(3).unwrap().to_json());

    let mp = dir.path().join("m.json");
    stdout(&["export", "module", "--out", mp.to_str().unwrap()]);
    let j: ModuleJson = serde_json::from_slice(&std::fs::read(&mp).unwrap()).unwrap();
    let m = ModuleAlgebra::from_json(Arc::new(h), &j).unwrap();
    assert_eq!(m.to_json(), build_qplane(3).unwrap().to_json());
}

#[test]
fn build_reports_dimensions() {
    let j: serde_json::Value = serde_json::from_str(&stdout(&["build", "--json", "--space", "Z3"])).unwrap();
    assert_eq!(j["hopf_dim"], 3);
    assert_eq!(j["module_dim"], 9);
    assert_eq!(j["triangular"], true);
    assert!(stdout(&["build", "--space", "E"]).contains("dimension 81"));
}
