//! End-to-end tests of the `farey` binary.

use std::process::{Command, Output};

fn farey(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_farey"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn cf_of_example_vector() {
    let out = farey(&["cf", "5,7,8"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["meester"], "[1;1:2 |_2 1]");
    assert_eq!(v["farey_form"], "[1;1:2:0:0 | 1]");
}

#[test]
fn reconstruct_recovers_pennant() {
    let out = farey(&["reconstruct", "[1;1:2:0:0 | 1]"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["chain"]["pennant"], serde_json::json!(["5", "7", "8"]));
}

#[test]
fn frieze_pair_has_unit_determinant() {
    let out = farey(&["frieze", "3,1,2,1,2,3,3,1", "--v", "2.1R", "--w", "7.2L"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["ptolemy"]["det"], "1");
    assert_eq!(v["scan"]["violations"].as_array().map(Vec::len), Some(0));
}

#[test]
fn tessellation_report_is_clean() {
    let v = json(&farey(&["tessellate", "--dim", "3", "--depth", "2"]));
    assert_eq!(v["report"]["maximal_checked"], 13);
    assert_eq!(v["report"]["covers_basis"], true);
}

#[test]
fn svg_output_is_written() {
    let dir = std::env::temp_dir().join(format!("farey-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cells.svg");
    let out = farey(&[
        "divergence",
        "--bound",
        "3",
        "--svg",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(json(&out)["cells"].as_array().map(Vec::len), Some(39));
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("<svg"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(farey(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(farey(&["cf", "1,x,3"]).status.code(), Some(1));
    assert_eq!(farey(&["cf", "0,0,0"]).status.code(), Some(2));
    assert_eq!(
        farey(&["check-paper", "--only", "3"]).status.code(),
        Some(0)
    );
    assert_eq!(
        farey(&["check-paper", "--only", "10"]).status.code(),
        Some(3)
    );
}
