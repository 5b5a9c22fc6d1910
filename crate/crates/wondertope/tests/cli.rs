use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use wondertope::algebra::text::parse_topform;
use wondertope::canonical_form::polytope_form;
use wondertope::io;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wondertope")).args(args).env_remove("WONDERTOPE_MAX_DIM").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

#[test]
fn canonical_form_of_the_square_round_trips() {
    let o = run(&["canonical-form", &data("square.json")]);
    assert_eq!(o.status.code(), Some(0));
    let printed = parse_topform(&stdout(&o)).unwrap();
    assert_eq!(printed, parse_topform("[x, y] 1/(x*y*(1-x)*(1-y))").unwrap());
    assert_eq!(printed.to_string(), stdout(&o));
}

#[test]
fn printed_forms_reparse_bit_identically() {
    for name in ["square.json", "triangle.json", "pentagon.json", "cube.json", "pyramid.json", "simplex3.json"] {
        let o = run(&["canonical-form", &data(name)]);
        assert_eq!(o.status.code(), Some(0), "{name}");
        let p = io::parse_polytope(&io::read_json(data(name)).unwrap()).unwrap();
        assert_eq!(parse_topform(&stdout(&o)).unwrap(), polytope_form(&p).unwrap(), "{name}");
    }
}

#[test]
fn pulling_order_does_not_change_the_form() {
    let a = run(&["canonical-form", &data("pentagon.json")]);
    let b = run(&["canonical-form", "--order", "4,2,0,1,3", &data("pentagon.json")]);
    assert_eq!(stdout(&a), stdout(&b));
    let bad = run(&["canonical-form", "--order", "0,0,1,2,3", &data("pentagon.json")]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn json_reports_carry_the_schema_and_consistent_tallies() {
    let o = run(&["--json", "verify-recursion", &data("square.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], 1);
    let checks = v["checks"].as_array().unwrap();
    let count = |s: &str| checks.iter().filter(|c| c["status"] == s).count() as u64;
    assert_eq!(v["summary"]["pass"], count("pass"));
    assert_eq!(v["summary"]["fail"], count("fail"));
    assert_eq!(v["summary"]["skipped"], count("skipped"));
}

#[test]
fn m0n_prints_parke_taylor_and_verifies() {
    let o = run(&["m0n", "--n", "4", "--verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let first = stdout(&o).lines().next().unwrap().to_string();
    let form = first.trim_start_matches("Parke–Taylor").trim();
    assert_eq!(parse_topform(form).unwrap(), parse_topform("[z1, z2] 1/(z1*(z2-z1)*(1-z2))").unwrap());
    assert_eq!(run(&["m0n", "--n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["m0n", "--n", "7", "--verify"]).status.code(), Some(2));
}

#[test]
fn product_theorem_for_the_pi6_example() {
    let o = run(&["verify-product", "--lattice", &data("pi6.json"), "--building-set", "min", "--flat", "123|4|5|6"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let j = run(&["--json", "verify-product", "--lattice", "Π6", "--building-set", "min", "--flat", "123|4|5|6"]);
    let v: Value = serde_json::from_str(&stdout(&j)).unwrap();
    let sizes = &v["checks"][1]["witness"];
    assert_eq!((sizes["B^F"].as_u64(), sizes["(B_F)_1"].as_u64(), sizes["(B_F)_2"].as_u64()), (Some(4), Some(7), Some(4)));
    let outside = run(&["verify-product", "--lattice", "pi6", "--flat", "12|34|5|6"]);
    assert_eq!(outside.status.code(), Some(2));
}

#[test]
fn nested_set_exit_codes() {
    assert_eq!(run(&["nested-set", "--lattice", "pi4"]).status.code(), Some(0));
    let bad = run(&["nested-set", "--lattice", "Π4", "--building-set", &data("pi4_atoms_and_top.json")]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("1+1+1 ≠ 2"));
    let o = run(&["--json", "nested-set", "--lattice", &data("boolean3.json"), "--building-set", "max", "--faces"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    // chains in the proper part of the Boolean lattice on three elements
    assert_eq!(v["f_vector"], serde_json::json!([1, 6, 6]));
}

#[test]
fn wondertope_commands() {
    let ok = run(&["wondertope", "--building-set", &data("triangle_vertices_B.json"), "--polytope", &data("triangle.json")]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    let face = run(&["wondertope", "--building-set", &data("triangle_edge_point_B.json"), "--polytope", &data("triangle.json")]);
    assert_eq!(face.status.code(), Some(1));
    let blow = run(&["blowup", "--center", &data("cube_edge_line.json"), "--polytope", &data("cube.json")]);
    assert_eq!(blow.status.code(), Some(0), "{}", stdout(&blow));
}

#[test]
fn non_face_center_with_require_face_reports_the_failure() {
    let dir = std::env::temp_dir().join(format!("wondertope-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let center = dir.join("mid.json");
    std::fs::write(&center, r#"{"points": [["1/2", 0]]}"#).unwrap();
    let c = center.display().to_string();
    let o = run(&["blowup", "--require-face", "--center", &c, "--polytope", &data("triangle.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("(1/2, 0)"));
    let refused = run(&["blowup", "--center", &c, "--polytope", &data("triangle.json")]);
    assert_eq!(refused.status.code(), Some(1));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn malformed_input_exits_with_two() {
    assert_eq!(run(&["canonical-form", "/nonexistent/p.json"]).status.code(), Some(2));
    assert_eq!(run(&["nested-set", "--lattice", "cyclic:4"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["blowup", "--polytope", &data("cube.json")]).status.code(), Some(2));
    let wrong_dim = run(&["blowup", "--center", &data("cube_edge_line.json"), "--polytope", &data("square.json")]);
    assert_eq!(wrong_dim.status.code(), Some(2));
    let e = run(&["--json", "canonical-form", "/nonexistent/p.json"]);
    let v: Value = serde_json::from_str(&stdout(&e)).unwrap();
    assert_eq!(v["kind"], "input error");
}

#[test]
fn max_dim_is_enforced() {
    let o = Command::new(env!("CARGO_BIN_EXE_wondertope"))
        .args(["canonical-form", &data("cube.json")])
        .env("WONDERTOPE_MAX_DIM", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("WONDERTOPE_MAX_DIM"));
    assert_eq!(run(&["canonical-form", &data("schlegel.json")]).status.code(), Some(0));
}
