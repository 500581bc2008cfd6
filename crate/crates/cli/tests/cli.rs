// SPDX-License-Identifier: Apache-2.0

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn bch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bch")).args(args).env_remove("BCH_LOG").output().expect("spawn bch")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

fn re(v: &Value) -> f64 {
    v[0].as_f64().unwrap()
}

#[test]
fn classify_t1a_fixture() {
    let out = bch(&["classify", "--input", &fixture("t1a.json")]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().next(), Some("T1a, D=6, free: e,n"));
}

#[test]
fn classify_xz_only_spec() {
    let out = bch(&["classify", "--input", &fixture("t1c_v.json")]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("T1c_v, D=4"));
    let j = json(&bch(&["classify", "--input", &fixture("t1c_v.json"), "--format", "json"]));
    assert_eq!(j["schema"], "bch-spec/1");
    assert_eq!(j["type"], "T1c_v");
    assert_eq!(j["dimension"], 4);
    assert_eq!(j["jacobi_residual"]["max"], 0.0);
}

#[test]
fn malformed_or_missing_input_exits_3() {
    assert_eq!(code(&bch(&["classify", "--input", &fixture("malformed.json")])), 3);
    assert_eq!(code(&bch(&["solve", "--input", &fixture("does_not_exist.json")])), 3);
}

#[test]
fn jacobi_violation_exits_2() {
    for cmd in ["classify", "solve", "verify"] {
        assert_eq!(code(&bch(&[cmd, "--input", &fixture("t5_broken_jacobi.json")])), 2, "{cmd}");
    }
}

#[test]
fn corrupted_spec_from_tempfile_exits_2() {
    let text = std::fs::read_to_string(fixture("t1a.json")).unwrap();
    let mut doc: Value = serde_json::from_str(&text).unwrap();
    doc["spec"]["m"] = serde_json::json!(0.9);
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "{doc}").unwrap();
    assert_eq!(code(&bch(&["verify", "--input", f.path().to_str().unwrap()])), 2);
}

#[test]
fn solve_t5_gives_both_branches() {
    let j = json(&bch(&["solve", "--input", &fixture("t5.json"), "--format", "json"]));
    let forms = j["closed_forms"].as_array().unwrap();
    assert_eq!(forms.len(), 2);
    assert_eq!(forms[0]["branch"], "factor_xu");
    assert_eq!(forms[1]["branch"], "factor_xz");
    for f in forms {
        assert!(f["residual"].as_f64().unwrap() < 1e-12);
    }
}

#[test]
fn solve_t4_gives_two_roots() {
    let j = json(&bch(&["solve", "--input", &fixture("t4.json"), "--format", "json"]));
    let forms = j["closed_forms"].as_array().unwrap();
    assert_eq!(forms.len(), 2);
    assert_eq!(j["type"], "T4");
}

#[test]
fn solve_t3a_alpha() {
    let j = json(&bch(&["solve", "--input", &fixture("t3a.json"), "--format", "json"]));
    let forms = j["closed_forms"].as_array().unwrap();
    assert_eq!(forms.len(), 1);
    // alpha = (m + u) / u with m = 0.1, u = 0.4.
    assert!((re(&forms[0]["alpha"]) - 1.25).abs() < 1e-15);
}

#[test]
fn inadmissible_alpha_exits_4() {
    let out = bch(&["solve", "--input", &fixture("t3a_inadmissible.json")]);
    assert_eq!(code(&out), 4);
}

#[test]
fn verify_sampled_t1c_ii() {
    let out = bch(&["verify", "--type", "T1c_ii", "--seed", "3", "--tolerance", "1e-9"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("PASS"));
}

#[test]
fn verify_heisenberg_uses_matrix_oracle() {
    let out = bch(&["verify", "--input", &fixture("heisenberg.json"), "--tolerance", "1e-12"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("matrix oracle (heisenberg4)"));
    let j = json(&bch(&["verify", "--input", &fixture("heisenberg.json"), "--tolerance", "1e-12", "--format", "json"]));
    assert_eq!(j["closed_forms"][0]["verified"]["matrix"], true);
    assert!(j["closed_forms"][0]["matrix_discrepancy"].as_f64().unwrap() < 1e-12);
}

#[test]
fn low_order_oracle_fails_verification_with_exit_5() {
    let out = bch(&["verify", "--type", "T4", "--order", "4", "--scale", "0.5"]);
    assert_eq!(code(&out), 5);
    assert!(String::from_utf8_lossy(&out.stderr).contains("worst discrepancy"));
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn verify_all_passes_and_is_deterministic() {
    let a = bch(&["verify", "--all", "--format", "json"]);
    assert_eq!(code(&a), 0);
    let j = json(&a);
    assert_eq!(j["cases"].as_array().unwrap().len(), 13 * 25);
    assert_eq!(j["failed"], 0);
    let b = bch(&["verify", "--all", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn solve_output_is_deterministic() {
    for fmt in ["json", "text"] {
        let a = bch(&["solve", "--type", "T4", "--seed", "7", "--format", fmt]);
        let b = bch(&["solve", "--type", "T4", "--seed", "7", "--format", fmt]);
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn reads_spec_from_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_bch"))
        .args(["classify", "--input", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(br#"{"m": 0.2, "e": [0.1, 0.3]}"#).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("T1c_v, D=4"));
}

#[test]
fn virasoro_k1_matches_sl2() {
    let out = bch(&["virasoro", "--k", "1", "--lambda-minus-k", "0.1", "--lambda-0", "0.1", "--lambda-k", "0.1"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("matrix oracle (sl2)"));
    assert!(text.contains("PASS"));
}

#[test]
fn virasoro_k2_lambda0_zero_central_term() {
    let out = bch(&[
        "virasoro", "--k", "2", "--lambda-minus-k", "0.05", "--lambda-0", "0", "--lambda-k", "0.04", "--central", "1",
        "--format", "json",
    ]);
    assert_eq!(code(&out), 0);
    let j = json(&out);
    assert!((re(&j["c_k"]) - 0.05 * 0.04 / 24.0 * 12.0).abs() < 1e-15);
    assert_eq!(j["closed_form"]["product"], "XZ");
}

#[test]
fn negative_k_is_accepted() {
    let out = bch(&["virasoro", "--k", "-1", "--lambda-minus-k", "0.1", "--lambda-0", "0.2", "--lambda-k", "-0.1"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(code(&bch(&["virasoro", "--k", "0", "--lambda-minus-k", "0.1", "--lambda-0", "0.1", "--lambda-k", "0.1"])), 1);
    assert_eq!(code(&bch(&["verify", "--type", "T1a", "--order", "3"])), 1);
    assert_eq!(code(&bch(&["verify", "--type", "T1a", "--tolerance", "1e-3"])), 1);
    assert_eq!(code(&bch(&["verify", "--type", "T9"])), 1);
    assert_eq!(code(&bch(&["solve"])), 1);
    assert_eq!(code(&bch(&["frobnicate"])), 1);
}
