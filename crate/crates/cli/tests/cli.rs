use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn conflab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conflab")).args(args).env_remove("CONFLAB_SEED").output().expect("binary runs")
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).expect("file exists")).expect("valid JSON")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn su_graded_build_writes_algebra_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("su");
    let o = conflab(&["build", "su-graded", "--k", "0", "--l", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let alg = read_json(&out.join("algebra.json"));
    assert_eq!(alg["dim"], 8);
    assert_eq!(alg["grading"]["degrees"].as_array().unwrap().len(), 8);
    assert_eq!(alg["provenance"]["model"], "su-graded");
    let man = read_json(&out.join("manifest.json"));
    assert_eq!(man["outcome"]["status"], "ok");
    assert_eq!(man["mode"], "exact");
    assert_eq!(man["outputs"][0]["name"], "algebra.json");
    assert_eq!(man["outputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn exact_builds_are_byte_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        let o = conflab(&["build", "typeA-lorentz", "--m", "2", "--out", d.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let fa = std::fs::read(a.join("algebra.json")).unwrap();
    let fb = std::fs::read(b.join("algebra.json")).unwrap();
    assert_eq!(fa, fb);
}

#[test]
fn built_models_pass_their_suites() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("flat");
    let o = conflab(&["build", "so-conformal", "--k", "1", "--l", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let alg = out.join("algebra.json");
    for suite in ["jacobi", "grading", "transitivity"] {
        let o = conflab(&["verify", alg.to_str().unwrap(), "--suite", suite]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", stderr(&o));
    }
    let o = conflab(&["verify", out.join("space.json").to_str().unwrap(), "--suite", "prolongation"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn corrupted_structure_constant_yields_jacobi_witness() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ta");
    let o = conflab(&["build", "typeA-lorentz", "--m", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let mut alg = read_json(&out.join("algebra.json"));
    alg["sc"][3]["c"] = Value::String("7".into());
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, alg.to_string()).unwrap();
    let o = conflab(&["--json", "verify", bad.to_str().unwrap(), "--suite", "jacobi"]);
    assert_eq!(o.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "invariant");
    assert_eq!(v["error"]["witness"]["triple"].as_array().unwrap().len(), 3);
    assert_eq!(v["manifest"]["outcome"]["exit_code"], 3);
}

#[test]
fn m_with_non_derivation_reports_pair() {
    let params = r#"{"e_gram": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]],
        "omega": [[0,1,0,0],[-1,0,0,0],[0,0,0,1],[0,0,-1,0]],
        "a": [[0,0,1,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}"#;
    let o = conflab(&["build", "M", "--params", params]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("derivation identity fails on pair"), "{}", stderr(&o));
}

#[test]
fn m_default_parameters_build() {
    let o = conflab(&["--json", "build", "M"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["report"]["dim"], 5);
    assert!(v["files"]["algebra.json"]["sc"].is_array());
}

fn classify_json(path: &Path, extra: &[&str]) -> (Option<i32>, Value) {
    let mut args = vec!["--json"];
    args.extend_from_slice(extra);
    args.extend(["classify", path.to_str().unwrap()]);
    let o = conflab(&args);
    (o.status.code(), serde_json::from_slice(&o.stdout).unwrap_or(Value::Null))
}

#[test]
fn alpha_to_the_fourth_is_type_n_with_homothety() {
    let dir = tempfile::tempdir().unwrap();
    let q = dir.path().join("q.json");
    std::fs::write(&q, r#"{"coeffs": ["1", "0", "0", "0", "0"], "mode": "exact"}"#).unwrap();
    let (code, v) = classify_json(&q, &[]);
    assert_eq!(code, Some(0));
    let c = &v["report"];
    assert_eq!(c["type"], "N");
    assert_eq!(c["conf_dim"], 2);
    assert_eq!(c["aut_dim"], 1);
    assert!(c["type_b"].as_str().unwrap().starts_with("essential homothety"));
    assert!(c["homothety"].is_object());
}

#[test]
fn float_quartic_is_classified_by_invariants() {
    let dir = tempfile::tempdir().unwrap();
    let q = dir.path().join("q.json");
    // u v (u − v)(u + v): four simple roots
    std::fs::write(&q, r#"{"coeffs": ["0", "-2.5e-1", "0", "2.5e-1", "0"], "mode": "float"}"#).unwrap();
    let (code, v) = classify_json(&q, &[]);
    assert_eq!(code, Some(0));
    assert_eq!(v["report"]["type"], "I");
    assert_eq!(v["report"]["exact"], false);
    assert_eq!(v["manifest"]["mode"], "float");
}

#[test]
fn cahen_wallach_tensor_classifies_through_its_weyl_part() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cw");
    let o = conflab(&["build", "cahen-wallach", "--n", "4", "--S", "[[1,0],[0,2]]", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (code, v) = classify_json(&out.join("tensor.json"), &[]);
    assert_eq!(code, Some(0));
    assert_eq!(v["report"]["type"], "N");
    let (code, v) = classify_json(&out.join("tensor.json"), &["--mode", "float"]);
    assert_eq!(code, Some(0));
    assert_eq!(v["report"]["type"], "N");
    // S = id is conformally flat
    let flat = dir.path().join("flat");
    let o = conflab(&["build", "cahen-wallach", "--S", "[[3,0],[0,3]]", "--out", flat.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let (_, v) = classify_json(&flat.join("tensor.json"), &[]);
    assert_eq!(v["report"]["type"], "O");
}

#[test]
fn zero_tensor_is_type_o() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.json");
    std::fs::write(
        &t,
        r#"{"n": 4, "gram": [["0","0","0","1"],["0","1","0","0"],["0","0","1","0"],["1","0","0","0"]],
            "type": "(0,4)", "components": []}"#,
    )
    .unwrap();
    let (code, v) = classify_json(&t, &[]);
    assert_eq!(code, Some(0));
    assert_eq!(v["report"]["type"], "O");
    assert!(v["report"].get("type_b").is_none());
}

#[test]
fn tensor_without_curvature_symmetries_fails_membership() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.json");
    std::fs::write(
        &t,
        r#"{"n": 4, "gram": [["0","0","0","1"],["0","1","0","0"],["0","0","1","0"],["1","0","0","0"]],
            "type": "(0,4)", "components": [{"idx": [0,1,0,1], "c": "1"}]}"#,
    )
    .unwrap();
    let o = conflab(&["classify", t.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let o = conflab(&["verify", t.to_str().unwrap(), "--suite", "curvature-symmetries"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("witness"));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    assert_eq!(conflab(&["classify", missing.to_str().unwrap()]).status.code(), Some(2));
    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{not json").unwrap();
    assert_eq!(conflab(&["verify", junk.to_str().unwrap(), "--suite", "jacobi"]).status.code(), Some(2));
    assert_eq!(conflab(&["build", "cahen-wallach", "--S", "[[1,2],[0,1]]"]).status.code(), Some(2));
    assert_eq!(conflab(&["build", "cahen-wallach", "--n", "5", "--S", "[[1,0],[0,1]]"]).status.code(), Some(2));
    assert_eq!(conflab(&["build", "no-such-model"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_conflab"))
        .args(["oracle", "fefferman-flatness"])
        .env("CONFLAB_SEED", "abc")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn oracles_report() {
    let o = conflab(&["--json", "oracle", "fefferman-flatness", "--m", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["report"]["weyl_zero"], true);

    let o = conflab(&["--json", "oracle", "typeA-su-isomorphism", "--m", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["report"]["dim"], 15);

    let o = conflab(&["--json", "oracle", "M-curvature"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["report"]["r_pq_zero"], true);
    assert_eq!(v["report"]["readings"].as_array().unwrap().len(), 8);
}

#[test]
fn float_mode_build_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("su");
    let o = conflab(&["--mode", "float", "build", "su-graded", "--k", "0", "--l", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let alg = out.join("algebra.json");
    assert!(std::fs::read_to_string(&alg).unwrap().contains("e0"));
    let o = conflab(&["--mode", "float", "--tol", "1e-12", "verify", alg.to_str().unwrap(), "--suite", "jacobi"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(read_json(&out.join("manifest.json"))["mode"], "float");
}
