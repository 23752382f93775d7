use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_presnov"))
        .args(args)
        .output()
        .expect("binary runs");
    let code = out.status.code().expect("exit code");
    let stderr = String::from_utf8_lossy(&out.stderr).into_owned();
    let report = if out.stdout.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&out.stdout).expect("stdout is JSON")
    };
    (code, report, stderr)
}

fn schema() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

fn assert_valid(report: &Value) {
    let v = schema();
    let errors: Vec<String> = v.iter_errors(report).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{errors:#?}");
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

fn vec_of(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(num).collect()
}

#[test]
fn decompose_identity_sample() {
    let (code, r, _) = run(&["decompose", "--catalog", "identity", "--dim", "3", "--sample", "10", "--seed", "1"]);
    assert_eq!(code, 0);
    assert_valid(&r);
    let samples = r["payload"]["samples"].as_array().unwrap();
    assert_eq!(samples.len(), 10);
    for s in samples {
        assert!(vec_of(&s["sphere_invariant"]).iter().all(|u| u.abs() < 1e-8));
    }
    assert_eq!(r["payload"]["verification"]["pass"], true);
}

#[test]
fn decompose_rotation_expression() {
    let (code, r, _) = run(&["decompose", "--expr", "-x2; x1", "--at", "1,0"]);
    assert_eq!(code, 0);
    assert_valid(&r);
    let s = &r["payload"]["samples"][0];
    assert_eq!(num(&s["potential"]), 0.0);
    let u = vec_of(&s["sphere_invariant"]);
    assert!(u[0].abs() < 1e-8 && (u[1] - 1.0).abs() < 1e-8, "{u:?}");
}

#[test]
fn decompose_gradient_example_with_cross_check() {
    let (code, r, _) = run(&["decompose", "--expr", "x1^2; x2", "--at", "1,1", "--cross-check"]);
    assert_eq!(code, 0);
    assert_valid(&r);
    assert!((num(&r["payload"]["samples"][0]["potential"]) - 5.0 / 6.0).abs() < 1e-9);
    assert!(num(&r["payload"]["gradient_routes"]["max_scaled_difference"]) < 1e-5);
}

#[test]
fn decompose_reads_points_and_field_files() {
    let dir = tempfile::tempdir().unwrap();
    let field = dir.path().join("field.txt");
    let points = dir.path().join("points.csv");
    std::fs::write(&field, "# spiral\nx1 - x2\nx1 + x2\n").unwrap();
    std::fs::write(&points, "1,0\n0.5, -2\n").unwrap();
    let (code, r, _) = run(&[
        "decompose",
        "--expr-file",
        field.to_str().unwrap(),
        "--points",
        points.to_str().unwrap(),
        "--at",
        "0,1",
    ]);
    assert_eq!(code, 0);
    assert_valid(&r);
    let samples = r["payload"]["samples"].as_array().unwrap();
    assert_eq!(vec_of(&samples[0]["x"]), vec![0.0, 1.0]);
    assert_eq!(vec_of(&samples[2]["x"]), vec![0.5, -2.0]);
    // H = |x|^2 / 2 for this field
    assert!((num(&samples[2]["potential"]) - 2.125).abs() < 1e-10);
}

#[test]
fn parse_errors_exit_2() {
    for args in [
        vec!["decompose", "--expr", "x1 +* 2", "--at", "1"],
        vec!["decompose", "--catalog", "nope", "--dim", "2", "--at", "1,1"],
        vec!["decompose", "--catalog", "identity", "--dim", "2", "--at", "1,1,1"],
        vec!["decompose", "--catalog", "identity", "--dim", "2", "--at", "1,abc"],
        vec!["decompose", "--expr", "x1; x3", "--dim", "2", "--at", "1,1"],
        vec!["coercivity", "--catalog", "linear", "--matrix", "1,2,3"],
    ] {
        let (code, r, err) = run(&args);
        assert_eq!(code, 2, "{args:?}: {err}");
        assert!(r.is_null());
        assert!(err.contains("error"), "{err}");
    }
}

#[test]
fn numeric_failure_exits_3() {
    let (code, r, _) = run(&["decompose", "--expr", "sqrt(x1 - 2); x2", "--at", "1,0"]);
    assert_eq!(code, 3);
    assert_valid(&r);
    assert_eq!(r["outcome"]["status"], "numeric-failure");
}

#[test]
fn coercivity_examples() {
    for (args, verdict) in [
        (vec!["--catalog", "identity", "--dim", "2"], "empirically-coercive"),
        (vec!["--catalog", "rotation2d"], "not-coercive-witness"),
        (vec!["--catalog", "linear", "--matrix", "1,2,0,1"], "not-coercive-witness"),
    ] {
        let mut full = vec!["coercivity"];
        full.extend(args.iter());
        let (code, r, _) = run(&full);
        assert_eq!(code, 0, "{args:?}");
        assert_valid(&r);
        assert_eq!(r["payload"]["field"]["verdict"]["kind"], verdict);
        assert_eq!(r["payload"]["conservative"]["verdict"]["kind"], verdict);
        assert_eq!(r["payload"]["verdicts_agree"], true);
    }
}

#[test]
fn equilibria_radius_mode() {
    let (code, r, _) = run(&["equilibria", "--catalog", "identity", "--dim", "2", "--radius", "1"]);
    assert_eq!(code, 0);
    assert_valid(&r);
    for key in ["field", "conservative"] {
        assert_eq!(r["payload"][key]["status"], "success");
        assert!(vec_of(&r["payload"][key]["point"]).iter().all(|c| c.abs() <= 1e-10));
    }
}

#[test]
fn equilibria_perturb_mode() {
    let (code, r, _) = run(&["equilibria", "--catalog", "identity", "--dim", "2", "--perturb", "3,-4"]);
    assert_eq!(code, 0);
    assert_valid(&r);
    assert_eq!(num(&r["payload"]["rho"]), 8.0);
    for key in ["field", "conservative"] {
        let p = vec_of(&r["payload"][key]["point"]);
        assert!((p[0] + 3.0).abs() < 1e-8 && (p[1] - 4.0).abs() < 1e-8);
    }
}

#[test]
fn certificate_failures_exit_5() {
    let (code, r, _) = run(&["equilibria", "--catalog", "rotation2d", "--radius", "1"]);
    assert_eq!(code, 5);
    assert_valid(&r);
    assert_eq!(r["payload"]["certificate"]["status"], "fail");
    assert!(r["payload"].get("field").is_none());

    let (code, r, _) = run(&["equilibria", "--catalog", "rotation2d", "--perturb", "1,0"]);
    assert_eq!(code, 5);
    assert_valid(&r);
    assert!(r["warnings"].as_array().unwrap().iter().any(|w| w.as_str().unwrap().contains("not empirically coercive")));
}

#[test]
fn overriding_the_certificate_is_recorded() {
    let (code, r, _) = run(&["equilibria", "--catalog", "rotation2d", "--radius", "1", "--no-certificate"]);
    assert_eq!(code, 0);
    assert_valid(&r);
    assert_eq!(r["payload"]["conservative"]["certificate_overridden"], true);
    assert_eq!(r["payload"]["conservative"]["degenerate"], true);
}

#[test]
fn report_goes_to_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = Command::new(env!("CARGO_BIN_EXE_presnov"))
        .args(["decompose", "--catalog", "rotation2d", "--at", "1,2", "-q", "--out", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty() && out.stderr.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_valid(&r);
}

#[test]
fn schema_rejects_malformed_reports() {
    let (_, r, _) = run(&["decompose", "--catalog", "rotation2d", "--at", "1,2"]);
    let v = schema();
    assert!(v.is_valid(&r));
    let mut missing = r.clone();
    missing.as_object_mut().unwrap().remove("timing");
    assert!(!v.is_valid(&missing));
    let mut wrong_version = r.clone();
    wrong_version["report_version"] = 2.into();
    assert!(!v.is_valid(&wrong_version));
    let mut bad_code = r;
    bad_code["outcome"]["exit_code"] = 1.into();
    assert!(!v.is_valid(&bad_code));
}
