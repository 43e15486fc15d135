use std::process::{Command, Output};

use serde_json::Value;

fn tcb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tcb"))
        .args(args)
        .env_remove("TCB_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn error_json(o: &Output) -> Value {
    serde_json::from_str(String::from_utf8_lossy(&o.stderr).trim()).unwrap()
}

#[test]
fn plan_pair_writes_path_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("w.json");
    std::fs::write(&input, r#"{"m":2,"points":[[1,0,0],[0,0,1]]}"#).unwrap();
    let path = dir.path().join("path.json");
    let csv = dir.path().join("s.csv");
    let o = tcb(&[
        "plan", "--space", "S(2)", "--input", input.to_str().unwrap(),
        "--out", path.to_str().unwrap(), "--csv", csv.to_str().unwrap(), "--samples", "11",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let meta: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let segments = meta["segments"].as_u64().unwrap();
    assert!(segments == 1 || segments == 3);
    let plan: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(plan["path"].is_object());
    let rows = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(rows.lines().count(), 12);
    assert!(rows.starts_with("t,x0,x1,x2"));
}

#[test]
fn plan_even_sphere_tuple_is_a_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("w.json");
    std::fs::write(&input, "[[1,0,0],[0,1,0],[0,0,1],[1,0,0]]").unwrap();
    let o = tcb(&["plan", "--space", "S(2)", "--input", input.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let e = error_json(&o);
    assert_eq!(e["error"], "planner");
    assert!(e["message"].as_str().unwrap().contains("odd sphere dimension"));
}

#[test]
fn plan_three_points_on_s3() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("w.json");
    std::fs::write(&input, "[[1,0,0,0],[0,1,0,0],[-1,0,0,0]]").unwrap();
    let o = tcb(&["plan", "--space", "S(3)", "--input", input.to_str().unwrap()]);
    assert!(o.status.success());
    let meta: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(meta["waypoint_deviation"].as_f64().unwrap() < 1e-9);
}

#[test]
fn plan_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("w.json");
    std::fs::write(&input, "[[1,0,0],[0,1]]").unwrap();
    let o = tcb(&["plan", "--space", "S(2)", "--input", input.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_json(&o)["error"], "input");
    let o = tcb(&["plan", "--space", "RP(2)", "--input", input.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bounds_table_and_json() {
    let o = tcb(&["bounds", "--space", "S(2)", "--n", "4", "--flavor", "sigma", "--format", "table"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("5 ≤ TC^Σ_4 ≤ 5"));
    let o = tcb(&["bounds", "--space", "RP(4)", "--n", "4", "--flavor", "sigma", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["flavor"], "TCsigma");
    assert_eq!((v["lower"].as_u64(), v["upper"].as_u64()), (Some(17), Some(17)));
    assert!(v["derivations"].as_array().unwrap().iter().all(|d| d["rule"].is_string() && d["citation"].is_string()));
}

#[test]
fn bounds_parse_error_has_position() {
    let o = tcb(&["bounds", "--space", "Power(S(2),", "--n", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let e = error_json(&o);
    assert_eq!(e["error"], "parse");
    assert!(e["position"].is_u64());
    assert!(e["expected"].is_array());
}

#[test]
fn sp2_prints_cup_length_and_dumps() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("ring.json");
    let o = tcb(&["sp2", "--space", "RP(4)", "--witness", "--dump", dump.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("cup-length: 8"));
    let d: Value = serde_json::from_str(&std::fs::read_to_string(&dump).unwrap()).unwrap();
    assert!(d["basis"].as_array().unwrap().len() > 1);
    assert!(d["mult"].is_array());
    let o = tcb(&["sp2", "--space", "S(2)", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["poincare_polynomial"], "1 + t^2 + t^4");
    assert_eq!(v["cup_length"], 2);
}

#[test]
fn verify_all_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let o = tcb(&["verify", "--suite", "all", "--trials", "100", "--seed", "1", "--out", a.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = Command::new(env!("CARGO_BIN_EXE_tcb"))
        .args(["verify", "--suite", "all", "--trials", "100", "--out", b.to_str().unwrap()])
        .env("TCB_SEED", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn verify_unknown_suite() {
    let o = tcb(&["verify", "--suite", "nope", "--trials", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_json(&o)["error"], "suite");
}
