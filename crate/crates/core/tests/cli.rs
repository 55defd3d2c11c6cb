use std::path::PathBuf;
use std::process::{Command, Output};

fn problem(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("problems")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quiver-moduli")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn counts_grassmannian_skeleta() {
    let o = run(&["skeleta", &problem("grassmannian_2_4.json"), "--count-only"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "6");
}

#[test]
fn run_reports_projective_line_charts() {
    let o = run(&["--emit", "json", "run", &problem("projective_n1_d2.json"), "--oracle", "--trials", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["skeleton_count"], 4);
    let charts = v["charts"].as_array().unwrap();
    let affine = charts
        .iter()
        .filter(|c| c["affine_space"] == true && c["free_variables"] == 1)
        .count();
    assert_eq!(affine, 2);
    assert!(charts.iter().all(|c| c["oracle"]["passed"] == true));
    let first = &charts[0]["variables"][0];
    assert_eq!(first["slot"], 1);
    assert!(first.get("basePath").is_some());
}

#[test]
fn charts_text_lists_coordinates_and_equations() {
    let o = run(&["charts", &problem("conic.json")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("chart 1: (1) {e_0, a0_0, a0_1*a0_0}"), "{text}");
    assert!(text.contains("0 = x0*x2 - x1"), "{text}");
}

#[test]
fn graded_and_ungraded_flags_differ_on_shifted_generators() {
    let graded = json(&run(&["--emit", "json", "charts", &problem("shifted_generators.json"), "--graded"]));
    let ungraded = json(&run(&["--emit", "json", "charts", &problem("shifted_generators.json"), "--ungraded"]));
    let count = |v: &serde_json::Value| -> usize {
        v["charts"].as_array().unwrap().iter().map(|c| c["variables"].as_array().unwrap().len()).sum()
    };
    assert!(count(&graded) < count(&ungraded));
}

#[test]
fn critical_pairs_for_one_skeleton() {
    let o = run(&["critical-pairs", &problem("kronecker.json"), "--skeleton", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("(a, e_1^(1)): targets [a^(2), b^(2)]"));
    let bad = run(&["critical-pairs", &problem("kronecker.json"), "--skeleton", "99"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stderr(&bad).contains("out of range"));
}

#[test]
fn realize_output_is_a_loadable_problem() {
    let dir = std::env::temp_dir().join(format!("quiver-moduli-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("conic.json");
    let o = run(&[
        "realize",
        "--poly",
        "X0*X2 - X1^2",
        "--n",
        "2",
        "--d",
        "2",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let written: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let bundled: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(problem("conic.json")).unwrap()).unwrap();
    assert_eq!(written["relations"], bundled["relations"]);
    let r = run(&["oracle", out.to_str().unwrap(), "--skeleton", "1", "--trials", "20"]);
    assert_eq!(r.status.code(), Some(0), "{}", stdout(&r));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn degenerate_splits_kronecker_submodule() {
    let o = run(&[
        "--emit",
        "json",
        "degenerate",
        &problem("kronecker.json"),
        "--submodule",
        &problem("kronecker_submodule.json"),
        "--slot",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("true"), "{text}");
}

#[test]
fn partitions_up_to_slot_symmetry() {
    let o = run(&["partitions", &problem("kronecker.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "[1, 3]\n[2, 2]\n");
}

#[test]
fn infeasible_dimension_exits_one() {
    let o = run(&["run", &problem("kronecker.json"), "--dim", "40"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("infeasible"));
}

#[test]
fn input_errors_exit_two_with_location() {
    let dir = std::env::temp_dir().join(format!("quiver-moduli-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(
        &bad,
        "{\n  \"vertices\": [\"1\", \"2\"],\n  \"arrows\": [{\"name\": \"a\", \"from\": \"1\", \"to\": \"2\"}],\n  \"relations\": [\"zz\"],\n  \"top\": {\"1\": 1},\n  \"dimension\": 2\n}\n",
    )
    .unwrap();
    let o = run(&["run", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("line 4") && err.contains("zz"), "{err}");

    let missing = run(&["skeleta", dir.join("missing.json").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(2));

    let layering = run(&["run", &problem("grassmannian_2_4.json"), "--layering", "[[9]]"]);
    assert_eq!(layering.status.code(), Some(2));
    assert!(stderr(&layering).contains("layering"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn layering_override_filters_skeleta() {
    let all = json(&run(&["--emit", "json", "skeleta", &problem("shifted_generators.json")]));
    let first = &all["skeleta"][0];
    let layering = serde_json::to_string(&first["layering"]).unwrap();
    let filtered = json(&run(&[
        "--emit",
        "json",
        "skeleta",
        &problem("shifted_generators.json"),
        "--layering",
        &layering,
    ]));
    let rows = filtered["skeleta"].as_array().unwrap();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r["layering"] == first["layering"]));
}
