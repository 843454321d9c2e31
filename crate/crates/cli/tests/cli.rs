use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn qsi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsi"))
        .args(args)
        .env_remove("QSI_SEED")
        .output()
        .expect("qsi runs")
}

/// Checks `value` against `schemas/<name>.schema.json`.
fn assert_schema(name: &str, value: &serde_json::Value) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../schemas/{name}.schema.json"));
    let schema: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("schema compiles");
    let messages: Vec<String> = match compiled.validate(value) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    panic!("{name} output violates its schema: {messages:?}");
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(o)).expect("stdout is JSON")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn lr_prints_the_coefficient() {
    let o = qsi(&["lr", "--lam", "2,1", "--mu", "2,1", "--nu", "3,2,1", "--n", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "2\n");
    let o = qsi(&["lr", "--lam", "2,1", "--mu", "2,1", "--nu", "3,2,1", "--n", "3"]);
    assert_eq!(stdout(&o), "4\n");
}

#[test]
fn lr_rejects_increasing_parts() {
    let o = qsi(&["lr", "--lam", "1,2", "--mu", "1", "--nu", "2,1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not weakly decreasing"));
}

#[test]
fn lr_csv_has_a_header() {
    let o = qsi(&["--format", "csv", "lr", "--lam", "1", "--mu", "1", "--nu", "2"]);
    assert_eq!(stdout(&o), "lambda,mu,nu,n,value\n(1),(1),(2),1,1\n");
}

#[test]
fn kronecker_stretch_table_matches_oracle() {
    let o = qsi(&[
        "--format",
        "json",
        "si",
        "--quiver",
        &data("kronecker.json"),
        "--stretch",
        "5",
        "--oracle",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let dims: Vec<u64> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["dim"].as_u64().unwrap())
        .collect();
    assert_eq!(dims, vec![2, 3, 4, 5, 6]);
    assert!(v["rows"].as_array().unwrap().iter().all(|r| r["agree"] == true));
    assert_eq!(v["sigma"]["v1"], 1);
    assert_eq!(v["sigma"]["v2"], -1);
}

#[test]
fn non_orthogonal_vectors_exit_3() {
    let o = qsi(&["si", "--quiver", &data("a2.json"), "--alpha", "1,1", "--beta", "1,1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("= 1"), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
}

#[test]
fn weight_not_vanishing_on_alpha_gives_zero() {
    let o = qsi(&[
        "--format",
        "csv",
        "si",
        "--quiver",
        &data("a2.json"),
        "--alpha",
        "1,2",
        "--sigma",
        "1,-1",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "n,dim\n1,0\n");
    assert!(stderr(&o).contains("sigma(alpha) = -1"));
}

#[test]
fn semistability_needs_a_balanced_weight() {
    let o = qsi(&[
        "semistable",
        "--quiver",
        &data("a2.json"),
        "--alpha",
        "1,2",
        "--sigma",
        "1,-1",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn cyclic_quiver_exits_3() {
    let o = qsi(&[
        "si",
        "--quiver",
        &data("cyclic.json"),
        "--alpha",
        "1,1",
        "--sigma",
        "1,-1",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("oriented cycle"));
}

#[test]
fn keyed_vectors_and_sigma_mode() {
    let o = qsi(&[
        "--format",
        "csv",
        "si",
        "--quiver",
        &data("a2.json"),
        "--alpha",
        "v2=1,v1=1",
        "--sigma",
        "v1=1,v2=-1",
        "--stretch",
        "3",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "n,dim\n1,1\n2,1\n3,1\n");
}

#[test]
fn file_values_override_flags_with_a_warning() {
    let o = qsi(&[
        "si",
        "--quiver",
        &data("kronecker.json"),
        "--alpha",
        "2,2",
        "--stretch",
        "2",
    ]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("warning: alpha"));
    assert!(stdout(&o).contains("alpha = v1=1 v2=1"));
}

#[test]
fn missing_file_is_a_usage_error() {
    let o = qsi(&["si", "--quiver", "/nonexistent/q.json", "--alpha", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn translate_worked_example() {
    let o = qsi(&[
        "--format",
        "json",
        "translate",
        "--problem",
        &data("worked_flag.json"),
        "--stretch",
        "2",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["flag_quiver"]["sigma"]["r"], -5);
    assert_eq!(v["flag_quiver"]["beta"]["1^1"], 0);
    for check in v["checks"].as_array().unwrap() {
        assert_eq!(check["quiver_dim"], check["tensor_dim"]);
    }
}

#[test]
fn translate_generated_problem() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    std::fs::write(&path, r#"{"r": 3, "ell": 3, "lambdas": [[2, 1], [2, 1], [2, 1]]}"#).unwrap();
    let o = qsi(&[
        "--format",
        "csv",
        "translate",
        "--problem",
        path.to_str().unwrap(),
        "--n",
        "2",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let line = stdout(&o).lines().nth(1).unwrap().to_string();
    let cells: Vec<&str> = line.split(',').collect();
    assert_eq!(cells[1], cells[2]);
    assert_eq!(cells[3], "true");
}

#[test]
fn codim_failure_exits_4() {
    let o = qsi(&["translate", "--problem", &data("codim_fail.json")]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("codimension"));
}

#[test]
fn zero_trials_is_rejected() {
    let o = qsi(&["ext-descent", "--quiver", &data("kronecker.json"), "--trials", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn ext_descent_reports_keyed_vectors() {
    let o = qsi(&[
        "--format",
        "json",
        "ext-descent",
        "--quiver",
        &data("a2.json"),
        "--alpha",
        "0,1",
        "--beta",
        "1,1",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["hom_vw"], 1);
    assert_eq!(v["gamma"]["v2"], 1);
    assert_eq!(v["kernel_dim"]["v2"], 0);
    assert_eq!(v["equal"], true);
}

#[test]
fn semistable_kronecker() {
    let o = qsi(&["--format", "json", "semistable", "--quiver", &data("kronecker.json")]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["semistable"], true);
}

#[test]
fn search_is_deterministic_json_lines() {
    let args = [
        "--format",
        "json",
        "search",
        "--vertices",
        "3",
        "--dim",
        "2",
        "--stretch",
        "4",
    ];
    let a = qsi(&args);
    let b = qsi(&args);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(stdout(&a), stdout(&b));
    let out = stdout(&a);
    let lines: Vec<&str> = out.lines().collect();
    assert!(!lines.is_empty());
    for line in &lines {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["table"]["values"][0], 2);
        assert_eq!(v["verdict"]["holds"], true);
    }
    assert!(stderr(&a).contains("0 violations"));
}

#[test]
fn seed_from_environment() {
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_qsi"))
            .args([
                "--format",
                "json",
                "si",
                "--quiver",
                &data("kronecker.json"),
                "--stretch",
                "2",
                "--oracle",
            ])
            .env("QSI_SEED", seed)
            .output()
            .unwrap()
    };
    let a = run("7");
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&run("7")));
    let bad = run("x");
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn json_outputs_match_published_schemas() {
    let lr = qsi(&[
        "--format", "json", "lr", "--lam", "2,1", "--mu", "2,1", "--nu", "3,2,1", "--n", "2",
    ]);
    assert_schema("lr", &json(&lr));

    let si = qsi(&[
        "--format",
        "json",
        "si",
        "--quiver",
        &data("kronecker.json"),
        "--stretch",
        "4",
        "--oracle",
        "--check",
    ]);
    assert_schema("si", &json(&si));
    let si_sigma = qsi(&[
        "--format",
        "json",
        "si",
        "--quiver",
        &data("a2.json"),
        "--alpha",
        "1,1",
        "--sigma",
        "1,-1",
    ]);
    assert_schema("si", &json(&si_sigma));

    let tr = qsi(&[
        "--format",
        "json",
        "translate",
        "--problem",
        &data("worked_flag.json"),
        "--stretch",
        "2",
    ]);
    assert_schema("translate", &json(&tr));

    let ed = qsi(&["--format", "json", "ext-descent", "--quiver", &data("kronecker.json")]);
    assert_schema("ext-descent", &json(&ed));

    let ss = qsi(&[
        "--format",
        "json",
        "semistable",
        "--quiver",
        &data("a2.json"),
        "--alpha",
        "1,2",
        "--sigma",
        "2,-1",
    ]);
    let ss_value = json(&ss);
    assert_schema("semistable", &ss_value);
    assert_eq!(ss_value["semistable"], false);

    let search = qsi(&[
        "--format",
        "json",
        "search",
        "--vertices",
        "3",
        "--dim",
        "2",
        "--stretch",
        "3",
        "--oracle",
    ]);
    for line in stdout(&search).lines() {
        assert_schema("search-finding", &serde_json::from_str(line).unwrap());
    }
}
