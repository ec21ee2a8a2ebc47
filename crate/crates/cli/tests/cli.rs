//! End-to-end runs of the `zigzag` binary: exit codes, JSON schemas and the
//! golden values of `eval`.
//!
//! Set `ZIGZAG_UPDATE_GOLDEN=1` to rewrite `tests/golden/eval.json` from the
//! current build instead of diffing against it.

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

const GOLDEN_ENV: &str = "ZIGZAG_UPDATE_GOLDEN";

fn manifest_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn zigzag_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_zigzag"));
    cmd.args(args).env_remove("ZIGZAG_CONFIG");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().expect("exited"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn zigzag(args: &[&str]) -> Run {
    zigzag_env(args, &[])
}

fn assert_schema(name: &str, value: &Value) {
    let path = manifest_dir().join("schemas").join(format!("{name}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(value).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}");
}

#[test]
fn verify_default_weight_passes() {
    let r = zigzag(&["verify", "--json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert_schema("verify", &v);
    let list = v.as_array().unwrap();
    assert!(list.len() >= 20);
    for item in list {
        assert_eq!(item["pass"], true, "{item}");
        assert_eq!(item["max_weight_checked"], 13);
    }
}

#[test]
fn verify_small_weight_and_perturbed() {
    let r = zigzag(&["verify", "--weight", "5"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("hold at W=5"));

    let r = zigzag(&["verify", "--weight", "7", "--perturb", "--json"]);
    assert_eq!(r.code, 1);
    let v = r.json();
    assert_schema("verify", &v);
    let vlllid = v.as_array().unwrap().iter().find(|x| x["identity"] == "vlllid").unwrap();
    assert_eq!(vlllid["pass"], false);
    assert!(!vlllid["nonzero_words"].as_array().unwrap().is_empty());
}

#[test]
fn verify_rejects_unknown_identity_and_small_weight() {
    assert_eq!(zigzag(&["verify", "--identity", "nope"]).code, 2);
    assert_eq!(zigzag(&["verify", "--weight", "2"]).code, 2);
    let r = zigzag(&["verify", "--weight", "5", "--identity", "sing", "--identity", "vlllid", "--json"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json().as_array().unwrap().len(), 2);
}

#[test]
fn periods_match_closed_form() {
    let r = zigzag(&["periods", "--n-max", "8", "--json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert_schema("periods", &v);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|x| x["matches_closed_form"] == true));
    assert_eq!(rows[0]["coefficient"], "6");
    assert_eq!(rows[2]["coefficient"], "441/8");
}

#[test]
fn periods_cutoff_too_small() {
    let r = zigzag(&["periods", "--n-max", "9"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("too small"), "{}", r.stderr);
}

#[test]
fn periods_numeric_limit() {
    let r = zigzag(&["periods", "--n-max", "4", "--limit", "--json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert_schema("periods", &v);
    for row in v.as_array().unwrap() {
        assert!(row["limit_diff"].as_f64().unwrap() < 1e-6, "{row}");
    }
}

fn golden_cases() -> Vec<Vec<&'static str>> {
    vec![
        vec!["--word", "0101", "--z", "0.3+0.4i", "--mode", "F"],
        vec!["--word", "010", "--z", "-0.7+1.2i", "--mode", "F"],
        vec!["--word", "0110", "--z", "1.6-0.4i", "--mode", "Fhat"],
        vec!["--word", "", "--z", "0+1i", "--mode", "f2"],
        vec!["--word", "01", "--z", "0.25+0.5i", "--mode", "f2"],
        vec!["--word", "10", "--z", "0.5", "--mode", "L"],
        vec!["--word", "100", "--z", "-0.3+0.2i", "--mode", "L"],
    ]
}

#[test]
fn eval_matches_golden_values() {
    let path: PathBuf = manifest_dir().join("tests/golden/eval.json");
    let mut fresh = Vec::new();
    for case in golden_cases() {
        let mut args = vec!["eval", "--json"];
        args.extend(&case);
        let r = zigzag(&args);
        assert_eq!(r.code, 0, "{case:?}: {}", r.stderr);
        let v = r.json();
        assert_schema("eval", &v);
        fresh.push(serde_json::json!({ "args": case, "value_re": v["value_re"], "value_im": v["value_im"] }));
    }
    if std::env::var(GOLDEN_ENV).is_ok_and(|v| v == "1") {
        let body = serde_json::to_string_pretty(&fresh).unwrap() + "\n";
        std::fs::write(&path, body).unwrap();
        return;
    }
    let golden: Vec<Value> = serde_json::from_str(&std::fs::read_to_string(&path).unwrap_or_else(|_| {
        panic!("missing {}; run with {GOLDEN_ENV}=1 to create it", path.display())
    }))
    .unwrap();
    assert_eq!(golden.len(), fresh.len(), "golden cases changed; regenerate with {GOLDEN_ENV}=1");
    for (g, f) in golden.iter().zip(&fresh) {
        assert_eq!(g["args"], f["args"]);
        for key in ["value_re", "value_im"] {
            let (a, b) = (g[key].as_f64().unwrap(), f[key].as_f64().unwrap());
            assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()), "{}: {key} golden {a} now {b}", g["args"]);
        }
    }
}

#[test]
fn eval_usage_errors() {
    assert_eq!(zigzag(&["eval", "--word", "012", "--z", "0.3"]).code, 2);
    assert_eq!(zigzag(&["eval", "--word", "01", "--z", "abc"]).code, 2);
    // x0x1x1x0 is not in B⁰.
    assert_eq!(zigzag(&["eval", "--word", "0110", "--z", "0.3+0.1i", "--mode", "F"]).code, 2);
    assert_eq!(zigzag(&["eval", "--word", "01", "--z", "0.3+0.1i", "--prec", "30"]).code, 2);
    assert_eq!(zigzag(&["eval", "--word", "00", "--z", "0.3+0.1i", "--mode", "f2"]).code, 2);
}

#[test]
fn transport_loops_leave_f_unchanged() {
    for (around, hat) in [("0", false), ("1", false), ("1", true)] {
        let mut args = vec!["transport", "--from", "0.5+0.05i", "--loop", around, "--radius", "0.5", "--json"];
        if hat {
            args.push("--hat");
        }
        let r = zigzag(&args);
        assert_eq!(r.code, 0, "{}", r.stderr);
        let v = r.json();
        assert_schema("transport", &v);
        assert!(v["max_relative_defect"].as_f64().unwrap() < 1e-10);
    }
    assert_eq!(zigzag(&["transport", "--from", "0.5", "--loop", "2"]).code, 2);
    // A loop through a singular point is refused.
    assert_eq!(zigzag(&["transport", "--from", "0.5+0.1i", "--loop", "0", "--radius", "1"]).code, 2);
}

#[test]
fn mc_reproduces_six_zeta_three() {
    let r = zigzag(&["mc", "--n", "3", "--samples", "400000", "--seed", "42", "--workers", "4", "--json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert_schema("mc", &v);
    assert!(v["z_score"].as_f64().unwrap().abs() < 3.0, "{v}");
    let again = zigzag(&["mc", "--n", "3", "--samples", "400000", "--seed", "42", "--workers", "2", "--json"]).json();
    assert_eq!(again["estimate"], v["estimate"]);
}

#[test]
fn mc_graph_export_and_import() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("z4.json");
    let f = file.to_str().unwrap();
    let a = zigzag(&["mc", "--n", "4", "--samples", "50000", "--export-graph", f, "--json"]);
    assert_eq!(a.code, 0, "{}", a.stderr);
    let graph: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_schema("graph", &graph);
    assert_eq!(graph["edges"].as_array().unwrap().len(), 8);
    let b = zigzag(&["mc", "--graph", f, "--samples", "50000", "--json"]);
    assert_eq!(b.code, 0, "{}", b.stderr);
    assert_eq!(a.json()["estimate"], b.json()["estimate"]);
    assert_eq!(b.json()["exact"], Value::Null);
    assert_eq!(zigzag(&["mc", "--n", "3", "--graph", f]).code, 2);
    assert_eq!(zigzag(&["mc"]).code, 2);
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("cfg.json");
    std::fs::write(&file, r#"{"weight": 5, "json": true}"#).unwrap();
    let f = file.to_str().unwrap();
    let r = zigzag(&["verify", "--config", f]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()[0]["max_weight_checked"], 5);
    let r = zigzag_env(&["verify", "--weight", "6"], &[("ZIGZAG_CONFIG", f)]);
    assert_eq!(r.json()[0]["max_weight_checked"], 6);
    std::fs::write(&file, r#"{"weight": "five"}"#).unwrap();
    assert_eq!(zigzag(&["verify", "--config", f]).code, 2);
}
