use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_carleman-cone"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = run(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad json for {args:?}: {e}"));
    (code(&out), v)
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn solve_reports_the_critical_root() {
    let (c, v) = json(&["solve"]);
    assert_eq!(c, 0);
    assert_eq!(v["command"], "solve");
    let r = &v["result"];
    for key in ["gamma", "m", "epsilon0", "theta_deg", "residuals", "iterations"] {
        assert!(!r[key].is_null(), "missing {key}");
    }
    assert!((r["theta_deg"].as_f64().unwrap() - 98.99).abs() < 0.5);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));

    let human = String::from_utf8(run(&["solve"]).stdout).unwrap();
    assert!(human.lines().any(|l| l == "theta_deg: 98.95"), "{human}");
}

#[test]
fn check_exit_codes_follow_the_verdict() {
    let (c, v) = json(&["check", "--m", "2.46", "--alpha", "1.999", "--eps", "0.60"]);
    assert_eq!(c, 0);
    assert_eq!(v["params"]["gamma"], 0.8092);
    assert_eq!(v["result"]["overall"]["status"], "feasible");

    let (c, v) = json(&["check", "--m", "2.46", "--alpha", "1.999", "--eps", "0.67"]);
    assert_eq!(c, 1);
    let overall = &v["result"]["overall"];
    assert_eq!(overall["status"], "infeasible");
    assert_eq!(overall["key"], "l1_direct");
    let h = overall["witness"].as_f64().unwrap();
    assert!((0.67..=1.0).contains(&h));
    assert!(v["verdicts"]["l1_direct"]["witness_value"].as_f64().unwrap() < 0.0);
}

#[test]
fn usage_errors_exit_three_and_name_the_key() {
    let out = run(&["frontier", "--m", "5"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("m: 5"));

    let out = run(&["solve", "--bogus"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("--bogus"));

    let out = run(&["check", "--eps", "nope"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("eps"));

    assert_eq!(code(&run(&["quadrature", "--grid", "40"])), 3);
    assert_eq!(code(&run(&["frontier", "--alpha", "2"])), 3);
}

#[test]
fn nonconvergence_exits_two() {
    assert_eq!(code(&run(&["solve", "--max-iter", "1"])), 2);
}

#[test]
fn config_file_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    std::fs::write(&path, "# check settings\nm = 2.5\neps = 0.3\nalpha=1.9\n").unwrap();
    let p = path.to_str().unwrap();
    let (c, v) = json(&["check", "--config", p, "--m", "2.4"]);
    assert_eq!(c, 0);
    assert_eq!(v["params"]["m"], 2.4);
    assert_eq!(v["params"]["eps"], 0.3);
    assert_eq!(v["params"]["alpha"], 1.9);
    assert_eq!(v["params"]["gamma"], 0.8092);

    std::fs::write(&path, "m = 2.5\nbeta = 2\n").unwrap();
    let out = run(&["check", "--config", p]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("beta"));
}

#[test]
fn scan_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let out = run(&["scan", "--m-grid", "2.1:2.9:9", "--csv", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let mut rdr = csv::Reader::from_path(&path).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["m", "epsilon_sup", "theta_deg"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 9);
    for row in &rows {
        let m: f64 = row[0].parse().unwrap();
        let eps: f64 = row[1].parse().unwrap();
        let theta: f64 = row[2].parse().unwrap();
        assert!(eps <= ((m - 1.0) / (m + 1.0)).sqrt() + 1e-9);
        assert!(((2.0 * eps.acos()).to_degrees() - theta).abs() < 1e-9);
    }
}

fn flags_from(params: &Value) -> Vec<String> {
    let mut v = Vec::new();
    for key in ["m", "alpha", "gamma", "eps", "dim", "K"] {
        v.push(format!("--{key}"));
        v.push(params[key].to_string());
    }
    for a in params["a_list"].as_array().unwrap() {
        v.push("--a".into());
        v.push(a.to_string());
    }
    v
}

#[test]
fn json_round_trip_reproduces_results() {
    for args in [
        vec!["solve"],
        vec!["gamma1"],
        vec!["check", "--eps", "0.67", "--m", "2.41"],
        vec!["frontier", "--m", "2.3"],
    ] {
        let (c1, first) = json(&args);
        let mut again: Vec<String> = vec![args[0].to_string()];
        again.extend(flags_from(&first["params"]));
        let again: Vec<&str> = again.iter().map(String::as_str).collect();
        let (c2, second) = json(&again);
        assert_eq!(c1, c2);
        assert_eq!(first, second, "round trip differs for {args:?}");
    }
}

#[test]
fn identities_pass_with_default_seed() {
    let (c, v) = json(&["identities"]);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["seed"], 42);
    assert!(v["verdicts"].as_object().unwrap().values().all(|p| p == true));
    let (c, v) = json(&["identities", "--dim", "3", "--seed", "7"]);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["seed"], 7);
}

#[test]
fn quadrature_exit_code_matches_reports() {
    let (c, v) = json(&["quadrature", "--grid", "21", "--K", "0.5"]);
    let reports = v["result"]["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 3);
    let all = reports.iter().all(|r| r["pass"] == true);
    assert_eq!(c, if all { 0 } else { 1 });
    assert!(all);

    let (c, v) = json(&["quadrature", "--grid", "21"]);
    assert_eq!(c, 1);
    assert!(v["result"]["error"].as_str().is_some() || v["result"]["reports"].is_array());
}
