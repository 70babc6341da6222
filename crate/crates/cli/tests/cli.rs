use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dirichlet-cf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn cycle_index_of_degree_two() {
    let v = json(&["cycle-index", "--n", "2"]);
    assert_eq!(v["n"], 2);
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 2);
    assert_eq!(terms[0]["lambda"], serde_json::json!([2, 0]));
    assert_eq!(
        (terms[0]["num"].as_u64(), terms[0]["den"].as_u64()),
        (Some(1), Some(2))
    );
    assert_eq!(terms[1]["lambda"], serde_json::json!([0, 1]));
    assert_eq!(
        (terms[1]["num"].as_u64(), terms[1]["den"].as_u64()),
        (Some(1), Some(2))
    );
}

#[test]
fn cycle_index_from_group_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c4.txt");
    std::fs::write(&path, "1 2 3 4\n2 3 4 1\n3 4 1 2\n4 1 2 3\n").unwrap();
    let v = json(&["cycle-index", "--group-file", path.to_str().unwrap()]);
    // (t_1^4 + t_2^2 + 2 t_4) / 4
    let terms: Vec<(String, u64, u64)> = v["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| {
            (
                t["lambda"].to_string(),
                t["num"].as_u64().unwrap(),
                t["den"].as_u64().unwrap(),
            )
        })
        .collect();
    assert_eq!(
        terms,
        vec![
            ("[4,0,0,0]".to_string(), 1, 4),
            ("[0,2,0,0]".to_string(), 1, 4),
            ("[0,0,0,1]".to_string(), 1, 2),
        ]
    );
}

#[test]
fn moment_of_order_zero_is_one() {
    let v = json(&["moments", "--alpha", "1,2", "--s", "0.5,0.5", "--n", "0"]);
    assert_eq!(v["value"].as_f64(), Some(1.0));
    for r in v["routes"].as_array().unwrap() {
        assert_eq!(r["value"].as_f64(), Some(1.0));
    }
}

#[test]
fn moment_routes_agree() {
    let v = json(&[
        "moments",
        "--alpha",
        "1,2,3",
        "--s",
        "0.5,0.2,0.1",
        "--n",
        "4",
        "--mc-samples",
        "200000",
    ]);
    let routes = v["routes"].as_array().unwrap();
    let a = routes[0]["value"].as_f64().unwrap();
    let b = routes[1]["value"].as_f64().unwrap();
    let mc = routes[2]["value"].as_f64().unwrap();
    let se = routes[2]["stderr"].as_f64().unwrap();
    assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
    assert!((mc - a).abs() <= 4.0 * se);
}

#[test]
fn output_is_byte_identical() {
    let args = [
        "cf",
        "--beta",
        "2",
        "--f",
        "piecewise:0.5:1,-1",
        "--t-grid",
        "-1:1:0.5",
        "--samples",
        "5000",
        "--seed",
        "9",
    ];
    let a = run(&args);
    let b = run(&args);
    let mut seq = args.to_vec();
    seq.push("--sequential");
    let c = run(&seq);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn cf_csv_columns() {
    let out = run(&[
        "cf",
        "--beta",
        "1.0",
        "--f",
        "piecewise:0.25,0.5,0.75:1.0,-0.5,0.3,0.0",
        "--t-grid",
        "-5:5:0.1",
        "--samples",
        "20000",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("t,re_series,im_series,re_mc,im_mc,stderr")
    );
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 101);
    assert_eq!(rows[0][0], -5.0);
    assert_eq!(rows[1][0], -4.9);
    assert_eq!(rows[50], vec![0.0, 1.0, 0.0, 1.0, 0.0, 0.0]);
    for r in &rows {
        assert!(r[5] >= 0.0);
    }
}

#[test]
fn phi2_exponential_case() {
    // one coordinate with c = a is the exponential
    let out = run(&["phi2", "--alpha", "0.7", "--s", "1", "--t", "-2:2:1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((v[1] - v[0].exp()).abs() < 1e-10);
        assert_eq!(v[2], 0.0);
    }
}

#[test]
fn map_check_all_maps() {
    let v = json(&["map-check", "--k", "3"]);
    assert_eq!(v["maps"], 27);
    assert_eq!(v["pass"], true);
    assert!(v["counterexamples"].as_array().unwrap().is_empty());
}

#[test]
fn dsa_check_report() {
    let v = json(&[
        "dsa-check",
        "--k",
        "3",
        "--alpha",
        "0.5,0.3,0.2",
        "--trials",
        "20",
        "--seed",
        "7",
    ]);
    assert_eq!(v["pass"], true);
    assert!(v["max_error"].as_f64().unwrap() <= 1e-10);
    for r in v["relations"].as_array().unwrap() {
        assert!(r["relation"].is_string() && r["max_error"].is_number());
    }
}

#[test]
fn polya_counts() {
    // binary necklaces on 4 beads under S_4: one per occupancy
    let v = json(&["polya", "--group", "sym:4", "--colors", "2"]);
    assert_eq!(v["total"], 5);
    let v = json(&[
        "polya",
        "--group",
        "cyc:4",
        "--palette",
        "2,1",
        "--brute-force",
    ]);
    assert_eq!(v["total"], 24);
    assert_eq!(v["brute_force"]["agrees"], true);
    let v = json(&[
        "polya",
        "--group",
        "sym:3",
        "--palette",
        "2,1",
        "--probability",
    ]);
    let mut total = 0.0;
    for t in v["probability"].as_array().unwrap() {
        total += t["num"].as_f64().unwrap() / t["den"].as_f64().unwrap();
    }
    assert!((total - 1.0).abs() < 1e-15);
}

#[test]
fn ferguson_sim_table() {
    let out = run(&[
        "ferguson-sim",
        "--beta",
        "1.0",
        "--cells",
        "0.25,0.5,0.75",
        "--samples",
        "20000",
        "--seed",
        "3",
        "--emit",
        "csv",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("exponents,exact,estimate,stderr,z\n"));
    // 4 + 10 + 20 mixed moments and the first stick weight
    assert_eq!(text.lines().count(), 1 + 34 + 1);
}

#[test]
fn operators_cross_check() {
    let v = json(&[
        "operators",
        "--region",
        "0.0:0.5",
        "--lower-region",
        "0.5:1.0",
    ]);
    assert!(v["raise"]["delta"].as_f64().unwrap() <= 1e-12);
    assert!(v["raise_lower"]["delta"].as_f64().unwrap() <= 1e-12);
    let out = run(&[
        "operators",
        "--region",
        "0:0.5",
        "--lower-region",
        "0.5:1",
        "--weights",
        "0.1,0.2,0.3,0.4",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("validation error:"));
}

#[test]
fn verify_single_criterion() {
    let out = run(&["verify", "--criterion", "1", "--output", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert!(v["criteria"][0].get("seconds").is_none());
    assert!(stderr(&out).contains("criterion  1 PASS"));
}

#[test]
fn error_prefixes_and_codes() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("usage error:"));

    let out = run(&["moments", "--alpha", "1,x", "--s", "1,1", "--n", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("malformed list:"));

    let out = run(&["moments", "--alpha", "1,2", "--s", "1,1", "--n", "99"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("validation error:"));

    let out = run(&["cycle-index", "--group-file", "/nonexistent/group.txt"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("io error:"));

    let out = run(&["--tol", "0", "cycle-index", "--n", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn writes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z.json");
    let out = run(&["cycle-index", "--n", "3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["n"], 3);
}

#[test]
fn version_reports_features() {
    let out = run(&["--version"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("features:"));
}

#[test]
fn thread_cap_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_dirichlet-cf"))
        .args(["cycle-index", "--n", "2"])
        .env("DIRICHLET_CF_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let ok = Command::new(env!("CARGO_BIN_EXE_dirichlet-cf"))
        .args(["cycle-index", "--n", "2"])
        .env("DIRICHLET_CF_THREADS", "2")
        .output()
        .unwrap();
    assert!(ok.status.success());
}
