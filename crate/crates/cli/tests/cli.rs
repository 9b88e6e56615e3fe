use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quasiramsey"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_kab_thousand_rows() {
    let o = run(&["verify", "kab", "--trials", "1000", "--seed", "7", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("suite,seed,instance,lhs,rhs,slack,holds"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 1000);
    assert!(rows.iter().all(|r| r.starts_with("kab,") && r.ends_with(",true")));
}

#[test]
fn jobs_do_not_change_output() {
    for suite in ["local", "k2a", "expansion"] {
        let base = ["verify", suite, "--trials", "60", "--seed", "3", "--mode", "float"];
        let one = run(&[&base[..], &["--jobs", "1"]].concat());
        let four = run(&[&base[..], &["--jobs", "4"]].concat());
        assert_eq!(one.status.code(), Some(0));
        assert_eq!(one.stdout, four.stdout);
    }
    let t1 = run(&["table", "--points", "7", "--r", "5,8", "--jobs", "1"]);
    let t3 = run(&["table", "--points", "7", "--r", "5,8", "--jobs", "3"]);
    assert_eq!(t1.stdout, t3.stdout);
    assert_eq!(stdout(&t1).lines().count(), 15);
}

#[test]
fn repeated_runs_are_identical() {
    let args = ["construct", "sample", "--m", "2", "--n", "200", "--seeds", "3", "--seed", "5"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn ramsey_oracle_prints_six() {
    let o = run(&["oracle", "ramsey", "--s", "3", "--t", "3", "--nmax", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "6");
    let j = run(&["oracle", "ramsey", "--s", "3", "--t", "3", "--nmax", "6", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&j.stdout).unwrap();
    assert_eq!(v["value"], 6);
    let c5 = quasiramsey::io::from_graph6(v["witness_graph6"].as_str().unwrap()).unwrap();
    assert_eq!(c5.n(), 5);
    assert!(c5.degrees().iter().all(|&d| d == 2) && c5.is_connected());
}

#[test]
fn bound_json_record() {
    let o = run(&[
        "bound", "--k", "1000000", "--l", "1000000", "--r", "8", "--eps", "0.25", "--Ceps", "1",
        "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for key in ["k", "l", "r", "epsilon", "c_eps", "regime", "bound_log", "es_baseline_log", "ratio_log"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let ratio = v["ratio_log"]["ln_abs"].as_f64().unwrap();
    let expected = 64.0 * std::f64::consts::LN_2 - 2e6f64.ln();
    assert!((ratio - expected).abs() < 1e-9);
}

#[test]
fn bound_certificate_rows() {
    let o = run(&["bound", "--k", "20000000", "--l", "20000000", "--certificate"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let smooth: Vec<&str> = text.lines().filter(|l| l.starts_with("smooth")).collect();
    assert_eq!(smooth.len(), 12);
    assert!(smooth.iter().all(|l| l.contains(",true,")));
}

#[test]
fn invalid_input_exits_two() {
    for args in [
        &["verify", "nosuch"][..],
        &["bound", "--k", "10", "--l", "10", "--r", "3"],
        &["stats", "--graph", "3\n0 9"],
        &["density", "--pattern", "Q7", "--graph", "K4"],
        &["oracle", "ramsey", "--s", "3", "--t", "3", "--nmax", "40"],
        &["frobnicate"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn out_flag_and_graph_export() {
    let dir = std::env::temp_dir().join(format!("qr-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("paley.g6");
    let o = run(&["construct", "graph", "--graph", "paley:17", "--out", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let d = run(&["density", "--pattern", "K2", "--graph", file.to_str().unwrap(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&d.stdout).unwrap();
    assert_eq!(v["density"], "8/17");
    let w = run(&["oracle", "witness", "--graph", file.to_str().unwrap(), "--k", "3", "--l", "3"]);
    assert!(stdout(&w).lines().nth(1).unwrap().ends_with(",true"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn kernel_inputs() {
    let o = run(&["density", "--pattern", "K2", "--kernel", "block:4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["density"], "5/8");
    let json = r#"{"weights":["1/2","1/2"],"values":[["1/3","2/3"],["2/3","1/3"]]}"#;
    let o = run(&["density", "--pattern", "P2", "--kernel", json, "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["density"], "1/4");
}

#[test]
fn construct_checks() {
    let o = run(&["construct", "block-density", "--m", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1 + 1 + 2 + 6 + 21);
    let d = run(&["construct", "deviation", "--r", "4", "--m", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&d.stdout).unwrap();
    assert_eq!(v["holds"], true);
    assert_eq!(v["connected_spanning"], 38);
    let g = run(&["oracle", "goodman", "--graph", "gnp:12:0.5:4"]);
    assert_eq!(g.status.code(), Some(0));
}
