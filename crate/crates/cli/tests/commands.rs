use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qconv(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qconv"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("run qconv")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn workdir() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("ch.json"), r#"{"type":"depolarizing","p":0.01}"#).unwrap();
    dir
}

#[test]
fn verify_passes_and_names_checks() {
    let dir = workdir();
    let o = qconv(&["verify", "--blocks", "4"], dir.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("PASS generators commute"));
    assert!(out.contains("PASS encoder stabilizer contract"));
    assert!(!out.contains("FAIL"));
}

#[test]
fn decode_trivial_and_single_flip() {
    let dir = workdir();
    let o = qconv(
        &["decode", "--blocks", "1", "--syndrome", "000000", "--channel", "ch.json"],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["error"], "IIIIIII");
    let ll = v["log_likelihood"].as_f64().unwrap();
    assert!((ll - 7.0 * 0.99f64.ln()).abs() < 1e-12);
    assert_eq!(v["tie_broken"], false);

    let o = qconv(
        &["decode", "--blocks", "1", "--syndrome", "010000", "--channel", "ch.json"],
        dir.path(),
    );
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["error"], "XIIIIII");
}

#[test]
fn decode_random_ties_are_seeded() {
    let dir = workdir();
    let run = |seed: &str| {
        stdout(&qconv(
            &[
                "decode", "--blocks", "1", "--syndrome", "010000", "--channel", "ch.json",
                "--tie", "random", "--seed", seed,
            ],
            dir.path(),
        ))
    };
    assert_eq!(run("5"), run("5"));
}

#[test]
fn bad_inputs_exit_two() {
    let dir = workdir();
    let o = qconv(
        &["decode", "--blocks", "2", "--syndrome", "0101", "--channel", "ch.json"],
        dir.path(),
    );
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("expected 10"), "{}", stderr(&o));

    let o = qconv(&["verify", "--blocks", "0"], dir.path());
    assert_eq!(code(&o), 2);

    let o = qconv(&["decode", "--blocks", "1"], dir.path());
    assert_eq!(code(&o), 2);

    fs::write(dir.path().join("bad.json"), r#"{"type":"depolarizing","q":0.1}"#).unwrap();
    let o = qconv(
        &["decode", "--blocks", "1", "--syndrome", "000000", "--channel", "bad.json"],
        dir.path(),
    );
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("q"), "{}", stderr(&o));

    let o = qconv(
        &["oracle-check", "--blocks", "3", "--channel", "ch.json", "--all-syndromes"],
        dir.path(),
    );
    assert_eq!(code(&o), 2);
}

#[test]
fn oracle_check_reports_zero_mismatches() {
    let dir = workdir();
    let o = qconv(
        &["oracle-check", "--blocks", "1", "--channel", "ch.json", "--all-syndromes"],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["syndromes"], 64);
    assert_eq!(v["mismatches"], 0);

    let o = qconv(
        &["oracle-check", "--blocks", "2", "--channel", "ch.json", "--samples", "50"],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["syndromes"], 50);
}

#[test]
fn simulate_csv_is_reproducible_across_job_counts() {
    let dir = workdir();
    fs::write(
        dir.path().join("sim.json"),
        r#"{"blocks":2,"channel":{"type":"depolarizing","p":0.05},"trials":3000,"seed":9}"#,
    )
    .unwrap();
    let a = qconv(&["--jobs", "1", "simulate", "--config", "sim.json", "--out", "a.csv"], dir.path());
    let b = qconv(&["--jobs", "3", "simulate", "--config", "sim.json", "--out", "b.csv"], dir.path());
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(code(&b), 0);
    let a = fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("b.csv")).unwrap());
    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "N,n,p_or_schedule_id,trials,logical_errors,rate,ci_low,ci_high,seed,elapsed_s"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&row[..4], &["2", "12", "0.05", "3000"]);
    assert_eq!(row[8], "9");
    assert_eq!(row[9], "");
}

#[test]
fn sweep_json_rows_and_strict_config() {
    let dir = workdir();
    fs::write(
        dir.path().join("sw.json"),
        r#"{"blocks":[1,2],"channels":[{"type":"depolarizing","p":0.02},
            {"type":"schedule","id":"flat","probs":[[0.97,0.01,0.01,0.01]]}],"trials":200}"#,
    )
    .unwrap();
    let o = qconv(&["sweep", "--config", "sw.json", "--format", "json"], dir.path());
    // A one-qubit schedule cannot cover n qubits.
    assert_eq!(code(&o), 2);

    fs::write(
        dir.path().join("sw.json"),
        r#"{"blocks":[1,2],"p":[0.02,0.04],"trials":200,"seed":4}"#,
    )
    .unwrap();
    let o = qconv(&["sweep", "--config", "sw.json", "--format", "json", "--timing"], dir.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r["elapsed_s"].is_number()));

    fs::write(
        dir.path().join("sw.json"),
        r#"{"blocks":[1],
"p":[0.1],
"trials":10,
"jobs":2}"#,
    )
    .unwrap();
    let o = qconv(&["sweep", "--config", "sw.json"], dir.path());
    assert_eq!(code(&o), 2);
    let err = stderr(&o);
    assert!(err.contains("jobs") && err.contains("line 4"), "{err}");
}

#[test]
fn export_circuit_round_trips_through_text() {
    let dir = workdir();
    let o = qconv(
        &["export-circuit", "--blocks", "1", "--which", "encode", "--out", "enc.txt"],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(dir.path().join("enc.txt")).unwrap();
    assert!(text.starts_with("H 1\n"));
    assert_eq!(text.split("\n\n").count(), 6);
    let dec = stdout(&qconv(&["export-circuit", "--blocks", "1", "--which", "decode"], dir.path()));
    assert!(dec.starts_with("CZ 2 1\n"));
    assert!(dec.trim_end().ends_with("H 7"));
}

#[test]
fn describe_lists_operators() {
    let dir = workdir();
    let o = qconv(&["describe", "--blocks", "2"], dir.path());
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("\"XZIIIIIIIIII\"") && out.contains("\"IIIIIIIIIIZX\""));
}

#[test]
fn noiseless_simulation_has_zero_rate() {
    let dir = workdir();
    fs::write(
        dir.path().join("sim.json"),
        r#"{"blocks":3,"channel":{"type":"depolarizing","p":0.0},"trials":500}"#,
    )
    .unwrap();
    let o = qconv(&["simulate", "--config", "sim.json", "--format", "json"], dir.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["logical_errors"], 0);
    assert_eq!(v[0]["rate"], 0.0);
}

#[test]
fn rates_grow_along_a_sweep() {
    let dir = workdir();
    fs::write(
        dir.path().join("sw.json"),
        r#"{"blocks":[2],"p":[0.02,0.06,0.15],"trials":4000,"seed":11}"#,
    )
    .unwrap();
    let o = qconv(&["sweep", "--config", "sw.json", "--format", "json"], dir.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rates: Vec<f64> = v.as_array().unwrap().iter().map(|r| r["rate"].as_f64().unwrap()).collect();
    assert_eq!(rates.len(), 3);
    assert!(rates.windows(2).all(|w| w[0] < w[1]), "{rates:?}");
}
