use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_recoupler");

struct Work {
    dir: TempDir,
}

impl Work {
    fn new() -> Self {
        let w = Work { dir: tempfile::tempdir().unwrap() };
        w.file("xxz4.json", r#"{"preset":"electrons_on_helium","n_spins":4}"#);
        w.file("xy4.json", r#"{"preset":"quantum_hall","n_spins":4}"#);
        w.file("xxz6.json", r#"{"preset":"electrons_on_helium","n_spins":6}"#);
        w.file(
            "bell.json",
            r#"[{"gate":"rx","target":0,"angle":3.141592653589793},{"gate":"cphase","targets":[0,1]}]"#,
        );
        w.file("cphase.json", r#"[{"gate":"cphase","targets":[0,1]}]"#);
        w.file("rz.json", r#"[{"gate":"rz","target":0,"angle":0.7}]"#);
        w.file("empty.json", "[]");
        w.file("far.json", r#"[{"gate":"cphase","targets":[0,2]}]"#);
        w
    }

    fn file(&self, name: &str, body: &str) -> PathBuf {
        let p = self.path(name);
        fs::write(&p, body).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(BIN).current_dir(self.dir.path()).args(args).output().unwrap()
    }
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn compile_writes_schedule_and_counts() {
    let w = Work::new();
    let o = w.run(&["compile", "--model", "xxz4.json", "--circuit", "bell.json", "--out", "sched.json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("7 steps serial, 5 steps parallel"));
    let s = json(&w.path("sched.json"));
    assert_eq!(s["groups"].as_array().unwrap().len(), 5);
}

#[test]
fn empty_circuit_compiles_to_empty_schedule() {
    let w = Work::new();
    let o = w.run(&["compile", "--model", "xxz4.json", "--circuit", "empty.json", "--out", "s.json"]);
    assert_eq!(code(&o), 0);
    assert!(json(&w.path("s.json"))["groups"].as_array().unwrap().is_empty());
}

#[test]
fn non_adjacent_gate_is_an_input_error() {
    let w = Work::new();
    let o = w.run(&["compile", "--model", "xxz6.json", "--circuit", "far.json"]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("gate 0") && err.contains("connectivity"), "{err}");
}

#[test]
fn verify_passes_in_ideal_mode() {
    let w = Work::new();
    let o = w.run(&["verify", "--model", "xxz4.json", "--circuit", "cphase.json", "--out", "r.json"]);
    assert_eq!(code(&o), 0);
    let r = json(&w.path("r.json"));
    assert_eq!(r["pass"], true);
    assert_eq!(r["circuit"]["step_count_parallel"], 4);
    assert_eq!(r["gates"][0]["mode"], "ideal");

    let o = w.run(&["verify", "--model", "xy4.json", "--circuit", "cphase.json", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["circuit"]["step_count_serial"], 5);
}

#[test]
fn verification_failure_exits_one() {
    let w = Work::new();
    let o = w.run(&["verify", "--model", "xxz4.json", "--circuit", "rz.json", "--mode", "realistic", "--ratio", "10"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn bad_flags_exit_two() {
    let w = Work::new();
    for args in [
        &["verify", "--model", "xxz4.json", "--circuit", "rz.json", "--tol-fidelity", "-1"][..],
        &["verify", "--model", "xxz4.json", "--circuit", "rz.json", "--tol-leakage", "-0.5"],
        &["verify", "--model", "xxz4.json", "--circuit", "rz.json", "--mode", "realistic"],
        &["verify", "--model", "xxz4.json", "--circuit", "rz.json", "--mode", "realistic", "--ratio", "0"],
        &["verify", "--model", "missing.json", "--circuit", "rz.json"],
        &["compile", "--circuit", "rz.json"],
        &["sweep", "--model", "xxz4.json", "--circuit", "rz.json", "--ratios", "-3"],
        &["frobnicate"],
    ] {
        assert_eq!(code(&w.run(args)), 2, "{args:?}");
    }
}

#[test]
fn malformed_inputs_exit_two() {
    let w = Work::new();
    w.file("junk.json", "{not json");
    w.file("badgate.json", r#"[{"gate":"rx","target":0,"angle":0.1},{"gate":"teleport","target":0}]"#);
    assert_eq!(code(&w.run(&["compile", "--model", "junk.json", "--circuit", "rz.json"])), 2);
    let o = w.run(&["compile", "--model", "xxz4.json", "--circuit", "badgate.json"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("gate 1"));
}

#[test]
fn spin_cap_comes_from_environment() {
    let w = Work::new();
    let args = ["compile", "--model", "xxz6.json", "--circuit", "empty.json"];
    let o = Command::new(BIN).current_dir(w.dir.path()).args(args).env("RECOUPLER_MAX_SPINS", "4").output().unwrap();
    assert_eq!(code(&o), 2);
    let o = Command::new(BIN).current_dir(w.dir.path()).args(args).env("RECOUPLER_MAX_SPINS", "6").output().unwrap();
    assert_eq!(code(&o), 0);
}

#[test]
fn compile_then_verify_round_trips() {
    let w = Work::new();
    for serial in [false, true] {
        let mut compile = vec!["compile", "--model", "xxz4.json", "--circuit", "bell.json", "--out", "s.json"];
        let mut direct = vec!["verify", "--model", "xxz4.json", "--circuit", "bell.json", "--out", "a.json"];
        if serial {
            compile.push("--serial");
            direct.push("--serial");
        }
        assert_eq!(code(&w.run(&compile)), 0);
        assert_eq!(code(&w.run(&direct)), 0);
        let mut replay = direct.clone();
        replay[6] = "b.json";
        replay.extend(["--schedule", "s.json"]);
        assert_eq!(code(&w.run(&replay)), 0);
        let a = fs::read(w.path("a.json")).unwrap();
        let b = fs::read(w.path("b.json")).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn exact_cphase_flag_adds_corrections() {
    let w = Work::new();
    let o =
        w.run(&["verify", "--model", "xxz4.json", "--circuit", "cphase.json", "--exact-cphase", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["circuit"]["step_count_serial"], 14);
}

#[test]
fn simulate_reports_code_block() {
    let w = Work::new();
    let o = w.run(&["simulate", "--model", "xxz4.json", "--circuit", "cphase.json", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let m = r["logical"].as_array().unwrap();
    assert_eq!(m.len(), 4);
    // exp(iπ/4 Z⊗Z) is diagonal with unit-modulus entries.
    for (i, row) in m.iter().enumerate() {
        let [re, im] = [row[i][0].as_f64().unwrap(), row[i][1].as_f64().unwrap()];
        assert!((re.hypot(im) - 1.0).abs() < 1e-10);
    }
}

#[test]
fn sweep_writes_csv_rows_in_order() {
    let w = Work::new();
    let o =
        w.run(&["sweep", "--model", "xxz4.json", "--circuit", "rz.json", "--ratios", "10,100,1000", "--out", "s.csv"]);
    assert_eq!(code(&o), 0);
    let mut reader = csv::Reader::from_path(w.path("s.csv")).unwrap();
    assert_eq!(reader.headers().unwrap(), vec!["gate", "r", "fidelity", "leakage"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.iter().map(|r| r[1].to_string()).collect::<Vec<_>>(), ["10", "100", "1000"]);
    let f: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    assert!(f[1] >= f[0] - 1e-6 && f[2] >= f[1] - 1e-6);

    let o = w.run(&["sweep", "--model", "xxz4.json", "--circuit", "rz.json", "--ratios", "inf"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let line = out.lines().nth(1).unwrap();
    let fields: Vec<_> = line.split(',').collect();
    assert_eq!(fields[1], "inf");
    assert!(fields[2].parse::<f64>().unwrap() >= 1.0 - 1e-10);
    assert_eq!(out.lines().count(), 2);
}

#[test]
fn suite_lists_every_identity() {
    let w = Work::new();
    let o = w.run(&["verify", "--suite", "identities", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let entries = v.as_array().unwrap();
    assert_eq!(entries.iter().filter(|e| e["role"] == "stated").count(), 11);
    assert!(entries.iter().all(|e| e["residual"].is_number()));
    // Exit status mirrors whether every entry passed.
    let all = entries.iter().all(|e| e["pass"] == true);
    assert_eq!(code(&o), if all { 0 } else { 1 });
    let same = w.run(&["suite", "--format", "json"]);
    assert_eq!(same.stdout, o.stdout);
}

#[test]
fn cost_table_formats() {
    let w = Work::new();
    let o = w.run(&["cost", "--out", "c.csv"]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(w.path("c.csv")).unwrap();
    assert!(text.lines().next().unwrap().starts_with("model,gate,counting"));
    assert!(text.contains("spin_dots,heis_zz,parallel,6,6,6,true,19,7"));
    let o = w.run(&["cost", "--model", "xy4.json", "--format", "json"]);
    let rows: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(rows.as_array().unwrap().iter().any(|r| r["gate"] == "cphase" && r["steps_serial"] == 5));
}

#[test]
fn verify_csv_keeps_a_fixed_column_set() {
    let w = Work::new();
    w.file("flat.json", r#"{"preset":"electrons_on_helium","n_spins":4,"epsilon":[1.0,1.0,1.4,1.9]}"#);
    w.file("mixed.json", r#"[{"gate":"rx","target":0,"angle":0.3},{"gate":"rz","target":0,"angle":0.3}]"#);
    let o = w.run(&["verify", "--model", "flat.json", "--circuit", "mixed.json", "--format", "csv"]);
    assert_ne!(code(&o), 0);
    let text = stdout(&o);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(reader.headers().unwrap().len(), 9);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(&rows[0][7], "true");
    assert!(rows[1][8].contains("degenerate"));
}
