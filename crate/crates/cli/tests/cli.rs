use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_adiabatic-pointer");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("ADIABATIC_POINTER_CONSTANTS")
        .output()
        .expect("binary runs")
}

fn config(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn minimal_config_fills_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "p.toml", "command = \"protective-run\"\ntotal_time = 20\n");
    let o = run(&["protective-run", "--config", &cfg, "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let resolved = v["resolved_config"].as_str().unwrap();
    assert!(resolved.contains("grid_points = 1024"));
    assert!(resolved.contains("splitting = \"strang\""));
    assert_eq!(v["command"], "protective-run");
    assert!(v["wall_time"].as_f64().unwrap() >= 0.0);
    assert_eq!(v["constants_version"], "codata-2018/iers-2010/1");
}

#[test]
fn validation_errors_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let neg = config(dir.path(), "a.toml", "total_time = -1.0\n");
    let o = run(&["protective-run", "--config", &neg]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("total_time"), "{}", stderr(&o));

    let colour = config(dir.path(), "b.toml", "colour = \"blue\"\n");
    let o = run(&["protective-run", "--config", &colour]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("colour"));
    assert_eq!(stderr(&o).lines().count(), 1);
}

#[test]
fn parse_error_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = config(dir.path(), "c.toml", "seed = 1\ntotal_time = [\n");
    let o = run(&["protective-run", "--config", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("line 2") || stderr(&o).contains("line 3"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn exit_codes_are_distinct() {
    let dir = tempfile::tempdir().unwrap();
    // numeric: H_S gap below the tolerance floor
    let flat = config(
        dir.path(),
        "d.toml",
        "system_field = [0.0, 0.0, 1e-9]\ntotal_time = 10\n",
    );
    assert_eq!(run(&["protective-run", "--config", &flat]).status.code(), Some(4));
    // dataset
    let csv = config(dir.path(), "bad.csv", "name,value\nx,1\n");
    assert_eq!(run(&["gravity-limits", "--input", &csv]).status.code(), Some(5));
    // constants
    let o = Command::new(BIN)
        .args(["constants"])
        .env("ADIABATIC_POINTER_CONSTANTS", dir.path().join("missing.toml"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(6));
    // io
    let missing = dir.path().join("nope.toml").display().to_string();
    assert_eq!(run(&["constants", "--config", &missing]).status.code(), Some(7));
    // usage
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn help_documents_defaults() {
    let o = run(&["--help"]);
    let h = stdout(&o);
    for key in [
        "grid_points = 1024",
        "splitting = \"strang\"",
        "total_time = 500.0",
        "t_values",
    ] {
        assert!(h.contains(key), "{key}");
    }
}

#[test]
fn sweep_csv_has_one_row_per_t() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "s.toml", "t_values = [50, 100, 200, 400]\n");
    let o = run(&["sweep-T", "--config", &cfg, "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "T,shift_error,infidelity,linear_entropy");
    assert_eq!(lines.len(), 5);
    let ts: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(ts, [50.0, 100.0, 200.0, 400.0]);
}

#[test]
fn gravity_limits_sorted_and_reproducible() {
    let a = run(&["gravity-limits", "--format", "csv"]);
    let b = run(&["gravity-limits", "--format", "csv"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let mut rdr = csv::Reader::from_reader(a.stdout.as_slice());
    let bounds: Vec<f64> = rdr.records().map(|r| r.unwrap()[6].parse::<f64>().unwrap()).collect();
    assert_eq!(bounds.len(), 9);
    assert!(bounds.windows(2).all(|w| w[0] <= w[1]), "{bounds:?}");
}

#[test]
fn seeded_readouts_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "r.toml", "n_samples = 200\n");
    let a = run(&["sample-readout", "--config", &cfg, "--seed", "11", "--format", "csv"]);
    let b = run(&["sample-readout", "--config", &cfg, "--seed", "11", "--format", "csv"]);
    let c = run(&["sample-readout", "--config", &cfg, "--seed", "12", "--format", "csv"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn resolved_config_reproduces_payload() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(
        dir.path(),
        "i.toml",
        "spin_theta = 0.7\nobservable_axis = [1, 0, 1]\npointer_width = 0.04\n",
    );
    let first = run(&["impulsive-run", "--config", &cfg, "--format", "json"]);
    assert_eq!(first.status.code(), Some(0), "{}", stderr(&first));
    let v: Value = serde_json::from_str(&stdout(&first)).unwrap();
    let resolved = config(dir.path(), "resolved.toml", v["resolved_config"].as_str().unwrap());
    let second = run(&["impulsive-run", "--config", &resolved, "--format", "json"]);
    let w: Value = serde_json::from_str(&stdout(&second)).unwrap();
    assert_eq!(v["payload"], w["payload"]);
    assert_eq!(v["resolved_config"], w["resolved_config"]);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("obs.csv");
    let p = path.display().to_string();
    let o = run(&["gravity-observables", "--alpha", "1", "--format", "csv", "--out", &p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let direct = run(&["gravity-observables", "--alpha", "1", "--format", "csv"]);
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}

#[test]
fn alternate_constants_table() {
    let dir = tempfile::tempdir().unwrap();
    let bundled = include_str!("../../core/data/constants.toml");
    let alt = bundled.replace("version = \"codata-2018/iers-2010/1\"", "version = \"test-table\"");
    assert_ne!(alt, bundled);
    let path = dir.path().join("alt.toml");
    std::fs::write(&path, alt).unwrap();
    let o = Command::new(BIN)
        .args(["constants", "--format", "json"])
        .env("ADIABATIC_POINTER_CONSTANTS", &path)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["constants_version"], "test-table");
}

#[test]
fn sterngerlach_report_formats() {
    let text = run(&["sterngerlach-feasibility"]);
    assert!(stdout(&text).contains("critical_velocity"));
    let json = run(&["sterngerlach-feasibility", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(v["payload"][0]["name"], "feasibility");
}
