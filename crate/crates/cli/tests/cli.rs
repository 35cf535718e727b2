//! Black-box tests of the `xxlde` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use xxlde_cli::error::CliError;

fn xxlde(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xxlde"))
        .args(args)
        .env_remove("LDE_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a CSV output, split into fields.
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().skip(2).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn sweep_length_reaches_saturation() {
    let o = xxlde(&["sweep-length", "--pattern", "alternating:lambda=0.1", "--n", "4:100:2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    let comment = lines.next().unwrap();
    assert!(comment.starts_with("# xxlde ") && comment.contains("alternating:lambda=0.1"));
    assert_eq!(lines.next().unwrap(), "n,x,concurrence,fully_entangled_fraction,fidelity,gap,degenerate");
    let data = rows(&text);
    assert_eq!(data.len(), 49);
    let c: f64 = data.last().unwrap()[2].parse().unwrap();
    assert!((c - 0.98005).abs() < 1e-6);
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| {
        let path = dir.path().join(name);
        let o = xxlde(&[
            "disorder", "--pattern", "endprobe:lambda=0.2", "--chi", "0.2", "--samples", "200",
            "--n", "10:30:10", "--seed", "7", "--threads", threads, "--out", path.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        fs::read_to_string(path).unwrap()
    };
    let a = run("a.csv", "1");
    let b = run("b.csv", "4");
    assert_eq!(a, b);
    for row in rows(&a) {
        let (min, mean, max): (f64, f64, f64) = (row[2].parse().unwrap(), row[4].parse().unwrap(), row[3].parse().unwrap());
        assert!(min <= mean && mean <= max);
        assert_eq!(row[6], "200");
    }
}

#[test]
fn json_output_matches_documented_schema() {
    let o = xxlde(&["gap", "--pattern", "endprobe:lambda=0.1", "--n", "4,6", "--oracle", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["tool"], "xxlde");
    assert_eq!(v["command"], "gap");
    assert_eq!(v["columns"], serde_json::json!(["n", "gap", "degenerate", "oracle_gap"]));
    for row in v["rows"].as_array().unwrap() {
        let (ff, oracle) = (row[1].as_f64().unwrap(), row[3].as_f64().unwrap());
        assert!((ff - oracle).abs() < 1e-10);
    }
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_xxlde"))
        .args(["sweep-length", "--pattern", "uniform", "--n", "2", "--out", "sub/u.csv"])
        .env("LDE_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    let text = fs::read_to_string(dir.path().join("sub/u.csv")).unwrap();
    let x: f64 = rows(&text)[0][1].parse().unwrap();
    assert!((x.abs() - 0.5).abs() < 1e-12);
}

#[test]
fn config_file_mirrors_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(
        &cfg,
        "command = \"sweep-couplings\"\nkind = \"lambdamu\"\nn = [12]\nlambda = \"0.1,0.5\"\nmu = [1.0, 4.0]\n",
    )
    .unwrap();
    let via_file = xxlde(&["run", "--config", cfg.to_str().unwrap()]);
    let via_flags = xxlde(&["sweep-couplings", "--kind", "lambdamu", "--n", "12", "--lambda", "0.1,0.5", "--mu", "1,4"]);
    assert!(via_file.status.success(), "{}", String::from_utf8_lossy(&via_file.stderr));
    assert_eq!(rows(&stdout(&via_file)), rows(&stdout(&via_flags)));
    assert_eq!(rows(&stdout(&via_file)).len(), 4);
}

#[test]
fn teleport_ideal_channel() {
    let o = xxlde(&["teleport", "--n", "2", "--pattern", "uniform", "--nu", "1000", "--alpha", "0:1:0.25"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for row in rows(&stdout(&o)) {
        let (f, p): (f64, f64) = (row[1].parse().unwrap(), row[2].parse().unwrap());
        assert!((f - 1.0).abs() < 1e-6 && (p - 0.5).abs() < 1e-6);
    }
}

#[test]
fn fidelity_map_is_long_format() {
    let o = xxlde(&["tc", "--n", "12", "--grid", "20x20", "--map-temperature", "0.0"]);
    assert!(o.status.success());
    let data = rows(&stdout(&o));
    assert_eq!(data.len(), 400);
    assert!(data.iter().all(|r| r.len() == 4));
}

#[test]
fn configuration_errors_exit_with_one() {
    for args in [
        vec!["sweep-length", "--pattern", "bogus", "--n", "4"],
        vec!["sweep-length", "--pattern", "alternating:lambda=0.1", "--n", "5"],
        vec!["tc", "--n", "12", "--grid", "10x10"],
        vec!["disorder", "--pattern", "uniform", "--chi", "1.5", "--n", "4"],
        vec!["sweep-couplings", "--kind", "lambdamu", "--n", "12", "--lambda", "0.1"],
        vec!["run", "--config", "/nonexistent/run.toml"],
        vec!["frobnicate"],
    ] {
        let o = xxlde(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn numerical_failures_map_to_exit_two() {
    let e = CliError::Model(xxlde::Error::Unbounded { ceiling: 10.0 });
    assert_eq!(e.exit_code(), 2);
    let e = CliError::Model(xxlde::Error::InvalidParameter("x".into()));
    assert_eq!(e.exit_code(), 1);
}

#[test]
fn help_exits_cleanly() {
    let o = xxlde(&["--help"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("sweep-length"));
    assert!(!Path::new("--help").exists());
}
