use std::path::Path;
use std::process::{Command, Output};

use paramorphism::cli::{ExperimentConfig, Overrides};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_paramorphism"));
    c.env_remove("PARAMORPHISM_SEED");
    c
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn report(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

#[test]
fn length_of_unit_rotation() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .args(["run", "--experiment", "length", "--flow", "rotation", "--angle", "1.0", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS length"));
    let len = report(dir.path())["constants"]["length"].as_f64().unwrap();
    assert!((len - std::f64::consts::PI.powi(2)).abs() < 1e-3 * len);
}

#[test]
fn three_strands_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin().args(["run", "--n", "3", "--out"]).arg(dir.path()).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("n > 3"));
}

#[test]
fn numerical_failures_exit_three_with_the_error_embedded() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .args(["run", "--experiment", "length", "--flow", "collar", "--delta", "5.0", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let r = report(dir.path());
    assert_eq!(r["pass"], false);
    assert_eq!(r["diagnostics"]["error"]["kind"], "NumericalFailure");
}

#[test]
fn growth_run_writes_report_and_points() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .args(["run", "--experiment", "p2", "--flow", "eggbeater", "--qm", "cross-linking", "--n", "4"])
        .args(["--k", "1..8", "--samples", "400", "--seed", "7", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let r = report(dir.path());
    assert!(r["constants"]["slope"].as_f64().unwrap() > 0.0);
    assert_eq!(r["config_hash"].as_str().unwrap().len(), 64);
    assert_eq!(r["manifest"]["name"], "cross-linking");
    let csv = std::fs::read_to_string(dir.path().join("points.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("experiment,k_or_index,value,stderr,samples,seed"));
    assert_eq!(lines.count(), 8);
}

#[test]
fn same_config_file_twice_gives_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    std::fs::write(&config, "schema_version = 1\nexperiment = \"estimate\"\nsamples = 300\nseed = 11\n").unwrap();
    let run = |out: &str, workers: &str| {
        let o = bin()
            .arg("run")
            .arg("--config")
            .arg(&config)
            .args(["--workers", workers, "--out"])
            .arg(dir.path().join(out))
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        std::fs::read(dir.path().join(out).join("report.json")).unwrap()
    };
    assert_eq!(run("a", "1"), run("b", "3"));
}

#[test]
fn environment_seed_is_a_default_only() {
    let dir = tempfile::tempdir().unwrap();
    let run = |seed_flag: Option<&str>, out: &str| {
        let mut c = bin();
        c.env("PARAMORPHISM_SEED", "42").args(["run", "--experiment", "length", "--out"]).arg(dir.path().join(out));
        if let Some(s) = seed_flag {
            c.args(["--seed", s]);
        }
        assert_eq!(c.output().unwrap().status.code(), Some(0));
        report(&dir.path().join(out))["seed"].as_u64().unwrap()
    };
    assert_eq!(run(None, "env"), 42);
    assert_eq!(run(Some("5"), "flag"), 5);
}

#[test]
fn flags_override_file_keys() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.toml");
    std::fs::write(&path, "schema_version = 1\nn = 6\nsamples = 100\n").unwrap();
    let c = ExperimentConfig::resolve(Some(&path), &Overrides { n: Some(5), ..Default::default() }).unwrap();
    assert_eq!((c.n, c.samples), (5, 100));
    std::fs::write(&path, "schema_version = 1\nn = 6\nsamples = 100\nwidgets = 2\n").unwrap();
    assert!(ExperimentConfig::resolve(Some(&path), &Overrides::default()).is_err());
}

#[test]
fn braid_invariants_table() {
    let o = bin().args(["braid", "invariants", "s1 s1"]).output().unwrap();
    let text = stdout(&o);
    assert!(text.contains("lk12          1\n"), "{text}");
    assert!(text.contains("exponent sum  2\n"));
    let o = bin().args(["braid", "invariants", "s1 s1 s1", "--json"]).output().unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["signature"], -2);
    assert_eq!(v["linking"]["1-2"], 1.5);
}

#[test]
fn braid_compose_and_parse_errors() {
    let o = bin().args(["braid", "compose", "s1", "s1^-1"]).output().unwrap();
    assert_eq!(stdout(&o).trim(), "(empty)");
    let o = bin().args(["braid", "compose", "s1", "s2"]).output().unwrap();
    assert_eq!(stdout(&o).trim(), "s2 s1");
    let o = bin().args(["braid", "invariants", "s1 t2"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn braid_extract_reads_points() {
    let o = bin()
        .args(["braid", "extract", "--flow", "eggbeater", "--points", "0.45,2.44;0.6,1.0;-0.45,2.44;-0.6,1.0", "--json"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).trim().starts_with('['));
}
