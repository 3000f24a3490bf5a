use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn lsiib(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lsiib")).args(args).output().unwrap()
}

fn bundled(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("config.toml");
    fs::write(&path, text).unwrap();
    path
}

fn run(config: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["run", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    lsiib(&args)
}

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    v.sort();
    v
}

const FIVE_LEVEL: &str = r#"
scenario = "single-atom-5lvl"
[params]
omega1 = 1.0
omega2 = 0.1
delta = 10.0
big_delta = 0.0
[propagation]
n_steps = 400
"#;

#[test]
fn reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = bundled("blockade_shift_sweep.toml");
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert!(run(&cfg, &a, &["--threads", "1"]).status.success());
    assert!(run(&cfg, &b, &["--threads", "4"]).status.success());
    assert_eq!(files(&a), files(&b));
}

#[test]
fn missing_omega1_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "scenario = \"single-atom-5lvl\"\n[params]\nomega2 = 0.1\ndelta = 10.0\n");
    let out = tmp.path().join("out");
    let o = run(&cfg, &out, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("omega1"));
    assert!(!out.exists());
}

#[test]
fn unknown_key_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), &format!("{FIVE_LEVEL}\n[output]\ncolour = \"red\"\n"));
    let o = run(&cfg, &tmp.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("colour"));
}

#[test]
fn zero_detuning_is_a_numeric_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), &FIVE_LEVEL.replace("delta = 10.0", "delta = 0.0"));
    let out = tmp.path().join("out");
    let o = run(&cfg, &out, &[]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!out.exists());
}

#[test]
fn oversized_ensemble_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "scenario = \"full-ensemble-oracle\"\n[params]\nomega1 = 1.0\nomega2 = 0.1\ndelta = 10.0\nn_atoms = 9\nresonant = true\n",
    );
    let o = run(&cfg, &tmp.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn zero_threads_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), FIVE_LEVEL);
    assert_eq!(run(&cfg, &tmp.path().join("out"), &["--threads", "0"]).status.code(), Some(2));
}

#[test]
fn report_round_trips_and_csv_has_header() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), FIVE_LEVEL);
    let out = tmp.path().join("out");
    assert!(run(&cfg, &out, &[]).status.success());

    let text = fs::read_to_string(out.join("report.json")).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text);
    assert_eq!(v["scenario"], "single-atom-5lvl");
    assert!((v["omega_r"].as_f64().unwrap() - 0.005).abs() < 1e-15);
    assert_eq!(v["regime_adiabatic"], true);

    let csv = fs::read_to_string(out.join("trajectory.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,p_1,p_2,p_3,p_4,p_5"));
    assert_eq!(lines.next(), Some("0.00000000000e0,1.00000000000e0,0.00000000000e0,0.00000000000e0,0.00000000000e0,0.00000000000e0"));
    assert_eq!(csv.lines().count(), 402);

    let manifest: Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["files"].as_array().unwrap().len(), 2);
}

#[test]
fn json_trajectory_conserves_population() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), FIVE_LEVEL);
    let out = tmp.path().join("out");
    assert!(run(&cfg, &out, &["--format", "json"]).status.success());
    let v: Value = serde_json::from_str(&fs::read_to_string(out.join("trajectory.json")).unwrap()).unwrap();
    assert_eq!(v["labels"].as_array().unwrap().len(), 5);
    assert_eq!(v["times"].as_array().unwrap().len(), 401);
    for row in v["populations"].as_array().unwrap() {
        let s: f64 = row.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).sum();
        assert!((s - 1.0).abs() < 1e-8);
    }
}

#[test]
fn sweep_rows_follow_the_grid() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    assert!(run(&bundled("blockade_shift_sweep.toml"), &out, &[]).status.success());
    let csv = fs::read_to_string(out.join("sweep.csv")).unwrap();
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);
    for (i, (row, d)) in rows.iter().zip([10.0, 20.0, 40.0, 80.0]).enumerate() {
        assert_eq!(row[0], i.to_string());
        assert_eq!(row[3].parse::<f64>().unwrap(), d);
        assert_eq!(row.last(), Some(&""));
    }
}

#[test]
fn oracle_compare_reports_differences() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    assert!(run(&bundled("oracle_compare.toml"), &out, &[]).status.success());
    let v: Value = serde_json::from_str(&fs::read_to_string(out.join("comparison.json")).unwrap()).unwrap();
    for label in ["A", "G1", "C1", "G11", "C2", "G12"] {
        let d = v[format!("max_abs_diff_{label}")].as_f64().unwrap();
        assert!((0.0..=1.0).contains(&d));
    }
    assert!(v["asymmetric_population"].as_f64().unwrap() < 1e-10);
}

#[test]
fn derive_prints_light_shifts() {
    let o = lsiib(&["derive", "--config", bundled("single_atom_populations.toml").to_str().unwrap()]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["eps1"].as_f64().unwrap() - 0.025).abs() < 1e-15);
    assert!((v["omega_r"].as_f64().unwrap() - 0.005).abs() < 1e-15);
}
