//! End-to-end tests of the `vilenkin` binary: exit codes, report schema,
//! determinism, and CSV table layout.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_vilenkin"))
}

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("config.toml");
    std::fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

const Z3_INDICATOR: &str = r#"
[tower]
family = "vilenkin-product"
orders = [3, 3, 3, 3, 3]
depth = 5

[function]
family = "indicator"
m = 2
"#;

#[test]
fn missing_config_is_a_config_error() {
    let out = run(&["dual", "--config", "/nonexistent/config.toml"]);
    assert_eq!(code(&out), 2);
    assert!(!out.stderr.is_empty());
}

#[test]
fn malformed_config_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[tower]\nfamily = \"unknown-family\"\ndepth = 3\n");
    let out = run(&["dual", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn theorem_hypothesis_violation_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &format!("{Z3_INDICATOR}\n[params]\nalpha = 1.5\n"),
    );
    let out = run(&[
        "titchmarsh2",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("alpha"), "stderr: {err}");
}

#[test]
fn seed_override_requires_a_random_family() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), Z3_INDICATOR);
    let out = run(&["transform", "--config", cfg.to_str().unwrap(), "--seed", "5"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn transform_report_passes_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), Z3_INDICATOR);
    let out = run(&[
        "transform",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["experiment"], "transform");
    assert_eq!(report["pass"], true);
    assert!(report["data"]["plancherel_residual"].as_f64().unwrap() < 1e-10);
    assert!(report["data"]["roundtrip_residual"].as_f64().unwrap() < 1e-10);
    // JSON round-trip: parse -> serialize -> parse is stable
    let reparsed: Value = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(report, reparsed);
}

#[test]
fn reports_are_deterministic_modulo_wall_clock() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"
[tower]
family = "vilenkin-product"
orders = [3, 3, 3, 3]
depth = 4

[function]
family = "random_fourier"
alpha = 0.5
seed = 11
"#,
    );
    let mut reports = Vec::new();
    for sub in ["a", "b"] {
        let out_dir = dir.path().join(sub);
        let out = run(&[
            "transform",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
        let mut report: Value =
            serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap())
                .unwrap();
        report.as_object_mut().unwrap().remove("wall_clock_ms");
        reports.push(serde_json::to_string(&report).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
}

#[test]
fn seed_and_depth_overrides_are_applied() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"
[tower]
family = "vilenkin-product"
orders = [3, 3, 3]
depth = 3

[function]
family = "random_fourier"
alpha = 0.5
seed = 11
"#,
    );
    let out_dir = dir.path().join("out");
    let out = run(&[
        "transform",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "--seed",
        "99",
        "--depth",
        "5",
    ]);
    assert_eq!(code(&out), 0);
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["seed"], 99);
    assert_eq!(report["config"]["tower"]["depth"], 5);
    assert_eq!(
        report["config"]["tower"]["orders"].as_array().unwrap().len(),
        5
    );
}

#[test]
fn modulus_csv_has_the_documented_schema() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), Z3_INDICATOR);
    let out = run(&[
        "modulus",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(code(&out), 0);
    let csv = std::fs::read_to_string(dir.path().join("modulus.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "n,quotient_size,omega,sqrt_tail,ratio");
    assert_eq!(lines.count(), 5); // one row per level 0..N-1
    assert!(dir.path().join("modulus_loglog.csv").exists());
}

#[test]
fn dual_csv_has_the_documented_schema() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "[tower]\nfamily = \"heisenberg\"\nprime = 3\ndim = 1\ndepth = 1\n",
    );
    let out = run(&[
        "dual",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(code(&out), 0);
    let csv = std::fs::read_to_string(dir.path().join("dual.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "label,dim,level,bracket");
    assert_eq!(lines.count(), 11); // 9 characters + 2 three-dimensional irreps
}

#[test]
fn condition_a_coordinate_witnesses_certify_heisenberg() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "[tower]\nfamily = \"heisenberg\"\nprime = 3\ndim = 1\ndepth = 2\n",
    );
    let out = run(&[
        "condition-a",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    for row in report["data"]["constants"].as_array().unwrap() {
        assert!(row["c"].as_f64().unwrap() > 0.0);
    }
}

#[test]
fn condition_a_pair_witnesses_fail_on_heisenberg() {
    // the pair (l^k, l^k, 0), (0, 0, l^k) is fixed by a nontrivial character,
    // so the certificate degenerates to zero: invariant-failure exit code
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "[tower]\nfamily = \"heisenberg\"\nprime = 3\ndim = 1\ndepth = 2\n\n[params]\nwitnesses = \"pair\"\n",
    );
    let out = run(&[
        "condition-a",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 3);
}

#[test]
fn titchmarsh2_passes_on_a_constructed_ensemble() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"
[tower]
family = "vilenkin-product"
orders = [3, 3, 3, 3, 3, 3, 3, 3]
depth = 8

[function]
family = "random_fourier"
alpha = 0.5
seed = 3

[params]
alpha = 0.5
"#,
    );
    let out = run(&[
        "titchmarsh2",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["data"]["consistent"], true);
}
