//! Report export: a schema-versioned JSON file, plus per-table CSV files and
//! log-log plot data when CSV output is requested.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::config::ConfigError;
use crate::experiments::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(ConfigError(format!(
                "unknown format `{other}` (expected json or csv)"
            ))),
        }
    }
}

/// Writes the report under `out_dir` and returns the created paths.
/// JSON is always written; CSV adds one file per table.
pub fn export(report: &Report, out_dir: &Path, format: Format) -> Result<Vec<PathBuf>, ConfigError> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| ConfigError(format!("cannot create {}: {e}", out_dir.display())))?;
    let mut files = Vec::new();
    let json_path = out_dir.join("report.json");
    let body = serde_json::to_string_pretty(report).expect("report serializes") + "\n";
    write_file(&json_path, &body)?;
    files.push(json_path);
    if format == Format::Csv {
        for (name, table) in csv_tables(report) {
            let path = out_dir.join(name);
            write_file(&path, &table)?;
            files.push(path);
        }
    }
    Ok(files)
}

fn write_file(path: &Path, content: &str) -> Result<(), ConfigError> {
    std::fs::write(path, content)
        .map_err(|e| ConfigError(format!("cannot write {}: {e}", path.display())))
}

fn csv_tables(report: &Report) -> Vec<(String, String)> {
    let d = &report.data;
    match report.experiment {
        "dual" => vec![(
            "dual.csv".into(),
            rows_csv(
                &d["irreps"],
                &["label", "dim", "level", "bracket"],
            ),
        )],
        "transform" => vec![(
            "coefficients.csv".into(),
            rows_csv(&d["coefficients"], &["label", "dim", "level", "hs_norm"]),
        )],
        "vt" => {
            let mut out = String::from("level,lambda\n");
            if let Some(eigs) = d["eigenvalues"].as_array() {
                for (n, v) in eigs.iter().enumerate() {
                    let _ = writeln!(out, "{n},{}", cell(v));
                }
            }
            vec![("eigenvalues.csv".into(), out)]
        }
        "modulus" => {
            let rows = &d["platonov"]["rows"];
            let mut table = String::from("n,quotient_size,omega,sqrt_tail,ratio\n");
            let mut plot = String::from("log_scale,log_omega,log_sqrt_tail\n");
            if let (Some(prow), Some(mrow)) =
                (rows.as_array(), d["table"]["rows"].as_array())
            {
                for (p, m) in prow.iter().zip(mrow) {
                    let _ = writeln!(
                        table,
                        "{},{},{},{},{}",
                        cell(&p["level"]),
                        cell(&m["scale"]),
                        cell(&p["omega"]),
                        cell(&p["sqrt_tail"]),
                        cell(&p["ratio"]),
                    );
                    let scale = m["scale"].as_f64().unwrap_or(f64::NAN);
                    let omega = p["omega"].as_f64().unwrap_or(f64::NAN);
                    let st = p["sqrt_tail"].as_f64().unwrap_or(f64::NAN);
                    if scale > 0.0 && omega > 0.0 && st > 0.0 {
                        let _ = writeln!(plot, "{},{},{}", scale.ln(), omega.ln(), st.ln());
                    }
                }
            }
            vec![
                ("modulus.csv".into(), table),
                ("modulus_loglog.csv".into(), plot),
            ]
        }
        "titchmarsh1" => {
            let mut s = String::from("k,s\n");
            if let Some(vals) = d["s_values"].as_array() {
                for (k, v) in vals.iter().enumerate() {
                    let _ = writeln!(s, "{k},{}", cell(v));
                }
            }
            vec![
                ("s_values.csv".into(), s),
                (
                    "beta_grid.csv".into(),
                    rows_csv(&d["beta_grid"], &["beta", "slope_plain", "slope_weighted"]),
                ),
            ]
        }
        "titchmarsh2" | "dini" => {
            let mut table = String::from("n,quotient_size,omega,sqrt_tail\n");
            let mut plot = String::from("log_scale,log_omega,log_sqrt_tail\n");
            if let Some(rows) = d["table"]["rows"].as_array() {
                for r in rows {
                    let tail = r["tail"].as_f64().unwrap_or(f64::NAN);
                    let st = tail.max(0.0).sqrt();
                    let _ = writeln!(
                        table,
                        "{},{},{},{st}",
                        cell(&r["level"]),
                        cell(&r["scale"]),
                        cell(&r["omega"]),
                    );
                    let scale = r["scale"].as_f64().unwrap_or(f64::NAN);
                    let omega = r["omega"].as_f64().unwrap_or(f64::NAN);
                    if scale > 1.0 && omega > 0.0 && st > 0.0 {
                        let _ = writeln!(plot, "{},{},{}", scale.ln(), omega.ln(), st.ln());
                    }
                }
            }
            vec![
                ("modulus.csv".into(), table),
                ("modulus_loglog.csv".into(), plot),
            ]
        }
        "condition-a" => vec![(
            "condition_a.csv".into(),
            rows_csv(&d["constants"], &["k", "c"]),
        )],
        _ => Vec::new(),
    }
}

fn rows_csv(rows: &Value, columns: &[&str]) -> String {
    let mut out = columns.join(",") + "\n";
    if let Some(rows) = rows.as_array() {
        for row in rows {
            let line: Vec<String> = columns.iter().map(|c| cell(&row[*c])).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
    }
    out
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => {
            if s.contains(',') || s.contains('"') {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.clone()
            }
        }
        other => other.to_string(),
    }
}
