//! Output plumbing: CSV/JSON rendering and destination resolution.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "SEMICYCLE_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// A rendered table: header plus rows of f64 cells, with deterministic
/// shortest-roundtrip float formatting.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| fmt_f64(*v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = serde_json::Map::new();
                for (name, value) in self.columns.iter().zip(row) {
                    obj.insert((*name).to_string(), json_f64(*value));
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::to_string_pretty(&rows).expect("table serialization") + "\n"
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// Shortest round-trip representation; stable across runs and platforms.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        String::from("nan")
    } else {
        format!("{v}")
    }
}

fn json_f64(v: f64) -> serde_json::Value {
    serde_json::Number::from_f64(v)
        .map(serde_json::Value::Number)
        .unwrap_or(serde_json::Value::Null)
}

/// Write to `--out`, else to `$SEMICYCLE_OUT_DIR/<name>.<ext>`, else stdout.
pub fn emit(out: Option<&PathBuf>, name: &str, format: Format, payload: &str) -> Result<()> {
    match out {
        Some(path) => {
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    fs::create_dir_all(parent)?;
                }
            }
            fs::write(path, payload).with_context(|| format!("writing {}", path.display()))?;
        }
        None => match std::env::var_os(OUT_DIR_ENV) {
            Some(dir) => {
                let mut path = PathBuf::from(dir);
                fs::create_dir_all(&path)?;
                path.push(format!("{name}.{}", format.extension()));
                fs::write(&path, payload)
                    .with_context(|| format!("writing {}", path.display()))?;
                eprintln!("wrote {}", path.display());
            }
            None => {
                std::io::stdout().write_all(payload.as_bytes())?;
            }
        },
    }
    Ok(())
}
