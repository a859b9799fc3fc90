use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// One emitted row; `residual = C_exact - C_asymptotic` when both exist.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesRow {
    pub k: usize,
    pub stage: &'static str,
    pub alpha: f64,
    #[serde(rename = "P_k")]
    pub p_k: f64,
    #[serde(rename = "C_exact")]
    pub c_exact: f64,
    #[serde(rename = "C_asymptotic")]
    pub c_asymptotic: Option<f64>,
    pub residual: Option<f64>,
    pub units: &'static str,
}

impl SeriesRow {
    pub fn new(
        k: usize,
        stage: &'static str,
        alpha: f64,
        p_k: f64,
        c_exact: f64,
        c_asymptotic: Option<f64>,
        units: &'static str,
    ) -> Self {
        Self { k, stage, alpha, p_k, c_exact, c_asymptotic, residual: c_asymptotic.map(|a| c_exact - a), units }
    }
}

pub const COLUMNS: [&str; 8] = ["k", "stage", "alpha", "P_k", "C_exact", "C_asymptotic", "residual", "units"];

pub struct OutputDir {
    root: PathBuf,
    pub format: Format,
    written: Vec<PathBuf>,
}

impl OutputDir {
    pub fn create(root: &Path, format: Format) -> Result<Self> {
        fs::create_dir_all(root).with_context(|| format!("creating output directory {}", root.display()))?;
        Ok(Self { root: root.to_path_buf(), format, written: Vec::new() })
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    pub fn rows(&mut self, stem: &str, rows: &[SeriesRow]) -> Result<PathBuf> {
        let path = self.root.join(format!("{stem}.{}", self.format.extension()));
        match self.format {
            Format::Csv => {
                let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                let mut w = csv::Writer::from_writer(BufWriter::new(file));
                if rows.is_empty() {
                    w.write_record(COLUMNS)?;
                }
                for r in rows {
                    w.serialize(r).with_context(|| format!("writing {}", path.display()))?;
                }
                w.flush().with_context(|| format!("writing {}", path.display()))?;
            }
            Format::Json => self.write_json(&path, &rows)?,
        }
        self.written.push(path.clone());
        Ok(path)
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf> {
        let path = self.root.join(name);
        self.write_json(&path, value)?;
        self.written.push(path.clone());
        Ok(path)
    }

    fn write_json<T: Serialize>(&self, path: &Path, value: &T) -> Result<()> {
        let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        let mut w = BufWriter::new(file);
        serde_json::to_writer_pretty(&mut w, value).with_context(|| format!("writing {}", path.display()))?;
        w.write_all(b"\n").and_then(|_| w.flush()).with_context(|| format!("writing {}", path.display()))
    }
}
