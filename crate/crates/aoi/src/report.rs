//! Output tables and their CSV / JSON-lines encodings.
//!
//! Every float stored in a row is first rounded to 12 significant digits, so
//! the encoded text is exact and reading a file back yields equal rows.

use std::io::{BufRead, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json line {line}: {source}")]
    Json { line: usize, source: serde_json::Error },
}

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

pub fn round12_opt(x: Option<f64>) -> Option<f64> {
    x.map(round12)
}

/// One line of an AoI distribution table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PmfRow {
    pub n: u64,
    pub prob: f64,
}

impl PmfRow {
    pub fn new(n: u64, prob: f64) -> Self {
        Self { n, prob: round12(prob) }
    }
}

/// Rows `n = 1..` of a pmf vector indexed by AoI.
pub fn pmf_rows(pmf: &[f64]) -> Vec<PmfRow> {
    pmf.iter().enumerate().skip(1).map(|(n, p)| PmfRow::new(n as u64, *p)).collect()
}

/// Summary of one engine run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineRow {
    pub engine: String,
    pub discipline: String,
    pub interarrival: String,
    pub service: String,
    pub mean: f64,
    /// Certified bracket on the mean, when available.
    pub mean_lower: Option<f64>,
    pub mean_upper: Option<f64>,
    pub closed_form_mean: Option<f64>,
    pub formula: Option<String>,
    pub captured_mass: f64,
    pub tail_bound: Option<f64>,
    pub std_error: Option<f64>,
    /// Solver iterations (chain) or recorded slots (simulation).
    pub work: Option<u64>,
    pub note: Option<String>,
}

impl EngineRow {
    /// Applies the output rounding to every float field.
    pub fn rounded(mut self) -> Self {
        self.mean = round12(self.mean);
        self.mean_lower = round12_opt(self.mean_lower);
        self.mean_upper = round12_opt(self.mean_upper);
        self.closed_form_mean = round12_opt(self.closed_form_mean);
        self.captured_mass = round12(self.captured_mass);
        self.tail_bound = round12_opt(self.tail_bound);
        self.std_error = round12_opt(self.std_error);
        self
    }
}

/// Pairwise agreement between two engines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub left: String,
    pub right: String,
    pub left_mean: f64,
    pub right_mean: f64,
    pub mean_gap: f64,
    pub mean_tolerance: f64,
    /// L-infinity gap between the two pmfs.
    pub pmf_gap: f64,
    pub pmf_tolerance: f64,
    pub pass: bool,
}

impl CompareRow {
    pub fn rounded(mut self) -> Self {
        for x in [
            &mut self.left_mean,
            &mut self.right_mean,
            &mut self.mean_gap,
            &mut self.mean_tolerance,
            &mut self.pmf_gap,
            &mut self.pmf_tolerance,
        ] {
            *x = round12(*x);
        }
        self
    }
}

/// One grid point of a parameter sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    /// Geometric interarrival rate, when `Y` is geometric.
    pub p: Option<f64>,
    /// Geometric service rate, when `S` is geometric.
    pub gamma: Option<f64>,
    pub mean_analytic: Option<f64>,
    pub mean_chain: Option<f64>,
    pub mean_sim: Option<f64>,
    pub sim_std_error: Option<f64>,
}

impl SweepRow {
    pub fn rounded(mut self) -> Self {
        for x in [
            &mut self.p,
            &mut self.gamma,
            &mut self.mean_analytic,
            &mut self.mean_chain,
            &mut self.mean_sim,
            &mut self.sim_std_error,
        ] {
            *x = round12_opt(*x);
        }
        self
    }
}

/// Writes rows with a header line (CSV) or one object per line (JSONL).
pub fn write_rows<T: Serialize, W: Write>(rows: &[T], format: Format, out: W) -> Result<(), ReportError> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Jsonl => {
            let mut out = std::io::BufWriter::new(out);
            for (i, r) in rows.iter().enumerate() {
                serde_json::to_writer(&mut out, r).map_err(|source| ReportError::Json { line: i + 1, source })?;
                out.write_all(b"\n")?;
            }
            out.flush()?;
        }
    }
    Ok(())
}

pub fn read_rows<T: DeserializeOwned, R: std::io::Read>(input: R, format: Format) -> Result<Vec<T>, ReportError> {
    match format {
        Format::Csv => {
            let mut r = csv::Reader::from_reader(input);
            Ok(r.deserialize().collect::<Result<Vec<T>, _>>()?)
        }
        Format::Jsonl => {
            let mut rows = Vec::new();
            for (i, line) in std::io::BufReader::new(input).lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                rows.push(serde_json::from_str(&line).map_err(|source| ReportError::Json { line: i + 1, source })?);
            }
            Ok(rows)
        }
    }
}

pub fn write_file<T: Serialize>(path: &Path, rows: &[T], format: Format) -> Result<(), ReportError> {
    write_rows(rows, format, std::fs::File::create(path)?)
}

pub fn read_file<T: DeserializeOwned>(path: &Path, format: Format) -> Result<Vec<T>, ReportError> {
    read_rows(std::fs::File::open(path)?, format)
}
