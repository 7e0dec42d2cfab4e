//! Result rows and their CSV representation.
//!
//! A results file starts with a `# scramble results schema v1` comment line,
//! followed by a header row and one row per (grid point, seed). Floats are
//! written with 17 significant digits. Metrics that are undefined or were
//! not requested are empty cells, and the `reason` column says why.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

pub const RESULTS_SCHEMA_VERSION: u32 = 1;
pub const RESULTS_SCHEMA_LINE: &str = "# scramble results schema v1";

pub const COLUMNS: [&str; 15] = [
    "family",
    "n_qubits",
    "epsilon",
    "layers",
    "nu",
    "seed",
    "W",
    "C_rel",
    "C_abs",
    "F",
    "lambda1",
    "trace_dist_wn",
    "eta_est",
    "wall_time_seconds",
    "reason",
];

/// Reason codes for empty metric cells.
pub mod reason {
    /// The state is numerically pure, so `W` and `C` are undefined.
    pub const NOISELESS: &str = "noiseless";
    /// `1 - lambda_1` is too small for the normalised metrics although `epsilon > 0`.
    pub const DEGENERATE: &str = "degenerate";
    pub const W_NOT_REQUESTED: &str = "W-not-requested";
    pub const C_NOT_REQUESTED: &str = "C-not-requested";
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub family: String,
    pub n_qubits: usize,
    pub epsilon: f64,
    #[serde(default)]
    pub layers: usize,
    pub nu: usize,
    pub seed: u64,
    #[serde(rename = "W")]
    pub w: Option<f64>,
    #[serde(rename = "C_rel")]
    pub c_rel: Option<f64>,
    #[serde(rename = "C_abs", default)]
    pub c_abs: Option<f64>,
    #[serde(rename = "F", default)]
    pub fidelity: Option<f64>,
    #[serde(default)]
    pub lambda1: Option<f64>,
    #[serde(default)]
    pub trace_dist_wn: Option<f64>,
    #[serde(default)]
    pub eta_est: Option<f64>,
    #[serde(default)]
    pub wall_time_seconds: Option<f64>,
    #[serde(default)]
    pub reason: String,
}

/// 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

impl ResultRow {
    fn record(&self) -> [String; 15] {
        [
            self.family.clone(),
            self.n_qubits.to_string(),
            format_float(self.epsilon),
            self.layers.to_string(),
            self.nu.to_string(),
            self.seed.to_string(),
            opt(self.w),
            opt(self.c_rel),
            opt(self.c_abs),
            opt(self.fidelity),
            opt(self.lambda1),
            opt(self.trace_dist_wn),
            opt(self.eta_est),
            opt(self.wall_time_seconds),
            self.reason.clone(),
        ]
    }
}

/// Appends rows to a results file, flushing after every batch so that an
/// interrupted sweep leaves every completed point on disk.
pub struct ResultWriter<W: Write> {
    inner: csv::Writer<W>,
}

impl ResultWriter<File> {
    pub fn create(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
        }
        let file = File::create(path).map_err(|e| HarnessError::io(path, e))?;
        Self::new(file)
    }
}

impl<W: Write> ResultWriter<W> {
    pub fn new(mut sink: W) -> Result<Self> {
        writeln!(sink, "{RESULTS_SCHEMA_LINE}").map_err(|e| HarnessError::io("<results>", e))?;
        let mut inner = csv::Writer::from_writer(sink);
        inner.write_record(COLUMNS)?;
        inner.flush().map_err(|e| HarnessError::io("<results>", e))?;
        Ok(Self { inner })
    }

    pub fn write_rows(&mut self, rows: &[ResultRow]) -> Result<()> {
        for row in rows {
            self.inner.write_record(row.record())?;
        }
        self.inner.flush().map_err(|e| HarnessError::io("<results>", e))?;
        Ok(())
    }

    pub fn into_inner(self) -> Result<W> {
        self.inner
            .into_inner()
            .map_err(|e| HarnessError::io("<results>", e.into_error()))
    }
}

/// Parses a results file, checking the schema line.
pub fn read_rows(reader: impl std::io::Read) -> Result<Vec<ResultRow>> {
    let mut reader = BufReader::new(reader);
    let mut first = String::new();
    reader.read_line(&mut first).map_err(|e| HarnessError::io("<results>", e))?;
    let version = first
        .trim()
        .strip_prefix('#')
        .and_then(|rest| rest.split_whitespace().skip_while(|w| *w != "schema").nth(1))
        .and_then(|v| v.strip_prefix('v'))
        .and_then(|v| v.parse::<u32>().ok())
        .ok_or_else(|| HarnessError::Schema(format!("missing schema line, found {:?}", first.trim())))?;
    if version != RESULTS_SCHEMA_VERSION {
        return Err(HarnessError::Schema(format!(
            "schema v{version} is not supported (expected v{RESULTS_SCHEMA_VERSION})"
        )));
    }
    let mut csv = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(reader);
    csv.deserialize().map(|r| r.map_err(HarnessError::from)).collect()
}

pub fn read_rows_from_path(path: impl AsRef<Path>) -> Result<Vec<ResultRow>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| HarnessError::io(path, e))?;
    read_rows(file)
}
