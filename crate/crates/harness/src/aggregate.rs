//! Seed averaging, scaling fits and the fit-table and plot-data files.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use scramble_core::fit::{fit_scaling, MetricKind, ScalingFit, ScalingSample};

use crate::error::{HarnessError, Result};
use crate::rows::{format_float, ResultRow};

pub const FIT_SCHEMA_LINE: &str = "# scramble fit table schema v1";
pub const PLOT_SCHEMA_LINE: &str = "# scramble plot data schema v1";

/// Number of log-spaced model samples written to each plot file.
pub const CURVE_SAMPLES: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AggregatePoint {
    pub nu: usize,
    pub mean: f64,
    /// Standard error of the mean; zero for a single seed.
    pub stderr: f64,
    pub n_seeds: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub family: String,
    pub n_qubits: usize,
    pub epsilon: f64,
    pub metric: MetricKind,
    pub points: Vec<AggregatePoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupFit {
    pub summary: GroupSummary,
    pub fit: ScalingFit,
}

fn metric_value(row: &ResultRow, metric: MetricKind) -> Option<f64> {
    match metric {
        MetricKind::W => row.w,
        MetricKind::C => row.c_rel,
    }
}

pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Seed means per `nu` for every (family, N, epsilon) group holding values
/// of `metric`. Rows whose metric cell is empty are skipped.
pub fn aggregate(rows: &[ResultRow], metric: MetricKind) -> Vec<GroupSummary> {
    type Key = (String, usize, u64);
    let mut groups: BTreeMap<Key, BTreeMap<usize, Vec<f64>>> = BTreeMap::new();
    for row in rows {
        if let Some(v) = metric_value(row, metric) {
            groups
                .entry((row.family.clone(), row.n_qubits, row.epsilon.to_bits()))
                .or_default()
                .entry(row.nu)
                .or_default()
                .push(v);
        }
    }
    let mut out: Vec<GroupSummary> = groups
        .into_iter()
        .map(|((family, n_qubits, eps_bits), by_nu)| GroupSummary {
            family,
            n_qubits,
            epsilon: f64::from_bits(eps_bits),
            metric,
            points: by_nu
                .into_iter()
                .map(|(nu, values)| {
                    let (mean, stderr) = mean_and_stderr(&values);
                    AggregatePoint { nu, mean, stderr, n_seeds: values.len() }
                })
                .collect(),
        })
        .collect();
    out.sort_by(|a, b| {
        (&a.family, a.n_qubits)
            .cmp(&(&b.family, b.n_qubits))
            .then(a.epsilon.total_cmp(&b.epsilon))
    });
    out
}

pub fn fit_group(summary: &GroupSummary) -> Result<ScalingFit> {
    let samples: Vec<ScalingSample> = summary
        .points
        .iter()
        .map(|p| ScalingSample {
            nu: p.nu as f64,
            xi: summary.epsilon * p.nu as f64,
            value: p.mean,
            metric: summary.metric,
            n_qubits: summary.n_qubits,
            n_seeds: p.n_seeds,
        })
        .collect();
    fit_scaling(&samples).map_err(|e| {
        HarnessError::Core(scramble_core::Error::Fit(format!(
            "{} N={} eps={:e} {}: {e}",
            summary.family, summary.n_qubits, summary.epsilon, summary.metric
        )))
    })
}

/// Seed-averages `rows` and fits every group; fails if any group has
/// fewer than three distinct `nu` or no group has data.
pub fn aggregate_and_fit(rows: &[ResultRow], metric: MetricKind) -> Result<Vec<GroupFit>> {
    let groups = aggregate(rows, metric);
    if groups.is_empty() {
        return Err(HarnessError::Core(scramble_core::Error::Fit(format!(
            "no {metric} values to fit"
        ))));
    }
    groups
        .into_iter()
        .map(|summary| Ok(GroupFit { fit: fit_group(&summary)?, summary }))
        .collect()
}

pub fn write_fit_table<W: Write>(sink: W, fits: &[GroupFit]) -> Result<()> {
    let mut sink = sink;
    writeln!(sink, "{FIT_SCHEMA_LINE}").map_err(|e| HarnessError::io("<fit table>", e))?;
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["family", "n_qubits", "epsilon", "metric", "alpha", "beta", "residual", "n_points"])?;
    for g in fits {
        let s = &g.summary;
        w.write_record([
            s.family.clone(),
            s.n_qubits.to_string(),
            format_float(s.epsilon),
            s.metric.to_string(),
            format_float(g.fit.alpha),
            format_float(g.fit.beta),
            format_float(g.fit.residual),
            g.fit.n_samples.to_string(),
        ])?;
    }
    w.flush().map_err(|e| HarnessError::io("<fit table>", e))?;
    Ok(())
}

/// Data points and fitted curve of one group: rows of kind `data` carry
/// `nu, mean, stderr, fit`; rows of kind `curve` sample the model on a
/// log-spaced grid across the data range.
pub fn write_plot_data<W: Write>(sink: W, group: &GroupFit) -> Result<()> {
    let mut sink = sink;
    writeln!(sink, "{PLOT_SCHEMA_LINE}").map_err(|e| HarnessError::io("<plot data>", e))?;
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["kind", "nu", "mean", "stderr", "fit"])?;
    let eps = group.summary.epsilon;
    for p in &group.summary.points {
        let nu = p.nu as f64;
        w.write_record([
            "data".to_string(),
            p.nu.to_string(),
            format_float(p.mean),
            format_float(p.stderr),
            format_float(group.fit.predict(nu, eps * nu)),
        ])?;
    }
    let lo = group.summary.points.first().map_or(1.0, |p| p.nu as f64).ln();
    let hi = group.summary.points.last().map_or(1.0, |p| p.nu as f64).ln();
    for i in 0..CURVE_SAMPLES {
        let nu = (lo + (hi - lo) * i as f64 / (CURVE_SAMPLES - 1) as f64).exp();
        w.write_record([
            "curve".to_string(),
            format_float(nu),
            String::new(),
            String::new(),
            format_float(group.fit.predict(nu, eps * nu)),
        ])?;
    }
    w.flush().map_err(|e| HarnessError::io("<plot data>", e))?;
    Ok(())
}

/// `<family>_N<n>_eps<epsilon>_<metric>.csv`
pub fn plot_file_name(summary: &GroupSummary) -> String {
    format!(
        "{}_N{}_eps{:e}_{}.csv",
        summary.family, summary.n_qubits, summary.epsilon, summary.metric
    )
}

/// Writes one plot-data file per group into `dir` and returns the paths.
pub fn write_plot_files(dir: &Path, fits: &[GroupFit]) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    fits.iter()
        .map(|g| {
            let path = dir.join(plot_file_name(&g.summary));
            let file = std::fs::File::create(&path).map_err(|e| HarnessError::io(&path, e))?;
            write_plot_data(std::io::BufWriter::new(file), g)?;
            Ok(path)
        })
        .collect()
}
