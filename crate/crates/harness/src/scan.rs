//! Fitted `alpha` and `beta` across qubit counts.

use std::collections::BTreeMap;
use std::io::Write;

use scramble_core::fit::{alpha_vs_qubits, AlphaTable, MetricKind};

use crate::aggregate::aggregate_and_fit;
use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};
use crate::rows::{format_float, ResultRow, ResultWriter};
use crate::sweep::run_sweep_into;

pub const ALPHA_SCHEMA_LINE: &str = "# scramble alpha table schema v1";

#[derive(Clone, Debug, PartialEq)]
pub struct AlphaScan {
    pub metric: MetricKind,
    pub epsilon: f64,
    pub table: AlphaTable,
}

/// Repeats the sweep of `config` at every qubit count and fits each
/// (metric, epsilon) series.
pub fn alpha_scan<W: Write>(
    config: &ExperimentConfig,
    qubits: &[usize],
    mut sink: Option<&mut ResultWriter<W>>,
) -> Result<(Vec<ResultRow>, Vec<AlphaScan>)> {
    if qubits.is_empty() {
        return Err(HarnessError::Config("no qubit counts given".into()));
    }
    let mut rows = Vec::new();
    for &n in qubits {
        let mut c = config.clone();
        c.n_qubits = n;
        rows.extend(run_sweep_into(&c, sink.as_deref_mut())?);
    }
    let mut metrics = Vec::new();
    if config.metric.wants_w() {
        metrics.push(MetricKind::W);
    }
    if config.metric.wants_c() {
        metrics.push(MetricKind::C);
    }
    let mut scans = Vec::new();
    for metric in metrics {
        let mut by_eps: BTreeMap<u64, BTreeMap<usize, _>> = BTreeMap::new();
        for g in aggregate_and_fit(&rows, metric)? {
            by_eps
                .entry(g.summary.epsilon.to_bits())
                .or_default()
                .insert(g.summary.n_qubits, g.fit);
        }
        for (bits, fits) in by_eps {
            scans.push(AlphaScan { metric, epsilon: f64::from_bits(bits), table: alpha_vs_qubits(&fits) });
        }
    }
    Ok((rows, scans))
}

pub fn write_alpha_table<W: Write>(sink: W, family: &str, scans: &[AlphaScan]) -> Result<()> {
    let mut sink = sink;
    writeln!(sink, "{ALPHA_SCHEMA_LINE}").map_err(|e| HarnessError::io("<alpha table>", e))?;
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["family", "metric", "epsilon", "n_qubits", "alpha", "beta", "trend"])?;
    for s in scans {
        let trend = serde_json::to_value(s.table.trend)?;
        for r in &s.table.rows {
            w.write_record([
                family.to_string(),
                s.metric.to_string(),
                format_float(s.epsilon),
                r.n_qubits.to_string(),
                format_float(r.alpha),
                format_float(r.beta),
                trend.as_str().unwrap_or_default().to_string(),
            ])?;
        }
    }
    w.flush().map_err(|e| HarnessError::io("<alpha table>", e))?;
    Ok(())
}
