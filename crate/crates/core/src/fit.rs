//! Power-law model for the decay of the white-noise metrics with gate count,
//!
//! ```text
//! f(nu) = alpha * g(xi) / nu^beta,   g(xi) = xi e^{-xi} / (1 - e^{-xi}) = xi / (e^xi - 1)
//! ```
//!
//! with `xi = eps * nu`. Taking logarithms makes it linear in
//! `(ln alpha, beta)`, so fits are closed-form least squares in log space.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MetricKind {
    W,
    C,
}

impl MetricKind {
    pub fn name(self) -> &'static str {
        match self {
            MetricKind::W => "W",
            MetricKind::C => "C",
        }
    }
}

impl std::fmt::Display for MetricKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "W" | "w" => Ok(MetricKind::W),
            "C" | "c" => Ok(MetricKind::C),
            _ => Err(Error::Fit(format!("unknown metric {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingSample {
    pub nu: f64,
    pub xi: f64,
    pub value: f64,
    pub metric: MetricKind,
    pub n_qubits: usize,
    pub n_seeds: usize,
}

impl ScalingSample {
    pub fn new(nu: f64, epsilon: f64, value: f64, metric: MetricKind) -> Self {
        Self { nu, xi: epsilon * nu, value, metric, n_qubits: 0, n_seeds: 1 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub alpha: f64,
    pub beta: f64,
    /// Root-mean-square misfit of `ln value`.
    pub residual: f64,
    pub n_samples: usize,
}

impl ScalingFit {
    pub fn predict(&self, nu: f64, xi: f64) -> f64 {
        scaling_model(self.alpha, self.beta, nu, xi)
    }
}

/// `xi / (e^xi - 1)`, equal to 1 at `xi = 0`.
pub fn noise_prefactor(xi: f64) -> f64 {
    if xi == 0.0 {
        1.0
    } else {
        xi / xi.exp_m1()
    }
}

pub fn scaling_model(alpha: f64, beta: f64, nu: f64, xi: f64) -> f64 {
    alpha * noise_prefactor(xi) / nu.powf(beta)
}

/// Least-squares fit of `ln value = ln alpha + ln g(xi) - beta ln nu`.
pub fn fit_scaling(samples: &[ScalingSample]) -> Result<ScalingFit> {
    for s in samples {
        if !(s.value.is_finite() && s.value > 0.0) {
            return Err(Error::Fit(format!("value {} at nu = {} is not positive", s.value, s.nu)));
        }
        if !(s.nu.is_finite() && s.nu >= 1.0) {
            return Err(Error::Fit(format!("nu = {} must be at least 1", s.nu)));
        }
        if !(s.xi.is_finite() && s.xi >= 0.0) {
            return Err(Error::Fit(format!("xi = {} must be non-negative", s.xi)));
        }
    }
    let mut distinct: Vec<f64> = samples.iter().map(|s| s.nu).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::Fit(format!(
            "need at least 3 distinct nu values, got {}",
            distinct.len()
        )));
    }

    let x: Vec<f64> = samples.iter().map(|s| s.nu.ln()).collect();
    let y: Vec<f64> = samples
        .iter()
        .map(|s| s.value.ln() - noise_prefactor(s.xi).ln())
        .collect();
    let n = samples.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|xi| (xi - mean_x).powi(2)).sum();
    let sxy: f64 = x.iter().zip(&y).map(|(xi, yi)| (xi - mean_x) * (yi - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let rss: f64 = x
        .iter()
        .zip(&y)
        .map(|(xi, yi)| (yi - intercept - slope * xi).powi(2))
        .sum();
    let fit = ScalingFit {
        alpha: intercept.exp(),
        beta: -slope,
        residual: (rss / n).sqrt(),
        n_samples: samples.len(),
    };
    if !(fit.alpha.is_finite() && fit.beta.is_finite()) {
        return Err(Error::Fit("non-finite fit parameters".into()));
    }
    Ok(fit)
}

/// Exact model value and its leading small-`xi` term `alpha / nu^beta` at
/// fixed `nu`, for `xi` in `(0, 0.5]`.
pub fn small_xi_expansion_check(alpha: f64, beta: f64, xi: f64, nu: f64) -> Result<(f64, f64)> {
    if !(xi > 0.0 && xi <= 0.5) {
        return Err(Error::Domain(format!("xi = {xi} outside (0, 0.5]")));
    }
    if !(nu.is_finite() && nu > 0.0) {
        return Err(Error::Domain(format!("nu = {nu} must be positive")));
    }
    Ok((scaling_model(alpha, beta, nu, xi), alpha / nu.powf(beta)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlphaTrend {
    /// The last step changes alpha by at most [`SATURATION_TOL`] relative.
    Saturated,
    Growing,
    Decreasing,
    /// Fewer than two qubit counts.
    Undetermined,
}

pub const SATURATION_TOL: f64 = 0.1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaRow {
    pub n_qubits: usize,
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaTable {
    pub rows: Vec<AlphaRow>,
    pub trend: AlphaTrend,
}

/// `(N, alpha, beta)` rows in ascending `N` and a label for the trend of
/// alpha over the last two qubit counts.
pub fn alpha_vs_qubits(fits: &BTreeMap<usize, ScalingFit>) -> AlphaTable {
    let rows: Vec<AlphaRow> = fits
        .iter()
        .map(|(&n_qubits, f)| AlphaRow { n_qubits, alpha: f.alpha, beta: f.beta })
        .collect();
    let trend = match rows.as_slice() {
        [.., a, b] => {
            let change = (b.alpha - a.alpha) / a.alpha;
            if change.abs() <= SATURATION_TOL {
                AlphaTrend::Saturated
            } else if change > 0.0 {
                AlphaTrend::Growing
            } else {
                AlphaTrend::Decreasing
            }
        }
        _ => AlphaTrend::Undetermined,
    };
    AlphaTable { rows, trend }
}
