//! JSON experiment configuration.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "family": "sel",
//!   "n_qubits": 6,
//!   "layers": [2, 4, 8, 16],
//!   "epsilons": [1e-8],
//!   "parameter_mode": "random",
//!   "seeds": [0, 1, 2],
//!   "metric": "both",
//!   "output": "results.csv"
//! }
//! ```
//!
//! Omitted `epsilons` default to the small-noise proxies: `1e-8` for `W`,
//! `1e-7` for `C`, both for `"both"`. A relative `hamiltonian_file` is
//! resolved against the directory of the config file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use scramble_core::ansatz::{AnsatzSpec, Family, ParameterMode, DEFAULT_SPARSE_TERMS};
use scramble_core::noise::DepolarisingChannel;
use scramble_core::state::MAX_QUBITS;

use crate::error::{HarnessError, Result};

pub const CONFIG_SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_EPSILON_PROXY_W: f64 = 1e-8;
pub const DEFAULT_EPSILON_PROXY_C: f64 = 1e-7;
pub const DEFAULT_SEED_COUNT: u64 = 10;
/// Memory allowed for the dense matrices of one simulation.
pub const DEFAULT_MEMORY_BUDGET_BYTES: u64 = 2 << 30;

/// Dense complex matrices alive at once during one simulation and its
/// spectral analysis (state, eigensolver input, eigensolver workspace).
const MATRICES_PER_SIMULATION: u64 = 6;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
pub enum MetricSelection {
    #[value(name = "W")]
    W,
    #[value(name = "C")]
    C,
    #[default]
    #[serde(rename = "both")]
    #[value(name = "both")]
    Both,
}

impl MetricSelection {
    pub fn wants_w(self) -> bool {
        self != MetricSelection::C
    }

    pub fn wants_c(self) -> bool {
        self != MetricSelection::W
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_schema")]
    pub schema_version: u32,
    pub family: Family,
    pub n_qubits: usize,
    /// Per-gate error rates; see the module docs for the default.
    #[serde(default)]
    pub epsilons: Option<Vec<f64>>,
    /// Layer counts; the gate count `nu` of each point is read off the built circuit.
    pub layers: Vec<usize>,
    #[serde(default)]
    pub parameter_mode: ParameterMode,
    #[serde(default)]
    pub seeds: Option<Vec<u64>>,
    /// Base seed mixed into every per-row circuit seed.
    #[serde(default)]
    pub seed: u64,
    /// Seed of the random XXX/TFI couplings, shared by all rows.
    #[serde(default)]
    pub hamiltonian_seed: u64,
    #[serde(default)]
    pub hamiltonian_file: Option<PathBuf>,
    #[serde(default = "default_sparse_terms")]
    pub sparse_terms_per_layer: usize,
    #[serde(default)]
    pub metric: MetricSelection,
    #[serde(default)]
    pub channel: DepolarisingChannel,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

fn default_schema() -> u32 {
    CONFIG_SCHEMA_VERSION
}

fn default_sparse_terms() -> usize {
    DEFAULT_SPARSE_TERMS
}

/// Overrides taken from the command line.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub output: Option<PathBuf>,
    pub seed_count: Option<u64>,
    pub epsilon_proxy_w: Option<f64>,
    pub epsilon_proxy_c: Option<f64>,
    pub metric: Option<MetricSelection>,
}

impl ExperimentConfig {
    pub fn new(family: Family, n_qubits: usize, layers: Vec<usize>) -> Self {
        Self {
            schema_version: CONFIG_SCHEMA_VERSION,
            family,
            n_qubits,
            epsilons: None,
            layers,
            parameter_mode: ParameterMode::Random,
            seeds: None,
            seed: 0,
            hamiltonian_seed: 0,
            hamiltonian_file: None,
            sparse_terms_per_layer: DEFAULT_SPARSE_TERMS,
            metric: MetricSelection::Both,
            channel: DepolarisingChannel::default(),
            output: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    /// Reads and validates a config file; relative paths inside it are
    /// resolved against its directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let mut config = Self::from_json(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        if let Some(h) = &config.hamiltonian_file {
            if h.is_relative() {
                config.hamiltonian_file = Some(base.join(h));
            }
        }
        Ok(config)
    }

    pub fn apply(&mut self, overrides: &Overrides) {
        if let Some(out) = &overrides.output {
            self.output = Some(out.clone());
        }
        if let Some(n) = overrides.seed_count {
            self.seeds = Some((0..n).collect());
        }
        if let Some(m) = overrides.metric {
            self.metric = m;
        }
        if self.epsilons.is_none() {
            let w = overrides.epsilon_proxy_w.unwrap_or(DEFAULT_EPSILON_PROXY_W);
            let c = overrides.epsilon_proxy_c.unwrap_or(DEFAULT_EPSILON_PROXY_C);
            self.epsilons = Some(default_epsilons(self.metric, w, c));
        }
    }

    pub fn epsilons(&self) -> Vec<f64> {
        self.epsilons
            .clone()
            .unwrap_or_else(|| default_epsilons(self.metric, DEFAULT_EPSILON_PROXY_W, DEFAULT_EPSILON_PROXY_C))
    }

    pub fn seeds(&self) -> Vec<u64> {
        self.seeds.clone().unwrap_or_else(|| (0..DEFAULT_SEED_COUNT).collect())
    }

    pub fn ansatz(&self, layers: usize, seed: u64) -> AnsatzSpec {
        AnsatzSpec {
            family: self.family,
            n_qubits: self.n_qubits,
            n_layers: layers,
            parameter_mode: self.parameter_mode,
            seed,
            sparse_terms_per_layer: self.sparse_terms_per_layer,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if self.schema_version != CONFIG_SCHEMA_VERSION {
            return bad(format!(
                "schema_version {} is not supported (expected {CONFIG_SCHEMA_VERSION})",
                self.schema_version
            ));
        }
        if self.layers.is_empty() {
            return bad("layers must not be empty".into());
        }
        if self.layers.contains(&0) {
            return bad("layer counts must be positive".into());
        }
        if has_duplicates(&self.layers) {
            return bad("layer counts must be distinct".into());
        }
        if let Some(eps) = &self.epsilons {
            if eps.is_empty() {
                return bad("epsilons must not be empty".into());
            }
            if let Some(e) = eps.iter().find(|e| !(0.0..=1.0).contains(*e)) {
                return bad(format!("epsilon {e} outside [0, 1]"));
            }
            let bits: Vec<u64> = eps.iter().map(|e| e.to_bits()).collect();
            if has_duplicates(&bits) {
                return bad("epsilons must be distinct".into());
            }
        }
        if let Some(seeds) = &self.seeds {
            if seeds.is_empty() {
                return bad("seeds must not be empty".into());
            }
            if has_duplicates(seeds) {
                return bad("seeds must be distinct".into());
            }
        }
        if self.family == Family::HvaSparse && self.hamiltonian_file.is_none() {
            return bad("the hva-sparse family needs a hamiltonian_file".into());
        }
        if self.sparse_terms_per_layer == 0 {
            return bad("sparse_terms_per_layer must be positive".into());
        }
        Ok(())
    }

    /// Rejects sizes whose dense matrices exceed `budget_bytes`, before any
    /// simulation starts.
    pub fn check_feasible(&self, budget_bytes: u64) -> Result<()> {
        if self.n_qubits == 0 || self.n_qubits > MAX_QUBITS {
            return Err(HarnessError::Resource(format!(
                "{} qubits is outside the supported range 1..={MAX_QUBITS}",
                self.n_qubits
            )));
        }
        let entries = 1u64 << (2 * self.n_qubits);
        let needed = entries * 16 * MATRICES_PER_SIMULATION;
        if needed > budget_bytes {
            return Err(HarnessError::Resource(format!(
                "{} qubits needs about {} MiB per simulation, budget is {} MiB",
                self.n_qubits,
                needed >> 20,
                budget_bytes >> 20
            )));
        }
        Ok(())
    }
}

fn default_epsilons(metric: MetricSelection, w: f64, c: f64) -> Vec<f64> {
    match metric {
        MetricSelection::W => vec![w],
        MetricSelection::C => vec![c],
        MetricSelection::Both if w == c => vec![w],
        MetricSelection::Both => vec![w, c],
    }
}

fn has_duplicates<T: Ord + Copy>(values: &[T]) -> bool {
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    sorted.windows(2).any(|w| w[0] == w[1])
}
