//! Experiment orchestration for the noise-scrambling study: JSON configs,
//! parallel seed sweeps, versioned CSV results, seed averaging, power-law
//! fits and plot-data files.

pub mod aggregate;
pub mod config;
pub mod error;
pub mod rows;
pub mod scan;
pub mod sweep;

pub use config::{ExperimentConfig, MetricSelection, Overrides};
pub use error::{HarnessError, Result};
pub use rows::ResultRow;
pub use sweep::{run_sweep, run_sweep_into};
