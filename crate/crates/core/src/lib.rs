//! Density-matrix simulation of noisy parametrised circuits and spectral
//! diagnostics of how local depolarising noise turns into global white noise.

pub mod ansatz;
pub mod arrowhead;
pub mod circuit;
pub mod error;
pub mod fit;
pub mod gate;
pub mod linalg;
pub mod metrics;
pub mod models;
pub mod noise;
pub mod pauli;
pub mod random;
pub mod seeding;
pub mod state;

pub use error::{Error, Result};
