//! Random states and operators for property checks and synthetic inputs.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::state::{check_qubits, DensityMatrix, StateVector};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state.
pub fn random_state<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Result<StateVector> {
    let d = check_qubits(n_qubits)?;
    let amps = (0..d).map(|_| gaussian(rng)).collect();
    StateVector::from_amplitudes(n_qubits, amps)?.normalised()
}

/// `G G^dagger / tr` for a complex Gaussian `d x rank` matrix `G`.
pub fn random_density_matrix<R: Rng + ?Sized>(
    n_qubits: usize,
    rank: usize,
    rng: &mut R,
) -> Result<DensityMatrix> {
    let d = check_qubits(n_qubits)?;
    if rank == 0 || rank > d {
        return Err(Error::InvalidSize(format!("rank {rank} outside 1..={d}")));
    }
    let g = CMatrix::from_fn(d, rank, |_, _| gaussian(rng));
    let mut m = &g * g.adjoint();
    let tr: f64 = (0..d).map(|i| m[(i, i)].re).sum();
    for i in 0..d {
        for j in 0..d {
            m[(i, j)] /= tr;
        }
    }
    let mut rho = DensityMatrix::from_matrix_unchecked(
        n_qubits,
        (0..d * d).map(|k| m[(k / d, k % d)]).collect(),
    )?;
    rho.hermitize();
    rho.validate()?;
    Ok(rho)
}

/// Random traceless Hermitian matrix with Gaussian entries.
pub fn random_traceless_hermitian<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Result<CMatrix> {
    let d = check_qubits(n_qubits)?;
    let g = CMatrix::from_fn(d, d, |_, _| gaussian(rng));
    let mut h = CMatrix::from_fn(d, d, |i, j| (g[(i, j)] + g[(j, i)].conj()) * 0.5);
    let shift = (0..d).map(|i| h[(i, i)].re).sum::<f64>() / d as f64;
    for i in 0..d {
        h[(i, i)] -= shift;
    }
    Ok(h)
}
