//! Thin wrappers around the dense Hermitian eigensolver.

use faer::{Mat, Side};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = Mat<Complex64>;

/// Eigenvalues of a Hermitian matrix in ascending order. Only the lower
/// triangle is read.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    m.self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::NumericalRank(format!("eigenvalue iteration failed: {e:?}")))
}

/// Eigenvalues (ascending) and the matching orthonormal eigenvectors as columns.
pub fn hermitian_eigen(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::NumericalRank(format!("eigendecomposition failed: {e:?}")))?;
    let values = evd.S().column_vector().iter().map(|z| z.re).collect();
    Ok((values, evd.U().to_owned()))
}

/// Schatten-1 norm of a Hermitian matrix, i.e. the sum of absolute eigenvalues.
pub fn trace_norm_hermitian(m: &CMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?.iter().map(|x| x.abs()).sum())
}

/// Largest absolute eigenvalue of a Hermitian matrix.
pub fn operator_norm_hermitian(m: &CMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?
        .iter()
        .fold(0.0_f64, |acc, x| acc.max(x.abs())))
}

/// Largest entrywise deviation of `m` from its conjugate transpose.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}
