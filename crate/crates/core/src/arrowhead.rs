//! Non-negative arrowhead form of a density matrix relative to a pure state.
//!
//! Completing `|psi>` to an orthonormal basis and diagonalising the
//! compression of `rho` onto the complement gives
//!
//! ```text
//!                   | F    C_2  C_3  ... |
//!                   | C_2  D_2           |
//! U rho U^dagger =  | C_3       D_3      |
//!                   | ...            ... |
//! ```
//!
//! with `F = <psi|rho|psi>` and all `C_k`, `D_k` real and non-negative. The
//! eigenvalues of `rho` are then the roots of the secular function
//! `P(x) = x - F + sum_k C_k^2 / (D_k - x)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, CMatrix};
use crate::metrics::{eigenvalues_descending, fidelity_variance};
use crate::state::{DensityMatrix, StateVector, PSD_TOL};

/// Border entries at or below this are treated as exactly zero by
/// [`secular_residual`].
pub const NEGLIGIBLE_BORDER: f64 = 1e-14;

/// Distance to a pole below which [`secular_residual`] refuses to evaluate.
pub const POLE_TOL: f64 = 1e-12;

const BASIS_RESIDUAL_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct ArrowheadForm {
    pub corner: f64,
    /// `C_2 ... C_d`
    pub off_diagonal: Vec<f64>,
    /// `D_2 ... D_d`, descending.
    pub diagonal: Vec<f64>,
    /// Unitary `U` with `U rho U^dagger` equal to the arrowhead; its first row
    /// is `<psi|`.
    pub transform: CMatrix,
}

impl ArrowheadForm {
    pub fn dim(&self) -> usize {
        self.diagonal.len() + 1
    }

    /// Dense arrowhead matrix.
    pub fn matrix(&self) -> CMatrix {
        let d = self.dim();
        CMatrix::from_fn(d, d, |i, j| {
            let v = match (i, j) {
                (0, 0) => self.corner,
                (0, k) | (k, 0) => self.off_diagonal[k - 1],
                (k, l) if k == l => self.diagonal[k - 1],
                _ => 0.0,
            };
            Complex64::new(v, 0.0)
        })
    }

    /// Max-abs deviation of `U rho U^dagger` from [`ArrowheadForm::matrix`].
    pub fn reconstruction_error(&self, rho: &DensityMatrix) -> f64 {
        let u = &self.transform;
        let transformed = u * rho.to_mat() * u.adjoint();
        let target = self.matrix();
        let d = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..d {
            for j in 0..d {
                worst = worst.max((transformed[(i, j)] - target[(i, j)]).norm());
            }
        }
        worst
    }

    /// `sum_k C_k^2`, which equals the fidelity variance and hence
    /// `||[rho_id, rho]||_inf^2`.
    pub fn border_weight(&self) -> f64 {
        self.off_diagonal.iter().map(|c| c * c).sum()
    }

    /// True when `x` sits on a diagonal entry whose border is negligible.
    /// Such eigenvalues decouple from the secular equation and are not roots
    /// of [`secular_residual`].
    pub fn is_deflated(&self, x: f64, tol: f64) -> bool {
        self.off_diagonal
            .iter()
            .zip(&self.diagonal)
            .any(|(&c, &dk)| c <= NEGLIGIBLE_BORDER && (dk - x).abs() <= tol)
    }

    pub fn max_diagonal(&self) -> f64 {
        self.diagonal.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Orthonormal basis whose first column is `psi`, completed by Gram-Schmidt
/// over the standard basis (with one re-orthogonalisation pass).
fn complete_basis(psi: &StateVector) -> Result<CMatrix> {
    let d = psi.dim();
    let mut columns: Vec<Vec<Complex64>> = vec![psi.amplitudes().to_vec()];
    for e in 0..d {
        if columns.len() == d {
            break;
        }
        let mut v = vec![Complex64::new(0.0, 0.0); d];
        v[e] = Complex64::new(1.0, 0.0);
        for _ in 0..2 {
            for q in &columns {
                let proj: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, a) in v.iter_mut().zip(q) {
                    *x -= proj * a;
                }
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > BASIS_RESIDUAL_TOL {
            v.iter_mut().for_each(|x| *x /= norm);
            columns.push(v);
        }
    }
    if columns.len() != d {
        return Err(Error::NumericalRank(format!(
            "basis completion produced {} of {d} vectors",
            columns.len()
        )));
    }
    Ok(CMatrix::from_fn(d, d, |i, j| columns[j][i]))
}

pub fn arrowhead_transform(rho: &DensityMatrix, psi_id: &StateVector) -> Result<ArrowheadForm> {
    rho.validate()?;
    rho.check_vector(psi_id)?;
    let norm = psi_id.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidState(format!("state vector has norm {norm}")));
    }
    let d = rho.dim();
    let q = complete_basis(psi_id)?;
    let m = rho.to_mat();
    let complement = q.subcols(1, d - 1);
    let block = complement.adjoint() * &m * complement;
    let (values, vectors) = hermitian_eigen(&block)?;
    let mut basis = complement * &vectors;

    let rho_psi = &m * q.col(0);
    let corner = (q.col(0).adjoint() * &rho_psi).re;
    let mut off_diagonal = Vec::with_capacity(d - 1);
    for k in 0..d - 1 {
        let c: Complex64 = (0..d).map(|i| basis[(i, k)].conj() * rho_psi[i]).sum();
        let magnitude = c.norm();
        if magnitude > 0.0 {
            let phase = c / magnitude;
            for i in 0..d {
                basis[(i, k)] *= phase;
            }
        }
        off_diagonal.push(magnitude);
    }
    for &v in &values {
        if v < -PSD_TOL {
            return Err(Error::InvalidState(format!("negative compressed eigenvalue {v:e}")));
        }
    }

    // faer returns ascending order; store descending
    let order: Vec<usize> = (0..d - 1).rev().collect();
    let diagonal = order.iter().map(|&k| values[k].max(0.0)).collect();
    let off_diagonal = order.iter().map(|&k| off_diagonal[k]).collect();
    let transform = CMatrix::from_fn(d, d, |i, j| {
        if i == 0 {
            q[(j, 0)].conj()
        } else {
            basis[(j, order[i - 1])].conj()
        }
    });
    Ok(ArrowheadForm { corner, off_diagonal, diagonal, transform })
}

/// `P(x) = x - F + sum_k C_k^2 / (D_k - x)`. Terms with negligible `C_k`
/// are dropped; evaluating within [`POLE_TOL`] of a remaining `D_k` fails.
pub fn secular_residual(form: &ArrowheadForm, x: f64) -> Result<f64> {
    let mut p = x - form.corner;
    for (&c, &dk) in form.off_diagonal.iter().zip(&form.diagonal) {
        if c <= NEGLIGIBLE_BORDER {
            continue;
        }
        if (dk - x).abs() < POLE_TOL {
            return Err(Error::Pole { x, pole: dk });
        }
        p += c * c / (dk - x);
    }
    Ok(p)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FidelityGap {
    /// `lambda_1 - F`
    pub gap: f64,
    /// `||[rho_id, rho]||_inf^2 / (2 lambda_1 - 1)`; `None` when `lambda_1 <= 1/2`.
    pub bound: Option<f64>,
    /// The bound above holds whenever every `D_k <= 1 - lambda_1`, which
    /// makes `lambda_1 - D_k >= 2 lambda_1 - 1` for all `k`.
    pub bound_applicable: bool,
    /// `sum_k C_k^2 / (lambda_1 - D_max)`, valid for every state because
    /// `lambda_1 >= D_max` by interlacing.
    pub interlacing_bound: f64,
}

impl FidelityGap {
    /// Whether the gap respects the applicable bounds.
    pub fn holds(&self, tol: f64) -> bool {
        let ok_interlacing = self.gap <= self.interlacing_bound + tol;
        let ok_bound = match (self.bound, self.bound_applicable) {
            (Some(b), true) => self.gap <= b + tol,
            _ => true,
        };
        self.gap >= -tol && ok_interlacing && ok_bound
    }
}

pub fn lambda1_fidelity_gap(rho: &DensityMatrix, psi_id: &StateVector) -> Result<FidelityGap> {
    let form = arrowhead_transform(rho, psi_id)?;
    let lambda1 = eigenvalues_descending(rho)?[0];
    let gap = lambda1 - form.corner;
    let variance = fidelity_variance(rho, psi_id)?;
    let bound = (lambda1 > 0.5 + 1e-9).then(|| variance / (2.0 * lambda1 - 1.0));
    let d_max = form.max_diagonal();
    let bound_applicable = bound.is_some() && d_max <= 1.0 - lambda1;
    let separation = lambda1 - d_max;
    let interlacing_bound = if variance == 0.0 {
        0.0
    } else if separation > 0.0 {
        variance / separation
    } else {
        f64::INFINITY
    };
    Ok(FidelityGap { gap, bound, bound_applicable, interlacing_bound })
}
