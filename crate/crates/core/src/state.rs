use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Largest register the dense backend accepts (d = 4096).
pub const MAX_QUBITS: usize = 12;

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-10;

pub(crate) fn check_qubits(n_qubits: usize) -> Result<usize> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::InvalidSize(format!(
            "{n_qubits} qubits (supported: 1..={MAX_QUBITS})"
        )));
    }
    Ok(1 << n_qubits)
}

/// Pure state of `n_qubits` qubits. Qubit `q` is bit `q` of the basis index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The computational basis state `|0...0>`.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let d = check_qubits(n_qubits)?;
        if index >= d {
            return Err(Error::Shape(format!("basis index {index} out of range for d = {d}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); d];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        let d = check_qubits(n_qubits)?;
        if amps.len() != d {
            return Err(Error::Shape(format!(
                "expected {d} amplitudes for {n_qubits} qubits, got {}",
                amps.len()
            )));
        }
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalised(mut self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("cannot normalise a zero vector".into()));
        }
        self.amps.iter_mut().for_each(|a| *a /= norm);
        Ok(self)
    }

    /// `<self|other>`
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn overlap(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }
}

/// Dense `d x d` density matrix stored row-major, `d = 2^n_qubits`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn zero_state(n_qubits: usize) -> Result<Self> {
        Ok(Self::from_pure(&StateVector::zero(n_qubits)?))
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        let d = psi.dim();
        let a = psi.amplitudes();
        let mut data = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                data.push(a[i] * a[j].conj());
            }
        }
        Self { n_qubits: psi.n_qubits(), data }
    }

    /// `Id / d`
    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        let d = check_qubits(n_qubits)?;
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            data[i * d + i] = Complex64::new(1.0 / d as f64, 0.0);
        }
        Ok(Self { n_qubits, data })
    }

    /// Row-major data, checked against the density-matrix invariants.
    pub fn from_matrix(n_qubits: usize, data: Vec<Complex64>) -> Result<Self> {
        let rho = Self::from_matrix_unchecked(n_qubits, data)?;
        rho.validate()?;
        Ok(rho)
    }

    /// Only the shape is checked.
    pub fn from_matrix_unchecked(n_qubits: usize, data: Vec<Complex64>) -> Result<Self> {
        let d = check_qubits(n_qubits)?;
        if data.len() != d * d {
            return Err(Error::Shape(format!(
                "expected {} entries for {n_qubits} qubits, got {}",
                d * d,
                data.len()
            )));
        }
        Ok(Self { n_qubits, data })
    }

    pub fn from_mat(n_qubits: usize, m: &CMatrix) -> Result<Self> {
        let d = check_qubits(n_qubits)?;
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::Shape(format!(
                "expected a {d}x{d} matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let mut data = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                data.push(m[(i, j)]);
            }
        }
        Self::from_matrix(n_qubits, data)
    }

    /// Convex mixture `w * a + (1 - w) * b`.
    pub fn mixture(w: f64, a: &DensityMatrix, b: &DensityMatrix) -> Result<Self> {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::InvalidRate(w));
        }
        a.check_same_shape(b)?;
        let data = a
            .data
            .iter()
            .zip(&b.data)
            .map(|(x, y)| x * w + y * (1.0 - w))
            .collect();
        Ok(Self { n_qubits: a.n_qubits, data })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim() + col]
    }

    pub fn trace(&self) -> Complex64 {
        let d = self.dim();
        (0..d).map(|i| self.data[i * d + i]).sum()
    }

    pub fn to_mat(&self) -> CMatrix {
        let d = self.dim();
        CMatrix::from_fn(d, d, |i, j| self.data[i * d + j])
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.data[i * d + j] - self.data[j * d + i].conj()).norm());
            }
        }
        worst
    }

    /// Replace the matrix by `(M + M^dagger) / 2`.
    pub fn hermitize(&mut self) {
        let d = self.dim();
        for i in 0..d {
            self.data[i * d + i].im = 0.0;
            for j in (i + 1)..d {
                let avg = (self.data[i * d + j] + self.data[j * d + i].conj()) * 0.5;
                self.data[i * d + j] = avg;
                self.data[j * d + i] = avg.conj();
            }
        }
    }

    /// Checks hermiticity, unit trace and positivity.
    pub fn validate(&self) -> Result<()> {
        let defect = self.hermiticity_defect();
        if defect > HERMITICITY_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (defect {defect:e})")));
        }
        let tr = self.trace();
        if (tr - 1.0).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = linalg::hermitian_eigenvalues(&self.to_mat())?
            .first()
            .copied()
            .unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// `rho |psi>`
    pub fn apply(&self, psi: &StateVector) -> Result<Vec<Complex64>> {
        self.check_vector(psi)?;
        let d = self.dim();
        let a = psi.amplitudes();
        Ok((0..d)
            .map(|i| {
                self.data[i * d..(i + 1) * d]
                    .iter()
                    .zip(a)
                    .map(|(r, x)| r * x)
                    .sum()
            })
            .collect())
    }

    /// `<psi| rho |psi>`, the fidelity with a pure state.
    pub fn expectation(&self, psi: &StateVector) -> Result<f64> {
        let rho_psi = self.apply(psi)?;
        Ok(psi
            .amplitudes()
            .iter()
            .zip(&rho_psi)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .re)
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).norm())))
    }

    pub(crate) fn check_same_shape(&self, other: &DensityMatrix) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::Shape(format!(
                "{} qubits vs {} qubits",
                self.n_qubits, other.n_qubits
            )));
        }
        Ok(())
    }

    pub(crate) fn check_vector(&self, psi: &StateVector) -> Result<()> {
        if psi.n_qubits() != self.n_qubits {
            return Err(Error::Shape(format!(
                "state vector on {} qubits, density matrix on {}",
                psi.n_qubits(),
                self.n_qubits
            )));
        }
        Ok(())
    }
}
