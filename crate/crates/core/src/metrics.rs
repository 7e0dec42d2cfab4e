//! Spectral quantities of a noisy state `rho` relative to the ideal pure state
//! `|psi_id>`: fidelity, dominant eigenvalue, eigenvalue uniformity `W`,
//! commutator norm `C`, white-noise references and the observable bias bound.
//!
//! Trace norms are always computed as sums of absolute eigenvalues of a
//! Hermitian matrix (anti-Hermitian commutators are multiplied by `i` first).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, hermitian_eigenvalues, operator_norm_hermitian, CMatrix};
use crate::state::{DensityMatrix, StateVector, PSD_TOL};

/// Inputs whose Hermiticity defect exceeds this are rejected.
pub const HERMITIAN_INPUT_TOL: f64 = 1e-10;

/// `W` and `C` are undefined once `1 - lambda_1` drops below this.
pub const DEGENERATE_GAP: f64 = 1e-12;

/// Eigenvalues closer than this are treated as tied when ordering.
pub const TIE_TOL: f64 = 1e-12;

const NORMALISED_TOL: f64 = 1e-10;

/// Eigenvalues in descending order with matching orthonormal eigenvectors
/// (columns of `eigenvectors`).
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn lambda1(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `sum_k lambda_k |psi_k><psi_k|`
    pub fn reconstruct(&self) -> CMatrix {
        let d = self.dim();
        let u = &self.eigenvectors;
        CMatrix::from_fn(d, d, |i, j| {
            (0..d)
                .map(|k| u[(i, k)] * u[(j, k)].conj() * self.eigenvalues[k])
                .sum()
        })
    }
}

fn check_hermitian(rho: &DensityMatrix) -> Result<()> {
    let defect = rho.hermiticity_defect();
    if defect > HERMITIAN_INPUT_TOL {
        return Err(Error::InvalidState(format!("not Hermitian (defect {defect:e})")));
    }
    Ok(())
}

/// Sorts descending, clamps small negative values to zero and rescales to
/// unit sum. Values below `-PSD_TOL` are rejected.
fn clean_spectrum(mut values: Vec<f64>) -> Result<Vec<f64>> {
    values.sort_by(|a, b| b.total_cmp(a));
    if let Some(&min) = values.last() {
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
    }
    for v in values.iter_mut() {
        *v = v.max(0.0);
    }
    let total: f64 = values.iter().sum();
    if total <= 0.0 {
        return Err(Error::InvalidState("zero trace".into()));
    }
    for v in values.iter_mut() {
        *v /= total;
    }
    Ok(values)
}

/// Descending spectrum of `rho` without eigenvectors.
pub fn eigenvalues_descending(rho: &DensityMatrix) -> Result<Vec<f64>> {
    check_hermitian(rho)?;
    clean_spectrum(hermitian_eigenvalues(&rho.to_mat())?)
}

/// Full descending decomposition. Within clusters of tied eigenvalues the
/// eigenvector with the larger overlap with `psi_id` comes first, so that
/// `lambda_1` follows the ideal component.
pub fn eigendecompose(rho: &DensityMatrix, psi_id: Option<&StateVector>) -> Result<SpectralDecomposition> {
    check_hermitian(rho)?;
    if let Some(psi) = psi_id {
        rho.check_vector(psi)?;
    }
    let d = rho.dim();
    let (values, vectors) = hermitian_eigen(&rho.to_mat())?;
    let overlap = |k: usize| -> f64 {
        psi_id.map_or(0.0, |psi| {
            psi.amplitudes()
                .iter()
                .enumerate()
                .map(|(i, a)| a.conj() * vectors[(i, k)])
                .sum::<Complex64>()
                .norm_sqr()
        })
    };

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && values[order[end - 1]] - values[order[end]] <= TIE_TOL {
            end += 1;
        }
        if end - start > 1 {
            let overlaps: Vec<(usize, f64)> = order[start..end].iter().map(|&k| (k, overlap(k))).collect();
            let mut sorted = overlaps;
            sorted.sort_by(|a, b| b.1.total_cmp(&a.1));
            for (slot, (k, _)) in order[start..end].iter_mut().zip(sorted) {
                *slot = k;
            }
        }
        start = end;
    }

    let sorted_values = order.iter().map(|&k| values[k]).collect::<Vec<_>>();
    if let Some(&min) = sorted_values.iter().min_by(|a, b| a.total_cmp(b)) {
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
    }
    let clamped: Vec<f64> = sorted_values.iter().map(|v| v.max(0.0)).collect();
    let total: f64 = clamped.iter().sum();
    let eigenvalues = clamped.iter().map(|v| v / total).collect();
    let eigenvectors = CMatrix::from_fn(d, d, |i, j| vectors[(i, order[j])]);
    Ok(SpectralDecomposition { eigenvalues, eigenvectors })
}

/// Reference level for the normalised non-dominant spectrum in `W`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UniformityReference {
    /// `1/(d-1)`: the non-dominant eigenvalues are compared with the
    /// uniform distribution over the `d - 1` remaining levels.
    #[default]
    DMinusOne,
    /// `1/d`, as in the white-noise decomposition where the maximally mixed
    /// part also populates the dominant level.
    D,
}

/// `W = 1/2 sum_{k>=2} |lambda_k / (1 - lambda_1) - 1/(d-1)|` for a
/// descending spectrum.
pub fn uniformity_w(eigenvalues: &[f64]) -> Result<f64> {
    uniformity_w_with(eigenvalues, UniformityReference::DMinusOne)
}

pub fn uniformity_w_with(eigenvalues: &[f64], reference: UniformityReference) -> Result<f64> {
    let d = eigenvalues.len();
    if d < 2 {
        return Err(Error::InvalidSize("W needs at least two eigenvalues".into()));
    }
    let gap = 1.0 - eigenvalues[0];
    if gap < DEGENERATE_GAP {
        return Err(Error::Degenerate { gap });
    }
    let level = match reference {
        UniformityReference::DMinusOne => 1.0 / (d - 1) as f64,
        UniformityReference::D => 1.0 / d as f64,
    };
    Ok(0.5 * eigenvalues[1..].iter().map(|l| (l / gap - level).abs()).sum::<f64>())
}

/// `i [|psi><psi|, rho]`, Hermitian and of rank at most two.
pub fn commutator_matrix(rho: &DensityMatrix, psi_id: &StateVector) -> Result<CMatrix> {
    let v = rho.apply(psi_id)?;
    let psi = psi_id.amplitudes();
    let i = Complex64::new(0.0, 1.0);
    Ok(CMatrix::from_fn(rho.dim(), rho.dim(), |r, c| {
        i * (psi[r] * v[c].conj() - v[r] * psi[c].conj())
    }))
}

/// `Var = <psi|rho^2|psi> - <psi|rho|psi>^2`, evaluated as the squared norm
/// of the component of `rho|psi>` orthogonal to `|psi>` so that states
/// commuting with `|psi><psi|` give zero instead of rounding noise.
pub fn fidelity_variance(rho: &DensityMatrix, psi_id: &StateVector) -> Result<f64> {
    let v = rho.apply(psi_id)?;
    let psi = psi_id.amplitudes();
    let f: Complex64 = psi.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
    Ok(v.iter().zip(psi).map(|(b, a)| (b - f * a).norm_sqr()).sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommutatorNorm {
    /// `||[rho_id, rho]||_1` from the eigenvalues of the commutator.
    pub absolute: f64,
    /// `2 sqrt(Var)`, the same quantity through the fidelity variance.
    pub absolute_variance_route: f64,
    /// `absolute / (1 - lambda_1)`; `None` for a numerically pure state.
    pub relative: Option<f64>,
}

/// Commutator trace norm in absolute and relative form. `lambda1` is the
/// dominant eigenvalue of `rho`.
pub fn commutator_norm_with_lambda1(rho: &DensityMatrix, psi_id: &StateVector, lambda1: f64) -> Result<CommutatorNorm> {
    let m = commutator_matrix(rho, psi_id)?;
    let absolute = hermitian_eigenvalues(&m)?.iter().map(|x| x.abs()).sum();
    let absolute_variance_route = 2.0 * fidelity_variance(rho, psi_id)?.sqrt();
    let gap = 1.0 - lambda1;
    let relative = (gap >= DEGENERATE_GAP).then(|| absolute / gap);
    Ok(CommutatorNorm { absolute, absolute_variance_route, relative })
}

pub fn commutator_norm(rho: &DensityMatrix, psi_id: &StateVector) -> Result<CommutatorNorm> {
    let lambda1 = eigenvalues_descending(rho)?[0];
    commutator_norm_with_lambda1(rho, psi_id, lambda1)
}

/// Relative commutator norm `C`, failing for numerically pure states.
pub fn commutator_norm_relative(rho: &DensityMatrix, psi_id: &StateVector) -> Result<f64> {
    let lambda1 = eigenvalues_descending(rho)?[0];
    commutator_norm_with_lambda1(rho, psi_id, lambda1)?
        .relative
        .ok_or(Error::Degenerate { gap: 1.0 - lambda1 })
}

/// `eta |psi><psi| + (1 - eta) Id/d`
#[derive(Clone, Debug)]
pub struct WhiteNoiseState {
    pub eta: f64,
    pub ideal: StateVector,
    pub matrix: DensityMatrix,
}

impl WhiteNoiseState {
    /// `eta + (1 - eta)/d`, which is both the fidelity and the dominant eigenvalue.
    pub fn fidelity(&self) -> f64 {
        self.eta + (1.0 - self.eta) / self.ideal.dim() as f64
    }
}

fn check_normalised(psi: &StateVector) -> Result<()> {
    let norm = psi.norm();
    if (norm - 1.0).abs() > NORMALISED_TOL {
        return Err(Error::InvalidState(format!("state vector has norm {norm}")));
    }
    Ok(())
}

pub fn build_white_noise_state(psi: &StateVector, eta: f64) -> Result<WhiteNoiseState> {
    check_normalised(psi)?;
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidRate(eta));
    }
    let pure = DensityMatrix::from_pure(psi);
    let mixed = DensityMatrix::maximally_mixed(psi.n_qubits())?;
    let matrix = DensityMatrix::mixture(eta, &pure, &mixed)?;
    Ok(WhiteNoiseState { eta, ideal: psi.clone(), matrix })
}

fn difference(a: &DensityMatrix, b: &DensityMatrix) -> Result<CMatrix> {
    a.check_same_shape(b)?;
    let d = a.dim();
    Ok(CMatrix::from_fn(d, d, |i, j| a.get(i, j) - b.get(i, j)))
}

/// `||a - b||_1`, without the conventional factor one half.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(&difference(a, b)?)?.iter().map(|x| x.abs()).sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BiasBound {
    /// `tr[O rho]/eta - <psi|O|psi>`
    pub bias: f64,
    /// `||O||_inf ||rho - rho_wn(eta)||_1 / eta`
    pub bound: f64,
}

/// Bias of the rescaled expectation value of a traceless observable and
/// the trace-distance bound on it.
pub fn bias_bound(observable: &CMatrix, rho: &DensityMatrix, psi_id: &StateVector, eta: f64) -> Result<BiasBound> {
    let d = rho.dim();
    if observable.nrows() != d || observable.ncols() != d {
        return Err(Error::Shape(format!(
            "observable is {}x{}, state dimension {d}",
            observable.nrows(),
            observable.ncols()
        )));
    }
    if crate::linalg::hermiticity_defect(observable) > HERMITIAN_INPUT_TOL {
        return Err(Error::InvalidObservable("observable is not Hermitian".into()));
    }
    let trace: Complex64 = (0..d).map(|i| observable[(i, i)]).sum();
    if trace.norm() > 1e-10 {
        return Err(Error::InvalidObservable(format!("observable has trace {}", trace.re)));
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::Domain(format!("eta = {eta} must lie in (0, 1]")));
    }
    let wn = build_white_noise_state(psi_id, eta)?;
    let tr_o_rho: Complex64 = (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .map(|(i, j)| observable[(i, j)] * rho.get(j, i))
        .sum();
    let psi = psi_id.amplitudes();
    let ideal: Complex64 = (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .map(|(i, j)| psi[i].conj() * observable[(i, j)] * psi[j])
        .sum();
    let bias = tr_o_rho.re / eta - ideal.re;
    let bound = operator_norm_hermitian(observable)? * trace_distance(rho, &wn.matrix)? / eta;
    Ok(BiasBound { bias, bound })
}

/// Checks the exact trace-distance identity for
/// `rho = eta rho_id + (1 - eta) rho_err`. Returns
/// `(1/2 ||rho - rho_wn(eta)||_1, (1 - eta) 1/2 ||p - p_unif||_1)` where `p`
/// is the spectrum of `rho_err`.
pub fn white_noise_distance_identity(psi_id: &StateVector, eta: f64, rho_err: &DensityMatrix) -> Result<(f64, f64)> {
    rho_err.validate()?;
    rho_err.check_vector(psi_id)?;
    let wn = build_white_noise_state(psi_id, eta)?;
    let rho = DensityMatrix::mixture(eta, &DensityMatrix::from_pure(psi_id), rho_err)?;
    let lhs = 0.5 * trace_distance(&rho, &wn.matrix)?;
    let d = rho_err.dim() as f64;
    let p = hermitian_eigenvalues(&rho_err.to_mat())?;
    let rhs = (1.0 - eta) * 0.5 * p.iter().map(|x| (x - 1.0 / d).abs()).sum::<f64>();
    Ok((lhs, rhs))
}

/// Everything reported for one noisy state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub fidelity: f64,
    pub lambda1: f64,
    /// `None` when the state is numerically pure.
    pub uniformity: Option<f64>,
    /// `W` against the `1/d` reference level.
    pub uniformity_d: Option<f64>,
    pub commutator_norm_abs: f64,
    pub commutator_norm_rel: Option<f64>,
    /// `||rho - rho_wn(lambda_1)||_1`
    pub trace_dist_wn: f64,
    /// `(1 - eps)^nu` when the circuit's noise level is known.
    pub eta_estimate: Option<f64>,
    /// `<psi|rho_err|psi>` for `rho = eta rho_id + (1 - eta) rho_err` with `eta = eta_estimate`.
    pub error_fidelity: Option<f64>,
    pub variance: f64,
    pub eigenvalues: Vec<f64>,
}

impl SpectralReport {
    pub fn is_degenerate(&self) -> bool {
        self.uniformity.is_none()
    }
}

pub fn spectral_report(rho: &DensityMatrix, psi_id: &StateVector, eta_estimate: Option<f64>) -> Result<SpectralReport> {
    check_normalised(psi_id)?;
    rho.check_vector(psi_id)?;
    let eigenvalues = eigenvalues_descending(rho)?;
    let lambda1 = eigenvalues[0];
    let fidelity = rho.expectation(psi_id)?.clamp(0.0, 1.0);
    let comm = commutator_norm_with_lambda1(rho, psi_id, lambda1)?;
    let optional = |r: Result<f64>| match r {
        Ok(w) => Ok(Some(w)),
        Err(Error::Degenerate { .. }) => Ok(None),
        Err(e) => Err(e),
    };
    let uniformity = optional(uniformity_w(&eigenvalues))?;
    let uniformity_d = optional(uniformity_w_with(&eigenvalues, UniformityReference::D))?;
    let wn = build_white_noise_state(psi_id, lambda1)?;
    let trace_dist_wn = trace_distance(rho, &wn.matrix)?;
    let error_fidelity = eta_estimate.filter(|eta| *eta < 1.0).map(|eta| (fidelity - eta) / (1.0 - eta));
    Ok(SpectralReport {
        fidelity,
        lambda1,
        uniformity,
        uniformity_d,
        commutator_norm_abs: comm.absolute,
        commutator_norm_rel: comm.relative,
        trace_dist_wn,
        eta_estimate,
        error_fidelity,
        variance: fidelity_variance(rho, psi_id)?,
        eigenvalues,
    })
}
