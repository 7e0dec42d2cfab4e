//! Local depolarising noise.
//!
//! Two parametrisations of the single-qubit depolarising channel are offered.
//! [`DepolarisingChannel::Replacement`] replaces the qubit by `Id/2` with
//! probability `p`:
//!
//! `rho -> (1 - p) rho + p tr_q(rho) (x) Id/2`
//!
//! [`DepolarisingChannel::Pauli`] applies one of X, Y, Z with probability `p/3`
//! each, so `p` is the probability of a non-trivial error. The two are the same
//! channel family: Pauli(p) equals the replacement form at weight `4p/3`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::DensityMatrix;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DepolarisingChannel {
    /// X, Y or Z with probability `p/3` each.
    #[default]
    Pauli,
    /// Full replacement by the maximally mixed qubit with probability `p`.
    Replacement,
}

impl DepolarisingChannel {
    /// Weight `w` of the equivalent map `(1 - w) rho + w tr_q(rho) (x) Id/2`.
    pub fn replacement_weight(self, p: f64) -> f64 {
        match self {
            DepolarisingChannel::Pauli => 4.0 * p / 3.0,
            DepolarisingChannel::Replacement => p,
        }
    }
}

/// Gate-level noise: after every ideal gate, each qubit in its support is hit
/// by an independent depolarising channel at the per-qubit rate `r` with
/// `(1 - r)^q = 1 - epsilon` for a `q`-qubit gate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub per_gate_error: f64,
    #[serde(default)]
    pub channel: DepolarisingChannel,
}

impl NoiseSpec {
    pub fn new(per_gate_error: f64) -> Result<Self> {
        check_probability(per_gate_error)?;
        Ok(Self { per_gate_error, channel: DepolarisingChannel::default() })
    }

    pub fn noiseless() -> Self {
        Self { per_gate_error: 0.0, channel: DepolarisingChannel::default() }
    }

    pub fn with_channel(mut self, channel: DepolarisingChannel) -> Self {
        self.channel = channel;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_probability(self.per_gate_error)
    }

    /// Per-qubit rate for a gate acting on `support_size` qubits.
    pub fn per_qubit_rate(&self, support_size: usize) -> f64 {
        if self.per_gate_error == 0.0 || support_size == 0 {
            return 0.0;
        }
        if support_size == 1 {
            return self.per_gate_error;
        }
        // 1 - (1 - eps)^(1/q) without cancellation for tiny eps
        -((-self.per_gate_error).ln_1p() / support_size as f64).exp_m1()
    }

    /// Probability that no gate of a `nu`-gate circuit errs, `(1 - epsilon)^nu`.
    pub fn no_error_probability(&self, nu: usize) -> f64 {
        (1.0 - self.per_gate_error).powi(nu as i32)
    }
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidRate(p));
    }
    Ok(())
}

/// Single-qubit depolarising channel in the replacement form.
pub fn apply_depolarising(state: &DensityMatrix, qubit: usize, rate: f64) -> Result<DensityMatrix> {
    apply_channel(state, qubit, rate, DepolarisingChannel::Replacement)
}

/// Single-qubit depolarising channel in either parametrisation.
pub fn apply_channel(
    state: &DensityMatrix,
    qubit: usize,
    rate: f64,
    channel: DepolarisingChannel,
) -> Result<DensityMatrix> {
    check_probability(rate)?;
    if qubit >= state.n_qubits() {
        return Err(Error::InvalidGate(format!(
            "qubit {qubit} out of range for {} qubits",
            state.n_qubits()
        )));
    }
    let mut out = state.clone();
    let d = out.dim();
    depolarise_in_place(out.data_mut(), d, qubit, channel.replacement_weight(rate));
    Ok(out)
}

/// `(1 - w) rho + w tr_q(rho) (x) Id/2` in place.
pub(crate) fn depolarise_in_place(data: &mut [Complex64], d: usize, qubit: usize, w: f64) {
    if w == 0.0 {
        return;
    }
    let bit = 1 << qubit;
    let keep = 1.0 - w;
    let half = 0.5 * w;
    for base_i in (0..d).step_by(2 * bit) {
        for i0 in base_i..base_i + bit {
            let i1 = i0 | bit;
            for base_j in (0..d).step_by(2 * bit) {
                for j0 in base_j..base_j + bit {
                    let j1 = j0 | bit;
                    let a = data[i0 * d + j0];
                    let e = data[i1 * d + j1];
                    let avg = (a + e) * half;
                    data[i0 * d + j0] = a * keep + avg;
                    data[i1 * d + j1] = e * keep + avg;
                    data[i0 * d + j1] *= keep;
                    data[i1 * d + j0] *= keep;
                }
            }
        }
    }
}
