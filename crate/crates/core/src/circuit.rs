use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::noise::{depolarise_in_place, NoiseSpec};
use crate::state::{check_qubits, DensityMatrix, StateVector};

/// Gate applications between re-symmetrisations of the density matrix.
pub const HERMITIZE_EVERY: usize = 100;

/// Ordered list of noisy gates. Every gate counts once towards `nu`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitProgram {
    n_qubits: usize,
    gates: Vec<Gate>,
    noise: NoiseSpec,
}

impl CircuitProgram {
    pub fn new(n_qubits: usize, gates: Vec<Gate>, noise: NoiseSpec) -> Result<Self> {
        check_qubits(n_qubits)?;
        noise.validate()?;
        for gate in &gates {
            gate.validate(n_qubits)?;
        }
        Ok(Self { n_qubits, gates, noise })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn noise(&self) -> NoiseSpec {
        self.noise
    }

    /// Number of (noisy) gates, `nu`.
    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    /// Expected number of gate errors, `xi = epsilon * nu`.
    pub fn circuit_error_rate(&self) -> f64 {
        self.noise.per_gate_error * self.gate_count() as f64
    }

    pub fn with_noise(mut self, noise: NoiseSpec) -> Result<Self> {
        noise.validate()?;
        self.noise = noise;
        Ok(self)
    }
}

/// `U rho U^dagger` for the gate's unitary embedded on its support.
pub fn apply_unitary(state: &DensityMatrix, gate: &Gate) -> Result<DensityMatrix> {
    gate.validate(state.n_qubits())?;
    let mut out = state.clone();
    let d = out.dim();
    gate.apply_to_density(out.data_mut(), d);
    Ok(out)
}

/// Noisy evolution: each ideal gate is followed by independent depolarising
/// channels on its support qubits.
pub fn run_circuit(program: &CircuitProgram, initial: &DensityMatrix) -> Result<DensityMatrix> {
    if initial.n_qubits() != program.n_qubits {
        return Err(Error::Shape(format!(
            "program on {} qubits, initial state on {}",
            program.n_qubits,
            initial.n_qubits()
        )));
    }
    let noise = program.noise;
    let mut rho = initial.clone();
    let d = rho.dim();
    for (k, gate) in program.gates.iter().enumerate() {
        gate.apply_to_density(rho.data_mut(), d);
        if noise.per_gate_error > 0.0 {
            let support = gate.support();
            let rate = noise.per_qubit_rate(support.len());
            let weight = noise.channel.replacement_weight(rate);
            for q in support {
                depolarise_in_place(rho.data_mut(), d, q, weight);
            }
        }
        if (k + 1) % HERMITIZE_EVERY == 0 {
            rho.hermitize();
        }
    }
    Ok(rho)
}

/// Noise-free state-vector evolution giving `|psi_id>`.
pub fn run_ideal(program: &CircuitProgram, initial: &StateVector) -> Result<StateVector> {
    if initial.n_qubits() != program.n_qubits {
        return Err(Error::Shape(format!(
            "program on {} qubits, initial state on {}",
            program.n_qubits,
            initial.n_qubits()
        )));
    }
    let mut psi = initial.clone();
    for gate in &program.gates {
        gate.apply_to_amplitudes(psi.amplitudes_mut());
    }
    Ok(psi)
}
