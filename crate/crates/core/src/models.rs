//! Spin-chain problem Hamiltonians, split as `H = H0 + H1` for the
//! Hamiltonian variational ansatz. Chains use open boundaries.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, PauliTermHamiltonian};

/// `H = H0 + H1`, where `H0` has an easily prepared ground state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianPair {
    pub h0: PauliTermHamiltonian,
    pub h1: PauliTermHamiltonian,
}

impl HamiltonianPair {
    pub fn n_qubits(&self) -> usize {
        self.h0.n_qubits().max(self.h1.n_qubits())
    }

    pub fn total(&self) -> Result<PauliTermHamiltonian> {
        let n = self.n_qubits();
        let terms = self
            .h0
            .terms()
            .iter()
            .chain(self.h1.terms())
            .map(|t| (t.coefficient, t.string.clone()));
        PauliTermHamiltonian::new(n, terms)
    }

    /// Diagonal terms form `H0`, the rest `H1`.
    pub fn from_diagonal_split(h: &PauliTermHamiltonian) -> Self {
        let (h0, h1) = h.split_diagonal();
        Self { h0, h1 }
    }
}

fn check_chain(n_qubits: usize) -> Result<()> {
    if n_qubits < 2 {
        return Err(Error::InvalidSize(format!("a chain needs at least 2 qubits, got {n_qubits}")));
    }
    crate::state::check_qubits(n_qubits)?;
    Ok(())
}

/// Heisenberg XXX chain: `H0 = sum_k D_k Z_k` with random on-site fields
/// `D_k ~ U[-1, 1]`, `H1 = sum_k (XX + YY + ZZ)` on neighbouring pairs.
pub fn build_xxx_hamiltonian(n_qubits: usize, seed: u64) -> Result<HamiltonianPair> {
    check_chain(n_qubits)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h0 = (0..n_qubits)
        .map(|k| (rng.random_range(-1.0..=1.0), PauliString::single(n_qubits, k, Pauli::Z)))
        .collect::<Vec<_>>();
    let h1 = (0..n_qubits - 1).flat_map(|k| {
        [Pauli::X, Pauli::Y, Pauli::Z]
            .map(|p| (1.0, PauliString::two_site(n_qubits, k, p, k + 1, p)))
    });
    Ok(HamiltonianPair {
        h0: PauliTermHamiltonian::new(n_qubits, h0)?,
        h1: PauliTermHamiltonian::new(n_qubits, h1)?,
    })
}

/// Transverse-field Ising chain: `H0 = -sum_i X_i` (unit field),
/// `H1 = -sum_i J_i Z_i Z_{i+1}` with `J_i ~ U[-1, 1]`.
pub fn build_tfi_hamiltonian(n_qubits: usize, seed: u64) -> Result<HamiltonianPair> {
    check_chain(n_qubits)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h0 = (0..n_qubits).map(|i| (-1.0, PauliString::single(n_qubits, i, Pauli::X)));
    let h1 = (0..n_qubits - 1)
        .map(|i| {
            let j: f64 = rng.random_range(-1.0..=1.0);
            (-j, PauliString::two_site(n_qubits, i, Pauli::Z, i + 1, Pauli::Z))
        })
        .collect::<Vec<_>>();
    Ok(HamiltonianPair {
        h0: PauliTermHamiltonian::new(n_qubits, h0)?,
        h1: PauliTermHamiltonian::new(n_qubits, h1)?,
    })
}
