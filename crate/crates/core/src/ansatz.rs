//! Circuit families: strongly entangling layers (SEL) and the Hamiltonian
//! variational ansatz (HVA) in its plain, R_z-augmented and sparse-compiled
//! forms. All circuits start from `|0...0>`; any state preparation is part of
//! the gate list and therefore noisy and counted in `nu`.

use std::f64::consts::PI;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::CircuitProgram;
use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::models::HamiltonianPair;
use crate::noise::NoiseSpec;
use crate::pauli::{Pauli, PauliTermHamiltonian};
use crate::seeding::derive_seed;

/// Random circuit parameters are drawn uniformly from `[-2 pi, 2 pi]`.
pub const ANGLE_RANGE: f64 = 2.0 * PI;

pub const DEFAULT_SPARSE_TERMS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "sel")]
    Sel,
    #[serde(rename = "hva-xxx")]
    HvaXxx,
    #[serde(rename = "hva-tfi")]
    HvaTfi,
    #[serde(rename = "hva-tfi-rz")]
    HvaTfiRz,
    #[serde(rename = "hva-sparse")]
    HvaSparse,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Sel => "sel",
            Family::HvaXxx => "hva-xxx",
            Family::HvaTfi => "hva-tfi",
            Family::HvaTfiRz => "hva-tfi-rz",
            Family::HvaSparse => "hva-sparse",
        }
    }

    pub fn is_hva(self) -> bool {
        self != Family::Sel
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Family::Sel, Family::HvaXxx, Family::HvaTfi, Family::HvaTfiRz, Family::HvaSparse]
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidSize(format!("unknown circuit family {s:?}")))
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParameterMode {
    /// Independent uniform angle per parametrised gate.
    #[default]
    Random,
    /// Discretised adiabatic schedule `gamma_k = k/L`, `beta_k = 1 - k/L`.
    Vqe,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnsatzSpec {
    pub family: Family,
    pub n_qubits: usize,
    pub n_layers: usize,
    #[serde(default)]
    pub parameter_mode: ParameterMode,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_sparse_terms")]
    pub sparse_terms_per_layer: usize,
}

fn default_sparse_terms() -> usize {
    DEFAULT_SPARSE_TERMS
}

impl AnsatzSpec {
    pub fn new(family: Family, n_qubits: usize, n_layers: usize) -> Self {
        Self {
            family,
            n_qubits,
            n_layers,
            parameter_mode: ParameterMode::Random,
            seed: 0,
            sparse_terms_per_layer: DEFAULT_SPARSE_TERMS,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_mode(mut self, mode: ParameterMode) -> Self {
        self.parameter_mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_layers == 0 {
            return Err(Error::InvalidSize("at least one layer is required".into()));
        }
        if self.sparse_terms_per_layer == 0 {
            return Err(Error::InvalidSize("sparse_terms_per_layer must be positive".into()));
        }
        crate::state::check_qubits(self.n_qubits)?;
        Ok(())
    }
}

fn random_angle(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(-ANGLE_RANGE..=ANGLE_RANGE)
}

/// Per layer: `Rz Ry Rz` on every qubit, then a CNOT ring `i -> (i+1) mod N`.
/// `nu = L (3N + N)`.
pub fn build_sel_circuit(spec: &AnsatzSpec, noise: NoiseSpec) -> Result<CircuitProgram> {
    spec.validate()?;
    if spec.family != Family::Sel {
        return Err(Error::InvalidSize(format!("{} is not the SEL family", spec.family)));
    }
    let n = spec.n_qubits;
    if n < 2 {
        return Err(Error::InvalidSize("the CNOT ring needs at least 2 qubits".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut gates = Vec::with_capacity(spec.n_layers * 4 * n);
    for _ in 0..spec.n_layers {
        for q in 0..n {
            gates.push(Gate::Rz { qubit: q, angle: random_angle(&mut rng) });
            gates.push(Gate::Ry { qubit: q, angle: random_angle(&mut rng) });
            gates.push(Gate::Rz { qubit: q, angle: random_angle(&mut rng) });
        }
        for q in 0..n {
            gates.push(Gate::Cnot { control: q, target: (q + 1) % n });
        }
    }
    CircuitProgram::new(n, gates, noise)
}

/// `(beta_k, gamma_k)` for `k = 1..=L`.
pub fn vqe_schedule(n_layers: usize) -> Vec<(f64, f64)> {
    (1..=n_layers)
        .map(|k| {
            let t = k as f64 / n_layers as f64;
            (1.0 - t, t)
        })
        .collect()
}

/// Gates preparing a ground state of `h0` from `|0...0>`. Diagonal `h0`
/// gives the lowest-energy basis state (set bits flipped with `Rx(pi)`); a
/// pure transverse field `sum_i h_i X_i` gives `|+>` or `|->` per qubit.
pub fn ground_state_preparation(h0: &PauliTermHamiltonian) -> Result<Vec<Gate>> {
    let n = h0.n_qubits();
    if h0.terms().iter().all(|t| t.string.is_diagonal()) {
        let best = (0..1usize << n)
            .map(|x| (x, h0.diagonal_energy(x)))
            .fold((0, f64::INFINITY), |acc, (x, e)| if e < acc.1 - 1e-12 { (x, e) } else { acc })
            .0;
        return Ok((0..n)
            .filter(|q| best & (1 << q) != 0)
            .map(|q| Gate::Rx { qubit: q, angle: PI })
            .collect());
    }
    let x_field = h0
        .terms()
        .iter()
        .all(|t| t.string.weight() == 1 && t.string.ops().contains(&Pauli::X));
    if !x_field {
        return Err(Error::InvalidState(
            "H0 is neither diagonal nor a transverse X field; no product ground state known".into(),
        ));
    }
    let mut gates = Vec::new();
    for t in h0.terms() {
        let q = t.string.support()[0];
        gates.push(Gate::Hadamard { qubit: q });
        if t.coefficient > 0.0 {
            // ground state of +X is |->
            gates.push(Gate::Rz { qubit: q, angle: PI });
        }
    }
    Ok(gates)
}

/// How the angles of a sparse layer are chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SparseAngles {
    /// Approximates `exp(-i gamma H1)`: each of the `K` sampled terms gets
    /// angle `gamma * sign(h_l) * sum|h| / K`.
    Schedule(f64),
    Random,
}

/// Samples `k_terms` non-identity Pauli terms of `h1` with replacement,
/// with probability proportional to `|h_l|`, one exponential per sample.
pub fn build_sparse_hva_layer(
    h1: &PauliTermHamiltonian,
    k_terms: usize,
    angles: SparseAngles,
    seed: u64,
) -> Result<Vec<Gate>> {
    if k_terms == 0 {
        return Err(Error::InvalidSize("k_terms must be positive".into()));
    }
    let terms: Vec<_> = h1.terms().iter().filter(|t| !t.string.is_identity()).collect();
    if terms.is_empty() {
        return Err(Error::InvalidDistribution("no non-identity terms to sample".into()));
    }
    let weights: Vec<f64> = terms.iter().map(|t| t.coefficient.abs()).collect();
    let lambda: f64 = weights.iter().sum();
    let dist = WeightedIndex::new(&weights)
        .map_err(|e| Error::InvalidDistribution(format!("coefficients cannot be sampled: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gates = Vec::with_capacity(k_terms);
    for _ in 0..k_terms {
        let term = terms[dist.sample(&mut rng)];
        let angle = match angles {
            SparseAngles::Schedule(gamma) => {
                gamma * term.coefficient.signum() * lambda / k_terms as f64
            }
            SparseAngles::Random => random_angle(&mut rng),
        };
        gates.push(Gate::PauliExp { string: term.string.clone(), angle });
    }
    Ok(gates)
}

/// HVA: ground-state preparation of `H0`, then per layer the trotterised
/// `exp(-i beta_k H0)` followed by `exp(-i gamma_k H1)`, one Pauli exponential
/// per term in canonical order. The sparse family samples the `H1` part, and
/// the R_z family appends an `Rz` on every qubit to each layer.
pub fn build_hva_circuit(
    spec: &AnsatzSpec,
    hamiltonians: &HamiltonianPair,
    noise: NoiseSpec,
) -> Result<CircuitProgram> {
    spec.validate()?;
    if !spec.family.is_hva() {
        return Err(Error::InvalidSize(format!("{} is not an HVA family", spec.family)));
    }
    let n = spec.n_qubits;
    let HamiltonianPair { h0, h1 } = hamiltonians;
    for (name, h) in [("H0", h0), ("H1", h1)] {
        if h.n_qubits() != n {
            return Err(Error::Shape(format!(
                "{name} acts on {} qubits, ansatz on {n}",
                h.n_qubits()
            )));
        }
    }
    if h1.terms().iter().all(|t| t.string.is_identity()) {
        return Err(Error::InvalidSize("H1 has no non-identity terms".into()));
    }

    let random = spec.parameter_mode == ParameterMode::Random;
    let schedule = vqe_schedule(spec.n_layers);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut gates = ground_state_preparation(h0)?;

    let trotter = |h: &PauliTermHamiltonian, t: f64, gates: &mut Vec<Gate>, rng: &mut ChaCha8Rng| {
        for term in h.terms().iter().filter(|t| !t.string.is_identity()) {
            let angle = if random { random_angle(rng) } else { t * term.coefficient };
            gates.push(Gate::PauliExp { string: term.string.clone(), angle });
        }
    };

    for (layer, &(beta, gamma)) in schedule.iter().enumerate() {
        trotter(h0, beta, &mut gates, &mut rng);
        if spec.family == Family::HvaSparse {
            let angles = if random { SparseAngles::Random } else { SparseAngles::Schedule(gamma) };
            gates.extend(build_sparse_hva_layer(
                h1,
                spec.sparse_terms_per_layer,
                angles,
                derive_seed(spec.seed, layer as u64),
            )?);
        } else {
            trotter(h1, gamma, &mut gates, &mut rng);
        }
        if spec.family == Family::HvaTfiRz {
            for q in 0..n {
                // the schedule has no angle for the inserted gates; they idle at zero
                let angle = if random { random_angle(&mut rng) } else { 0.0 };
                gates.push(Gate::Rz { qubit: q, angle });
            }
        }
    }
    CircuitProgram::new(n, gates, noise)
}

/// Builds any family. XXX and TFI Hamiltonians are generated from
/// `hamiltonian_seed`; the sparse family needs an explicit Hamiltonian, which
/// is split into diagonal `H0` and off-diagonal `H1`.
pub fn build_circuit(
    spec: &AnsatzSpec,
    hamiltonian: Option<&PauliTermHamiltonian>,
    hamiltonian_seed: u64,
    noise: NoiseSpec,
) -> Result<CircuitProgram> {
    match spec.family {
        Family::Sel => build_sel_circuit(spec, noise),
        Family::HvaXxx => {
            let pair = crate::models::build_xxx_hamiltonian(spec.n_qubits, hamiltonian_seed)?;
            build_hva_circuit(spec, &pair, noise)
        }
        Family::HvaTfi | Family::HvaTfiRz => {
            let pair = crate::models::build_tfi_hamiltonian(spec.n_qubits, hamiltonian_seed)?;
            build_hva_circuit(spec, &pair, noise)
        }
        Family::HvaSparse => {
            let h = hamiltonian.ok_or_else(|| {
                Error::InvalidSize("the sparse HVA family needs a Hamiltonian file".into())
            })?;
            if h.is_empty() {
                return Err(Error::InvalidSize("empty Hamiltonian".into()));
            }
            build_hva_circuit(spec, &HamiltonianPair::from_diagonal_split(h), noise)
        }
    }
}

/// The Hamiltonian whose ground state the HVA family targets, if any.
pub fn target_hamiltonian(
    spec: &AnsatzSpec,
    hamiltonian: Option<&PauliTermHamiltonian>,
    hamiltonian_seed: u64,
) -> Result<Option<HamiltonianPair>> {
    Ok(match spec.family {
        Family::Sel => None,
        Family::HvaXxx => Some(crate::models::build_xxx_hamiltonian(spec.n_qubits, hamiltonian_seed)?),
        Family::HvaTfi | Family::HvaTfiRz => {
            Some(crate::models::build_tfi_hamiltonian(spec.n_qubits, hamiltonian_seed)?)
        }
        Family::HvaSparse => hamiltonian.map(HamiltonianPair::from_diagonal_split),
    })
}
