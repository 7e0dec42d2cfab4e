//! Grid sweeps over (epsilon, layers, seed) for one circuit family.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;

use scramble_core::ansatz::{build_circuit, Family};
use scramble_core::circuit::{run_circuit, run_ideal};
use scramble_core::metrics::{spectral_report, SpectralReport};
use scramble_core::noise::NoiseSpec;
use scramble_core::pauli::{load_hamiltonian_file, PauliTermHamiltonian};
use scramble_core::seeding::SeedMixer;
use scramble_core::state::{DensityMatrix, StateVector};

use crate::config::{ExperimentConfig, DEFAULT_MEMORY_BUDGET_BYTES};
use crate::error::Result;
use crate::rows::{reason, ResultRow, ResultWriter};

/// Circuit seed of one row, a stable hash of everything that identifies it.
pub fn row_seed(config_seed: u64, family: Family, n_qubits: usize, epsilon: f64, layer_index: usize, seed: u64) -> u64 {
    SeedMixer::new(config_seed)
        .mix_str(family.name())
        .mix(n_qubits as u64)
        .mix_f64(epsilon)
        .mix(layer_index as u64)
        .mix(seed)
        .finish()
}

/// Circuit and ideal state for one grid point, plus the spectral report of
/// the noisy output.
pub struct Simulation {
    pub nu: usize,
    pub rho: DensityMatrix,
    pub psi: StateVector,
    pub report: SpectralReport,
}

pub fn simulate_point(
    config: &ExperimentConfig,
    hamiltonian: Option<&PauliTermHamiltonian>,
    epsilon: f64,
    layers: usize,
    circuit_seed: u64,
) -> Result<Simulation> {
    let noise = NoiseSpec::new(epsilon)?.with_channel(config.channel);
    let spec = config.ansatz(layers, circuit_seed);
    let program = build_circuit(&spec, hamiltonian, config.hamiltonian_seed, noise)?;
    let n = config.n_qubits;
    let rho = run_circuit(&program, &DensityMatrix::zero_state(n)?)?;
    let psi = run_ideal(&program, &StateVector::zero(n)?)?;
    let nu = program.gate_count();
    let report = spectral_report(&rho, &psi, Some(noise.no_error_probability(nu)))?;
    Ok(Simulation { nu, rho, psi, report })
}

fn make_row(config: &ExperimentConfig, epsilon: f64, layers: usize, seed: u64, sim: &Simulation, seconds: f64) -> ResultRow {
    let r = &sim.report;
    let mut reasons = Vec::new();
    let undefined = if epsilon == 0.0 { reason::NOISELESS } else { reason::DEGENERATE };
    let mut w = r.uniformity;
    let mut c_rel = r.commutator_norm_rel;
    if w.is_none() || c_rel.is_none() {
        reasons.push(undefined);
    }
    if !config.metric.wants_w() {
        w = None;
        reasons.push(reason::W_NOT_REQUESTED);
    }
    let mut c_abs = Some(r.commutator_norm_abs);
    if !config.metric.wants_c() {
        c_rel = None;
        c_abs = None;
        reasons.push(reason::C_NOT_REQUESTED);
    }
    ResultRow {
        family: config.family.name().to_string(),
        n_qubits: config.n_qubits,
        epsilon,
        layers,
        nu: sim.nu,
        seed,
        w,
        c_rel,
        c_abs,
        fidelity: Some(r.fidelity),
        lambda1: Some(r.lambda1),
        trace_dist_wn: Some(r.trace_dist_wn),
        eta_est: r.eta_estimate,
        wall_time_seconds: Some(seconds),
        reason: reasons.join(";"),
    }
}

/// Loads the Hamiltonian file named by the config, if any.
pub fn load_config_hamiltonian(config: &ExperimentConfig) -> Result<Option<PauliTermHamiltonian>> {
    Ok(match &config.hamiltonian_file {
        Some(path) => Some(load_hamiltonian_file(path)?),
        None => None,
    })
}

/// Runs every (epsilon, layers, seed) point. Seeds of one point run in
/// parallel on the current rayon pool; rows reach `sink` point by point in
/// grid order, so the output is identical for any thread count.
pub fn run_sweep_into<W: Write>(config: &ExperimentConfig, mut sink: Option<&mut ResultWriter<W>>) -> Result<Vec<ResultRow>> {
    config.validate()?;
    config.check_feasible(DEFAULT_MEMORY_BUDGET_BYTES)?;
    let hamiltonian = load_config_hamiltonian(config)?;
    let seeds = config.seeds();
    let mut all = Vec::new();
    for epsilon in config.epsilons() {
        for (layer_index, &layers) in config.layers.iter().enumerate() {
            let rows: Vec<ResultRow> = seeds
                .par_iter()
                .map(|&seed| {
                    let start = Instant::now();
                    let circuit_seed = row_seed(config.seed, config.family, config.n_qubits, epsilon, layer_index, seed);
                    let sim = simulate_point(config, hamiltonian.as_ref(), epsilon, layers, circuit_seed)?;
                    Ok(make_row(config, epsilon, layers, seed, &sim, start.elapsed().as_secs_f64()))
                })
                .collect::<Result<_>>()?;
            if let Some(w) = sink.as_deref_mut() {
                w.write_rows(&rows)?;
            }
            all.extend(rows);
        }
    }
    Ok(all)
}

pub fn run_sweep(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    run_sweep_into::<std::io::Sink>(config, None)
}
