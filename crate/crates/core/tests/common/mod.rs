#![allow(dead_code)]

pub mod oracle;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scramble_core::circuit::CircuitProgram;
use scramble_core::gate::Gate;
use scramble_core::noise::NoiseSpec;
use scramble_core::pauli::{Pauli, PauliString};

/// Arbitrary circuit over all gate kinds.
pub fn random_circuit(n: usize, n_gates: usize, noise: NoiseSpec, seed: u64) -> CircuitProgram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gates = Vec::with_capacity(n_gates);
    for _ in 0..n_gates {
        let q = rng.random_range(0..n);
        let angle = rng.random_range(-6.3..6.3);
        let kind = rng.random_range(0..if n > 1 { 6 } else { 5 });
        gates.push(match kind {
            0 => Gate::Rx { qubit: q, angle },
            1 => Gate::Ry { qubit: q, angle },
            2 => Gate::Rz { qubit: q, angle },
            3 => Gate::Hadamard { qubit: q },
            4 => {
                let ops: Vec<Pauli> = loop {
                    let ops: Vec<Pauli> = (0..n)
                        .map(|_| [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][rng.random_range(0..4)])
                        .collect();
                    if ops.iter().any(|p| *p != Pauli::I) {
                        break ops;
                    }
                };
                Gate::PauliExp { string: PauliString::new(ops), angle }
            }
            _ => {
                let t = (q + rng.random_range(1..n)) % n;
                Gate::Cnot { control: q, target: t }
            }
        });
    }
    CircuitProgram::new(n, gates, noise).unwrap()
}
