use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::PauliString;

type C = Complex64;
type Mat2 = [[C; 2]; 2];

const ZERO: C = C::new(0.0, 0.0);

/// Ideal gates. Rotations follow `R_a(theta) = exp(-i theta A / 2)`, while the
/// Pauli exponential is `exp(-i angle P)` with no factor of one half.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Gate {
    Rx { qubit: usize, angle: f64 },
    Ry { qubit: usize, angle: f64 },
    Rz { qubit: usize, angle: f64 },
    Hadamard { qubit: usize },
    Cnot { control: usize, target: usize },
    PauliExp { string: PauliString, angle: f64 },
}

impl Gate {
    pub fn support(&self) -> Vec<usize> {
        match self {
            Gate::Rx { qubit, .. }
            | Gate::Ry { qubit, .. }
            | Gate::Rz { qubit, .. }
            | Gate::Hadamard { qubit } => vec![*qubit],
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::PauliExp { string, .. } => string.support(),
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match self {
            Gate::Rx { angle, .. }
            | Gate::Ry { angle, .. }
            | Gate::Rz { angle, .. }
            | Gate::PauliExp { angle, .. } => Some(*angle),
            Gate::Hadamard { .. } | Gate::Cnot { .. } => None,
        }
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let support = self.support();
        if support.is_empty() {
            return Err(Error::InvalidGate(format!("{self:?} acts on no qubit")));
        }
        if let Some(&q) = support.iter().find(|&&q| q >= n_qubits) {
            return Err(Error::InvalidGate(format!(
                "qubit {q} out of range for {n_qubits} qubits"
            )));
        }
        if let Gate::Cnot { control, target } = self {
            if control == target {
                return Err(Error::InvalidGate(format!("CNOT with control = target = {control}")));
            }
        }
        if let Gate::PauliExp { string, .. } = self {
            if string.n_qubits() != n_qubits {
                return Err(Error::InvalidGate(format!(
                    "Pauli string {string} has length {}, register has {n_qubits} qubits",
                    string.n_qubits()
                )));
            }
        }
        if let Some(a) = self.angle() {
            if !a.is_finite() {
                return Err(Error::InvalidGate(format!("non-finite angle in {self:?}")));
            }
        }
        Ok(())
    }

    fn single_qubit_matrix(&self) -> Option<(usize, Mat2)> {
        let m = match *self {
            Gate::Rx { qubit, angle } => {
                let (s, c) = (angle / 2.0).sin_cos();
                (qubit, [[C::new(c, 0.0), C::new(0.0, -s)], [C::new(0.0, -s), C::new(c, 0.0)]])
            }
            Gate::Ry { qubit, angle } => {
                let (s, c) = (angle / 2.0).sin_cos();
                (qubit, [[C::new(c, 0.0), C::new(-s, 0.0)], [C::new(s, 0.0), C::new(c, 0.0)]])
            }
            Gate::Rz { qubit, angle } => {
                let (s, c) = (angle / 2.0).sin_cos();
                (qubit, [[C::new(c, -s), ZERO], [ZERO, C::new(c, s)]])
            }
            Gate::Hadamard { qubit } => {
                let h = C::new(FRAC_1_SQRT_2, 0.0);
                (qubit, [[h, h], [h, -h]])
            }
            _ => return None,
        };
        Some(m)
    }

    /// Applies the gate to a state vector in place. The gate must already be validated.
    pub(crate) fn apply_to_amplitudes(&self, amps: &mut [C]) {
        if let Some((q, u)) = self.single_qubit_matrix() {
            sv_single(amps, q, &u);
            return;
        }
        match self {
            Gate::Cnot { control, target } => sv_cnot(amps, *control, *target),
            Gate::PauliExp { string, angle } => sv_pauli_exp(amps, string, *angle),
            _ => unreachable!(),
        }
    }

    /// `rho -> U rho U^dagger` in place on row-major `d x d` data.
    pub(crate) fn apply_to_density(&self, data: &mut [C], d: usize) {
        if let Some((q, u)) = self.single_qubit_matrix() {
            dm_single(data, d, q, &u);
            return;
        }
        match self {
            Gate::Cnot { control, target } => dm_cnot(data, d, *control, *target),
            Gate::PauliExp { string, angle } => dm_pauli_exp(data, d, string, *angle),
            _ => unreachable!(),
        }
    }
}

/// Visits `(i0, i0 | bit)` pairs for every index with the bit clear.
#[inline]
fn for_each_pair(d: usize, bit: usize, mut f: impl FnMut(usize, usize)) {
    for base in (0..d).step_by(2 * bit) {
        for i0 in base..base + bit {
            f(i0, i0 | bit);
        }
    }
}

fn sv_single(amps: &mut [C], q: usize, u: &Mat2) {
    for_each_pair(amps.len(), 1 << q, |i0, i1| {
        let (x, y) = (amps[i0], amps[i1]);
        amps[i0] = u[0][0] * x + u[0][1] * y;
        amps[i1] = u[1][0] * x + u[1][1] * y;
    });
}

fn sv_cnot(amps: &mut [C], control: usize, target: usize) {
    let (cb, tb) = (1 << control, 1 << target);
    for i in 0..amps.len() {
        if i & cb != 0 && i & tb == 0 {
            amps.swap(i, i | tb);
        }
    }
}

fn pauli_phases(string: &PauliString, d: usize) -> Vec<C> {
    let phase = string.phase_fn();
    (0..d).map(phase).collect()
}

fn sv_pauli_exp(amps: &mut [C], string: &PauliString, angle: f64) {
    let d = amps.len();
    let x_mask = string.x_mask();
    let ph = pauli_phases(string, d);
    let (s, c) = angle.sin_cos();
    let mis = C::new(0.0, -s);
    if x_mask == 0 {
        for (x, a) in amps.iter_mut().enumerate() {
            *a *= C::new(c, 0.0) + mis * ph[x];
        }
        return;
    }
    for a in 0..d {
        let b = a ^ x_mask;
        if a < b {
            let (va, vb) = (amps[a], amps[b]);
            amps[a] = va * c + mis * ph[b] * vb;
            amps[b] = vb * c + mis * ph[a] * va;
        }
    }
}

/// Mutable views of rows `lo < hi`.
#[inline]
fn row_pair(data: &mut [C], d: usize, lo: usize, hi: usize) -> (&mut [C], &mut [C]) {
    let (first, second) = data.split_at_mut(hi * d);
    (&mut first[lo * d..(lo + 1) * d], &mut second[..d])
}

fn dm_single(data: &mut [C], d: usize, q: usize, u: &Mat2) {
    let bit = 1 << q;
    let diagonal = u[0][1] == ZERO && u[1][0] == ZERO;
    if diagonal {
        let phases: Vec<C> = (0..d).map(|i| if i & bit == 0 { u[0][0] } else { u[1][1] }).collect();
        for (i, row) in data.chunks_exact_mut(d).enumerate() {
            let left = phases[i];
            for (x, p) in row.iter_mut().zip(&phases) {
                *x *= left * p.conj();
            }
        }
        return;
    }
    for_each_pair(d, bit, |i0, i1| {
        let (r0, r1) = row_pair(data, d, i0, i1);
        for (a, b) in r0.iter_mut().zip(r1.iter_mut()) {
            let (x, y) = (*a, *b);
            *a = u[0][0] * x + u[0][1] * y;
            *b = u[1][0] * x + u[1][1] * y;
        }
    });
    let uc = [[u[0][0].conj(), u[0][1].conj()], [u[1][0].conj(), u[1][1].conj()]];
    for row in data.chunks_exact_mut(d) {
        for_each_pair(d, bit, |j0, j1| {
            let (x, y) = (row[j0], row[j1]);
            row[j0] = x * uc[0][0] + y * uc[0][1];
            row[j1] = x * uc[1][0] + y * uc[1][1];
        });
    }
}

fn dm_cnot(data: &mut [C], d: usize, control: usize, target: usize) {
    let (cb, tb) = (1 << control, 1 << target);
    for i in 0..d {
        if i & cb != 0 && i & tb == 0 {
            let (r0, r1) = row_pair(data, d, i, i | tb);
            r0.swap_with_slice(r1);
        }
    }
    for row in data.chunks_exact_mut(d) {
        for j in 0..d {
            if j & cb != 0 && j & tb == 0 {
                row.swap(j, j | tb);
            }
        }
    }
}

fn dm_pauli_exp(data: &mut [C], d: usize, string: &PauliString, angle: f64) {
    let x_mask = string.x_mask();
    let ph = pauli_phases(string, d);
    let (s, c) = angle.sin_cos();
    if x_mask == 0 {
        // diagonal: exp(-i angle ph(x)) with ph = +-1
        let phases: Vec<C> = ph.iter().map(|p| C::from_polar(1.0, -angle * p.re)).collect();
        for (i, row) in data.chunks_exact_mut(d).enumerate() {
            let left = phases[i];
            for (x, p) in row.iter_mut().zip(&phases) {
                *x *= left * p.conj();
            }
        }
        return;
    }
    let mis = C::new(0.0, -s);
    let pis = C::new(0.0, s);
    // left: U rho
    for a in 0..d {
        let b = a ^ x_mask;
        if a < b {
            let (ka, kb) = (mis * ph[b], mis * ph[a]);
            let (ra, rb) = row_pair(data, d, a, b);
            for (x, y) in ra.iter_mut().zip(rb.iter_mut()) {
                let (va, vb) = (*x, *y);
                *x = va * c + ka * vb;
                *y = vb * c + kb * va;
            }
        }
    }
    // right: (U rho) U^dagger
    let pairs: Vec<(usize, usize, C, C)> = (0..d)
        .filter_map(|a| {
            let b = a ^ x_mask;
            (a < b).then(|| (a, b, pis * ph[a], pis * ph[b]))
        })
        .collect();
    for row in data.chunks_exact_mut(d) {
        for &(a, b, ka, kb) in &pairs {
            let (va, vb) = (row[a], row[b]);
            row[a] = va * c + ka * vb;
            row[b] = vb * c + kb * va;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Pauli;

    #[test]
    fn validation() {
        assert!(Gate::Rx { qubit: 2, angle: 0.1 }.validate(2).is_err());
        assert!(Gate::Cnot { control: 1, target: 1 }.validate(2).is_err());
        assert!(Gate::Rz { qubit: 0, angle: f64::NAN }.validate(1).is_err());
        let id = PauliString::identity(2);
        assert!(Gate::PauliExp { string: id, angle: 0.3 }.validate(2).is_err());
        let zz = PauliString::two_site(3, 0, Pauli::Z, 1, Pauli::Z);
        assert!(Gate::PauliExp { string: zz.clone(), angle: 0.3 }.validate(3).is_ok());
        assert!(Gate::PauliExp { string: zz, angle: 0.3 }.validate(2).is_err());
    }

    #[test]
    fn single_qubit_pauli_exp_matches_rotation() {
        // exp(-i a X) = Rx(2a)
        for (p, make) in [
            (Pauli::X, (|q, a| Gate::Rx { qubit: q, angle: a }) as fn(usize, f64) -> Gate),
            (Pauli::Y, |q, a| Gate::Ry { qubit: q, angle: a }),
            (Pauli::Z, |q, a| Gate::Rz { qubit: q, angle: a }),
        ] {
            let a = 0.37;
            let mut v1: Vec<C> = (0..4).map(|k| C::new(k as f64 + 0.5, 0.3 * k as f64)).collect();
            let mut v2 = v1.clone();
            Gate::PauliExp { string: PauliString::single(2, 1, p), angle: a }.apply_to_amplitudes(&mut v1);
            make(1, 2.0 * a).apply_to_amplitudes(&mut v2);
            for (x, y) in v1.iter().zip(&v2) {
                assert!((x - y).norm() < 1e-14, "{p:?}");
            }
        }
    }
}
