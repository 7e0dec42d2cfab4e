//! Pauli strings and weighted sums of them.
//!
//! A string is written qubit 0 first: `"XIZ"` acts with X on qubit 0 and Z on
//! qubit 2. Hamiltonian files hold one `<coefficient> <string>` pair per line;
//! `#` starts a comment.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::state::StateVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Tensor product of single-qubit Paulis. Ordering is lexicographic with
/// `I < X < Y < Z`, starting from qubit 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PauliString {
    ops: Vec<Pauli>,
}

impl PauliString {
    pub fn new(ops: Vec<Pauli>) -> Self {
        Self { ops }
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self { ops: vec![Pauli::I; n_qubits] }
    }

    /// `p` on `qubit`, identity elsewhere.
    pub fn single(n_qubits: usize, qubit: usize, p: Pauli) -> Self {
        let mut s = Self::identity(n_qubits);
        s.ops[qubit] = p;
        s
    }

    pub fn two_site(n_qubits: usize, a: usize, pa: Pauli, b: usize, pb: Pauli) -> Self {
        let mut s = Self::identity(n_qubits);
        s.ops[a] = pa;
        s.ops[b] = pb;
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_string(text, 0)
    }

    pub fn n_qubits(&self) -> usize {
        self.ops.len()
    }

    pub fn ops(&self) -> &[Pauli] {
        &self.ops
    }

    /// Number of non-identity factors.
    pub fn weight(&self) -> usize {
        self.ops.iter().filter(|&&p| p != Pauli::I).count()
    }

    pub fn is_identity(&self) -> bool {
        self.weight() == 0
    }

    /// Only `I` and `Z` factors, i.e. diagonal in the computational basis.
    pub fn is_diagonal(&self) -> bool {
        self.ops.iter().all(|&p| matches!(p, Pauli::I | Pauli::Z))
    }

    pub fn support(&self) -> Vec<usize> {
        self.ops
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != Pauli::I)
            .map(|(q, _)| q)
            .collect()
    }

    /// Bits flipped by the string (X and Y positions).
    pub fn x_mask(&self) -> usize {
        self.mask(|p| matches!(p, Pauli::X | Pauli::Y))
    }

    /// Bits contributing a sign (Z and Y positions).
    pub fn z_mask(&self) -> usize {
        self.mask(|p| matches!(p, Pauli::Z | Pauli::Y))
    }

    fn mask(&self, pick: impl Fn(Pauli) -> bool) -> usize {
        self.ops
            .iter()
            .enumerate()
            .filter(|(_, &p)| pick(p))
            .fold(0, |m, (q, _)| m | (1 << q))
    }

    /// `P|x> = phase(x) |x ^ x_mask>`; the returned closure computes `phase`.
    pub(crate) fn phase_fn(&self) -> impl Fn(usize) -> Complex64 {
        let z_mask = self.z_mask();
        let base = match self.ops.iter().filter(|&&p| p == Pauli::Y).count() % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        move |x: usize| {
            if (x & z_mask).count_ones().is_multiple_of(2) {
                base
            } else {
                -base
            }
        }
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.n_qubits() != self.n_qubits() {
            return Err(Error::Shape(format!(
                "Pauli string on {} qubits applied to a {}-qubit state",
                self.n_qubits(),
                psi.n_qubits()
            )));
        }
        let x_mask = self.x_mask();
        let phase = self.phase_fn();
        let a = psi.amplitudes();
        let mut out = vec![Complex64::new(0.0, 0.0); a.len()];
        for (x, amp) in a.iter().enumerate() {
            out[x ^ x_mask] = phase(x) * amp;
        }
        StateVector::from_amplitudes(psi.n_qubits(), out)
    }

    /// Dense matrix representation.
    pub fn to_matrix(&self) -> CMatrix {
        let d = 1usize << self.n_qubits();
        let x_mask = self.x_mask();
        let phase = self.phase_fn();
        let mut m = CMatrix::zeros(d, d);
        for x in 0..d {
            m[(x ^ x_mask, x)] = phase(x);
        }
        m
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.ops {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

fn parse_string(text: &str, line: usize) -> Result<PauliString> {
    text.chars()
        .map(|c| {
            Pauli::from_char(c).ok_or_else(|| Error::Parse {
                line,
                message: format!("invalid Pauli symbol {c:?} in {text:?}"),
            })
        })
        .collect::<Result<Vec<_>>>()
        .map(PauliString::new)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliTerm {
    pub coefficient: f64,
    pub string: PauliString,
}

/// `H = sum_k h_k P_k` with real coefficients, stored in canonical string order
/// with duplicates merged.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliTermHamiltonian {
    n_qubits: usize,
    terms: Vec<PauliTerm>,
}

impl PauliTermHamiltonian {
    pub fn new(n_qubits: usize, terms: impl IntoIterator<Item = (f64, PauliString)>) -> Result<Self> {
        let mut merged: BTreeMap<PauliString, f64> = BTreeMap::new();
        for (coefficient, string) in terms {
            if string.n_qubits() != n_qubits {
                return Err(Error::Shape(format!(
                    "term {string} has length {}, expected {n_qubits}",
                    string.n_qubits()
                )));
            }
            if !coefficient.is_finite() {
                return Err(Error::InvalidState(format!("non-finite coefficient on {string}")));
            }
            *merged.entry(string).or_insert(0.0) += coefficient;
        }
        let terms = merged
            .into_iter()
            .map(|(string, coefficient)| PauliTerm { coefficient, string })
            .collect();
        Ok(Self { n_qubits, terms })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Splits into (diagonal terms, off-diagonal terms).
    pub fn split_diagonal(&self) -> (PauliTermHamiltonian, PauliTermHamiltonian) {
        let (diag, off): (Vec<_>, Vec<_>) =
            self.terms.iter().cloned().partition(|t| t.string.is_diagonal());
        (
            Self { n_qubits: self.n_qubits, terms: diag },
            Self { n_qubits: self.n_qubits, terms: off },
        )
    }

    /// `<psi|H|psi>`
    pub fn expectation(&self, psi: &StateVector) -> Result<f64> {
        let mut total = 0.0;
        for term in &self.terms {
            let p_psi = term.string.apply(psi)?;
            total += term.coefficient * psi.inner(&p_psi).re;
        }
        Ok(total)
    }

    /// Energy of computational basis state `x` for a diagonal Hamiltonian.
    pub(crate) fn diagonal_energy(&self, x: usize) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let parity = (x & t.string.z_mask()).count_ones() % 2;
                if parity == 0 {
                    t.coefficient
                } else {
                    -t.coefficient
                }
            })
            .sum()
    }

    pub fn to_matrix(&self) -> CMatrix {
        let d = 1usize << self.n_qubits;
        let mut m = CMatrix::zeros(d, d);
        for t in &self.terms {
            m += t.string.to_matrix() * faer::Scale(Complex64::new(t.coefficient, 0.0));
        }
        m
    }

    /// Parses the line-oriented term format. An input without terms yields an
    /// empty Hamiltonian on zero qubits.
    pub fn parse(text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        let mut width: Option<usize> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            let [coeff, string] = fields.as_slice() else {
                return Err(Error::Parse {
                    line,
                    message: format!("expected `<coefficient> <pauli-string>`, got {content:?}"),
                });
            };
            let coefficient: f64 = coeff.parse().map_err(|_| Error::Parse {
                line,
                message: format!("invalid coefficient {coeff:?}"),
            })?;
            if !coefficient.is_finite() {
                return Err(Error::Parse { line, message: format!("non-finite coefficient {coeff:?}") });
            }
            let string = parse_string(string, line)?;
            match width {
                None => width = Some(string.n_qubits()),
                Some(w) if w != string.n_qubits() => {
                    return Err(Error::Shape(format!(
                        "line {line}: string {string} has length {}, expected {w}",
                        string.n_qubits()
                    )))
                }
                Some(_) => {}
            }
            terms.push((coefficient, string));
        }
        Self::new(width.unwrap_or(0), terms)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

/// Reads a Hamiltonian file (see the module docs for the format).
pub fn load_hamiltonian_file(path: impl AsRef<Path>) -> Result<PauliTermHamiltonian> {
    PauliTermHamiltonian::load(path)
}
