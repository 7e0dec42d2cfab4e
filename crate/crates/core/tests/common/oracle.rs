//! Brute-force reference simulator: every gate and every Kraus operator is
//! expanded to a full `d x d` matrix with Kronecker products.

#![allow(dead_code)]

use faer::Mat;
use num_complex::Complex64;
use scramble_core::circuit::CircuitProgram;
use scramble_core::gate::Gate;
use scramble_core::noise::DepolarisingChannel;
use scramble_core::pauli::Pauli;
use scramble_core::state::DensityMatrix;

pub type M = Mat<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn m2(a: [[Complex64; 2]; 2]) -> M {
    M::from_fn(2, 2, |i, j| a[i][j])
}

pub fn identity2() -> M {
    m2([[c(1., 0.), c(0., 0.)], [c(0., 0.), c(1., 0.)]])
}

pub fn pauli2(p: Pauli) -> M {
    match p {
        Pauli::I => identity2(),
        Pauli::X => m2([[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]]),
        Pauli::Y => m2([[c(0., 0.), c(0., -1.)], [c(0., 1.), c(0., 0.)]]),
        Pauli::Z => m2([[c(1., 0.), c(0., 0.)], [c(0., 0.), c(-1., 0.)]]),
    }
}

pub fn kron(a: &M, b: &M) -> M {
    let (ra, ca, rb, cb) = (a.nrows(), a.ncols(), b.nrows(), b.ncols());
    M::from_fn(ra * rb, ca * cb, |i, j| a[(i / rb, j / cb)] * b[(i % rb, j % cb)])
}

/// Full operator from one 2x2 factor per qubit; qubit `q` is bit `q` of the
/// basis index, so qubit `n - 1` is the leftmost Kronecker factor.
pub fn embed(n: usize, factors: &dyn Fn(usize) -> M) -> M {
    let mut out = M::from_fn(1, 1, |_, _| c(1., 0.));
    for q in (0..n).rev() {
        out = kron(&out, &factors(q));
    }
    out
}

fn scaled(a: &M, s: Complex64) -> M {
    M::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * s)
}

fn add(a: &M, b: &M) -> M {
    M::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] + b[(i, j)])
}

fn rotation(p: Pauli, theta: f64) -> M {
    let (s, co) = (theta / 2.0).sin_cos();
    add(&scaled(&identity2(), c(co, 0.)), &scaled(&pauli2(p), c(0., -s)))
}

pub fn gate_unitary(n: usize, gate: &Gate) -> M {
    let single = |qubit: usize, u: M| embed(n, &move |q| if q == qubit { u.clone() } else { identity2() });
    match gate {
        Gate::Rx { qubit, angle } => single(*qubit, rotation(Pauli::X, *angle)),
        Gate::Ry { qubit, angle } => single(*qubit, rotation(Pauli::Y, *angle)),
        Gate::Rz { qubit, angle } => single(*qubit, rotation(Pauli::Z, *angle)),
        Gate::Hadamard { qubit } => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            single(*qubit, m2([[c(h, 0.), c(h, 0.)], [c(h, 0.), c(-h, 0.)]]))
        }
        Gate::Cnot { control, target } => {
            let p0 = m2([[c(1., 0.), c(0., 0.)], [c(0., 0.), c(0., 0.)]]);
            let p1 = m2([[c(0., 0.), c(0., 0.)], [c(0., 0.), c(1., 0.)]]);
            let (ct, tg) = (*control, *target);
            let a = embed(n, &|q| if q == ct { p0.clone() } else { identity2() });
            let b = embed(n, &|q| {
                if q == ct {
                    p1.clone()
                } else if q == tg {
                    pauli2(Pauli::X)
                } else {
                    identity2()
                }
            });
            add(&a, &b)
        }
        Gate::PauliExp { string, angle } => {
            let ops = string.ops().to_vec();
            let p = embed(n, &|q| pauli2(ops[q]));
            let id = embed(n, &|_| identity2());
            add(&scaled(&id, c(angle.cos(), 0.)), &scaled(&p, c(0., -angle.sin())))
        }
    }
}

/// Kraus operators `sqrt(1-r) Id, sqrt(r/3) X, Y, Z` on one qubit, where `r`
/// is the Pauli error probability equivalent to the requested channel.
pub fn depolarising_kraus(n: usize, qubit: usize, rate: f64, channel: DepolarisingChannel) -> Vec<M> {
    let r = match channel {
        DepolarisingChannel::Pauli => rate,
        DepolarisingChannel::Replacement => 0.75 * rate,
    };
    [(Pauli::I, 1.0 - r), (Pauli::X, r / 3.0), (Pauli::Y, r / 3.0), (Pauli::Z, r / 3.0)]
        .into_iter()
        .map(|(p, w)| {
            let op = scaled(&pauli2(p), c(w.sqrt(), 0.));
            embed(n, &|q| if q == qubit { op.clone() } else { identity2() })
        })
        .collect()
}

pub fn apply_kraus(rho: &M, kraus: &[M]) -> M {
    let mut out = M::zeros(rho.nrows(), rho.ncols());
    for k in kraus {
        out = add(&out, &(k * rho * k.adjoint()));
    }
    out
}

pub fn run_oracle(program: &CircuitProgram, initial: &DensityMatrix) -> M {
    let n = program.n_qubits();
    let noise = program.noise();
    let mut rho = initial.to_mat();
    for gate in program.gates() {
        let u = gate_unitary(n, gate);
        rho = &u * &rho * u.adjoint();
        let support = gate.support();
        let rate = noise.per_qubit_rate(support.len());
        for q in support {
            rho = apply_kraus(&rho, &depolarising_kraus(n, q, rate, noise.channel));
        }
    }
    rho
}

pub fn max_abs_diff(a: &DensityMatrix, b: &M) -> f64 {
    let d = a.dim();
    let mut worst = 0.0_f64;
    for i in 0..d {
        for j in 0..d {
            worst = worst.max((a.get(i, j) - b[(i, j)]).norm());
        }
    }
    worst
}
