//! Acceptance suite: twelve criteria, one PASS/FAIL line each. Runs as a
//! plain binary so the summary is always printed; exits non-zero when any
//! criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::oracle::{max_abs_diff, run_oracle};
use common::random_circuit;
use scramble_core::ansatz::{build_sel_circuit, AnsatzSpec, Family, ParameterMode};
use scramble_core::arrowhead::{arrowhead_transform, secular_residual};
use scramble_core::circuit::{run_circuit, run_ideal};
use scramble_core::error::Error;
use scramble_core::fit::{fit_scaling, scaling_model, MetricKind, ScalingSample};
use scramble_core::metrics::{
    bias_bound, build_white_noise_state, commutator_norm, eigenvalues_descending, white_noise_distance_identity,
    uniformity_w,
};
use scramble_core::noise::{DepolarisingChannel, NoiseSpec};
use scramble_core::random::{random_density_matrix, random_state, random_traceless_hermitian};
use scramble_core::state::{DensityMatrix, StateVector};
use scramble_harness::aggregate::{aggregate, aggregate_and_fit, mean_and_stderr, GroupSummary};
use scramble_harness::config::{ExperimentConfig, MetricSelection};
use scramble_harness::rows::ResultRow;
use scramble_harness::sweep::run_sweep;

// Tolerances and budgets, one per criterion.
const C1_TOL: f64 = 1e-10;
const C1_BUDGET: Duration = Duration::from_secs(10);
const C2_REL_TOL: f64 = 1e-8;
const C3_TOL: f64 = 1e-12;
const C4_TOL: f64 = 1e-8;
/// Border weight below which an eigenvalue decouples from the corner and
/// is not a root of the secular function.
const C4_DEFLATION_TOL: f64 = 1e-10;
const C5_TOL: f64 = 1e-9;
const C6_TOL: f64 = 0.02;
const C6_MAX_NU: usize = 300;
const C6_BUDGET: Duration = Duration::from_secs(120);
const C7_BETA_RANGE: (f64, f64) = (0.35, 0.65);
const C7_MIN_DECADES: f64 = 1.5;
const C7_BUDGET: Duration = Duration::from_secs(30 * 60);
const C8_RATIO: f64 = 0.1;
const C9_MIN_W: f64 = 0.2;
const C9_RATIO: f64 = 0.1;
const C10_MARGIN: f64 = 0.05;
const C11_TOL: f64 = 1e-9;
/// Floating-point slack on the bias bound, relative and absolute.
const C12_SLACK: f64 = 1e-12;

const SEEDS: u64 = 10;
const EPS_W: f64 = 1e-8;
const EPS_C: f64 = 1e-7;

type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn sel_output(n: usize, layers: usize, eps: f64, seed: u64) -> (DensityMatrix, StateVector) {
    let spec = AnsatzSpec::new(Family::Sel, n, layers).with_seed(seed);
    let program = build_sel_circuit(&spec, NoiseSpec::new(eps).unwrap()).unwrap();
    let rho = run_circuit(&program, &DensityMatrix::zero_state(n).unwrap()).unwrap();
    let psi = run_ideal(&program, &StateVector::zero(n).unwrap()).unwrap();
    (rho, psi)
}

fn sweep(family: Family, n: usize, layers: &[usize], epsilons: &[f64], metric: MetricSelection) -> Vec<ResultRow> {
    let mut config = ExperimentConfig::new(family, n, layers.to_vec());
    config.epsilons = Some(epsilons.to_vec());
    config.seeds = Some((0..SEEDS).collect());
    config.metric = metric;
    run_sweep(&config).unwrap()
}

fn group(groups: &[GroupSummary], eps: f64) -> &GroupSummary {
    groups.iter().find(|g| g.epsilon == eps).expect("missing group")
}

fn c1_white_noise_fixed_point() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    let (mut worst_w, mut worst_c) = (0.0_f64, 0.0_f64);
    for _ in 0..50 {
        let n = r.random_range(1..=6);
        let eta = r.random_range(0.1..=0.99);
        let psi = random_state(n, &mut r).unwrap();
        let wn = build_white_noise_state(&psi, eta).unwrap();
        worst_w = worst_w.max(uniformity_w(&eigenvalues_descending(&wn.matrix).unwrap()).unwrap());
        worst_c = worst_c.max(commutator_norm(&wn.matrix, &psi).unwrap().absolute);
    }
    let elapsed = start.elapsed();
    outcome(
        worst_w <= C1_TOL && worst_c <= C1_TOL && elapsed < C1_BUDGET,
        format!("50 states: max W = {worst_w:.2e}, max C_abs = {worst_c:.2e}, {:.2} s", elapsed.as_secs_f64()),
    )
}

fn c2_dual_route_commutator() -> Outcome {
    let mut r = rng(2);
    let mut worst = 0.0_f64;
    for seed in 0..100 {
        let layers = r.random_range(1..=3);
        let eps = 10f64.powf(r.random_range(-3.0..=-1.0));
        let (rho, psi) = sel_output(3, layers, eps, seed);
        let c = commutator_norm(&rho, &psi).unwrap();
        let scale = c.absolute.max(c.absolute_variance_route);
        worst = worst.max((c.absolute - c.absolute_variance_route).abs() / scale);
    }
    outcome(worst <= C2_REL_TOL, format!("100 SEL outputs: max relative difference {worst:.2e}"))
}

fn c3_kraus_oracle() -> Outcome {
    let mut worst = 0.0_f64;
    for seed in 0..20u64 {
        let n = 1 + (seed as usize % 3);
        let eps = 0.01 + 0.02 * seed as f64;
        for channel in [DepolarisingChannel::Pauli, DepolarisingChannel::Replacement] {
            let noise = NoiseSpec::new(eps).unwrap().with_channel(channel);
            let program = random_circuit(n, 10, noise, 1000 + seed);
            let init = DensityMatrix::zero_state(n).unwrap();
            let fast = run_circuit(&program, &init).unwrap();
            worst = worst.max(max_abs_diff(&fast, &run_oracle(&program, &init)));
        }
    }
    outcome(worst <= C3_TOL, format!("20 circuits x 2 channels, 10 gates: max |diff| = {worst:.2e}"))
}

fn c4_secular_equation() -> Outcome {
    let mut r = rng(4);
    let (mut roots, mut deflated, mut failures) = (0, 0, 0);
    let mut worst = 0.0_f64;
    for seed in 0..50 {
        let eps = r.random_range(0.005..=0.2);
        let (rho, psi) = sel_output(3, 2, eps, 4000 + seed);
        let form = arrowhead_transform(&rho, &psi).unwrap();
        for lambda in eigenvalues_descending(&rho).unwrap() {
            if form.is_deflated(lambda, C4_DEFLATION_TOL) {
                deflated += 1;
                continue;
            }
            match secular_residual(&form, lambda) {
                Ok(p) => {
                    worst = worst.max(p.abs());
                    roots += 1;
                }
                Err(Error::Pole { .. }) => failures += 1,
                Err(e) => panic!("{e}"),
            }
        }
    }
    outcome(
        failures == 0 && worst <= C4_TOL && roots + deflated == 400,
        format!("{roots} roots checked, {deflated} deflated, {failures} poles: max |P| = {worst:.2e}"),
    )
}

fn c5_distance_identity() -> Outcome {
    let mut r = rng(5);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let eta = r.random_range(0.0..=1.0);
        let rank = r.random_range(1..=8);
        let psi = random_state(3, &mut r).unwrap();
        let rho_err = random_density_matrix(3, rank, &mut r).unwrap();
        let (lhs, rhs) = white_noise_distance_identity(&psi, eta, &rho_err).unwrap();
        worst = worst.max((lhs - rhs).abs());
    }
    outcome(worst <= C5_TOL, format!("100 draws at d = 8: max |lhs - rhs| = {worst:.2e}"))
}

fn c6_fidelity_law() -> Outcome {
    let start = Instant::now();
    let layers = [1, 2, 4, 8, 12];
    let rows = sweep(Family::Sel, 6, &layers, &[1e-3, 1e-2], MetricSelection::W);
    let mut by_point: BTreeMap<(u64, usize), Vec<f64>> = BTreeMap::new();
    for row in &rows {
        by_point.entry((row.epsilon.to_bits(), row.nu)).or_default().push(row.fidelity.unwrap());
    }
    let mut worst = (0.0_f64, 0.0, 0);
    let mut failing = Vec::new();
    let mut max_nu = 0;
    for ((bits, nu), f) in &by_point {
        let eps = f64::from_bits(*bits);
        let (mean, _) = mean_and_stderr(f);
        let dev = (mean - (-eps * *nu as f64).exp()).abs();
        max_nu = max_nu.max(*nu);
        if dev > worst.0 {
            worst = (dev, eps, *nu);
        }
        if dev > C6_TOL {
            failing.push(format!("eps={eps:e} nu={nu}: {dev:.3}"));
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failing.is_empty() && max_nu <= C6_MAX_NU && elapsed < C6_BUDGET,
        format!(
            "N=6, nu <= {max_nu}, {SEEDS} seeds: max |F - exp(-xi)| = {:.4} (eps={:e}, nu={}); over tolerance: [{}]; {:.1} s",
            worst.0,
            worst.1,
            worst.2,
            failing.join(", "),
            elapsed.as_secs_f64()
        ),
    )
}

/// Rows shared by criteria 7 and 8: random SEL at N=8 with both proxies.
fn sel_scaling_rows() -> (Vec<ResultRow>, Duration) {
    let start = Instant::now();
    let rows = sweep(Family::Sel, 8, &[2, 4, 8, 16, 32, 64], &[EPS_W, EPS_C], MetricSelection::Both);
    (rows, start.elapsed())
}

fn c7_sel_scaling(rows: &[ResultRow], elapsed: Duration) -> Outcome {
    let fits = aggregate_and_fit(rows, MetricKind::W).unwrap();
    let g = fits.iter().find(|g| g.summary.epsilon == EPS_W).unwrap();
    let nus: Vec<f64> = g.summary.points.iter().map(|p| p.nu as f64).collect();
    let decades = (nus[nus.len() - 1] / nus[0]).log10();
    let beta = g.fit.beta;
    outcome(
        (C7_BETA_RANGE.0..=C7_BETA_RANGE.1).contains(&beta) && decades >= C7_MIN_DECADES && elapsed < C7_BUDGET,
        format!(
            "N=8, eps={EPS_W:e}, nu {}..{} ({decades:.2} decades), {SEEDS} seeds: beta_W = {beta:.4}, alpha = {:.4}; {:.1} s",
            nus[0],
            nus[nus.len() - 1],
            g.fit.alpha,
            elapsed.as_secs_f64()
        ),
    )
}

fn c8_c_much_smaller_than_w(rows: &[ResultRow]) -> Outcome {
    let w_groups = aggregate(rows, MetricKind::W);
    let c_groups = aggregate(rows, MetricKind::C);
    let w = group(&w_groups, EPS_W);
    let c = group(&c_groups, EPS_C);
    let c_same = group(&c_groups, EPS_W);
    let mut worst = 0.0_f64;
    let mut worst_same = 0.0_f64;
    for (i, wp) in w.points.iter().enumerate() {
        assert_eq!(wp.nu, c.points[i].nu);
        worst = worst.max(c.points[i].mean / wp.mean);
        worst_same = worst_same.max(c_same.points[i].mean / wp.mean);
    }
    outcome(
        worst <= C8_RATIO && worst_same <= C8_RATIO,
        format!(
            "N=8, {} nu points: max C_rel/W = {worst:.4} with C at eps={EPS_C:e} and W at eps={EPS_W:e}, {worst_same:.4} with both at eps={EPS_W:e}",
            w.points.len()
        ),
    )
}

fn c9_vqe_regime() -> Outcome {
    let layers = [1, 2, 4, 8, 16, 32];
    let mut w_by_layer: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    let mut c_by_layer: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    let mut nu_by_layer = BTreeMap::new();
    for hamiltonian_seed in 0..SEEDS {
        let mut config = ExperimentConfig::new(Family::HvaXxx, 6, layers.to_vec());
        config.parameter_mode = ParameterMode::Vqe;
        config.epsilons = Some(vec![1e-3]);
        config.seeds = Some(vec![0]);
        config.hamiltonian_seed = hamiltonian_seed;
        for row in run_sweep(&config).unwrap() {
            w_by_layer.entry(row.layers).or_default().push(row.w.unwrap());
            c_by_layer.entry(row.layers).or_default().push(row.c_rel.unwrap());
            nu_by_layer.insert(row.layers, row.nu);
        }
    }
    let w: Vec<f64> = w_by_layer.values().map(|v| mean_and_stderr(v).0).collect();
    let c: Vec<f64> = c_by_layer.values().map(|v| mean_and_stderr(v).0).collect();
    let min_w = w.iter().copied().fold(f64::INFINITY, f64::min);
    let monotone_decrease = w.windows(2).all(|p| p[1] < p[0]);
    let max_ratio = c.iter().zip(&w).map(|(c, w)| c / w).fold(0.0, f64::max);
    let series: Vec<String> = nu_by_layer
        .values()
        .zip(&w)
        .map(|(nu, w)| format!("{nu}:{w:.3}"))
        .collect();
    outcome(
        min_w >= C9_MIN_W && !monotone_decrease && max_ratio <= C9_RATIO,
        format!(
            "HVA-XXX N=6 vqe eps=1e-3, mean over {SEEDS} Hamiltonian seeds: W(nu) = [{}]; min W = {min_w:.3}, monotone decrease = {monotone_decrease}, max C_rel/W = {max_ratio:.4}",
            series.join(", ")
        ),
    )
}

fn c10_rz_insertion() -> Outcome {
    let layers = [2, 4, 8, 16, 32, 64];
    let beta = |family| {
        let rows = sweep(family, 6, &layers, &[EPS_W], MetricSelection::W);
        aggregate_and_fit(&rows, MetricKind::W).unwrap()[0].fit.beta
    };
    let plain = beta(Family::HvaTfi);
    let rz = beta(Family::HvaTfiRz);
    outcome(
        rz - plain >= C10_MARGIN,
        format!("N=6, eps={EPS_W:e}, {SEEDS} seeds: beta_W TFI = {plain:.4}, TFI-RZ = {rz:.4}, margin {:.4}", rz - plain),
    )
}

fn c11_fit_round_trip() -> Outcome {
    let mut worst = 0.0_f64;
    for (alpha, beta, eps) in [(2.0, 0.5, 1e-4), (0.3, 0.25, 1e-3), (5.0, 0.9, 0.0), (1.0, 0.5, 1e-6)] {
        let samples: Vec<ScalingSample> = [10.0, 30.0, 100.0, 300.0, 1000.0]
            .iter()
            .map(|&nu| ScalingSample::new(nu, eps, scaling_model(alpha, beta, nu, eps * nu), MetricKind::W))
            .collect();
        let fit = fit_scaling(&samples).unwrap();
        worst = worst.max((fit.alpha - alpha).abs()).max((fit.beta - beta).abs());
    }
    outcome(worst <= C11_TOL, format!("4 synthetic series: max parameter error {worst:.2e}"))
}

fn c12_bias_bound() -> Outcome {
    let mut r = rng(12);
    let mut violations = 0;
    let mut tightest = f64::INFINITY;
    for _ in 0..100 {
        let n = r.random_range(1..=3);
        let rank = r.random_range(1..=1 << n);
        let eta = r.random_range(0.05..=1.0);
        let psi = random_state(n, &mut r).unwrap();
        let rho = random_density_matrix(n, rank, &mut r).unwrap();
        let o = random_traceless_hermitian(n, &mut r).unwrap();
        let b = bias_bound(&o, &rho, &psi, eta).unwrap();
        if b.bias.abs() > b.bound * (1.0 + C12_SLACK) + C12_SLACK {
            violations += 1;
        }
        if b.bound > 0.0 {
            tightest = tightest.min(b.bound - b.bias.abs());
        }
    }
    outcome(violations == 0, format!("100 draws: {violations} violations, smallest margin {tightest:.2e}"))
}

fn main() {
    let (scaling_rows, scaling_time) = sel_scaling_rows();
    let criteria: Vec<(&str, Check)> = vec![
        ("white-noise fixed point", Box::new(c1_white_noise_fixed_point)),
        ("dual-route commutator norm", Box::new(c2_dual_route_commutator)),
        ("Kraus-oracle equivalence", Box::new(c3_kraus_oracle)),
        ("secular equation", Box::new(c4_secular_equation)),
        ("trace-distance identity", Box::new(c5_distance_identity)),
        ("fidelity law", Box::new(c6_fidelity_law)),
        ("random-SEL scaling", Box::new(|| c7_sel_scaling(&scaling_rows, scaling_time))),
        ("C << W separation", Box::new(|| c8_c_much_smaller_than_w(&scaling_rows))),
        ("VQE-parameter regime", Box::new(c9_vqe_regime)),
        ("Rz-insertion scrambling", Box::new(c10_rz_insertion)),
        ("fit round trip", Box::new(c11_fit_round_trip)),
        ("bias-bound soundness", Box::new(c12_bias_bound)),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {status} {name}: {}", i + 1, o.detail);
        if !o.passed {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", criteria.len());
    } else {
        println!("acceptance: {} of {} criteria fail: {failed:?}", failed.len(), criteria.len());
        std::process::exit(1);
    }
}
