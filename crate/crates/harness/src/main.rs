use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use scramble_core::arrowhead::lambda1_fidelity_gap;
use scramble_core::fit::MetricKind;
use scramble_harness::aggregate::{aggregate_and_fit, write_fit_table, write_plot_files, GroupFit};
use scramble_harness::config::{ExperimentConfig, DEFAULT_MEMORY_BUDGET_BYTES, MetricSelection, Overrides};
use scramble_harness::error::{HarnessError, Result};
use scramble_harness::rows::{read_rows_from_path, ResultRow, ResultWriter};
use scramble_harness::scan::{alpha_scan, write_alpha_table};
use scramble_harness::sweep::{load_config_hamiltonian, run_sweep_into, simulate_point};

#[derive(Parser)]
#[command(name = "scramble", version, about = "Noisy circuit sweeps, white-noise metrics and scaling fits")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    /// Results CSV (overrides the config's `output`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Use seeds 0..SEEDS.
    #[arg(long)]
    seeds: Option<u64>,
    /// Noise level used for W when the config lists no epsilons.
    #[arg(long)]
    epsilon_proxy_w: Option<f64>,
    /// Noise level used for C when the config lists no epsilons.
    #[arg(long)]
    epsilon_proxy_c: Option<f64>,
    #[arg(long, value_enum)]
    metric: Option<MetricSelection>,
}

impl SweepArgs {
    fn load(&self) -> Result<ExperimentConfig> {
        let mut config = ExperimentConfig::load(&self.config)?;
        config.apply(&Overrides {
            output: self.out.clone(),
            seed_count: self.seeds,
            epsilon_proxy_w: self.epsilon_proxy_w,
            epsilon_proxy_c: self.epsilon_proxy_c,
            metric: self.metric,
        });
        config.validate()?;
        Ok(config)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the (epsilon, layers, seed) grid of a config and write result rows.
    Sweep {
        #[command(flatten)]
        sweep: SweepArgs,
        /// Directory for per-group plot data.
        #[arg(long)]
        plot_dir: Option<PathBuf>,
    },
    /// Print the spectral report of a single grid point.
    Metrics {
        #[arg(long)]
        config: PathBuf,
        /// Layer count (defaults to the first in the config).
        #[arg(long)]
        layers: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Noise level (defaults to the first in the config).
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Seed-average a results file and fit the power law per group.
    Fit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "both")]
        metric: MetricSelection,
        #[arg(long)]
        plot_dir: Option<PathBuf>,
    },
    /// Repeat a sweep across qubit counts and tabulate alpha(N).
    AlphaScan {
        #[command(flatten)]
        sweep: SweepArgs,
        /// Comma-separated qubit counts.
        #[arg(long, value_delimiter = ',', required = true)]
        qubits: Vec<usize>,
    },
}

fn metrics_of(selection: MetricSelection) -> Vec<MetricKind> {
    let mut out = Vec::new();
    if selection.wants_w() {
        out.push(MetricKind::W);
    }
    if selection.wants_c() {
        out.push(MetricKind::C);
    }
    out
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| HarnessError::io(parent, e))?;
    }
    Ok(BufWriter::new(File::create(path).map_err(|e| HarnessError::io(path, e))?))
}

fn print_fits(fits: &[GroupFit]) {
    for g in fits {
        let s = &g.summary;
        println!(
            "{} N={} eps={:e} {}: alpha = {:.6} beta = {:.6} residual = {:.3e} ({} points)",
            s.family, s.n_qubits, s.epsilon, s.metric, g.fit.alpha, g.fit.beta, g.fit.residual, g.fit.n_samples
        );
    }
}

/// Fits every requested metric; a metric that cannot be fit is reported
/// and skipped unless nothing at all could be fit.
fn fit_rows(rows: &[ResultRow], selection: MetricSelection) -> Result<Vec<GroupFit>> {
    let mut fits = Vec::new();
    let mut last_err = None;
    for metric in metrics_of(selection) {
        match aggregate_and_fit(rows, metric) {
            Ok(f) => fits.extend(f),
            Err(e) => {
                eprintln!("warning: {e}");
                last_err = Some(e);
            }
        }
    }
    match (fits.is_empty(), last_err) {
        (true, Some(e)) => Err(e),
        _ => Ok(fits),
    }
}

fn write_fits(fits: &[GroupFit], out: Option<&Path>, plot_dir: Option<&Path>) -> Result<()> {
    if let Some(path) = out {
        write_fit_table(create(path)?, fits)?;
        eprintln!("wrote {}", path.display());
    }
    if let Some(dir) = plot_dir {
        for p in write_plot_files(dir, fits)? {
            eprintln!("wrote {}", p.display());
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Sweep { sweep, plot_dir } => {
            let config = sweep.load()?;
            config.check_feasible(DEFAULT_MEMORY_BUDGET_BYTES)?;
            let rows = match &config.output {
                Some(path) => {
                    let mut writer = ResultWriter::new(create(path)?)?;
                    let rows = run_sweep_into(&config, Some(&mut writer))?;
                    writer.into_inner()?;
                    eprintln!("wrote {} rows to {}", rows.len(), path.display());
                    rows
                }
                None => {
                    let mut writer = ResultWriter::new(std::io::stdout().lock())?;
                    run_sweep_into(&config, Some(&mut writer))?
                }
            };
            if config.layers.len() >= 3 {
                match fit_rows(&rows, config.metric) {
                    Ok(fits) => {
                        if config.output.is_some() {
                            print_fits(&fits);
                        }
                        write_fits(&fits, None, plot_dir.as_deref())?;
                    }
                    Err(e) => eprintln!("no fit: {e}"),
                }
            }
        }
        Command::Metrics { config, layers, seed, epsilon } => {
            let config = ExperimentConfig::load(&config)?;
            let layers = layers.unwrap_or(config.layers[0]);
            let epsilon = epsilon.unwrap_or(config.epsilons()[0]);
            let hamiltonian = load_config_hamiltonian(&config)?;
            let sim = simulate_point(&config, hamiltonian.as_ref(), epsilon, layers, seed)?;
            let r = &sim.report;
            let show = |x: Option<f64>| x.map_or("undefined".to_string(), |v| format!("{v:.12e}"));
            println!("family = {}", config.family);
            println!("n_qubits = {}", config.n_qubits);
            println!("epsilon = {epsilon:e}");
            println!("layers = {layers}");
            println!("nu = {}", sim.nu);
            println!("F = {:.12e}", r.fidelity);
            println!("eta_est = {}", show(r.eta_estimate));
            println!("lambda1 = {:.12e}", r.lambda1);
            println!("W = {}", show(r.uniformity));
            println!("W_1/d = {}", show(r.uniformity_d));
            println!("C_abs = {:.12e}", r.commutator_norm_abs);
            println!("C_rel = {}", show(r.commutator_norm_rel));
            println!("trace_dist_wn = {:.12e}", r.trace_dist_wn);
            println!("error_fidelity = {}", show(r.error_fidelity));
            let gap = lambda1_fidelity_gap(&sim.rho, &sim.psi)?;
            println!("lambda1_minus_F = {:.12e}", gap.gap);
            println!("gap_bound = {}", show(gap.bound));
            println!("gap_interlacing_bound = {:.12e}", gap.interlacing_bound);
        }
        Command::Fit { input, out, metric, plot_dir } => {
            let rows = read_rows_from_path(&input)?;
            let fits = fit_rows(&rows, metric)?;
            print_fits(&fits);
            write_fits(&fits, out.as_deref(), plot_dir.as_deref())?;
        }
        Command::AlphaScan { sweep, qubits } => {
            let config = sweep.load()?;
            for &n in &qubits {
                ExperimentConfig { n_qubits: n, ..config.clone() }.check_feasible(DEFAULT_MEMORY_BUDGET_BYTES)?;
            }
            let out = config.output.clone().unwrap_or_else(|| PathBuf::from("alpha.csv"));
            let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("alpha");
            let rows_path = out.with_file_name(format!("{stem}_rows.csv"));
            let mut writer = ResultWriter::new(create(&rows_path)?)?;
            let (rows, scans) = alpha_scan(&config, &qubits, Some(&mut writer))?;
            writer.into_inner()?;
            eprintln!("wrote {} rows to {}", rows.len(), rows_path.display());
            write_alpha_table(create(&out)?, config.family.name(), &scans)?;
            eprintln!("wrote {}", out.display());
            for s in &scans {
                println!("{} eps={:e}: trend {:?}", s.metric, s.epsilon, s.table.trend);
                for r in &s.table.rows {
                    println!("  N={} alpha = {:.6} beta = {:.6}", r.n_qubits, r.alpha, r.beta);
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
