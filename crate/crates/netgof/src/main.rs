//! Command-line front end: goodness-of-fit metrics, single-model fits,
//! simulation experiments, sequential K estimation, SNR diagnostics, and the
//! NMF feasibility check.
//!
//! Exit codes: 0 success, 1 usage/configuration error, 2 fit failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use netgof::cycles;
use netgof::fitters::{self, FitConfig, FitReport, ModelTag};
use netgof::gof::{self, GofConfig};
use netgof::graph;
use netgof::omega_io;
use netgof::sim::{self, SimConfig};
use netgof::vertex_hunting::VhSpec;

#[derive(Parser)]
#[command(
    name = "netgof",
    about = "Goodness-of-fit tests for the block-model family (SBM, DCBM, MMSBM, DCMM)",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the four GoF metrics of an observed network.
    Gof(GofArgs),
    /// Fit one model and write its parameter report.
    Fit(FitArgs),
    /// Run a simulation experiment described by a JSON config.
    Simulate(SimulateArgs),
    /// Estimate K by sequential DCBM goodness-of-fit tests.
    EstimateK(EstimateKArgs),
    /// Signal-to-noise diagnostics of a dense Omega against a model class.
    Snr(SnrArgs),
    /// Laplacian feasibility check for DCMM factorization of a dense Omega.
    NmfCheck(NmfArgs),
}

#[derive(Args, Clone)]
struct FitOpts {
    /// Vertex hunting: sp | knnsp | auto (auto applies the (N, alpha) rule).
    #[arg(long, default_value = "auto")]
    vh: String,
    /// Neighborhood size for --vh knnsp.
    #[arg(long)]
    knn_n: Option<usize>,
    /// Ball-radius divisor for --vh knnsp.
    #[arg(long)]
    knn_alpha: Option<f64>,
    /// Disable the regularization steps (simulation mode).
    #[arg(long)]
    no_regularize: bool,
    /// Seed for all randomized steps.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// SCORE ratio threshold (default ln n).
    #[arg(long)]
    threshold: Option<f64>,
}

impl FitOpts {
    fn to_config(&self) -> anyhow::Result<FitConfig> {
        let vh = match self.vh.as_str() {
            "sp" => VhSpec::Sp,
            "auto" => VhSpec::KnnSpAuto,
            "knnsp" => {
                let n_neighbors = self
                    .knn_n
                    .ok_or_else(|| anyhow::anyhow!("--vh knnsp requires --knn-n"))?;
                let alpha = self
                    .knn_alpha
                    .ok_or_else(|| anyhow::anyhow!("--vh knnsp requires --knn-alpha"))?;
                if n_neighbors < 1 {
                    anyhow::bail!("--knn-n must be at least 1");
                }
                if !(alpha > 0.0) {
                    anyhow::bail!("--knn-alpha must be positive");
                }
                VhSpec::KnnSp { n_neighbors, alpha }
            }
            other => anyhow::bail!("unknown vertex hunting mode {other:?}"),
        };
        Ok(FitConfig {
            vh,
            regularize: !self.no_regularize,
            seed: self.seed,
            threshold: self.threshold,
            eig_tol: netgof::spectral::DEFAULT_EIG_TOL,
        })
    }
}

#[derive(Args)]
struct GofArgs {
    /// Edge-list file.
    #[arg(long)]
    input: PathBuf,
    /// Number of communities.
    #[arg(long)]
    k: usize,
    /// Test level.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Restrict to the giant component before fitting.
    #[arg(long)]
    giant: bool,
    /// Output path (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Output format: csv | json.
    #[arg(long, default_value = "csv")]
    format: String,
    #[command(flatten)]
    fit: FitOpts,
}

#[derive(Args)]
struct FitArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    k: usize,
    /// Model to fit: sbm | dcbm | mmsbm | dcmm.
    #[arg(long)]
    model: String,
    #[arg(long)]
    giant: bool,
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    fit: FitOpts,
}

#[derive(Args)]
struct SimulateArgs {
    /// JSON experiment config (SimConfig plus an "assumed" model list).
    #[arg(long)]
    config: PathBuf,
    /// Directory for replicate CSV, summary JSON, and histogram CSV.
    #[arg(long)]
    output_dir: Option<PathBuf>,
    /// Worker threads for replicate parallelism (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct EstimateKArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    kmax: usize,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long)]
    giant: bool,
    #[command(flatten)]
    fit: FitOpts,
}

#[derive(Args)]
struct SnrArgs {
    /// Dense Omega as CSV with an n=<N> header.
    #[arg(long)]
    omega: PathBuf,
    /// Assumed model class.
    #[arg(long)]
    assume: String,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct NmfArgs {
    #[arg(long)]
    omega: PathBuf,
    #[arg(long)]
    k: usize,
}

/// Per-file experiment description: the simulation config plus the models to
/// fit on every replicate.
#[derive(Deserialize)]
struct SimulateFile {
    #[serde(flatten)]
    cfg: SimConfig,
    assumed: Vec<ModelTag>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Usage problems are exit code 1 (clap would use 2).
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = if err.downcast_ref::<netgof::Error>().map_or(false, |e| {
                matches!(
                    e,
                    netgof::Error::Fit { .. }
                        | netgof::Error::Singular(_)
                        | netgof::Error::EmptyCommunity(_)
                        | netgof::Error::IsolatedNode(_)
                        | netgof::Error::SolverNonConvergence { .. }
                        | netgof::Error::UndefinedStatistic
                        | netgof::Error::NonIdentifiable(_)
                )
            }) {
                2
            } else {
                1
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Gof(args) => cmd_gof(args),
        Command::Fit(args) => cmd_fit(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::EstimateK(args) => cmd_estimate_k(args),
        Command::Snr(args) => cmd_snr(args),
        Command::NmfCheck(args) => cmd_nmf_check(args),
    }
}

fn load_network(path: &Path, giant: bool) -> anyhow::Result<graph::Network> {
    let loaded = graph::load_edge_list(path)?;
    if loaded.stats.self_loops_dropped > 0 {
        eprintln!(
            "warning: dropped {} self-loop(s)",
            loaded.stats.self_loops_dropped
        );
    }
    if loaded.stats.duplicates_collapsed > 0 {
        eprintln!(
            "note: collapsed {} duplicate edge(s)",
            loaded.stats.duplicates_collapsed
        );
    }
    let net = if giant {
        let (g, kept) = loaded.network.giant_component()?;
        if g.n() < loaded.network.n() {
            eprintln!(
                "note: restricted to giant component ({} of {} nodes)",
                kept.len(),
                loaded.network.n()
            );
        }
        g
    } else {
        loaded.network
    };
    Ok(net)
}

fn emit(output: Option<&PathBuf>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_gof(args: GofArgs) -> anyhow::Result<ExitCode> {
    if !(args.alpha > 0.0 && args.alpha < 1.0) {
        anyhow::bail!("--alpha must be in (0, 1)");
    }
    let net = load_network(&args.input, args.giant)?;
    let cfg = GofConfig {
        alpha: args.alpha,
        fit: args.fit.to_config()?,
    };
    let report = gof::gof_all(&net, args.k, &cfg)?;
    let text = match args.format.as_str() {
        "csv" => report.to_csv(),
        "json" => serde_json::to_string_pretty(&report)? + "\n",
        other => anyhow::bail!("unknown format {other:?}"),
    };
    emit(args.output.as_ref(), &text)?;
    let any_fit_error = report.entries.iter().any(|e| e.error.is_some());
    Ok(if any_fit_error {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_fit(args: FitArgs) -> anyhow::Result<ExitCode> {
    let model: ModelTag = args.model.parse()?;
    let net = load_network(&args.input, args.giant)?;
    let cfg = args.fit.to_config()?;
    let c_n3 = cycles::count_c3(&net);
    let report: FitReport = match model {
        ModelTag::Sbm => {
            let f = fitters::fit_sbm(&net, args.k, &cfg)?;
            let t = cycles::t_n(&net, &f.omega).ok();
            let ones = nalgebra::DVector::from_element(net.n(), 1.0);
            FitReport::new(
                model,
                &f.labels,
                &ones,
                &f.labels.to_matrix(),
                &f.alpha_p,
                &f.omega.flags,
                t,
                c_n3,
            )
        }
        ModelTag::Dcbm => {
            let f = fitters::fit_dcbm(&net, args.k, &cfg)?;
            let t = cycles::t_n(&net, &f.omega).ok();
            FitReport::new(
                model,
                &f.labels,
                &f.theta,
                &f.labels.to_matrix(),
                &f.p,
                &f.omega.flags,
                t,
                c_n3,
            )
        }
        ModelTag::Mmsbm => {
            let f = fitters::fit_mmsbm(&net, args.k, &cfg)?;
            let t = cycles::t_n(&net, &f.omega).ok();
            let ones = nalgebra::DVector::from_element(net.n(), 1.0);
            FitReport::new(
                model, &f.h, &ones, &f.pi, &f.alpha_p, &f.omega.flags, t, c_n3,
            )
        }
        ModelTag::Dcmm => {
            let f = fitters::fit_dcmm(&net, args.k, &cfg)?;
            let t = cycles::t_n(&net, &f.omega).ok();
            FitReport::new(
                model,
                &f.h,
                &f.theta,
                &f.pi,
                &f.p,
                &f.omega.flags,
                t,
                c_n3,
            )
        }
    };
    let text = serde_json::to_string_pretty(&report)? + "\n";
    emit(args.output.as_ref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_simulate(args: SimulateArgs) -> anyhow::Result<ExitCode> {
    if let Some(threads) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| anyhow::anyhow!("thread pool: {e}"))?;
    }
    let text = std::fs::read_to_string(&args.config)?;
    let file: SimulateFile =
        serde_json::from_str(&text).map_err(|e| anyhow::anyhow!("config: {e}"))?;
    if file.assumed.is_empty() {
        anyhow::bail!("config: \"assumed\" must list at least one model");
    }
    let result = sim::run_experiment(&file.cfg, &file.assumed)?;

    for s in &result.summaries {
        eprintln!(
            "{}: n_ok={} n_failed={} mean={:.4} var={:.4} rejection_rate={:.4}",
            s.assumed, s.n_ok, s.n_failed, s.mean, s.variance, s.rejection_rate
        );
    }
    match args.output_dir {
        Some(dir) => {
            std::fs::create_dir_all(&dir)?;
            std::fs::write(dir.join("replicates.csv"), result.records_csv())?;
            std::fs::write(
                dir.join("summary.json"),
                serde_json::to_string_pretty(&result.summaries)? + "\n",
            )?;
            std::fs::write(dir.join("histogram.csv"), result.histogram_csv())?;
        }
        None => {
            print!("{}", result.records_csv());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_estimate_k(args: EstimateKArgs) -> anyhow::Result<ExitCode> {
    let net = load_network(&args.input, args.giant)?;
    let cfg = args.fit.to_config()?;
    let est = gof::estimate_k(&net, args.kmax, args.alpha, &cfg)?;
    println!("{}", est.k_hat);
    if !est.accepted {
        eprintln!(
            "note: no K in 1..={} accepted at level {}; reporting the sentinel kmax+1",
            args.kmax, args.alpha
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_snr(args: SnrArgs) -> anyhow::Result<ExitCode> {
    let model: ModelTag = args.assume.parse()?;
    let omega = omega_io::read_omega_csv(&args.omega)?;
    let result = gof::snr(&omega, model, args.k, args.seed)?;
    println!(
        "{}",
        serde_json::json!({
            "assumed": model.name(),
            "k": args.k,
            "trace_diff_cubed": result.trace_diff_cubed,
            "trace_omega_cubed": result.trace_omega_cubed,
            "snr": result.snr,
        })
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_nmf_check(args: NmfArgs) -> anyhow::Result<ExitCode> {
    let omega = omega_io::read_omega_csv(&args.omega)?;
    let report = gof::nmf_feasibility(&omega, args.k)?;
    println!(
        "{}",
        serde_json::json!({
            "feasible": report.feasible,
            "k": report.k,
            "tau": report.tau,
            "omega_weights": report.omega_weights,
            "sup_norms": report.sup_norms,
            "lhs": report.lhs,
            "rhs": report.rhs,
            "positive_eigenvalues": report.positive_eigenvalues,
            "rho1_deviation": report.rho1_deviation,
        })
    );
    Ok(ExitCode::SUCCESS)
}
