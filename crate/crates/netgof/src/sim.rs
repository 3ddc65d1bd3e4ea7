//! Synthetic network generation for the block-model family and the
//! experiment harness for null calibration and power studies.
//!
//! Randomness comes from per-replicate ChaCha8 streams derived from the
//! configured seed, so results are reproducible bit for bit across runs and
//! across the replicate-parallel execution.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fitters::{
    fit_dcbm_with_embedding, fit_dcmm_with_embedding, fit_mmsbm_with_embedding,
    fit_sbm_with_embedding, FitConfig, ModelTag, ProbMatrix,
};
use crate::graph::Network;
use crate::spectral::{top_k_eigs, DEFAULT_EIG_TOL};
use crate::stats::{mean_var, z_crit};
use crate::vertex_hunting::VhSpec;
use crate::{Error, Result};

/// Distribution of the degree parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum ThetaLaw {
    /// `theta_i ~ Uniform(a, b)`.
    Uniform { a: f64, b: f64 },
    /// `1 / theta_i ~ Uniform(a, b)` (severe heterogeneity).
    InverseUniform { a: f64, b: f64 },
    /// `theta_i = sqrt(alpha)` for every node (SBM / MMSBM scaling).
    ConstantSqrtAlpha { alpha: f64 },
}

/// Distribution of the mixed membership rows (mixed-membership models only).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MixedLaw {
    /// Rows drawn from a symmetric Dirichlet, sampled via Gamma ratios.
    Dirichlet { concentration: f64 },
    /// Rows alternate between `(x, 1-x)` and `(1-x, x)`; K = 2 only.
    TwoPoint { x: f64 },
}

/// Membership layout for MMSBM/DCMM truths: a pure-node fraction per
/// community, remaining rows drawn from `mixed`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PiSpec {
    /// Fraction of n that is pure in each community (e.g. 1/8).
    pub pure_fraction: f64,
    pub mixed: MixedLaw,
}

impl Default for PiSpec {
    fn default() -> Self {
        PiSpec {
            pure_fraction: 0.125,
            mixed: MixedLaw::Dirichlet {
                concentration: 0.5,
            },
        }
    }
}

fn default_vh() -> VhSpec {
    VhSpec::Sp
}

fn default_alpha_level() -> f64 {
    0.05
}

fn default_schema_version() -> u32 {
    1
}

/// Configuration of one simulation experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimConfig {
    #[serde(default = "default_schema_version")]
    pub schema_version: u32,
    pub n: usize,
    pub k: usize,
    /// The true (generating) model.
    pub model: ModelTag,
    pub theta: ThetaLaw,
    /// `P` has unit diagonal and this value off the diagonal.
    pub p_offdiag: f64,
    /// Membership layout; ignored by SBM/DCBM truths (all nodes pure,
    /// equal-sized communities).
    #[serde(default)]
    pub pi: PiSpec,
    pub replicates: usize,
    pub seed: u64,
    /// Restrict each sampled network to its giant component before fitting.
    #[serde(default)]
    pub giant_component: bool,
    /// Vertex hunting for the fitters (SP by default in simulation mode).
    #[serde(default = "default_vh")]
    pub vh: VhSpec,
    /// Regularization in the fitters (off by default in simulation mode).
    #[serde(default)]
    pub regularize: bool,
    /// Test level for rejection-rate summaries.
    #[serde(default = "default_alpha_level")]
    pub alpha_level: f64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != 1 {
            return Err(Error::Config(format!(
                "unsupported schema_version {}",
                self.schema_version
            )));
        }
        if self.n < 3 {
            return Err(Error::Config("n must be at least 3".into()));
        }
        if self.k == 0 || self.k > self.n {
            return Err(Error::Config(format!(
                "k = {} out of range for n = {}",
                self.k, self.n
            )));
        }
        if !(0.0..=1.0).contains(&self.p_offdiag) {
            return Err(Error::Config("p_offdiag must be in [0, 1]".into()));
        }
        if !(self.alpha_level > 0.0 && self.alpha_level < 1.0) {
            return Err(Error::Config("alpha_level must be in (0, 1)".into()));
        }
        match self.theta {
            ThetaLaw::Uniform { a, b } | ThetaLaw::InverseUniform { a, b } => {
                if !(a > 0.0 && b > a) {
                    return Err(Error::Config("theta law needs 0 < a < b".into()));
                }
            }
            ThetaLaw::ConstantSqrtAlpha { alpha } => {
                if !(alpha > 0.0 && alpha <= 1.0) {
                    return Err(Error::Config("alpha must be in (0, 1]".into()));
                }
            }
        }
        match self.model {
            ModelTag::Sbm | ModelTag::Mmsbm => {
                if !matches!(self.theta, ThetaLaw::ConstantSqrtAlpha { .. }) {
                    return Err(Error::Config(format!(
                        "{} truths need theta = constant_sqrt_alpha (degree-free model)",
                        self.model
                    )));
                }
            }
            ModelTag::Dcbm | ModelTag::Dcmm => {}
        }
        if matches!(self.model, ModelTag::Mmsbm | ModelTag::Dcmm) {
            if !(0.0..=1.0).contains(&self.pi.pure_fraction)
                || self.pi.pure_fraction * self.k as f64 > 1.0
            {
                return Err(Error::Config(
                    "pure_fraction must satisfy 0 <= K * pure_fraction <= 1".into(),
                ));
            }
            match self.pi.mixed {
                MixedLaw::Dirichlet { concentration } => {
                    if !(concentration > 0.0) {
                        return Err(Error::Config(
                            "Dirichlet concentration must be positive".into(),
                        ));
                    }
                }
                MixedLaw::TwoPoint { x } => {
                    if self.k != 2 {
                        return Err(Error::Config("two-point memberships need K = 2".into()));
                    }
                    if !(0.0..=0.5).contains(&x) {
                        return Err(Error::Config("two-point x must be in [0, 1/2]".into()));
                    }
                }
            }
        }
        Ok(())
    }
}

/// The ground-truth parameters of a generated network.
#[derive(Debug, Clone)]
pub struct ModelParams {
    pub model: ModelTag,
    pub theta: DVector<f64>,
    pub pi: DMatrix<f64>,
    pub p: DMatrix<f64>,
}

impl ModelParams {
    /// The true `Omega` in factored form (fast path for oracle statistics).
    pub fn to_prob_matrix(&self) -> ProbMatrix {
        ProbMatrix::from_factored(
            self.theta.clone(),
            self.pi.clone(),
            self.p.clone(),
            self.model,
        )
    }
}

/// Draws `(Omega, params)` from the configured model. The generated matrix
/// must be a legal Bernoulli matrix; an entry outside `[0, 1]` is a
/// configuration error (never clipped).
pub fn gen_omega(cfg: &SimConfig, rng: &mut ChaCha8Rng) -> Result<(DMatrix<f64>, ModelParams)> {
    cfg.validate()?;
    let n = cfg.n;
    let k = cfg.k;

    let theta = DVector::from_iterator(
        n,
        (0..n).map(|_| match cfg.theta {
            ThetaLaw::Uniform { a, b } => rng.random_range(a..b),
            ThetaLaw::InverseUniform { a, b } => 1.0 / rng.random_range(a..b),
            ThetaLaw::ConstantSqrtAlpha { alpha } => alpha.sqrt(),
        }),
    );

    let mut p = DMatrix::from_element(k, k, cfg.p_offdiag);
    for c in 0..k {
        p[(c, c)] = 1.0;
    }

    let pi = match cfg.model {
        ModelTag::Sbm | ModelTag::Dcbm => {
            // All pure, equal-sized communities.
            let mut pi = DMatrix::zeros(n, k);
            for i in 0..n {
                pi[(i, i * k / n)] = 1.0;
            }
            pi
        }
        ModelTag::Mmsbm | ModelTag::Dcmm => {
            let mut pi = DMatrix::zeros(n, k);
            let pure_per_comm = (n as f64 * cfg.pi.pure_fraction).round() as usize;
            let mut row = 0usize;
            for c in 0..k {
                for _ in 0..pure_per_comm {
                    pi[(row, c)] = 1.0;
                    row += 1;
                }
            }
            let mut mixed_index = 0usize;
            while row < n {
                match cfg.pi.mixed {
                    MixedLaw::Dirichlet { concentration } => {
                        let gamma = Gamma::new(concentration, 1.0)
                            .map_err(|e| Error::Config(format!("bad Dirichlet: {e}")))?;
                        loop {
                            let mut sum = 0.0;
                            for c in 0..k {
                                let g = gamma.sample(rng);
                                pi[(row, c)] = g;
                                sum += g;
                            }
                            if sum > 0.0 {
                                for c in 0..k {
                                    pi[(row, c)] /= sum;
                                }
                                break;
                            }
                        }
                    }
                    MixedLaw::TwoPoint { x } => {
                        if mixed_index % 2 == 0 {
                            pi[(row, 0)] = x;
                            pi[(row, 1)] = 1.0 - x;
                        } else {
                            pi[(row, 0)] = 1.0 - x;
                            pi[(row, 1)] = x;
                        }
                        mixed_index += 1;
                    }
                }
                row += 1;
            }
            pi
        }
    };

    // Omega = Theta Pi P Pi' Theta.
    let mut x = pi.clone();
    for i in 0..n {
        for c in 0..k {
            x[(i, c)] *= theta[i];
        }
    }
    let omega = &x * &p * x.transpose();
    for i in 0..n {
        for j in 0..n {
            let v = omega[(i, j)];
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Config(format!(
                    "generated Omega({i}, {j}) = {v} is outside [0, 1]; \
                     fix the configuration instead of clipping the truth"
                )));
            }
        }
    }
    Ok((
        omega,
        ModelParams {
            model: cfg.model,
            theta,
            pi,
            p,
        },
    ))
}

/// Samples an undirected network: independent Bernoulli draws on the upper
/// triangle, mirrored, hollow diagonal.
pub fn sample_network(omega: &DMatrix<f64>, rng: &mut ChaCha8Rng) -> Result<Network> {
    let n = omega.nrows();
    if omega.ncols() != n {
        return Err(Error::Dimension {
            expected: n,
            got: omega.ncols(),
        });
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < omega[(i, j)] {
                edges.push((i, j));
            }
        }
    }
    Ok(Network::from_edges(n, edges)?.0)
}

/// One replicate outcome for one assumed model.
#[derive(Debug, Clone, Serialize)]
pub struct ReplicateRecord {
    pub replicate: usize,
    pub assumed: ModelTag,
    pub t_n: Option<f64>,
    pub c_n3: u64,
    /// Node count after optional giant-component restriction.
    pub n_used: usize,
    pub error: Option<String>,
}

/// Summary statistics for one assumed model.
#[derive(Debug, Clone, Serialize)]
pub struct AssumedSummary {
    pub assumed: ModelTag,
    pub n_ok: usize,
    pub n_failed: usize,
    pub mean: f64,
    pub variance: f64,
    pub rejection_rate: f64,
    pub rejections: usize,
    /// 40 equal bins over [-6, 6] plus underflow/overflow at the ends
    /// (42 counters total).
    pub histogram: Vec<u64>,
}

/// Results of a calibration or power experiment.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentResult {
    pub alpha: f64,
    pub z_crit: f64,
    pub replicates: usize,
    pub records: Vec<ReplicateRecord>,
    pub summaries: Vec<AssumedSummary>,
}

impl ExperimentResult {
    pub fn summary(&self, assumed: ModelTag) -> Option<&AssumedSummary> {
        self.summaries.iter().find(|s| s.assumed == assumed)
    }

    /// CSV with one row per (replicate, assumed model).
    pub fn records_csv(&self) -> String {
        let mut out = String::from("replicate,assumed,t_n,c_n3,n_used,status\n");
        for r in &self.records {
            let t = r.t_n.map(|t| format!("{t}")).unwrap_or_default();
            let status = if r.error.is_some() { "failed" } else { "ok" };
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.replicate, r.assumed, t, r.c_n3, r.n_used, status
            ));
        }
        out
    }

    /// CSV of the histogram bins for external plotting.
    pub fn histogram_csv(&self) -> String {
        let mut out = String::from("assumed,bin_lo,bin_hi,count\n");
        for s in &self.summaries {
            for (b, &count) in s.histogram.iter().enumerate() {
                let (lo, hi) = bin_edges(b);
                out.push_str(&format!("{},{lo},{hi},{count}\n", s.assumed));
            }
        }
        out
    }
}

const HIST_BINS: usize = 40;
const HIST_LO: f64 = -6.0;
const HIST_HI: f64 = 6.0;

fn bin_edges(b: usize) -> (f64, f64) {
    let w = (HIST_HI - HIST_LO) / HIST_BINS as f64;
    if b == 0 {
        (f64::NEG_INFINITY, HIST_LO)
    } else if b == HIST_BINS + 1 {
        (HIST_HI, f64::INFINITY)
    } else {
        (
            HIST_LO + (b - 1) as f64 * w,
            HIST_LO + b as f64 * w,
        )
    }
}

fn bin_index(t: f64) -> usize {
    if t < HIST_LO {
        0
    } else if t >= HIST_HI {
        HIST_BINS + 1
    } else {
        let w = (HIST_HI - HIST_LO) / HIST_BINS as f64;
        1 + ((t - HIST_LO) / w) as usize
    }
}

/// Runs the harness: for each replicate, draw fresh parameters and a fresh
/// network from the truth, fit every assumed model, and record `T_n`.
/// Per-replicate fit failures are counted, excluded from the summaries, and
/// reported in the records.
pub fn run_experiment(cfg: &SimConfig, assumed: &[ModelTag]) -> Result<ExperimentResult> {
    cfg.validate()?;
    if cfg.replicates == 0 {
        return Err(Error::Validation(
            "an experiment needs at least one replicate".into(),
        ));
    }
    if assumed.is_empty() {
        return Err(Error::Config("no assumed models given".into()));
    }

    let per_replicate: Vec<Vec<ReplicateRecord>> = (0..cfg.replicates)
        .into_par_iter()
        .map(|rep| run_one_replicate(cfg, assumed, rep))
        .collect::<Result<Vec<_>>>()?;

    let records: Vec<ReplicateRecord> = per_replicate.into_iter().flatten().collect();
    let z = z_crit(cfg.alpha_level);
    let mut summaries = Vec::with_capacity(assumed.len());
    for &model in assumed {
        let ts: Vec<f64> = records
            .iter()
            .filter(|r| r.assumed == model)
            .filter_map(|r| r.t_n)
            .collect();
        let n_failed = records
            .iter()
            .filter(|r| r.assumed == model && r.t_n.is_none())
            .count();
        let (mean, variance) = mean_var(&ts);
        let rejections = ts.iter().filter(|t| t.abs() >= z).count();
        let mut histogram = vec![0u64; HIST_BINS + 2];
        for &t in &ts {
            histogram[bin_index(t)] += 1;
        }
        summaries.push(AssumedSummary {
            assumed: model,
            n_ok: ts.len(),
            n_failed,
            mean,
            variance,
            rejection_rate: if ts.is_empty() {
                f64::NAN
            } else {
                rejections as f64 / ts.len() as f64
            },
            rejections,
            histogram,
        });
    }
    Ok(ExperimentResult {
        alpha: cfg.alpha_level,
        z_crit: z,
        replicates: cfg.replicates,
        records,
        summaries,
    })
}

fn run_one_replicate(
    cfg: &SimConfig,
    assumed: &[ModelTag],
    rep: usize,
) -> Result<Vec<ReplicateRecord>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(1 + rep as u64);

    let (omega, _params) = gen_omega(cfg, &mut rng)?;
    let mut net = sample_network(&omega, &mut rng)?;
    if cfg.giant_component {
        match net.giant_component() {
            Ok((g, _)) => net = g,
            Err(e) => {
                return Ok(assumed
                    .iter()
                    .map(|&m| failure_record(rep, m, 0, &e.to_string()))
                    .collect())
            }
        }
    }
    let fit_seed: u64 = rng.random();
    let fit_cfg = FitConfig {
        vh: cfg.vh,
        regularize: cfg.regularize,
        seed: fit_seed,
        threshold: None,
        eig_tol: DEFAULT_EIG_TOL,
    };
    let n_used = net.n();
    let c_n3 = crate::cycles::count_c3(&net);

    let emb = match top_k_eigs(&net, cfg.k, fit_cfg.eig_tol) {
        Ok(e) => e,
        Err(e) => {
            return Ok(assumed
                .iter()
                .map(|&m| failure_record(rep, m, n_used, &e.to_string()))
                .collect())
        }
    };

    let mut out = Vec::with_capacity(assumed.len());
    for &model in assumed {
        let fitted = match model {
            ModelTag::Sbm => fit_sbm_with_embedding(&net, &emb, &fit_cfg).map(|f| f.omega),
            ModelTag::Dcbm => fit_dcbm_with_embedding(&net, &emb, &fit_cfg).map(|f| f.omega),
            ModelTag::Mmsbm => fit_mmsbm_with_embedding(&net, &emb, &fit_cfg).map(|f| f.omega),
            ModelTag::Dcmm => fit_dcmm_with_embedding(&net, &emb, &fit_cfg).map(|f| f.omega),
        };
        let record = match fitted.and_then(|om| crate::cycles::t_n_with_c3(&net, &om, c_n3)) {
            Ok(t) => ReplicateRecord {
                replicate: rep,
                assumed: model,
                t_n: Some(t),
                c_n3,
                n_used,
                error: None,
            },
            Err(e) => failure_record(rep, model, n_used, &e.to_string()),
        };
        out.push(record);
    }
    Ok(out)
}

fn failure_record(rep: usize, model: ModelTag, n_used: usize, err: &str) -> ReplicateRecord {
    ReplicateRecord {
        replicate: rep,
        assumed: model,
        t_n: None,
        c_n3: 0,
        n_used,
        error: Some(err.to_string()),
    }
}

/// Null-calibration harness: requires the truth to be (nested in) the
/// assumed model, so the statistic should be standard normal.
pub fn run_null_calibration(
    cfg: &SimConfig,
    assumed: ModelTag,
    alpha: f64,
) -> Result<ExperimentResult> {
    if !cfg.model.nests_in(assumed) {
        return Err(Error::Config(format!(
            "truth {} is not nested in assumed model {assumed}; use run_power",
            cfg.model
        )));
    }
    let mut cfg = cfg.clone();
    cfg.alpha_level = alpha;
    run_experiment(&cfg, &[assumed])
}

/// Power harness: the truth is typically outside the assumed class (a
/// nested truth degenerates into a calibration run, which is permitted as a
/// sanity inversion).
pub fn run_power(cfg_true: &SimConfig, assumed: ModelTag, alpha: f64) -> Result<ExperimentResult> {
    let mut cfg = cfg_true.clone();
    cfg.alpha_level = alpha;
    run_experiment(&cfg, &[assumed])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_cfg() -> SimConfig {
        SimConfig {
            schema_version: 1,
            n: 40,
            k: 2,
            model: ModelTag::Dcmm,
            theta: ThetaLaw::Uniform { a: 0.3, b: 0.6 },
            p_offdiag: 0.2,
            pi: PiSpec::default(),
            replicates: 3,
            seed: 11,
            giant_component: true,
            vh: VhSpec::Sp,
            regularize: false,
            alpha_level: 0.05,
        }
    }

    #[test]
    fn sbm_k1_constant_omega() {
        let cfg = SimConfig {
            n: 4,
            k: 1,
            model: ModelTag::Sbm,
            theta: ThetaLaw::ConstantSqrtAlpha { alpha: 0.3 },
            p_offdiag: 0.0,
            replicates: 1,
            ..base_cfg()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (omega, params) = gen_omega(&cfg, &mut rng).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!((omega[(i, j)] - 0.3).abs() < 1e-12);
            }
        }
        assert_eq!(params.pi.ncols(), 1);
    }

    #[test]
    fn dcbm_omega_matches_hand_formula() {
        let cfg = SimConfig {
            n: 6,
            k: 2,
            model: ModelTag::Dcbm,
            theta: ThetaLaw::Uniform { a: 0.1, b: 0.3 },
            p_offdiag: 0.05,
            ..base_cfg()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (omega, params) = gen_omega(&cfg, &mut rng).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let ci = i * 2 / 6;
                let cj = j * 2 / 6;
                let p = if ci == cj { 1.0 } else { 0.05 };
                let want = params.theta[i] * params.theta[j] * p;
                assert!((omega[(i, j)] - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn experiment_one_one_scale_max_entry() {
        // theta <= 0.3 and unit-diagonal P bound entries by 0.09.
        let cfg = SimConfig {
            n: 200,
            k: 2,
            model: ModelTag::Dcmm,
            theta: ThetaLaw::Uniform { a: 0.1, b: 0.3 },
            p_offdiag: 0.05,
            ..base_cfg()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (omega, _) = gen_omega(&cfg, &mut rng).unwrap();
        let max = omega.iter().fold(0.0f64, |a, &x| a.max(x));
        assert!(max <= 0.09 + 1e-12, "max entry {max}");
    }

    #[test]
    fn illegal_omega_is_a_config_error() {
        let cfg = SimConfig {
            theta: ThetaLaw::Uniform { a: 1.1, b: 1.4 },
            ..base_cfg()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        match gen_omega(&cfg, &mut rng) {
            Err(Error::Config(msg)) => assert!(msg.contains("outside [0, 1]")),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn sample_edge_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let zero = DMatrix::zeros(5, 5);
        assert_eq!(sample_network(&zero, &mut rng).unwrap().edge_count(), 0);
        let mut full = DMatrix::from_element(5, 5, 1.0);
        for i in 0..5 {
            full[(i, i)] = 0.0;
        }
        assert_eq!(sample_network(&full, &mut rng).unwrap().edge_count(), 10);
    }

    #[test]
    fn sampled_edge_count_concentrates() {
        let n = 2000;
        let p = 0.3;
        let omega = DMatrix::from_element(n, n, p);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let net = sample_network(&omega, &mut rng).unwrap();
        let pairs = (n * (n - 1) / 2) as f64;
        let mean = p * pairs;
        let sd = (pairs * p * (1.0 - p)).sqrt();
        let got = net.edge_count() as f64;
        assert!(
            (got - mean).abs() <= 4.0 * sd,
            "edge count {got} vs mean {mean} (sd {sd})"
        );
    }

    #[test]
    fn zero_replicates_rejected() {
        let cfg = SimConfig {
            replicates: 0,
            ..base_cfg()
        };
        assert!(matches!(
            run_experiment(&cfg, &[ModelTag::Dcmm]),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn calibration_requires_nesting() {
        let cfg = base_cfg();
        assert!(run_null_calibration(&cfg, ModelTag::Sbm, 0.05).is_err());
        assert!(run_null_calibration(&cfg, ModelTag::Dcmm, 0.05).is_ok());
    }

    #[test]
    fn seed_determinism_bit_for_bit() {
        let cfg = SimConfig {
            n: 60,
            replicates: 4,
            model: ModelTag::Sbm,
            theta: ThetaLaw::ConstantSqrtAlpha { alpha: 0.4 },
            ..base_cfg()
        };
        let a = run_experiment(&cfg, &[ModelTag::Sbm, ModelTag::Dcmm]).unwrap();
        let b = run_experiment(&cfg, &[ModelTag::Sbm, ModelTag::Dcmm]).unwrap();
        assert_eq!(a.records_csv(), b.records_csv());
        assert_eq!(
            serde_json::to_string(&a.summaries).unwrap(),
            serde_json::to_string(&b.summaries).unwrap()
        );
    }

    #[test]
    fn two_point_memberships_layout() {
        let cfg = SimConfig {
            n: 16,
            model: ModelTag::Dcmm,
            pi: PiSpec {
                pure_fraction: 0.25,
                mixed: MixedLaw::TwoPoint { x: 0.25 },
            },
            ..base_cfg()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (_, params) = gen_omega(&cfg, &mut rng).unwrap();
        // 4 pure per community, then alternating (x, 1-x) rows.
        assert_eq!(params.pi[(0, 0)], 1.0);
        assert_eq!(params.pi[(4, 1)], 1.0);
        assert!((params.pi[(8, 0)] - 0.25).abs() < 1e-12);
        assert!((params.pi[(9, 0)] - 0.75).abs() < 1e-12);
    }
}
