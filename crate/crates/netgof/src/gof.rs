//! Goodness-of-fit reports for the block-model family, sequential estimation
//! of K, signal-to-noise diagnostics, and the Laplacian feasibility check
//! for nonnegative DCMM factorization.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::cycles::{count_c3, t_n_with_c3};
use crate::fitters::{
    fit_dcbm, fit_dcbm_with_embedding, fit_dcmm_with_embedding, fit_mmsbm_with_embedding,
    fit_sbm_with_embedding, FitConfig, ModelTag, ProbMatrix,
};
use crate::graph::Network;
use crate::linalg::trace_cube_sym;
use crate::spectral::top_k_eigs;
use crate::stats::z_crit;
use crate::{Error, Result};

/// Configuration for [`gof_all`].
#[derive(Debug, Clone, Copy)]
pub struct GofConfig {
    /// Test level for the reject decision (two sided).
    pub alpha: f64,
    pub fit: FitConfig,
}

impl GofConfig {
    pub fn data_mode(seed: u64) -> Self {
        GofConfig {
            alpha: 0.05,
            fit: FitConfig::data_mode(seed),
        }
    }
}

/// Per-model outcome inside a [`GofReport`].
#[derive(Debug, Clone, Serialize)]
pub struct GofEntry {
    pub model: ModelTag,
    pub t_n: Option<f64>,
    /// `|T_n| >= z_{alpha/2}`; absent when the fit failed.
    pub reject: Option<bool>,
    /// Guard counters that fired during the fit (empty when clean).
    pub flags: String,
    /// True when `theta_max > 0.5`: the dense-regime variance correction is
    /// not implemented and the normal approximation may degrade.
    pub dense_regime: bool,
    pub error: Option<String>,
}

/// GoF metrics of all four block-family models on one network.
#[derive(Debug, Clone, Serialize)]
pub struct GofReport {
    pub n: usize,
    pub k: usize,
    pub c_n3: u64,
    pub alpha: f64,
    pub z_crit: f64,
    pub entries: Vec<GofEntry>,
}

impl GofReport {
    pub fn entry(&self, model: ModelTag) -> Option<&GofEntry> {
        self.entries.iter().find(|e| e.model == model)
    }

    /// CSV with columns `model,t_n,c_n3,decision,flags`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("model,t_n,c_n3,decision,flags\n");
        for e in &self.entries {
            let t = e.t_n.map(|t| format!("{t}")).unwrap_or_default();
            let decision = match (e.reject, &e.error) {
                (_, Some(_)) => "error",
                (Some(true), _) => "reject",
                (Some(false), _) => "accept",
                (None, None) => "",
            };
            let mut flags = e.flags.clone();
            if e.dense_regime {
                if !flags.is_empty() {
                    flags.push(';');
                }
                flags.push_str("dense_regime");
            }
            if let Some(err) = &e.error {
                if !flags.is_empty() {
                    flags.push(';');
                }
                flags.push_str(&err.replace(',', ";"));
            }
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                e.model, t, self.c_n3, decision, flags
            ));
        }
        out
    }
}

/// Fits all four models and reports their GoF metrics. Per-model failures
/// are recorded in the report; the call itself only fails when the statistic
/// is undefined (triangle-free network) or the embedding cannot be computed.
pub fn gof_all(net: &Network, k: usize, cfg: &GofConfig) -> Result<GofReport> {
    let c_n3 = count_c3(net);
    if c_n3 == 0 {
        return Err(Error::UndefinedStatistic);
    }
    let z = z_crit(cfg.alpha);
    let emb = top_k_eigs(net, k, cfg.fit.eig_tol)?;

    let mut entries = Vec::with_capacity(4);
    for model in ModelTag::ALL {
        let fitted: Result<ProbMatrix> = match model {
            ModelTag::Sbm => fit_sbm_with_embedding(net, &emb, &cfg.fit).map(|f| f.omega),
            ModelTag::Dcbm => fit_dcbm_with_embedding(net, &emb, &cfg.fit).map(|f| f.omega),
            ModelTag::Mmsbm => fit_mmsbm_with_embedding(net, &emb, &cfg.fit).map(|f| f.omega),
            ModelTag::Dcmm => fit_dcmm_with_embedding(net, &emb, &cfg.fit).map(|f| f.omega),
        };
        let entry = match fitted {
            Ok(omega) => {
                let t = t_n_with_c3(net, &omega, c_n3)?;
                GofEntry {
                    model,
                    t_n: Some(t),
                    reject: Some(t.abs() >= z),
                    flags: omega.flags.summary(),
                    dense_regime: omega.theta_max() > 0.5,
                    error: None,
                }
            }
            Err(err) => GofEntry {
                model,
                t_n: None,
                reject: None,
                flags: String::new(),
                dense_regime: false,
                error: Some(err.to_string()),
            },
        };
        entries.push(entry);
    }
    Ok(GofReport {
        n: net.n(),
        k,
        c_n3,
        alpha: cfg.alpha,
        z_crit: z,
        entries,
    })
}

/// Outcome of the sequential-K procedure.
#[derive(Debug, Clone, Serialize)]
pub struct KEstimate {
    /// Smallest accepted K, or `k_max + 1` when every candidate is rejected.
    pub k_hat: usize,
    /// False when the sentinel `k_max + 1` was returned.
    pub accepted: bool,
    /// `T_n` of the DCBM fit at each candidate K (None where the fit failed).
    pub t_values: Vec<Option<f64>>,
    /// Candidate K values skipped because the fitter failed.
    pub skipped: Vec<usize>,
}

/// Estimates K by testing K = 1, 2, ... with the DCBM GoF statistic and
/// returning the smallest K whose test accepts at level `alpha`.
pub fn estimate_k(net: &Network, k_max: usize, alpha: f64, fit: &FitConfig) -> Result<KEstimate> {
    if k_max == 0 {
        return Err(Error::Config("k_max must be at least 1".into()));
    }
    if count_c3(net) == 0 {
        return Err(Error::UndefinedStatistic);
    }
    let z = z_crit(alpha);
    let mut t_values = Vec::with_capacity(k_max);
    let mut skipped = Vec::new();
    for k0 in 1..=k_max {
        match fit_dcbm(net, k0, fit).and_then(|f| crate::cycles::t_n(net, &f.omega)) {
            Ok(t) => {
                t_values.push(Some(t));
                if t.abs() < z {
                    return Ok(KEstimate {
                        k_hat: k0,
                        accepted: true,
                        t_values,
                        skipped,
                    });
                }
            }
            Err(_) => {
                t_values.push(None);
                skipped.push(k0);
            }
        }
    }
    Ok(KEstimate {
        k_hat: k_max + 1,
        accepted: false,
        t_values,
        skipped,
    })
}

/// Signal-to-noise diagnostics of an alternative `Omega` against an assumed
/// model class.
#[derive(Debug, Clone)]
pub struct SnrResult {
    /// The assumed model's fitting map applied to `Omega` itself.
    pub omega_tilde: DMatrix<f64>,
    /// `trace([Omega - Omega_tilde]^3)`.
    pub trace_diff_cubed: f64,
    /// `trace(Omega^3)`.
    pub trace_omega_cubed: f64,
    /// `trace_diff_cubed / sqrt(6 * trace_omega_cubed)`.
    pub snr: f64,
}

/// Upper size guard for the dense SNR diagnostics path.
pub const SNR_MAX_N: usize = 5000;

/// Computes `SNR_{n,3}(Omega)` for an assumed model: applies the model's
/// fitting map (regularization off, SP vertex hunting) to `Omega` in place
/// of the data and evaluates the trace ratio with dense arithmetic.
pub fn snr(omega: &DMatrix<f64>, model: ModelTag, k: usize, seed: u64) -> Result<SnrResult> {
    let n = omega.nrows();
    if omega.ncols() != n {
        return Err(Error::Dimension {
            expected: n,
            got: omega.ncols(),
        });
    }
    if n > SNR_MAX_N {
        return Err(Error::Config(format!(
            "SNR diagnostics are capped at n = {SNR_MAX_N} (got {n}); \
             this is an oracle analysis tool, not the data path"
        )));
    }
    let cfg = FitConfig::sim_mode(seed);
    let omega_tilde = apply_fitting_map(omega, model, k, &cfg)?;
    let diff = omega - &omega_tilde;
    let trace_diff_cubed = trace_cube_sym(&diff);
    let trace_omega_cubed = trace_cube_sym(omega);
    if !(trace_omega_cubed > 0.0) {
        return Err(Error::Validation(format!(
            "trace(Omega^3) = {trace_omega_cubed} is not positive; \
             the SNR denominator is undefined"
        )));
    }
    Ok(SnrResult {
        omega_tilde,
        trace_diff_cubed,
        trace_omega_cubed,
        snr: trace_diff_cubed / (6.0 * trace_omega_cubed).sqrt(),
    })
}

/// The population fitting map: runs the assumed model's estimator with
/// `Omega` as the input matrix.
pub fn apply_fitting_map(
    omega: &DMatrix<f64>,
    model: ModelTag,
    k: usize,
    cfg: &FitConfig,
) -> Result<DMatrix<f64>> {
    let fitted = match model {
        ModelTag::Sbm => crate::fitters::fit_sbm(omega, k, cfg)?.omega,
        ModelTag::Dcbm => crate::fitters::fit_dcbm(omega, k, cfg)?.omega,
        ModelTag::Mmsbm => crate::fitters::fit_mmsbm(omega, k, cfg)?.omega,
        ModelTag::Dcmm => crate::fitters::fit_dcmm(omega, k, cfg)?.omega,
    };
    Ok(fitted.to_dense())
}

/// Diagnostics of the Laplacian feasibility check.
#[derive(Debug, Clone)]
pub struct NmfReport {
    pub feasible: bool,
    pub k: usize,
    /// Laplacian eigenvalues `tau_1..tau_K` (magnitude order; `tau_1 = 1`).
    pub tau: Vec<f64>,
    /// Weights `omega_k = u_bar / (rho_k' U rho_k)`.
    pub omega_weights: Vec<f64>,
    /// `||sqrt(n) rho_k||_inf^2`.
    pub sup_norms: Vec<f64>,
    /// `sum_{k>=2} |tau_k| omega_k ||sqrt(n) rho_k||_inf^2`.
    pub lhs: f64,
    /// `1 / (K - 1)` (infinite when K = 1).
    pub rhs: f64,
    /// How many of the top-K eigenvalues of `Omega` are positive.
    pub positive_eigenvalues: usize,
    /// Relative deviation of `rho_1` from a constant vector.
    pub rho1_deviation: f64,
    /// Laplacian eigenvectors as columns (unit Euclidean norm).
    pub rho: DMatrix<f64>,
}

/// Checks the spectral conditions under which a rank-K Bernoulli matrix
/// admits a DCMM factorization: `K <= 2` is always feasible; for `K >= 3`
/// more than `K/2` eigenvalues of `Omega` must be positive and the weighted
/// eigenvector sum must stay below `1/(K-1)`.
pub fn nmf_feasibility(omega: &DMatrix<f64>, k: usize) -> Result<NmfReport> {
    let n = omega.nrows();
    if omega.ncols() != n {
        return Err(Error::Dimension {
            expected: n,
            got: omega.ncols(),
        });
    }
    if k == 0 || k > n {
        return Err(Error::Config(format!("K = {k} out of range for n = {n}")));
    }
    if !is_irreducible(omega) {
        return Err(Error::Validation(
            "Omega is reducible (its support graph is disconnected)".into(),
        ));
    }
    let ones = DVector::from_element(n, 1.0);
    let u = omega * &ones;
    if let Some(i) = u.iter().position(|&x| x <= 0.0) {
        return Err(Error::Validation(format!(
            "row {i} of Omega has nonpositive sum"
        )));
    }
    let u_bar = u.sum() / n as f64;

    // Symmetrize the Laplacian: S = U^{-1/2} Omega U^{-1/2} shares its
    // eigenvalues with L = U^{-1} Omega, and rho_k = U^{-1/2} phi_k.
    let mut s = omega.clone();
    let inv_sqrt: Vec<f64> = u.iter().map(|&x| x.powf(-0.5)).collect();
    for i in 0..n {
        for j in 0..n {
            s[(i, j)] *= inv_sqrt[i] * inv_sqrt[j];
        }
    }
    // Diagnostics path: certify the Laplacian eigenpairs tightly so tau_1
    // and rho_1 can be checked at the 1e-9 level.
    let emb = top_k_eigs(&s, k, 1e-12)?;
    let tau = emb.values.clone();

    let mut rho = DMatrix::zeros(n, k);
    let mut omega_weights = Vec::with_capacity(k);
    let mut sup_norms = Vec::with_capacity(k);
    for c in 0..k {
        let mut col: Vec<f64> = (0..n).map(|i| emb.vectors[(i, c)] * inv_sqrt[i]).collect();
        let nrm = col.iter().map(|x| x * x).sum::<f64>().sqrt();
        col.iter_mut().for_each(|x| *x /= nrm);
        let quad: f64 = col.iter().zip(u.iter()).map(|(r, &ui)| r * r * ui).sum();
        omega_weights.push(u_bar / quad);
        let sup = col.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
        sup_norms.push(n as f64 * sup * sup);
        for i in 0..n {
            rho[(i, c)] = col[i];
        }
    }

    let lhs: f64 = (1..k)
        .map(|c| tau[c].abs() * omega_weights[c] * sup_norms[c])
        .sum();
    let rhs = if k >= 2 {
        1.0 / (k as f64 - 1.0)
    } else {
        f64::INFINITY
    };

    let omega_emb = top_k_eigs(omega, k, 1e-12)?;
    let positive_eigenvalues = omega_emb.values.iter().filter(|&&v| v > 0.0).count();

    let rho1_deviation = {
        let col = rho.column(0);
        let mean = col.sum() / n as f64;
        let max_abs = col.iter().fold(0.0f64, |a, &x| a.max(x.abs())).max(1e-300);
        col.iter().fold(0.0f64, |a, &x| a.max((x - mean).abs())) / max_abs
    };

    let feasible = if k <= 2 {
        true
    } else {
        2 * positive_eigenvalues > k && lhs <= rhs
    };
    Ok(NmfReport {
        feasible,
        k,
        tau,
        omega_weights,
        sup_norms,
        lhs,
        rhs,
        positive_eigenvalues,
        rho1_deviation,
        rho,
    })
}

fn is_irreducible(omega: &DMatrix<f64>) -> bool {
    let n = omega.nrows();
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1usize;
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if !seen[j] && omega[(i, j)].abs() > 1e-12 {
                seen[j] = true;
                count += 1;
                stack.push(j);
            }
        }
    }
    count == n
}
