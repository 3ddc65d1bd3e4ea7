//! The four probability-matrix estimators behind the GoF metrics:
//!
//! * DCMM: MSCORE initialization, net-rounding, and re-estimation on the
//!   simplex spanned by the rows of `diag(A 1)^{-1} A H` (GoF-MSCORE).
//! * MMSBM: the simpler revision using the unnormalized embedding `A H`.
//! * DCBM: SCORE clustering plus moment refitting.
//! * SBM: spectral k-means plus blockwise means.
//!
//! Each fitter returns a rank-K factored `Omega` estimate; the optional
//! regularization steps (clipping negative `P` entries, clamping `Omega` to
//! `[0, 1]`, truncating barycentric weights) match the data-analysis
//! configuration and are off in simulation mode.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::adjacency::SymAdjacency;
use crate::linalg::{inverse_or_ridge, is_singular, try_inverse};
use crate::membership::{
    mmsbm_initial_pi_from_embedding, mscore_from_embedding, net_round, score_cluster,
    score_cluster_from_embedding, spectral_kmeans, spectral_kmeans_from_embedding, HardLabeling,
    MembershipFlags,
};
use crate::spectral::{top_k_eigs, Embedding, DEFAULT_EIG_TOL};
use crate::vertex_hunting::VhSpec;
use crate::{Error, Result};

/// Ridge used when a near-singular block matrix must still be inverted.
const RIDGE: f64 = 1e-10;

/// The block-model family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelTag {
    Sbm,
    Dcbm,
    Mmsbm,
    Dcmm,
}

impl ModelTag {
    pub const ALL: [ModelTag; 4] = [ModelTag::Sbm, ModelTag::Dcbm, ModelTag::Mmsbm, ModelTag::Dcmm];

    pub fn name(&self) -> &'static str {
        match self {
            ModelTag::Sbm => "sbm",
            ModelTag::Dcbm => "dcbm",
            ModelTag::Mmsbm => "mmsbm",
            ModelTag::Dcmm => "dcmm",
        }
    }

    /// True if `self` is a special case of `other`.
    pub fn nests_in(&self, other: ModelTag) -> bool {
        use ModelTag::*;
        match (self, other) {
            (a, b) if *a == b => true,
            (Sbm, _) => true,
            (Dcbm, Dcmm) | (Mmsbm, Dcmm) => true,
            _ => false,
        }
    }
}

impl std::fmt::Display for ModelTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ModelTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sbm" => Ok(ModelTag::Sbm),
            "dcbm" => Ok(ModelTag::Dcbm),
            "mmsbm" => Ok(ModelTag::Mmsbm),
            "dcmm" => Ok(ModelTag::Dcmm),
            other => Err(Error::Config(format!("unknown model {other:?}"))),
        }
    }
}

/// Guard counters recorded during a fit.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct FitFlags {
    pub vh_singular_fallback: bool,
    pub vh_degenerate: bool,
    pub ridge_inverse: bool,
    pub z_diag_negative: usize,
    pub z_diag_zero: usize,
    pub w_rows_truncated: usize,
    pub p_entries_clipped: usize,
    pub omega_entries_clipped: usize,
    pub zero_pi_rows: usize,
    pub negative_b1: usize,
    pub ratio_zero_denominators: usize,
}

impl FitFlags {
    fn absorb_membership(&mut self, m: &MembershipFlags) {
        self.vh_singular_fallback |= m.vertex_fallback;
        self.vh_degenerate |= m.vh_degenerate;
        self.negative_b1 += m.negative_b1;
        self.zero_pi_rows += m.zero_rows;
        self.ratio_zero_denominators += m.ratio_zero_denominators;
    }

    /// Compact `key=value` list of the guards that fired; empty when clean.
    pub fn summary(&self) -> String {
        let mut parts = Vec::new();
        if self.vh_singular_fallback {
            parts.push("vh_singular_fallback".to_string());
        }
        if self.vh_degenerate {
            parts.push("vh_degenerate".to_string());
        }
        if self.ridge_inverse {
            parts.push("ridge_inverse".to_string());
        }
        for (name, v) in [
            ("z_diag_negative", self.z_diag_negative),
            ("z_diag_zero", self.z_diag_zero),
            ("w_rows_truncated", self.w_rows_truncated),
            ("p_entries_clipped", self.p_entries_clipped),
            ("omega_entries_clipped", self.omega_entries_clipped),
            ("zero_pi_rows", self.zero_pi_rows),
            ("negative_b1", self.negative_b1),
            ("ratio_zero_denominators", self.ratio_zero_denominators),
        ] {
            if v > 0 {
                parts.push(format!("{name}={v}"));
            }
        }
        parts.join(";")
    }
}

/// A fitted (or known) Bernoulli probability matrix.
///
/// Estimates are kept in factored form `Omega = Theta Pi P Pi' Theta`, which
/// the cycle statistics exploit; clamping to `[0, 1]` materializes a dense
/// form only when some entry actually violates the bounds.
#[derive(Debug, Clone)]
pub struct ProbMatrix {
    pub model: ModelTag,
    pub flags: FitFlags,
    form: OmegaForm,
}

#[derive(Debug, Clone)]
pub enum OmegaForm {
    Factored {
        theta: DVector<f64>,
        pi: DMatrix<f64>,
        p: DMatrix<f64>,
    },
    Dense(DMatrix<f64>),
}

impl ProbMatrix {
    pub fn from_factored(
        theta: DVector<f64>,
        pi: DMatrix<f64>,
        p: DMatrix<f64>,
        model: ModelTag,
    ) -> Self {
        assert_eq!(theta.len(), pi.nrows());
        assert_eq!(pi.ncols(), p.nrows());
        assert_eq!(p.nrows(), p.ncols());
        ProbMatrix {
            model,
            flags: FitFlags::default(),
            form: OmegaForm::Factored { theta, pi, p },
        }
    }

    pub fn from_dense(m: DMatrix<f64>, model: ModelTag) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Dimension {
                expected: m.nrows(),
                got: m.ncols(),
            });
        }
        Ok(ProbMatrix {
            model,
            flags: FitFlags::default(),
            form: OmegaForm::Dense(m),
        })
    }

    pub fn n(&self) -> usize {
        match &self.form {
            OmegaForm::Factored { theta, .. } => theta.len(),
            OmegaForm::Dense(m) => m.nrows(),
        }
    }

    pub fn form(&self) -> &OmegaForm {
        &self.form
    }

    /// `Omega(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        match &self.form {
            OmegaForm::Factored { theta, pi, p } => {
                let k = p.nrows();
                let mut acc = 0.0;
                for a in 0..k {
                    let pia = pi[(i, a)];
                    if pia == 0.0 {
                        continue;
                    }
                    let mut inner = 0.0;
                    for b in 0..k {
                        inner += p[(a, b)] * pi[(j, b)];
                    }
                    acc += pia * inner;
                }
                theta[i] * theta[j] * acc
            }
            OmegaForm::Dense(m) => m[(i, j)],
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        match &self.form {
            OmegaForm::Factored { theta, pi, p } => {
                let x = scale_rows(pi, theta);
                let mut d = &x * p * x.transpose();
                symmetrize(&mut d);
                d
            }
            OmegaForm::Dense(m) => m.clone(),
        }
    }

    /// Upper bound on the numerical rank (K for factored, n for dense).
    pub fn rank_bound(&self) -> usize {
        match &self.form {
            OmegaForm::Factored { p, .. } => p.nrows(),
            OmegaForm::Dense(m) => m.nrows(),
        }
    }

    /// Largest degree-parameter estimate, used as a dense-regime hint: the
    /// variance-corrected denominator variant of the statistic is not
    /// implemented, so fits with `theta_max > 0.5` are flagged downstream.
    /// Degree-free fits (all theta equal to one) report `sqrt(max |P|)`.
    pub fn theta_max(&self) -> f64 {
        match &self.form {
            OmegaForm::Factored { theta, p, .. } => {
                let all_ones = theta.iter().all(|&t| (t - 1.0).abs() < 1e-12);
                if all_ones {
                    p.iter().fold(0.0f64, |a, &x| a.max(x.abs())).sqrt()
                } else {
                    theta.amax()
                }
            }
            OmegaForm::Dense(m) => m.iter().fold(0.0f64, |a, &x| a.max(x.abs())).sqrt(),
        }
    }

    /// Regularization step (b): clamp entries into `[0, 1]`. Returns the
    /// number of entries clipped (counting each unordered pair once). The
    /// factored form is kept when nothing violates the bounds; otherwise a
    /// dense symmetric clamped form is materialized.
    pub fn clamp_unit_interval(&mut self) -> usize {
        let n = self.n();
        let mut clipped = 0usize;
        match &self.form {
            OmegaForm::Factored { theta, pi, p } => {
                let x = scale_rows(pi, theta);
                let xp = &x * p;
                let entry = |i: usize, j: usize| -> f64 {
                    let mut v = 0.0;
                    for c in 0..xp.ncols() {
                        v += xp[(i, c)] * x[(j, c)];
                    }
                    v
                };
                let mut violated = false;
                'scan: for i in 0..n {
                    for j in i..n {
                        if !(0.0..=1.0).contains(&entry(i, j)) {
                            violated = true;
                            break 'scan;
                        }
                    }
                }
                if violated {
                    let mut d = DMatrix::zeros(n, n);
                    for i in 0..n {
                        for j in i..n {
                            let v = entry(i, j);
                            if !(0.0..=1.0).contains(&v) {
                                clipped += 1;
                            }
                            let cl = v.clamp(0.0, 1.0);
                            d[(i, j)] = cl;
                            d[(j, i)] = cl;
                        }
                    }
                    self.form = OmegaForm::Dense(d);
                }
            }
            OmegaForm::Dense(m) => {
                let mut d = m.clone();
                for i in 0..n {
                    for j in i..n {
                        let v = d[(i, j)];
                        if !(0.0..=1.0).contains(&v) {
                            clipped += 1;
                            let cl = v.clamp(0.0, 1.0);
                            d[(i, j)] = cl;
                            d[(j, i)] = cl;
                        }
                    }
                }
                if clipped > 0 {
                    self.form = OmegaForm::Dense(d);
                }
            }
        }
        self.flags.omega_entries_clipped += clipped;
        clipped
    }
}

/// Removes floating-point asymmetry from a mathematically symmetric matrix,
/// keeping the factored `Omega` exactly symmetric.
fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

fn scale_rows(pi: &DMatrix<f64>, theta: &DVector<f64>) -> DMatrix<f64> {
    let mut x = pi.clone();
    for i in 0..x.nrows() {
        let t = theta[i];
        for c in 0..x.ncols() {
            x[(i, c)] *= t;
        }
    }
    x
}

/// Fitting configuration shared by the four estimators.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FitConfig {
    /// Vertex-hunting algorithm (DCMM and MMSBM fitters only).
    pub vh: VhSpec,
    /// Apply the regularization steps (data-analysis mode).
    pub regularize: bool,
    /// Seed for the k-means restarts.
    pub seed: u64,
    /// SCORE clamp threshold; `None` means `ln(n)`.
    pub threshold: Option<f64>,
    /// Relative eigensolver tolerance.
    pub eig_tol: f64,
}

impl FitConfig {
    /// Real-data defaults: auto-tuned KNN-SP, regularization on.
    pub fn data_mode(seed: u64) -> Self {
        FitConfig {
            vh: VhSpec::KnnSpAuto,
            regularize: true,
            seed,
            threshold: None,
            eig_tol: DEFAULT_EIG_TOL,
        }
    }

    /// Simulation/theory defaults: SP, regularization off.
    pub fn sim_mode(seed: u64) -> Self {
        FitConfig {
            vh: VhSpec::Sp,
            regularize: false,
            seed,
            threshold: None,
            eig_tol: DEFAULT_EIG_TOL,
        }
    }
}

/// Full output of the DCMM fitter.
#[derive(Debug, Clone)]
pub struct DcmmFit {
    pub omega: ProbMatrix,
    pub h: HardLabeling,
    /// Estimated simplex vertices, one per row.
    pub v_h: DMatrix<f64>,
    /// Barycentric coordinates (after truncation when regularized).
    pub w: DMatrix<f64>,
    pub z_h: DMatrix<f64>,
    pub p_eta: DVector<f64>,
    pub theta: DVector<f64>,
    pub pi: DMatrix<f64>,
    pub p: DMatrix<f64>,
}

/// GoF-MSCORE: fits a DCMM by MSCORE initialization, net-rounding, and
/// re-estimation of all parameters from `A H`.
pub fn fit_dcmm<A: SymAdjacency + ?Sized>(a: &A, k: usize, cfg: &FitConfig) -> Result<DcmmFit> {
    check_k(k)?;
    if k == 1 {
        return dcmm_rank_one(a);
    }
    let emb = top_k_eigs(a, k, cfg.eig_tol)?;
    fit_dcmm_with_embedding(a, &emb, cfg)
}

/// [`fit_dcmm`] reusing a precomputed embedding of `a`.
pub fn fit_dcmm_with_embedding<A: SymAdjacency + ?Sized>(
    a: &A,
    emb: &Embedding,
    cfg: &FitConfig,
) -> Result<DcmmFit> {
    if emb.k() == 1 {
        return dcmm_rank_one(a);
    }
    let initial = mscore_from_embedding(a, emb, &cfg.vh, cfg.threshold)?;
    let h = net_round(&initial.pi);
    let mut fit = fit_dcmm_with_h(a, &h, cfg)?;
    fit.omega.flags.absorb_membership(&initial.flags);
    Ok(fit)
}

/// Generic GoF-MSCORE: runs the re-estimation steps with a given hard
/// assignment `h` in place of the MSCORE + net-rounding initialization.
pub fn fit_dcmm_with_h<A: SymAdjacency + ?Sized>(
    a: &A,
    h: &HardLabeling,
    cfg: &FitConfig,
) -> Result<DcmmFit> {
    let n = a.n();
    let k = h.k;
    let mut flags = FitFlags::default();

    let d = a.row_sums();
    if let Some(i) = d.iter().position(|&x| x == 0.0) {
        return Err(Error::IsolatedNode(i));
    }

    let hm = h.to_matrix();
    let ah = a.mul_dense(&hm);
    let b = hm.transpose() * &ah;

    // Node embedding: rows of diag(A1)^{-1} A H.
    let mut r = ah.clone();
    for i in 0..n {
        for c in 0..k {
            r[(i, c)] /= d[i];
        }
    }

    let points: Vec<Vec<f64>> = (0..n).map(|i| r.row(i).iter().copied().collect()).collect();
    let vs = cfg.vh.hunt(a, &points, k)?;
    flags.vh_degenerate |= vs.degenerate;
    let mut v = DMatrix::zeros(k, k);
    for (row, vert) in vs.vertices.iter().enumerate() {
        for (col, x) in vert.iter().enumerate() {
            v[(row, col)] = *x;
        }
    }
    if is_singular(&v) {
        flags.vh_singular_fallback = true;
        v = DMatrix::identity(k, k);
    }
    let vinv = try_inverse(&v).expect("guarded above");

    // Barycentric coordinates w_i' = r_i' V^{-1}.
    let mut w = &r * &vinv;
    if cfg.regularize {
        flags.w_rows_truncated += truncate_rows_to_simplex(&mut w, &mut flags.zero_pi_rows);
    }

    let (binv, ridged) = inverse_or_ridge(&b, RIDGE);
    flags.ridge_inverse |= ridged;
    let mut z = &v * &binv * v.transpose();
    symmetrize(&mut z);

    let mut p_eta = DVector::zeros(k);
    for c in 0..k {
        let zc = z[(c, c)];
        p_eta[c] = if zc > 0.0 {
            zc.powf(-0.5)
        } else if zc < 0.0 {
            flags.z_diag_negative += 1;
            zc.abs().powf(-0.5)
        } else {
            flags.z_diag_zero += 1;
            1.0
        };
    }

    // pi_i proportional to diag(p_eta)^{-1} w_i, rows normalized to sum one.
    let mut pi = DMatrix::zeros(n, k);
    for i in 0..n {
        let mut sum = 0.0;
        for c in 0..k {
            let val = w[(i, c)] / p_eta[c];
            pi[(i, c)] = val;
            sum += val;
        }
        if sum == 0.0 {
            flags.zero_pi_rows += 1;
            for c in 0..k {
                pi[(i, c)] = 1.0 / k as f64;
            }
        } else {
            for c in 0..k {
                pi[(i, c)] /= sum;
            }
        }
    }

    let mut theta = DVector::zeros(n);
    for i in 0..n {
        let mut denom = 0.0;
        for c in 0..k {
            denom += pi[(i, c)] * p_eta[c];
        }
        if denom == 0.0 {
            return Err(Error::Singular(format!(
                "theta denominator vanished at node {i}"
            )));
        }
        theta[i] = d[i] / denom;
    }

    let mut p = DMatrix::zeros(k, k);
    for c in 0..k {
        for e in 0..k {
            p[(c, e)] = z[(c, e)] * p_eta[c] * p_eta[e];
        }
    }
    if cfg.regularize {
        for val in p.iter_mut() {
            if *val < 0.0 {
                *val = 0.0;
                flags.p_entries_clipped += 1;
            }
        }
    }

    let mut omega = ProbMatrix::from_factored(theta.clone(), pi.clone(), p.clone(), ModelTag::Dcmm);
    omega.flags = flags;
    if cfg.regularize {
        omega.clamp_unit_interval();
    }
    Ok(DcmmFit {
        omega,
        h: h.clone(),
        v_h: v,
        w,
        z_h: z,
        p_eta,
        theta,
        pi,
        p,
    })
}

fn dcmm_rank_one<A: SymAdjacency + ?Sized>(a: &A) -> Result<DcmmFit> {
    let n = a.n();
    let d = a.row_sums();
    if let Some(i) = d.iter().position(|&x| x == 0.0) {
        return Err(Error::IsolatedNode(i));
    }
    let total: f64 = d.iter().sum();
    let sqrt_total = total.sqrt();
    let theta = DVector::from_iterator(n, d.iter().map(|&x| x / sqrt_total));
    let pi = DMatrix::from_element(n, 1, 1.0);
    let p = DMatrix::from_element(1, 1, 1.0);
    let omega = ProbMatrix::from_factored(theta.clone(), pi.clone(), p.clone(), ModelTag::Dcmm);
    Ok(DcmmFit {
        omega,
        h: HardLabeling::new(vec![0; n], 1),
        v_h: DMatrix::from_element(1, 1, 1.0),
        w: DMatrix::from_element(n, 1, 1.0),
        z_h: DMatrix::from_element(1, 1, 1.0 / total),
        p_eta: DVector::from_element(1, sqrt_total),
        theta,
        pi,
        p,
    })
}

/// Output of the MMSBM fitter.
#[derive(Debug, Clone)]
pub struct MmsbmFit {
    pub omega: ProbMatrix,
    pub h: HardLabeling,
    pub v_h: DMatrix<f64>,
    pub pi: DMatrix<f64>,
    /// The estimated `alpha_n * P` block matrix.
    pub alpha_p: DMatrix<f64>,
}

/// GoF-MSCORE-rev: the simpler MMSBM estimator on the unnormalized
/// embedding `A H`.
pub fn fit_mmsbm<A: SymAdjacency + ?Sized>(a: &A, k: usize, cfg: &FitConfig) -> Result<MmsbmFit> {
    check_k(k)?;
    if k == 1 {
        return mmsbm_rank_one(a);
    }
    let emb = top_k_eigs(a, k, cfg.eig_tol)?;
    fit_mmsbm_with_embedding(a, &emb, cfg)
}

/// [`fit_mmsbm`] reusing a precomputed embedding of `a`.
pub fn fit_mmsbm_with_embedding<A: SymAdjacency + ?Sized>(
    a: &A,
    emb: &Embedding,
    cfg: &FitConfig,
) -> Result<MmsbmFit> {
    let n = a.n();
    let k = emb.k();
    if k == 1 {
        return mmsbm_rank_one(a);
    }
    let mut flags = FitFlags::default();
    let initial = mmsbm_initial_pi_from_embedding(a, emb, &cfg.vh)?;
    flags.absorb_membership(&initial.flags);
    let h = net_round(&initial.pi);
    let hm = h.to_matrix();

    let r = a.mul_dense(&hm);
    let points: Vec<Vec<f64>> = (0..n).map(|i| r.row(i).iter().copied().collect()).collect();
    let vs = cfg.vh.hunt(a, &points, k)?;
    flags.vh_degenerate |= vs.degenerate;
    let mut v = DMatrix::zeros(k, k);
    for (row, vert) in vs.vertices.iter().enumerate() {
        for (col, x) in vert.iter().enumerate() {
            v[(row, col)] = *x;
        }
    }
    if is_singular(&v) {
        flags.vh_singular_fallback = true;
        v = DMatrix::identity(k, k);
    }
    let vinv = try_inverse(&v).expect("guarded above");
    let mut pi = &r * &vinv;
    if cfg.regularize {
        flags.w_rows_truncated += truncate_rows_to_simplex(&mut pi, &mut flags.zero_pi_rows);
    }

    let gram = pi.transpose() * &pi;
    let ginv = try_inverse(&gram).ok_or_else(|| Error::Singular("Pi'Pi in MMSBM fit".into()))?;
    let api = a.mul_dense(&pi);
    let mid = pi.transpose() * api;
    let mut alpha_p = &ginv * mid * &ginv;
    symmetrize(&mut alpha_p);

    let mut omega = ProbMatrix::from_factored(
        DVector::from_element(n, 1.0),
        pi.clone(),
        alpha_p.clone(),
        ModelTag::Mmsbm,
    );
    omega.flags = flags;
    if cfg.regularize {
        omega.clamp_unit_interval();
    }
    Ok(MmsbmFit {
        omega,
        h,
        v_h: v,
        pi,
        alpha_p,
    })
}

fn mmsbm_rank_one<A: SymAdjacency + ?Sized>(a: &A) -> Result<MmsbmFit> {
    let n = a.n();
    let total: f64 = a.row_sums().iter().sum();
    let density = total / (n as f64 * n as f64);
    let pi = DMatrix::from_element(n, 1, 1.0);
    let alpha_p = DMatrix::from_element(1, 1, density);
    let omega = ProbMatrix::from_factored(
        DVector::from_element(n, 1.0),
        pi.clone(),
        alpha_p.clone(),
        ModelTag::Mmsbm,
    );
    Ok(MmsbmFit {
        omega,
        h: HardLabeling::new(vec![0; n], 1),
        v_h: DMatrix::from_element(1, 1, 1.0),
        pi,
        alpha_p,
    })
}

/// Output of the DCBM fitter.
#[derive(Debug, Clone)]
pub struct DcbmFit {
    pub omega: ProbMatrix,
    pub labels: HardLabeling,
    /// Block edge-count matrix `M = Pi' A Pi`.
    pub m: DMatrix<f64>,
    pub p: DMatrix<f64>,
    pub theta: DVector<f64>,
}

/// GoF-SCORE: SCORE clustering, then moment estimates of `(Theta, P)`.
pub fn fit_dcbm<A: SymAdjacency + ?Sized>(a: &A, k: usize, cfg: &FitConfig) -> Result<DcbmFit> {
    check_k(k)?;
    let labels = score_cluster(a, k, cfg.threshold, cfg.seed)?;
    fit_dcbm_with_labels(a, &labels, cfg)
}

/// [`fit_dcbm`] reusing a precomputed embedding of `a`.
pub fn fit_dcbm_with_embedding<A: SymAdjacency + ?Sized>(
    a: &A,
    emb: &Embedding,
    cfg: &FitConfig,
) -> Result<DcbmFit> {
    let labels = score_cluster_from_embedding(a, emb, cfg.threshold, cfg.seed)?;
    fit_dcbm_with_labels(a, &labels, cfg)
}

/// DCBM refit with a given hard clustering.
pub fn fit_dcbm_with_labels<A: SymAdjacency + ?Sized>(
    a: &A,
    labels: &HardLabeling,
    cfg: &FitConfig,
) -> Result<DcbmFit> {
    let n = a.n();
    let k = labels.k;
    let hm = labels.to_matrix();
    let ah = a.mul_dense(&hm);
    let m = hm.transpose() * &ah;
    for c in 0..k {
        if m[(c, c)] == 0.0 {
            return Err(Error::EmptyCommunity(c));
        }
    }
    let mut p = DMatrix::zeros(k, k);
    for c in 0..k {
        for e in 0..k {
            p[(c, e)] = m[(c, e)] / (m[(c, c)] * m[(e, e)]).sqrt();
        }
    }
    let row_tot = &m * DVector::from_element(k, 1.0);
    let d = a.row_sums();
    let mut theta = DVector::zeros(n);
    for i in 0..n {
        let c = labels.labels[i];
        theta[i] = d[i] * m[(c, c)].sqrt() / row_tot[c];
    }
    let mut omega = ProbMatrix::from_factored(theta.clone(), hm, p.clone(), ModelTag::Dcbm);
    if cfg.regularize {
        omega.clamp_unit_interval();
    }
    Ok(DcbmFit {
        omega,
        labels: labels.clone(),
        m,
        p,
        theta,
    })
}

/// Output of the SBM fitter.
#[derive(Debug, Clone)]
pub struct SbmFit {
    pub omega: ProbMatrix,
    pub labels: HardLabeling,
    pub alpha_p: DMatrix<f64>,
}

/// GoF-SCORE-rev: spectral k-means, then blockwise mean connectivity.
pub fn fit_sbm<A: SymAdjacency + ?Sized>(a: &A, k: usize, cfg: &FitConfig) -> Result<SbmFit> {
    check_k(k)?;
    let labels = spectral_kmeans(a, k, cfg.seed)?;
    fit_sbm_with_labels(a, &labels, cfg)
}

/// [`fit_sbm`] reusing a precomputed embedding of `a`.
pub fn fit_sbm_with_embedding<A: SymAdjacency + ?Sized>(
    a: &A,
    emb: &Embedding,
    cfg: &FitConfig,
) -> Result<SbmFit> {
    let labels = spectral_kmeans_from_embedding(emb, cfg.seed)?;
    fit_sbm_with_labels(a, &labels, cfg)
}

/// SBM refit with a given hard clustering.
pub fn fit_sbm_with_labels<A: SymAdjacency + ?Sized>(
    a: &A,
    labels: &HardLabeling,
    cfg: &FitConfig,
) -> Result<SbmFit> {
    let n = a.n();
    let k = labels.k;
    let sizes = labels.community_sizes();
    if let Some(c) = sizes.iter().position(|&s| s == 0) {
        return Err(Error::EmptyCommunity(c));
    }
    let hm = labels.to_matrix();
    let ah = a.mul_dense(&hm);
    let m = hm.transpose() * &ah;
    let mut alpha_p = DMatrix::zeros(k, k);
    for c in 0..k {
        for e in 0..k {
            alpha_p[(c, e)] = m[(c, e)] / (sizes[c] as f64 * sizes[e] as f64);
        }
    }
    let mut omega = ProbMatrix::from_factored(
        DVector::from_element(n, 1.0),
        hm,
        alpha_p.clone(),
        ModelTag::Sbm,
    );
    if cfg.regularize {
        omega.clamp_unit_interval();
    }
    Ok(SbmFit {
        omega,
        labels: labels.clone(),
        alpha_p,
    })
}

/// Retrieved DCMM parameters from an exact probability matrix.
#[derive(Debug, Clone)]
pub struct OracleRetrieval {
    pub theta: DVector<f64>,
    pub pi: DMatrix<f64>,
    pub p: DMatrix<f64>,
}

/// Oracle parameter retrieval: given the exact `Omega` of an identifiable
/// DCMM (unit-diagonal `P`, at least one pure node per community) and a hard
/// assignment `H` with nonsingular `Pi' Theta H`, recovers `(Theta, Pi, P)`
/// exactly. The simplex corners are found by successive projection, which on
/// exact data returns the convex-hull vertices; if any embedded row falls
/// outside the recovered simplex the input is rejected as non-identifiable.
pub fn oracle_retrieve(
    omega: &DMatrix<f64>,
    h: &HardLabeling,
    k: usize,
) -> Result<OracleRetrieval> {
    let n = omega.nrows();
    if omega.ncols() != n {
        return Err(Error::Dimension {
            expected: n,
            got: omega.ncols(),
        });
    }
    if h.k != k {
        return Err(Error::Config(format!(
            "labeling has {} communities, expected {k}",
            h.k
        )));
    }
    let hm = h.to_matrix();
    let u = omega * DVector::from_element(n, 1.0);
    if let Some(i) = u.iter().position(|&x| x <= 0.0) {
        return Err(Error::NonIdentifiable(format!(
            "row {i} of Omega has nonpositive sum"
        )));
    }
    let oh = omega * &hm;
    let b = hm.transpose() * &oh;
    let mut r = oh;
    for i in 0..n {
        for c in 0..k {
            r[(i, c)] /= u[i];
        }
    }
    let points: Vec<Vec<f64>> = (0..n).map(|i| r.row(i).iter().copied().collect()).collect();
    let vs = crate::vertex_hunting::sp(&points, k)?;
    if vs.degenerate {
        return Err(Error::NonIdentifiable(
            "embedded rows span fewer than K vertices".into(),
        ));
    }
    let mut v = DMatrix::zeros(k, k);
    for (row, vert) in vs.vertices.iter().enumerate() {
        for (col, x) in vert.iter().enumerate() {
            v[(row, col)] = *x;
        }
    }
    let vinv = try_inverse(&v).ok_or_else(|| {
        Error::NonIdentifiable("convex hull of embedded rows has fewer than K vertices".into())
    })?;
    let w = &r * &vinv;
    let min_w = w.iter().cloned().fold(f64::INFINITY, f64::min);
    if min_w < -1e-9 {
        return Err(Error::NonIdentifiable(format!(
            "convex hull of embedded rows has more than K vertices \
             (barycentric coordinate {min_w:e})"
        )));
    }
    let binv = try_inverse(&b).ok_or_else(|| Error::Singular("H'Omega H".into()))?;
    let z = &v * binv * v.transpose();
    let mut p_eta = DVector::zeros(k);
    for c in 0..k {
        let zc = z[(c, c)];
        if zc <= 0.0 {
            return Err(Error::NonIdentifiable(format!(
                "Z_H diagonal entry {c} is nonpositive"
            )));
        }
        p_eta[c] = zc.powf(-0.5);
    }
    let mut pi = DMatrix::zeros(n, k);
    let mut theta = DVector::zeros(n);
    for i in 0..n {
        let mut sum = 0.0;
        for c in 0..k {
            let val = w[(i, c)] / p_eta[c];
            pi[(i, c)] = val;
            sum += val;
        }
        if sum <= 0.0 {
            return Err(Error::NonIdentifiable(format!(
                "membership row {i} does not normalize"
            )));
        }
        let mut denom = 0.0;
        for c in 0..k {
            pi[(i, c)] /= sum;
            denom += pi[(i, c)] * p_eta[c];
        }
        theta[i] = u[i] / denom;
    }
    let mut p = DMatrix::zeros(k, k);
    for c in 0..k {
        for e in 0..k {
            p[(c, e)] = z[(c, e)] * p_eta[c] * p_eta[e];
        }
    }
    Ok(OracleRetrieval { theta, pi, p })
}

/// JSON-serializable summary of a fit: parameters with communities sorted by
/// estimated size (descending), which fixes the column-permutation ambiguity
/// for reporting without affecting the statistic.
#[derive(Debug, Clone, Serialize)]
pub struct FitReport {
    pub model: ModelTag,
    pub n: usize,
    pub k: usize,
    pub t_n: Option<f64>,
    pub c_n3: u64,
    pub community_sizes: Vec<usize>,
    pub theta: Vec<f64>,
    pub pi: Vec<Vec<f64>>,
    pub p: Vec<Vec<f64>>,
    pub flags: String,
}

impl FitReport {
    pub fn new(
        model: ModelTag,
        labels: &HardLabeling,
        theta: &DVector<f64>,
        pi: &DMatrix<f64>,
        p: &DMatrix<f64>,
        flags: &FitFlags,
        t_n: Option<f64>,
        c_n3: u64,
    ) -> Self {
        let k = labels.k;
        let sizes = labels.community_sizes();
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_key(|&c| (usize::MAX - sizes[c], c));
        let community_sizes = order.iter().map(|&c| sizes[c]).collect();
        let n = pi.nrows();
        let pi_rows = (0..n)
            .map(|i| order.iter().map(|&c| pi[(i, c)]).collect())
            .collect();
        let p_rows = order
            .iter()
            .map(|&r| order.iter().map(|&c| p[(r, c)]).collect())
            .collect();
        FitReport {
            model,
            n,
            k,
            t_n,
            c_n3,
            community_sizes,
            theta: theta.iter().copied().collect(),
            pi: pi_rows,
            p: p_rows,
            flags: flags.summary(),
        }
    }
}

/// Sets negative entries of each row to zero and rescales the row to unit
/// sum; rows that vanish entirely become uniform. Returns the number of rows
/// changed and bumps `zero_rows` for the uniform resets.
fn truncate_rows_to_simplex(m: &mut DMatrix<f64>, zero_rows: &mut usize) -> usize {
    let (n, k) = (m.nrows(), m.ncols());
    let mut touched = 0usize;
    for i in 0..n {
        let mut any_neg = false;
        let mut sum = 0.0;
        for c in 0..k {
            if m[(i, c)] < 0.0 {
                any_neg = true;
                m[(i, c)] = 0.0;
            }
            sum += m[(i, c)];
        }
        if any_neg {
            touched += 1;
        }
        if sum > 0.0 {
            if any_neg || (sum - 1.0).abs() > 1e-12 {
                for c in 0..k {
                    m[(i, c)] /= sum;
                }
            }
        } else {
            *zero_rows += 1;
            for c in 0..k {
                m[(i, c)] = 1.0 / k as f64;
            }
        }
    }
    touched
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::Config("K must be at least 1".into()));
    }
    Ok(())
}
