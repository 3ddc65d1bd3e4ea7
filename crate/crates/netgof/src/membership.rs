//! Membership estimation: MSCORE for mixed memberships, SCORE and spectral
//! k-means for hard clusterings, net-rounding, and the MMSBM initializer.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::adjacency::SymAdjacency;
use crate::kmeans::kmeans;
use crate::linalg::{is_singular, try_inverse};
use crate::spectral::{default_threshold, score_ratio, top_k_eigs, Embedding, DEFAULT_EIG_TOL};
use crate::vertex_hunting::VhSpec;
use crate::{Error, Result};

/// Estimated mixed-membership matrix: row `i` is the weight vector of node
/// `i` (nonnegative, summing to one).
#[derive(Debug, Clone)]
pub struct MembershipMatrix {
    pub pi: DMatrix<f64>,
    pub flags: MembershipFlags,
}

/// Guard counters raised while estimating memberships.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MembershipFlags {
    /// Vertex matrix was singular and replaced by the canonical simplex.
    pub vertex_fallback: bool,
    /// Vertex hunting reported a degenerate cloud.
    pub vh_degenerate: bool,
    /// Entries of b1 whose argument was negative (absolute value taken).
    pub negative_b1: usize,
    /// Entries of b1 whose argument was zero (set to 1).
    pub zero_b1: usize,
    /// Rows that truncated to zero and were reset to uniform.
    pub zero_rows: usize,
    /// SCORE ratio entries with a zero denominator.
    pub ratio_zero_denominators: usize,
}

/// A hard community assignment with labels in `0..k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardLabeling {
    pub labels: Vec<usize>,
    pub k: usize,
    /// Community indices that received no node (small-cluster warning).
    pub missing_communities: Vec<usize>,
}

impl HardLabeling {
    pub fn new(labels: Vec<usize>, k: usize) -> Self {
        let mut seen = vec![false; k];
        for &l in &labels {
            seen[l] = true;
        }
        let missing_communities = (0..k).filter(|&c| !seen[c]).collect();
        HardLabeling {
            labels,
            k,
            missing_communities,
        }
    }

    /// One-hot membership matrix (n x k).
    pub fn to_matrix(&self) -> DMatrix<f64> {
        let n = self.labels.len();
        let mut h = DMatrix::zeros(n, self.k);
        for (i, &l) in self.labels.iter().enumerate() {
            h[(i, l)] = 1.0;
        }
        h
    }

    pub fn community_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.k];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }
}

/// Net-rounding: snap each membership row to the nearest standard basis
/// vector, i.e. the argmax entry, ties to the smallest index.
pub fn net_round(pi: &DMatrix<f64>) -> HardLabeling {
    let k = pi.ncols();
    let labels = (0..pi.nrows())
        .map(|i| {
            let mut best = 0usize;
            let mut best_v = pi[(i, 0)];
            for c in 1..k {
                if pi[(i, c)] > best_v {
                    best_v = pi[(i, c)];
                    best = c;
                }
            }
            best
        })
        .collect();
    HardLabeling::new(labels, k)
}

/// MSCORE: mixed-membership estimation from the SCORE embedding.
///
/// Steps: top-K eigenpairs; ratio matrix `R`; vertex hunting on the rows of
/// `R`; `b1(k) = [lambda_1 + v_k' diag(lambda_2..lambda_K) v_k]^{-1/2}`;
/// barycentric coordinates `w_i`; `pi_i*(k) = max(w_i(k)/b1(k), 0)` and row
/// normalization.
pub fn mscore<A: SymAdjacency + ?Sized>(
    a: &A,
    k: usize,
    vh: &VhSpec,
    threshold: Option<f64>,
) -> Result<MembershipMatrix> {
    if k == 1 {
        return Ok(trivial_membership(a.n()));
    }
    let emb = top_k_eigs(a, k, DEFAULT_EIG_TOL)?;
    mscore_from_embedding(a, &emb, vh, threshold)
}

/// MSCORE reusing a precomputed embedding of the same matrix.
pub fn mscore_from_embedding<A: SymAdjacency + ?Sized>(
    a: &A,
    emb: &Embedding,
    vh: &VhSpec,
    threshold: Option<f64>,
) -> Result<MembershipMatrix> {
    let n = a.n();
    let k = emb.k();
    if k == 1 {
        return Ok(trivial_membership(n));
    }
    let mut flags = MembershipFlags::default();
    let t = threshold.unwrap_or_else(|| default_threshold(n));
    let ratio = score_ratio(emb, t)?;
    flags.ratio_zero_denominators = ratio.zero_denominators;

    let points = ratio.points();
    let vs = vh.hunt(a, &points, k)?;
    flags.vh_degenerate = vs.degenerate;

    // Barycentric system: columns are the vertices, last row enforces the
    // affine constraint sum_k w_i(k) = 1.
    let mut vertices = vs.vertices;
    let mut bary = barycentric_matrix(&vertices, k);
    if is_singular(&bary) {
        flags.vertex_fallback = true;
        vertices = corner_simplex(k);
        bary = barycentric_matrix(&vertices, k);
    }
    let lu = bary.lu();

    // b1 from the estimated vertices and eigenvalues.
    let mut b1 = vec![0.0f64; k];
    for (c, v) in vertices.iter().enumerate() {
        let mut arg = emb.values[0];
        for (j, x) in v.iter().enumerate() {
            arg += emb.values[j + 1] * x * x;
        }
        b1[c] = if arg > 0.0 {
            arg.powf(-0.5)
        } else if arg < 0.0 {
            flags.negative_b1 += 1;
            arg.abs().powf(-0.5)
        } else {
            flags.zero_b1 += 1;
            1.0
        };
    }

    let mut pi = DMatrix::zeros(n, k);
    let mut rhs = nalgebra::DVector::zeros(k);
    for i in 0..n {
        for j in 0..(k - 1) {
            rhs[j] = ratio.rows[(i, j)];
        }
        rhs[k - 1] = 1.0;
        let w = lu
            .solve(&rhs)
            .ok_or_else(|| Error::Singular("MSCORE barycentric system".into()))?;
        let mut sum = 0.0;
        for c in 0..k {
            let v = (w[c] / b1[c]).max(0.0);
            pi[(i, c)] = v;
            sum += v;
        }
        if sum > 0.0 {
            for c in 0..k {
                pi[(i, c)] /= sum;
            }
        } else {
            flags.zero_rows += 1;
            for c in 0..k {
                pi[(i, c)] = 1.0 / k as f64;
            }
        }
    }
    Ok(MembershipMatrix { pi, flags })
}

/// Initial membership estimate for the MMSBM fitter: vertex hunting on the
/// rows of the eigenvector matrix, `pi~_i = V*^{-1} Xi' e_i`, negatives set
/// to zero, rows renormalized.
pub fn mmsbm_initial_pi<A: SymAdjacency + ?Sized>(
    a: &A,
    k: usize,
    vh: &VhSpec,
) -> Result<MembershipMatrix> {
    if k == 1 {
        return Ok(trivial_membership(a.n()));
    }
    let emb = top_k_eigs(a, k, DEFAULT_EIG_TOL)?;
    mmsbm_initial_pi_from_embedding(a, &emb, vh)
}

/// [`mmsbm_initial_pi`] reusing a precomputed embedding.
pub fn mmsbm_initial_pi_from_embedding<A: SymAdjacency + ?Sized>(
    a: &A,
    emb: &Embedding,
    vh: &VhSpec,
) -> Result<MembershipMatrix> {
    let n = a.n();
    let k = emb.k();
    if k == 1 {
        return Ok(trivial_membership(n));
    }
    let mut flags = MembershipFlags::default();
    let points: Vec<Vec<f64>> = (0..n)
        .map(|i| emb.vectors.row(i).iter().copied().collect())
        .collect();
    let vs = vh.hunt(a, &points, k)?;
    flags.vh_degenerate = vs.degenerate;

    // V*: columns are the estimated vertices.
    let mut vstar = DMatrix::zeros(k, k);
    for (c, v) in vs.vertices.iter().enumerate() {
        for (r, x) in v.iter().enumerate() {
            vstar[(r, c)] = *x;
        }
    }
    let vinv = match try_inverse(&vstar) {
        Some(inv) => inv,
        None => {
            flags.vertex_fallback = true;
            DMatrix::identity(k, k)
        }
    };

    let mut pi = DMatrix::zeros(n, k);
    for i in 0..n {
        let mut sum = 0.0;
        for c in 0..k {
            let mut v = 0.0;
            for r in 0..k {
                v += vinv[(c, r)] * emb.vectors[(i, r)];
            }
            let v = v.max(0.0);
            pi[(i, c)] = v;
            sum += v;
        }
        if sum > 0.0 {
            for c in 0..k {
                pi[(i, c)] /= sum;
            }
        } else {
            flags.zero_rows += 1;
            for c in 0..k {
                pi[(i, c)] = 1.0 / k as f64;
            }
        }
    }
    Ok(MembershipMatrix { pi, flags })
}

/// SCORE clustering for DCBM: k-means on the clamped eigenvector ratios.
pub fn score_cluster<A: SymAdjacency + ?Sized>(
    a: &A,
    k: usize,
    threshold: Option<f64>,
    seed: u64,
) -> Result<HardLabeling> {
    if k == 1 {
        return Ok(HardLabeling::new(vec![0; a.n()], 1));
    }
    let emb = top_k_eigs(a, k, DEFAULT_EIG_TOL)?;
    score_cluster_from_embedding(a, &emb, threshold, seed)
}

/// [`score_cluster`] reusing a precomputed embedding.
pub fn score_cluster_from_embedding<A: SymAdjacency + ?Sized>(
    a: &A,
    emb: &Embedding,
    threshold: Option<f64>,
    seed: u64,
) -> Result<HardLabeling> {
    let n = a.n();
    let k = emb.k();
    if k == 1 {
        return Ok(HardLabeling::new(vec![0; n], 1));
    }
    let t = threshold.unwrap_or_else(|| default_threshold(n));
    let ratio = score_ratio(emb, t)?;
    let points = ratio.points();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fit = kmeans(&points, k, &mut rng)?;
    Ok(HardLabeling::new(canonicalize(&fit.labels, k), k))
}

/// Spectral clustering for SBM: k-means on raw eigenvector rows.
pub fn spectral_kmeans<A: SymAdjacency + ?Sized>(
    a: &A,
    k: usize,
    seed: u64,
) -> Result<HardLabeling> {
    if k == 1 {
        return Ok(HardLabeling::new(vec![0; a.n()], 1));
    }
    let emb = top_k_eigs(a, k, DEFAULT_EIG_TOL)?;
    spectral_kmeans_from_embedding(&emb, seed)
}

/// [`spectral_kmeans`] reusing a precomputed embedding.
pub fn spectral_kmeans_from_embedding(emb: &Embedding, seed: u64) -> Result<HardLabeling> {
    let n = emb.vectors.nrows();
    let k = emb.k();
    if k == 1 {
        return Ok(HardLabeling::new(vec![0; n], 1));
    }
    let points: Vec<Vec<f64>> = (0..n)
        .map(|i| emb.vectors.row(i).iter().copied().collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fit = kmeans(&points, k, &mut rng)?;
    Ok(HardLabeling::new(canonicalize(&fit.labels, k), k))
}

fn trivial_membership(n: usize) -> MembershipMatrix {
    MembershipMatrix {
        pi: DMatrix::from_element(n, 1, 1.0),
        flags: MembershipFlags::default(),
    }
}

/// Relabels clusters by first occurrence so the labeling is canonical.
fn canonicalize(labels: &[usize], k: usize) -> Vec<usize> {
    let mut map = vec![usize::MAX; k];
    let mut next = 0usize;
    labels
        .iter()
        .map(|&l| {
            if map[l] == usize::MAX {
                map[l] = next;
                next += 1;
            }
            map[l]
        })
        .collect()
}

fn barycentric_matrix(vertices: &[Vec<f64>], k: usize) -> DMatrix<f64> {
    let mut b = DMatrix::zeros(k, k);
    for (c, v) in vertices.iter().enumerate() {
        for (r, x) in v.iter().enumerate() {
            b[(r, c)] = *x;
        }
        b[(k - 1, c)] = 1.0;
    }
    b
}

/// Canonical (K-1)-dimensional simplex used when the hunted vertex matrix is
/// singular: vertices `e_1, ..., e_{K-1}, 0`.
fn corner_simplex(k: usize) -> Vec<Vec<f64>> {
    (0..k)
        .map(|c| {
            let mut v = vec![0.0; k - 1];
            if c < k - 1 {
                v[c] = 1.0;
            }
            v
        })
        .collect()
}
