//! Vertex hunting: estimating the K corners of the simplex enclosing a point
//! cloud, by successive projection (SP) and its KNN-denoised variant.

use serde::{Deserialize, Serialize};

use crate::adjacency::SymAdjacency;
use crate::graph::knnsp_tuning_from_stats;
use crate::linalg::dist2;
use crate::{Error, Result};

/// Which vertex-hunting algorithm a fitter should use.
///
/// `Sp` is tuning-free and is the choice for simulation/theory work;
/// `KnnSpAuto` applies the data-driven `(N, alpha)` rule and is the default
/// for real-data analysis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VhSpec {
    Sp,
    KnnSp { n_neighbors: usize, alpha: f64 },
    KnnSpAuto,
}

impl VhSpec {
    /// Runs the selected algorithm, resolving auto-tuning from the input's
    /// degree statistics (unavailable for dense oracle inputs).
    pub fn hunt<A: SymAdjacency + ?Sized>(
        &self,
        a: &A,
        points: &[Vec<f64>],
        k: usize,
    ) -> Result<VertexSet> {
        match *self {
            VhSpec::Sp => sp(points, k),
            VhSpec::KnnSp { n_neighbors, alpha } => knn_sp(points, k, n_neighbors, alpha),
            VhSpec::KnnSpAuto => {
                let stats = a.degree_stats().ok_or_else(|| {
                    Error::Config(
                        "auto-tuned KNN-SP needs an observed network; pass explicit (N, alpha) \
                         or use SP for dense inputs"
                            .into(),
                    )
                })?;
                let tuning = knnsp_tuning_from_stats(a.n(), k, stats)?;
                knn_sp(points, k, tuning.n_neighbors, tuning.alpha)
            }
        }
    }
}

/// Estimated simplex vertices.
#[derive(Debug, Clone)]
pub struct VertexSet {
    /// The K vertices, each of dimension `d`.
    pub vertices: Vec<Vec<f64>>,
    /// Indices of the chosen input points (SP only; KNN-SP returns averaged
    /// points that are not rows of the input).
    pub source_indices: Option<Vec<usize>>,
    /// Set when the cloud was too degenerate to pick distinct extreme points.
    pub degenerate: bool,
    /// Points pruned by the KNN denoise step (KNN-SP only).
    pub pruned: usize,
}

/// Successive projection.
///
/// Greedy selection of the point with the largest residual norm after
/// projecting out previously chosen vertices. When the input dimension is
/// exactly `K - 1`, the last two vertices are the two end points of the
/// residual line (after `K - 2` projections the residuals live in a
/// one-dimensional subspace).
pub fn sp(points: &[Vec<f64>], k: usize) -> Result<VertexSet> {
    if k == 0 {
        return Err(Error::Config("K must be at least 1".into()));
    }
    if points.len() < k {
        return Err(Error::Validation(format!(
            "vertex hunting needs at least K = {k} points, got {}",
            points.len()
        )));
    }
    let d = points[0].len();
    if points.iter().any(|p| p.len() != d) {
        return Err(Error::Validation(
            "vertex hunting points have inconsistent dimensions".into(),
        ));
    }
    if d + 1 < k {
        return Err(Error::Validation(format!(
            "dimension {d} too small for K = {k} vertices"
        )));
    }

    let scale = points
        .iter()
        .map(|p| norm(p))
        .fold(0.0f64, f64::max);
    if scale < 1e-14 {
        // All-zero cloud: no geometry to exploit.
        return Ok(VertexSet {
            vertices: points[..k].to_vec(),
            source_indices: Some((0..k).collect()),
            degenerate: true,
            pruned: 0,
        });
    }

    let mut basis: Vec<Vec<f64>> = Vec::new(); // orthonormal span of chosen vertices
    let mut chosen: Vec<usize> = Vec::new();
    let mut degenerate = false;
    let mut residuals: Vec<Vec<f64>> = points.to_vec();

    let project = |r: &mut Vec<f64>, basis: &[Vec<f64>]| {
        for b in basis {
            let c = dot_slice(r, b);
            for (x, y) in r.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
    };

    let mut step = 1usize;
    while step <= k {
        for r in residuals.iter_mut() {
            project(r, &basis);
        }
        if step == d && d + 1 == k {
            // Residuals lie on a line through the origin; take its two ends.
            let dir_idx = argmax_excluding(&residuals, &chosen, |r| norm(r));
            let dir = match dir_idx {
                Some(idx) if norm(&residuals[idx]) > 1e-12 * scale => {
                    let nrm = norm(&residuals[idx]);
                    residuals[idx].iter().map(|x| x / nrm).collect::<Vec<_>>()
                }
                _ => {
                    degenerate = true;
                    // No spread left: fall back to the lowest unchosen indices.
                    for i in 0..points.len() {
                        if chosen.len() == k {
                            break;
                        }
                        if !chosen.contains(&i) {
                            chosen.push(i);
                        }
                    }
                    break;
                }
            };
            let scores: Vec<f64> = residuals.iter().map(|r| dot_slice(r, &dir)).collect();
            let hi = argmax_excluding_scores(&scores, &chosen, 1.0).unwrap();
            chosen.push(hi);
            let lo = argmax_excluding_scores(&scores, &chosen, -1.0).unwrap();
            chosen.push(lo);
            break;
        }

        let idx = argmax_excluding(&residuals, &chosen, |r| norm(r)).ok_or_else(|| {
            Error::Validation("vertex hunting ran out of candidate points".into())
        })?;
        let rn = norm(&residuals[idx]);
        if rn <= 1e-12 * scale {
            degenerate = true;
        } else {
            let unit: Vec<f64> = residuals[idx].iter().map(|x| x / rn).collect();
            basis.push(unit);
        }
        chosen.push(idx);
        step += 1;
    }

    let vertices = chosen.iter().map(|&i| points[i].clone()).collect();
    Ok(VertexSet {
        vertices,
        source_indices: Some(chosen),
        degenerate,
        pruned: 0,
    })
}

/// KNN-denoised successive projection.
///
/// Each point is replaced by the mean of its neighborhood `S_i`: the at most
/// `n_neighbors` nearest points (itself included) within a ball of radius
/// `s_max / alpha`, where `s_max` is the maximum pairwise distance. Points
/// with `|S_i| <= 2` are pruned, and SP runs on the survivors.
pub fn knn_sp(points: &[Vec<f64>], k: usize, n_neighbors: usize, alpha: f64) -> Result<VertexSet> {
    if n_neighbors == 0 {
        return Err(Error::Config("N must be at least 1".into()));
    }
    if !(alpha > 0.0) {
        return Err(Error::Config("alpha must be positive".into()));
    }
    if points.len() < k {
        return Err(Error::Validation(format!(
            "vertex hunting needs at least K = {k} points, got {}",
            points.len()
        )));
    }
    let n = points.len();
    let s_max = max_pairwise_distance(points);
    let radius2 = {
        let r = s_max / alpha;
        r * r
    };

    let mut survivors: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut pruned = 0usize;
    let mut near: Vec<(f64, usize)> = Vec::new();
    for i in 0..n {
        near.clear();
        for j in 0..n {
            let d2 = dist2(&points[i], &points[j]);
            if d2 <= radius2 {
                near.push((d2, j));
            }
        }
        near.sort_by(|a, b| a.partial_cmp(b).unwrap());
        near.truncate(n_neighbors);
        if near.len() <= 2 {
            pruned += 1;
            continue;
        }
        let d = points[i].len();
        let mut mean = vec![0.0; d];
        for &(_, j) in &near {
            for (m, x) in mean.iter_mut().zip(&points[j]) {
                *m += x;
            }
        }
        let c = near.len() as f64;
        mean.iter_mut().for_each(|m| *m /= c);
        survivors.push(mean);
    }

    if survivors.is_empty() {
        return Err(Error::AllPointsPruned);
    }
    if survivors.len() < k {
        return Err(Error::Validation(format!(
            "only {} points survived KNN pruning, need K = {k}; decrease alpha",
            survivors.len()
        )));
    }
    let mut out = sp(&survivors, k)?;
    out.source_indices = None;
    out.pruned = pruned;
    Ok(out)
}

/// Maximum pairwise Euclidean distance. Exact up to 20000 points; above that
/// an anchor-sampled approximation is used (max over distances from 256
/// deterministic anchors to all points).
pub fn max_pairwise_distance(points: &[Vec<f64>]) -> f64 {
    let n = points.len();
    let mut best = 0.0f64;
    if n <= 20_000 {
        for i in 0..n {
            for j in (i + 1)..n {
                best = best.max(dist2(&points[i], &points[j]));
            }
        }
    } else {
        let stride = (n / 256).max(1);
        for i in (0..n).step_by(stride) {
            for j in 0..n {
                best = best.max(dist2(&points[i], &points[j]));
            }
        }
    }
    best.sqrt()
}

fn dot_slice(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot_slice(a, a).sqrt()
}

/// Index with the largest `score(points[i])`, excluding `exclude`; ties go to
/// the lowest index (strict `>` while scanning in order).
fn argmax_excluding<F: Fn(&Vec<f64>) -> f64>(
    points: &[Vec<f64>],
    exclude: &[usize],
    score: F,
) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, p) in points.iter().enumerate() {
        if exclude.contains(&i) {
            continue;
        }
        let s = score(p);
        match best {
            Some((_, bs)) if s <= bs => {}
            _ => best = Some((i, s)),
        }
    }
    best.map(|(i, _)| i)
}

fn argmax_excluding_scores(scores: &[f64], exclude: &[usize], sign: f64) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &s) in scores.iter().enumerate() {
        if exclude.contains(&i) {
            continue;
        }
        let s = sign * s;
        match best {
            Some((_, bs)) if s <= bs => {}
            _ => best = Some((i, s)),
        }
    }
    best.map(|(i, _)| i)
}
