//! Seeded k-means (k-means++ initialization, Lloyd iterations) used by the
//! spectral clustering steps. Restarts and iteration counts are fixed so
//! results are reproducible for a given RNG stream.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::dist2;
use crate::{Error, Result};

pub const RESTARTS: usize = 10;
pub const MAX_ITERS: usize = 100;

#[derive(Debug, Clone)]
pub struct KmeansFit {
    pub labels: Vec<usize>,
    pub centers: Vec<Vec<f64>>,
    /// Total within-cluster sum of squares.
    pub inertia: f64,
}

/// Runs k-means with [`RESTARTS`] random restarts and keeps the fit with the
/// best within-cluster sum of squares. Errors if some cluster stays empty in
/// every restart (fewer than `k` distinct points).
pub fn kmeans(points: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Result<KmeansFit> {
    let n = points.len();
    if k == 0 {
        return Err(Error::Config("k-means needs k >= 1".into()));
    }
    if n < k {
        return Err(Error::Validation(format!(
            "k-means needs at least k = {k} points, got {n}"
        )));
    }
    if k == 1 {
        let center = mean_point(points, &(0..n).collect::<Vec<_>>());
        let inertia = points.iter().map(|p| dist2(p, &center)).sum();
        return Ok(KmeansFit {
            labels: vec![0; n],
            centers: vec![center],
            inertia,
        });
    }

    let mut best: Option<KmeansFit> = None;
    for _ in 0..RESTARTS {
        if let Some(fit) = lloyd_once(points, k, rng) {
            if best.as_ref().map_or(true, |b| fit.inertia < b.inertia) {
                best = Some(fit);
            }
        }
    }
    best.ok_or_else(|| {
        Error::Validation(format!(
            "k-means failed to fill {k} clusters after {RESTARTS} restarts"
        ))
    })
}

fn lloyd_once(points: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Option<KmeansFit> {
    let n = points.len();
    let mut centers = init_plus_plus(points, k, rng);
    let mut labels = vec![0usize; n];

    for _ in 0..MAX_ITERS {
        let mut changed = false;
        for (i, p) in points.iter().enumerate() {
            let mut best_c = 0;
            let mut best_d = f64::INFINITY;
            for (c, center) in centers.iter().enumerate() {
                let d = dist2(p, center);
                if d < best_d {
                    best_d = d;
                    best_c = c;
                }
            }
            if labels[i] != best_c {
                labels[i] = best_c;
                changed = true;
            }
        }
        // Recompute centers; refill any empty cluster with the point farthest
        // from its current center.
        let mut counts = vec![0usize; k];
        for &l in &labels {
            counts[l] += 1;
        }
        for c in 0..k {
            if counts[c] > 0 {
                let members: Vec<usize> =
                    (0..n).filter(|&i| labels[i] == c).collect();
                centers[c] = mean_point(points, &members);
            } else {
                let far = (0..n)
                    .max_by(|&a, &b| {
                        let da = dist2(&points[a], &centers[labels[a]]);
                        let db = dist2(&points[b], &centers[labels[b]]);
                        da.partial_cmp(&db).unwrap()
                    })
                    .unwrap();
                centers[c] = points[far].clone();
                labels[far] = c;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let mut counts = vec![0usize; k];
    for &l in &labels {
        counts[l] += 1;
    }
    if counts.iter().any(|&c| c == 0) {
        return None;
    }
    let inertia = points
        .iter()
        .zip(&labels)
        .map(|(p, &l)| dist2(p, &centers[l]))
        .sum();
    Some(KmeansFit {
        labels,
        centers,
        inertia,
    })
}

fn init_plus_plus(points: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut centers: Vec<Vec<f64>> = Vec::with_capacity(k);
    centers.push(points[rng.random_range(0..n)].clone());
    let mut d2 = vec![0.0f64; n];
    while centers.len() < k {
        let last = centers.last().unwrap();
        let mut total = 0.0;
        for (i, p) in points.iter().enumerate() {
            let d = dist2(p, last);
            if centers.len() == 1 || d < d2[i] {
                d2[i] = d;
            }
            total += d2[i];
        }
        let next = if total <= 0.0 {
            rng.random_range(0..n)
        } else {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = n - 1;
            for (i, &d) in d2.iter().enumerate() {
                acc += d;
                if acc >= target {
                    pick = i;
                    break;
                }
            }
            pick
        };
        centers.push(points[next].clone());
    }
    centers
}

fn mean_point(points: &[Vec<f64>], members: &[usize]) -> Vec<f64> {
    let d = points[0].len();
    let mut m = vec![0.0; d];
    for &i in members {
        for (x, y) in m.iter_mut().zip(&points[i]) {
            *x += y;
        }
    }
    let c = members.len() as f64;
    m.iter_mut().for_each(|x| *x /= c);
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn separates_two_blobs() {
        let mut points = Vec::new();
        for i in 0..20 {
            let t = (i as f64) * 0.01;
            points.push(vec![t, t]);
            points.push(vec![10.0 + t, 10.0 - t]);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let fit = kmeans(&points, 2, &mut rng).unwrap();
        for i in (0..points.len()).step_by(2) {
            assert_eq!(fit.labels[i], fit.labels[0]);
            assert_ne!(fit.labels[i + 1], fit.labels[0]);
        }
    }

    #[test]
    fn k_equals_one() {
        let points = vec![vec![0.0], vec![2.0], vec![4.0]];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let fit = kmeans(&points, 1, &mut rng).unwrap();
        assert_eq!(fit.labels, vec![0, 0, 0]);
        assert!((fit.centers[0][0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn too_few_distinct_points_errors() {
        let points = vec![vec![1.0], vec![1.0]];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // Two identical points, k = 2: a duplicate-center solution with zero
        // inertia is acceptable; but with n < k it must error.
        assert!(kmeans(&points[..1], 2, &mut rng).is_err());
    }
}
