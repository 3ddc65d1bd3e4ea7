//! Shared helpers for the integration tests: permutation alignment against
//! ground truth and generators for identifiable DCMM instances.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// All permutations of `0..k` (k is tiny in tests).
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..k).collect();
    permute(&mut items, 0, &mut out);
    out
}

fn permute(items: &mut Vec<usize>, start: usize, out: &mut Vec<Vec<usize>>) {
    if start == items.len() {
        out.push(items.clone());
        return;
    }
    for i in start..items.len() {
        items.swap(start, i);
        permute(items, start + 1, out);
        items.swap(start, i);
    }
}

/// Max row-wise L1 error between `est` and `truth` after the best column
/// permutation (exact minimizer; K <= 4 in all tests).
pub fn max_row_l1_after_alignment(est: &DMatrix<f64>, truth: &DMatrix<f64>) -> f64 {
    let k = truth.ncols();
    let n = truth.nrows();
    let mut best = f64::INFINITY;
    for perm in permutations(k) {
        let mut worst = 0.0f64;
        for i in 0..n {
            let mut err = 0.0;
            for c in 0..k {
                err += (est[(i, perm[c])] - truth[(i, c)]).abs();
            }
            worst = worst.max(err);
        }
        best = best.min(worst);
    }
    best
}

/// Fraction of agreeing labels under the best permutation.
pub fn label_agreement(est: &[usize], truth: &[usize], k: usize) -> f64 {
    assert_eq!(est.len(), truth.len());
    let n = est.len();
    let mut best = 0usize;
    for perm in permutations(k) {
        let hits = est
            .iter()
            .zip(truth)
            .filter(|&(&e, &t)| perm[e] == t)
            .count();
        best = best.max(hits);
    }
    best as f64 / n as f64
}

/// Parameters of a random identifiable DCMM: unit-diagonal `P`, at least one
/// pure node per community, positive theta.
pub struct DcmmTruth {
    pub omega: DMatrix<f64>,
    pub theta: DVector<f64>,
    pub pi: DMatrix<f64>,
    pub p: DMatrix<f64>,
}

pub fn random_identifiable_dcmm(n: usize, k: usize, rng: &mut ChaCha8Rng) -> DcmmTruth {
    let theta = DVector::from_iterator(n, (0..n).map(|_| rng.random_range(0.25..0.85)));
    let mut p = DMatrix::identity(k, k);
    for a in 0..k {
        for b in (a + 1)..k {
            let v = rng.random_range(0.05..0.5);
            p[(a, b)] = v;
            p[(b, a)] = v;
        }
    }
    let mut pi = DMatrix::zeros(n, k);
    for i in 0..n {
        if i < 3 * k {
            // Guarantee pure nodes in every community.
            pi[(i, i % k)] = 1.0;
        } else {
            let mut sum = 0.0;
            for c in 0..k {
                let g: f64 = rng.random::<f64>().max(1e-6);
                pi[(i, c)] = g;
                sum += g;
            }
            for c in 0..k {
                pi[(i, c)] /= sum;
            }
        }
    }
    let mut x = pi.clone();
    for i in 0..n {
        for c in 0..k {
            x[(i, c)] *= theta[i];
        }
    }
    let omega = &x * &p * x.transpose();
    DcmmTruth {
        omega,
        theta,
        pi,
        p,
    }
}

/// Relative Frobenius distance.
pub fn rel_frobenius(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let diff = a - b;
    let den = b.norm().max(1e-300);
    diff.norm() / den
}
