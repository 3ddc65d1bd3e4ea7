//! Cycle-count statistics: the order-3 cycle count `C_{n,3}`, the signed
//! triangle sum `U_{n,3}(Omega_hat)`, and the self-normalized statistic
//! `T_n = U_{n,3} / sqrt(6 C_{n,3})`.
//!
//! `U_{n,3}` is the sum of `M(i1,i2) M(i2,i3) M(i3,i1)` over ordered distinct
//! triples with `M = A - Omega_hat`, evaluated through the identity
//!
//! ```text
//! f(M) = tr(M^3) - 3 tr(M o M^2) + 2 tr(M o M o M)
//! ```
//!
//! (`o` the Hadamard product), so diagonal entries of `M` cancel exactly.
//! With the rank-K factorization `Omega = Theta Pi P Pi' Theta` every term
//! reduces to sparse products and K-by-K traces, costing
//! `O(n K^2 + |E| K)` plus one triangle count instead of `O(n^3)`.

use nalgebra::{DMatrix, DVector};

use crate::fitters::{OmegaForm, ProbMatrix};
use crate::graph::Network;
use crate::linalg::trace_cube_sym;
use crate::{Error, Result};

/// The three cycle statistics of a fit.
#[derive(Debug, Clone, Copy)]
pub struct CycleStats {
    /// Ordered distinct-triple count; 6 times the number of triangles.
    pub c_n3: u64,
    pub u_n3: f64,
    /// `None` when the network is triangle free (statistic undefined).
    pub t_n: Option<f64>,
}

/// Number of unordered triangles, by merge intersection over sorted
/// neighbor lists restricted to higher-indexed nodes.
pub fn triangle_count(net: &Network) -> u64 {
    let n = net.n();
    let mut count = 0u64;
    for u in 0..n {
        let nu = net.neighbors(u);
        for &v in nu {
            let v = v as usize;
            if v <= u {
                continue;
            }
            let nv = net.neighbors(v);
            // Count common neighbors w with w > v to take each triangle once.
            let (mut i, mut j) = (0usize, 0usize);
            while i < nu.len() && j < nv.len() {
                let a = nu[i];
                let b = nv[j];
                if a == b {
                    if a as usize > v {
                        count += 1;
                    }
                    i += 1;
                    j += 1;
                } else if a < b {
                    i += 1;
                } else {
                    j += 1;
                }
            }
        }
    }
    count
}

/// `C_{n,3}`: the ordered distinct-triple cycle count, `6 * triangles`.
pub fn count_c3(net: &Network) -> u64 {
    6 * triangle_count(net)
}

/// `U_{n,3}(Omega_hat)` via the Hadamard trace identity.
pub fn u_n3(net: &Network, omega: &ProbMatrix) -> Result<f64> {
    u_n3_with_c3(net, omega, count_c3(net))
}

/// [`u_n3`] with a precomputed `C_{n,3}` (equals `tr(A^3)`), so callers that
/// evaluate several fits of the same network count triangles once.
pub fn u_n3_with_c3(net: &Network, omega: &ProbMatrix, c_n3: u64) -> Result<f64> {
    if omega.n() != net.n() {
        return Err(Error::Dimension {
            expected: net.n(),
            got: omega.n(),
        });
    }
    match omega.form() {
        OmegaForm::Factored { theta, pi, p } => Ok(u_n3_factored(net, theta, pi, p, c_n3 as f64)),
        OmegaForm::Dense(m) => Ok(u_n3_dense(net, m)),
    }
}

/// `T_n(Omega_hat) = U_{n,3} / sqrt(6 C_{n,3})`.
pub fn t_n(net: &Network, omega: &ProbMatrix) -> Result<f64> {
    t_n_with_c3(net, omega, count_c3(net))
}

/// [`t_n`] with a precomputed `C_{n,3}`.
pub fn t_n_with_c3(net: &Network, omega: &ProbMatrix, c_n3: u64) -> Result<f64> {
    if c_n3 == 0 {
        return Err(Error::UndefinedStatistic);
    }
    Ok(u_n3_with_c3(net, omega, c_n3)? / (6.0 * c_n3 as f64).sqrt())
}

/// All three statistics in one pass.
pub fn cycle_stats(net: &Network, omega: &ProbMatrix) -> Result<CycleStats> {
    let c_n3 = count_c3(net);
    let u = u_n3_with_c3(net, omega, c_n3)?;
    let t_n = if c_n3 == 0 {
        None
    } else {
        Some(u / (6.0 * c_n3 as f64).sqrt())
    };
    Ok(CycleStats { c_n3, u_n3: u, t_n })
}

/// Fast path exploiting `Omega = X C X'` with `X = Theta Pi` (n x K).
fn u_n3_factored(
    net: &Network,
    theta: &DVector<f64>,
    pi: &DMatrix<f64>,
    c: &DMatrix<f64>,
    tr_a3: f64,
) -> f64 {
    let n = net.n();
    let k = c.nrows();

    // X = diag(theta) * Pi.
    let mut x = pi.clone();
    for i in 0..n {
        for a in 0..k {
            x[(i, a)] *= theta[i];
        }
    }
    // Y = A * X via the sparse adjacency.
    let mut y = DMatrix::zeros(n, k);
    for i in 0..n {
        for &j in net.neighbors(i) {
            let j = j as usize;
            for a in 0..k {
                y[(i, a)] += x[(j, a)];
            }
        }
    }
    let s = x.transpose() * &x; // X'X
    let yy = y.transpose() * &y; // X'A^2X
    let xy = x.transpose() * &y; // X'AX

    let tr_a2o = (&yy * c).trace();
    let tr_ao2 = (&xy * c * &s * c).trace();
    let cs = c * &s;
    let tr_o3 = (&cs * &cs * &cs).trace();
    let tr_m3 = tr_a3 - 3.0 * tr_a2o + 3.0 * tr_ao2 - tr_o3;

    // Hadamard terms need only diagonal data:
    //   M_ii       = -Omega_ii = -(x_i' C x_i)
    //   (M^2)_ii   = deg_i - 2 x_i' C y_i + x_i' (C S C) x_i
    let csc = c * &s * c;
    let mut tr_m_had_m2 = 0.0;
    let mut tr_m_had3 = 0.0;
    for i in 0..n {
        let xi = x.row(i);
        let yi = y.row(i);
        let mut om_ii = 0.0;
        let mut h_i = 0.0;
        let mut q_i = 0.0;
        for a in 0..k {
            let mut cx = 0.0;
            let mut cy = 0.0;
            let mut qx = 0.0;
            for b in 0..k {
                cx += c[(a, b)] * xi[b];
                cy += c[(a, b)] * yi[b];
                qx += csc[(a, b)] * xi[b];
            }
            om_ii += xi[a] * cx;
            h_i += xi[a] * cy;
            q_i += xi[a] * qx;
        }
        let m_ii = -om_ii;
        let m2_ii = net.degree(i) as f64 - 2.0 * h_i + q_i;
        tr_m_had_m2 += m_ii * m2_ii;
        tr_m_had3 += m_ii * m_ii * m_ii;
    }

    tr_m3 - 3.0 * tr_m_had_m2 + 2.0 * tr_m_had3
}

/// Dense path for clipped or externally supplied `Omega_hat`.
fn u_n3_dense(net: &Network, omega: &DMatrix<f64>) -> f64 {
    let n = net.n();
    let mut m = -omega.clone();
    for i in 0..n {
        for &j in net.neighbors(i) {
            m[(i, j as usize)] += 1.0;
        }
    }
    let m2 = &m * &m;
    let tr_m3: f64 = m2.iter().zip(m.iter()).map(|(a, b)| a * b).sum();
    let mut tr_m_had_m2 = 0.0;
    let mut tr_m_had3 = 0.0;
    for i in 0..n {
        tr_m_had_m2 += m[(i, i)] * m2[(i, i)];
        tr_m_had3 += m[(i, i)].powi(3);
    }
    tr_m3 - 3.0 * tr_m_had_m2 + 2.0 * tr_m_had3
}

/// `f(M)` for an arbitrary symmetric dense matrix (no network involved);
/// used by the signal-to-noise diagnostics.
pub fn distinct_triple_trace(m: &DMatrix<f64>) -> f64 {
    let tr_m3 = trace_cube_sym(m);
    let m2 = m * m;
    let mut had2 = 0.0;
    let mut had3 = 0.0;
    for i in 0..m.nrows() {
        had2 += m[(i, i)] * m2[(i, i)];
        had3 += m[(i, i)].powi(3);
    }
    tr_m3 - 3.0 * had2 + 2.0 * had3
}
