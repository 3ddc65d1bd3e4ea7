//! Dense linear-algebra helpers shared by the fitters.

use nalgebra::DMatrix;

/// Relative pivot threshold below which a matrix is treated as singular.
pub const SINGULARITY_TOL: f64 = 1e-12;

/// True if `m` is numerically singular (smallest LU pivot relative to the
/// largest falls below [`SINGULARITY_TOL`]).
pub fn is_singular(m: &DMatrix<f64>) -> bool {
    debug_assert_eq!(m.nrows(), m.ncols());
    let lu = m.clone().full_piv_lu();
    let u = lu.u();
    let k = u.nrows().min(u.ncols());
    let mut max_p = 0.0f64;
    let mut min_p = f64::INFINITY;
    for i in 0..k {
        let p = u[(i, i)].abs();
        max_p = max_p.max(p);
        min_p = min_p.min(p);
    }
    max_p == 0.0 || min_p <= SINGULARITY_TOL * max_p
}

/// Plain inverse; `None` if singular by [`is_singular`]'s criterion.
pub fn try_inverse(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    if is_singular(m) {
        return None;
    }
    m.clone().try_inverse()
}

/// Inverse with a ridge fallback: if `m` is near-singular, inverts
/// `m + ridge * tr_scale * I` instead and reports that the guard fired.
pub fn inverse_or_ridge(m: &DMatrix<f64>, ridge: f64) -> (DMatrix<f64>, bool) {
    if let Some(inv) = try_inverse(m) {
        return (inv, false);
    }
    let n = m.nrows();
    let scale = m.iter().map(|x| x.abs()).fold(0.0f64, f64::max).max(1.0);
    let mut g = m.clone();
    for i in 0..n {
        g[(i, i)] += ridge * scale;
    }
    let inv = g
        .try_inverse()
        .unwrap_or_else(|| DMatrix::identity(n, n) * (1.0 / (ridge * scale)));
    (inv, true)
}

/// trace(A * B) without forming the product.
pub fn trace_prod(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    debug_assert_eq!(a.ncols(), b.nrows());
    debug_assert_eq!(a.nrows(), b.ncols());
    let mut t = 0.0;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            t += a[(i, j)] * b[(j, i)];
        }
    }
    t
}

/// trace(M^3) for symmetric `m`.
pub fn trace_cube_sym(m: &DMatrix<f64>) -> f64 {
    let m2 = m * m;
    // tr(M^2 * M) = sum_ij (M^2)_ij M_ji = sum_ij (M^2)_ij M_ij by symmetry.
    m2.iter().zip(m.iter()).map(|(a, b)| a * b).sum()
}

/// Squared Euclidean distance between two points.
pub fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singular_detection() {
        let s = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(is_singular(&s));
        let ns = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 5.0]);
        assert!(!is_singular(&ns));
        assert!(try_inverse(&ns).is_some());
    }

    #[test]
    fn ridge_fallback_fires_on_singular() {
        let s = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let (_, ridged) = inverse_or_ridge(&s, 1e-10);
        assert!(ridged);
        let ns = DMatrix::identity(2, 2);
        let (inv, ridged) = inverse_or_ridge(&ns, 1e-10);
        assert!(!ridged);
        assert!((inv[(0, 0)] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn trace_cube_matches_direct() {
        let m = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 1.0, -1.0, 3.0, 0.0, 3.0, 0.5]);
        let direct = (&m * &m * &m).trace();
        assert!((trace_cube_sym(&m) - direct).abs() < 1e-12);
    }
}
