//! Abstraction over the symmetric matrix being fitted.
//!
//! The fitters run on two kinds of input: an observed sparse 0/1 adjacency
//! matrix, and (for oracle diagnostics) a dense probability matrix used in
//! place of the data. Both expose the handful of products the algorithms
//! need.

use nalgebra::DMatrix;

use crate::graph::{DegreeStats, Network};

/// A symmetric n-by-n matrix that supports the products used by the fitters.
pub trait SymAdjacency {
    fn n(&self) -> usize;

    /// `out = A * x`.
    fn matvec(&self, x: &[f64], out: &mut [f64]);

    /// Row sums `A * 1_n`.
    fn row_sums(&self) -> Vec<f64> {
        let n = self.n();
        let ones = vec![1.0; n];
        let mut out = vec![0.0; n];
        self.matvec(&ones, &mut out);
        out
    }

    /// Dense product `A * X`.
    fn mul_dense(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        let n = self.n();
        assert_eq!(x.nrows(), n);
        let mut out = DMatrix::zeros(n, x.ncols());
        let mut col_in = vec![0.0; n];
        let mut col_out = vec![0.0; n];
        for j in 0..x.ncols() {
            for i in 0..n {
                col_in[i] = x[(i, j)];
            }
            self.matvec(&col_in, &mut col_out);
            for i in 0..n {
                out[(i, j)] = col_out[i];
            }
        }
        out
    }

    /// Degree statistics when the input is an observed network; dense oracle
    /// inputs have none (auto-tuned vertex hunting is unavailable for them).
    fn degree_stats(&self) -> Option<DegreeStats> {
        None
    }
}

impl SymAdjacency for Network {
    fn n(&self) -> usize {
        Network::n(self)
    }

    fn matvec(&self, x: &[f64], out: &mut [f64]) {
        assert_eq!(x.len(), self.n());
        for (i, slot) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for &j in self.neighbors(i) {
                acc += x[j as usize];
            }
            *slot = acc;
        }
    }

    fn row_sums(&self) -> Vec<f64> {
        (0..Network::n(self)).map(|i| self.degree(i) as f64).collect()
    }

    fn degree_stats(&self) -> Option<DegreeStats> {
        Some(Network::degree_stats(self))
    }
}

impl SymAdjacency for DMatrix<f64> {
    fn n(&self) -> usize {
        debug_assert_eq!(self.nrows(), self.ncols());
        self.nrows()
    }

    fn matvec(&self, x: &[f64], out: &mut [f64]) {
        let n = self.nrows();
        assert_eq!(x.len(), n);
        // Column-major walk keeps this cache friendly; symmetry makes
        // accumulating by columns equivalent to row products.
        out.iter_mut().for_each(|o| *o = 0.0);
        for j in 0..n {
            let xj = x[j];
            if xj == 0.0 {
                continue;
            }
            let col = self.column(j);
            for i in 0..n {
                out[i] += col[i] * xj;
            }
        }
    }

    fn mul_dense(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        self * x
    }
}
