//! Fitting and goodness-of-fit testing for the block-model family of random
//! networks: SBM, DCBM, MMSBM, and DCMM.
//!
//! All four models describe an undirected binary network through a Bernoulli
//! probability matrix `Omega = Theta * Pi * P * Pi' * Theta`. For each model
//! this crate provides an estimator of `Omega` and the self-normalized cycle
//! count statistic `T_n = U_{n,3} / sqrt(6 * C_{n,3})`, which is asymptotically
//! standard normal when the assumed model holds. Simulation harnesses for null
//! calibration and power studies are in [`sim`], and a command-line front end
//! lives in the `netgof` binary.

pub mod adjacency;
pub mod cycles;
pub mod fitters;
pub mod gof;
pub mod graph;
pub mod kmeans;
pub mod linalg;
pub mod membership;
pub mod omega_io;
pub mod sim;
pub mod spectral;
pub mod stats;
pub mod vertex_hunting;

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("node {0} is isolated (zero degree)")]
    IsolatedNode(usize),

    #[error("community {0} has no internal edges")]
    EmptyCommunity(usize),

    #[error("singular matrix in {0}")]
    Singular(String),

    #[error("eigensolver did not converge: worst residual {residual:e} (tolerance {tol:e})")]
    SolverNonConvergence { residual: f64, tol: f64 },

    #[error("cycle statistic undefined: the network has no triangles")]
    UndefinedStatistic,

    #[error("vertex hunting pruned all points; decrease alpha")]
    AllPointsPruned,

    #[error("non-identifiable input: {0}")]
    NonIdentifiable(String),

    #[error("fit failed for {model}: {msg}")]
    Fit { model: String, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
