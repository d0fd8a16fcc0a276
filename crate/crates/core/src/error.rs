use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("root finder did not converge after {iterations} iterations (worst residual {worst_residual:e})")]
    RootsNotConverged { iterations: usize, worst_residual: f64, partial: Vec<Complex64> },

    #[error("no square structure: deflation residual {residual:e} exceeds {tol:e}")]
    NoSquareStructure { residual: f64, tol: f64 },

    #[error("no admissible parameters at a = {a}: {reason}")]
    NoAdmissibleParameters { a: f64, reason: String, trace: Vec<[f64; 2]> },

    #[error("branch classification failed: expected two simple positive roots and a conjugate double pair, found {signature}")]
    Classification { signature: String },

    #[error("too close to branch point at {point} (distance {distance:e})")]
    TooCloseToBranchPoint { point: f64, distance: f64 },

    #[error("point {0} lies on a cut; use boundary values")]
    OnCut(f64),

    #[error("quadrature failed on [{lo}, {hi}]: {reason}")]
    Quadrature { lo: f64, hi: f64, reason: String },

    #[error("eigensolver did not converge for sample {sample}")]
    Eigen { sample: usize },

    #[error("insufficient clean samples for edge fit at {endpoint}")]
    EdgeFit { endpoint: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
