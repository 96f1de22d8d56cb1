//! Error type shared by every module in the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building or running a simulation.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e} exceeds tolerance {tol:.3e})")]
    NotHermitian { asymmetry: f64, tol: f64 },

    #[error("matrix is not positive definite (Cholesky pivot {pivot:.3e} at index {index})")]
    NotPositiveDefinite { pivot: f64, index: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("vertex {vertex} outside 1..={n_vertices}")]
    InvalidVertex { vertex: i64, n_vertices: usize },

    #[error("duplicate edge between vertices {i} and {j}")]
    DuplicateEdge { i: usize, j: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("operator is not self-adjoint (defect {defect:.3e} exceeds tolerance {tol:.3e})")]
    NotSelfAdjoint { defect: f64, tol: f64 },

    #[error("ladder dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("basis is not orthonormal with respect to the space (Gram defect {0:.3e})")]
    NotOrthonormal(f64),

    #[error("dimension {0} exceeds the double-precision factorial limit 34")]
    FactorialOverflow(usize),

    #[error("Pade coefficient index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("step parameter must lie in (0,1), got {0}")]
    StepOutOfRange(f64),

    #[error("Pade order must lie in 1..=6, got {0}")]
    OrderOutOfRange(usize),

    #[error("singular Pade denominator (pivot {0:.3e})")]
    SingularDenominator(f64),

    #[error("Hamiltonian has zero norm: tau is undefined, build the identity propagator with an explicit tau")]
    ZeroHamiltonian,

    #[error("negative Kronecker exponent {0}")]
    NegativeExponent(i64),

    #[error("dense materialization refused: total dimension {total} exceeds {limit}")]
    TooLargeForDense { total: usize, limit: usize },

    #[error("state is not normalized (norm {0:.6} differs from 1)")]
    NotNormalized(f64),

    #[error("state at step {step} is not a product state (marginal defect {defect:.3e})")]
    NotProductState { step: usize, defect: f64 },
}
