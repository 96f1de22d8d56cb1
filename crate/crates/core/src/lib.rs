//! Simulation of finite-dimensional quantum dynamical systems.
//!
//! The library builds Hamiltonians from weighted representative graphs,
//! approximates the unitary evolution group `exp(-itH)` by diagonal Padé
//! approximants under a sub-unit step restriction, propagates states over
//! Kronecker-structured multi-particle systems without materializing the
//! product operator, and attaches a priori error certificates to every
//! propagator it constructs.
//!
//! All inner products, norms, and adjoints are taken with respect to a
//! Hermitian positive-definite metric (see [`hilbert::WeightedSpace`]);
//! the identity metric recovers the ordinary Euclidean conventions.

pub mod error;
pub mod graphham;
pub mod hilbert;
pub mod kronstruct;
pub mod ladder;
pub mod linalg;
pub mod matio;
pub mod observables;
pub mod propagator;
pub mod verify;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix.
pub type CMat = ndarray::Array2<C64>;
/// Dense complex vector.
pub type CVec = ndarray::Array1<C64>;
