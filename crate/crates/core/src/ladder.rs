//! Cyclic ladder operators, the number operator, and the particular
//! representation of a self-adjoint Hamiltonian over an orthonormal
//! analysis basis.
//!
//! The ladders here are cyclic, not truncated oscillator ladders: the
//! raising operator sends the top basis state back to the bottom one
//! with unit amplitude, so `raise * lower` is exactly the number
//! operator `diag(1..N)`.
//!
//! Indexing note: with 1-based analysis labels, `(raise)^(m-1)` applied
//! to the first basis vector lands on basis vector `m` with amplitude
//! `sqrt(m!)`. The representation coefficients therefore enter the
//! reconstruction with ladder exponents `k-1` and `l-1`; using the bare
//! exponents `k` and `l` would shift every term up by one basis label
//! and break the decompose/reconstruct round trip.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::graphham::Hamiltonian;
use crate::hilbert::WeightedSpace;
use crate::linalg;
use crate::{C64, CMat};

/// Largest dimension whose factorials are handled in double precision.
pub const MAX_FACTORIAL_DIM: usize = 34;

/// Gram-matrix tolerance for accepting an analysis basis as orthonormal.
pub const ORTHONORMALITY_TOL: f64 = 1e-10;

/// Cyclic wrap of a 1-based index: `1 + ((p - 1) mod q)` with the
/// nonnegative modulo, so `wrap_index(0, q) = q`.
pub fn wrap_index(p: i64, q: i64) -> i64 {
    debug_assert!(q >= 1);
    1 + (p - 1).rem_euclid(q)
}

/// The triple `(lower, raise, number)` of cyclic ladder operators for a
/// fixed dimension, expressed in the analysis-basis coordinates.
#[derive(Debug, Clone)]
pub struct LadderSet {
    dim: usize,
    raise: CMat,
    lower: CMat,
    number: CMat,
}

impl LadderSet {
    /// Build the ladder set for dimension `n >= 2`.
    ///
    /// `raise[k+1][k] = sqrt(k+1)` for `k = 1..n-1` plus the cyclic
    /// corner `raise[1][n] = 1`; `lower` is the pattern transpose; the
    /// number operator is stored as the exact diagonal `1..=n`.
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionTooSmall(n));
        }
        let mut raise: CMat = Array2::zeros((n, n));
        let mut lower: CMat = Array2::zeros((n, n));
        raise[[0, n - 1]] = C64::new(1.0, 0.0);
        lower[[n - 1, 0]] = C64::new(1.0, 0.0);
        for k in 1..n {
            let amp = ((k + 1) as f64).sqrt();
            // raise: |k+1><k|,  lower: |k><k+1| with amplitude sqrt(k+1).
            raise[[k, k - 1]] = C64::new(amp, 0.0);
            lower[[k - 1, k]] = C64::new(amp, 0.0);
        }
        let mut number: CMat = Array2::zeros((n, n));
        for k in 0..n {
            number[[k, k]] = C64::new((k + 1) as f64, 0.0);
        }
        Ok(Self {
            dim: n,
            raise,
            lower,
            number,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn raise(&self) -> &CMat {
        &self.raise
    }

    pub fn lower(&self) -> &CMat {
        &self.lower
    }

    pub fn number(&self) -> &CMat {
        &self.number
    }
}

/// Coefficients `<k|H|l>` of a Hamiltonian over an analysis basis.
#[derive(Debug, Clone)]
pub struct ParticularRep {
    dim: usize,
    coeffs: CMat,
}

impl ParticularRep {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &CMat {
        &self.coeffs
    }

    /// Construct directly from a coefficient matrix (test fixtures).
    pub fn from_coeffs(coeffs: CMat) -> Self {
        Self {
            dim: coeffs.nrows(),
            coeffs,
        }
    }
}

fn check_basis(space: &WeightedSpace, basis: &CMat) -> Result<()> {
    let n = space.dim();
    if basis.nrows() != n || basis.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: basis.nrows().max(basis.ncols()),
        });
    }
    // Gram = B* M B must be the identity.
    let gram = linalg::dagger(basis).dot(space.metric()).dot(basis);
    let defect = linalg::max_abs(&(&gram - &linalg::identity(n)));
    if defect > ORTHONORMALITY_TOL {
        return Err(Error::NotOrthonormal(defect));
    }
    Ok(())
}

/// Project a Hamiltonian onto an orthonormal analysis basis:
/// `coeffs[k][l] = <b_k | H b_l>`.
pub fn decompose(h0: &Hamiltonian, ladder: &LadderSet, basis: &CMat) -> Result<ParticularRep> {
    let space = h0.space();
    let n = space.dim();
    if ladder.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: ladder.dim(),
        });
    }
    check_basis(space, basis)?;
    // B* M H B in one sweep.
    let coeffs = linalg::dagger(basis)
        .dot(space.metric())
        .dot(h0.matrix())
        .dot(basis);
    Ok(ParticularRep { dim: n, coeffs })
}

/// Rebuild the Hamiltonian matrix from its particular representation:
///
/// `sum_{k,l} coeffs[k][l] (k! l!)^{-1/2} B (raise)^{k-1} E1 (lower)^{l-1} B^{-1}`
///
/// with `E1` the projector onto the first basis vector and `B` the
/// change-of-basis matrix. For an orthonormal basis `B^{-1} = B* M`.
pub fn reconstruct(
    rep: &ParticularRep,
    ladder: &LadderSet,
    space: &WeightedSpace,
    basis: &CMat,
) -> Result<CMat> {
    let n = rep.dim();
    if ladder.dim() != n || space.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: ladder.dim().min(space.dim()),
        });
    }
    if n > MAX_FACTORIAL_DIM {
        return Err(Error::FactorialOverflow(n));
    }
    check_basis(space, basis)?;

    let factorials = {
        let mut f = vec![1.0f64; n + 1];
        for k in 1..=n {
            f[k] = f[k - 1] * k as f64;
        }
        f
    };

    // Cumulative ladder powers: raise_pows[k] = raise^k, lower_pows[k] = lower^k.
    let mut raise_pows: Vec<CMat> = Vec::with_capacity(n);
    let mut lower_pows: Vec<CMat> = Vec::with_capacity(n);
    raise_pows.push(linalg::identity(n));
    lower_pows.push(linalg::identity(n));
    for k in 1..n {
        raise_pows.push(raise_pows[k - 1].dot(ladder.raise()));
        lower_pows.push(lower_pows[k - 1].dot(ladder.lower()));
    }

    let mut e1: CMat = Array2::zeros((n, n));
    e1[[0, 0]] = C64::new(1.0, 0.0);

    let mut canonical: CMat = Array2::zeros((n, n));
    for k in 1..=n {
        for l in 1..=n {
            let c = rep.coeffs()[[k - 1, l - 1]];
            if c == C64::new(0.0, 0.0) {
                continue;
            }
            let weight = 1.0 / (factorials[k] * factorials[l]).sqrt();
            let term = raise_pows[k - 1].dot(&e1).dot(&lower_pows[l - 1]);
            canonical = canonical + term.mapv(|z| z * c * weight);
        }
    }

    // Express in the caller's coordinates: B (...) B^{-1} with B^{-1} = B* M.
    let b_inv = linalg::dagger(basis).dot(space.metric());
    Ok(basis.dot(&canonical).dot(&b_inv))
}
