//! Kronecker-structured non-interacting Hamiltonians and their factored
//! propagators.
//!
//! A [`KronHamiltonian`] is the Kronecker SUM of its factors plus a
//! scalar diagonal shift:
//!
//! `H0 = sum_a  1 (x) ... (x) H_a (x) ... (x) 1  +  c * 1`
//!
//! Note the symbol usually written as a direct sum denotes the
//! Kronecker sum here (identity padding on every other factor), not a
//! block-diagonal stack; the multi-index power definition forces this
//! reading. The exponential of a Kronecker sum factors into the
//! Kronecker product of the factor exponentials, which is what makes
//! the matrix-free application in [`apply_kron`] possible.
//!
//! State layout: a product state indexes as
//! `index(i_1, ..., i_M) = ((i_1 - 1) N_2 + (i_2 - 1)) N_3 + ...`
//! (row-major, 1-based per factor, leftmost factor slowest). This
//! layout is part of the file-format contract for multi-particle
//! initial states.

use std::sync::Arc;

use ndarray::Array1;

use crate::error::{Error, Result};
use crate::graphham::Hamiltonian;
use crate::hilbert::{Ket, WeightedSpace};
use crate::linalg;
use crate::propagator::{self, PadePropagator, Trajectory};
use crate::{C64, CMat};

/// Dense-materialization guard for oracles and debug helpers.
pub const DENSE_LIMIT: usize = 4096;

/// An ordered list of factor Hamiltonians plus a scalar diagonal shift.
#[derive(Debug, Clone)]
pub struct KronHamiltonian {
    factors: Vec<Hamiltonian>,
    shift: C64,
    total_dim: usize,
}

impl KronHamiltonian {
    /// The factors must be nonempty; each one is already self-adjoint
    /// on its own space by construction.
    pub fn new(factors: Vec<Hamiltonian>, shift: C64) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: 0,
            });
        }
        let total_dim = factors.iter().map(|f| f.dim()).product();
        Ok(Self {
            factors,
            shift,
            total_dim,
        })
    }

    pub fn factors(&self) -> &[Hamiltonian] {
        &self.factors
    }

    pub fn shift(&self) -> C64 {
        self.shift
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn n_factors(&self) -> usize {
        self.factors.len()
    }

    /// The weighted space of the product, `metric = (x)_a M_a`.
    /// Euclidean factors combine without materializing anything; mixed
    /// metrics fall under the dense guard.
    pub fn product_space(&self) -> Result<Arc<WeightedSpace>> {
        if self.factors.iter().all(|f| f.space().is_euclidean()) {
            return Ok(WeightedSpace::euclidean_shared(self.total_dim));
        }
        if self.total_dim > DENSE_LIMIT {
            return Err(Error::TooLargeForDense {
                total: self.total_dim,
                limit: DENSE_LIMIT,
            });
        }
        let mut metric = linalg::identity(1);
        for f in &self.factors {
            metric = linalg::kron(&metric, f.space().metric());
        }
        Ok(Arc::new(WeightedSpace::from_metric(metric)?))
    }

    /// Dense matrix of the full Hamiltonian including the shift
    /// (debug/oracle only).
    pub fn dense(&self) -> Result<CMat> {
        let mut m = kron_sum(&self.factors)?;
        for i in 0..self.total_dim {
            m[[i, i]] += self.shift;
        }
        Ok(m)
    }
}

/// Kronecker power `{B_a}^{(.) r} = (x)_a B_a^{r_a}`; exponent zero
/// contributes that factor's identity.
pub fn kron_power(mats: &[CMat], exponents: &[i64]) -> Result<CMat> {
    if mats.len() != exponents.len() {
        return Err(Error::DimensionMismatch {
            expected: mats.len(),
            got: exponents.len(),
        });
    }
    let mut out = linalg::identity(1);
    for (m, &r) in mats.iter().zip(exponents.iter()) {
        if r < 0 {
            return Err(Error::NegativeExponent(r));
        }
        let mut power = linalg::identity(m.nrows());
        for _ in 0..r {
            power = power.dot(m);
        }
        out = linalg::kron(&out, &power);
    }
    Ok(out)
}

/// Dense Kronecker sum `sum_a 1 (x) ... (x) H_a (x) ... (x) 1`
/// (debug/oracle only, guarded by [`DENSE_LIMIT`]).
pub fn kron_sum(factors: &[Hamiltonian]) -> Result<CMat> {
    let total: usize = factors.iter().map(|f| f.dim()).product();
    if total > DENSE_LIMIT {
        return Err(Error::TooLargeForDense {
            total,
            limit: DENSE_LIMIT,
        });
    }
    let mats: Vec<CMat> = factors.iter().map(|f| f.matrix().clone()).collect();
    let m = factors.len();
    let mut sum: CMat = ndarray::Array2::zeros((total, total));
    for alpha in 0..m {
        let mut exponents = vec![0i64; m];
        exponents[alpha] = 1;
        sum = sum + kron_power(&mats, &exponents)?;
    }
    Ok(sum)
}

/// Factored propagator: one Padé approximant per factor sharing a
/// common `tau`, plus the scalar phase approximant for the shift.
#[derive(Debug, Clone)]
pub struct KronPropagator {
    factor_props: Vec<PadePropagator>,
    shift_phase: C64,
    h_sup: f64,
    tau: f64,
    total_dim: usize,
    product_space: Arc<WeightedSpace>,
}

impl KronPropagator {
    pub fn factor_props(&self) -> &[PadePropagator] {
        &self.factor_props
    }

    pub fn shift_phase(&self) -> C64 {
        self.shift_phase
    }

    /// `sup_a h_a`, the step parameter entering the tensor bound.
    pub fn h_sup(&self) -> f64 {
        self.h_sup
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn product_space(&self) -> &Arc<WeightedSpace> {
        &self.product_space
    }
}

/// Scalar diagonal Padé approximant `R_pp(-i tau c)` of `exp(-i tau c)`;
/// for real `c` the modulus is 1 to rounding.
pub fn shift_propagator(c: C64, tau: f64, p: usize) -> C64 {
    if c == C64::new(0.0, 0.0) {
        return C64::new(1.0, 0.0);
    }
    propagator::scalar_pade(p, C64::new(0.0, -tau) * c)
}

/// Build the factored propagator with the common step chosen so that
/// the largest factor satisfies the restriction: `tau = h_t / max|H_a|`,
/// hence `sup_a h_a = h_t`.
pub fn build_kron_propagator(
    kh: &KronHamiltonian,
    h_t: f64,
    p: usize,
) -> Result<KronPropagator> {
    if !(h_t > 0.0 && h_t < 1.0) {
        return Err(Error::StepOutOfRange(h_t));
    }
    let max_norm = kh
        .factors()
        .iter()
        .map(|f| f.op_norm())
        .fold(0.0f64, f64::max);
    if max_norm == 0.0 {
        return Err(Error::ZeroHamiltonian);
    }
    build_kron_with_tau(kh, h_t / max_norm, p)
}

/// Build the factored propagator at an explicit common `tau`.
pub fn build_kron_with_tau(kh: &KronHamiltonian, tau: f64, p: usize) -> Result<KronPropagator> {
    let mut factor_props = Vec::with_capacity(kh.n_factors());
    let mut h_sup = 0.0f64;
    for f in kh.factors() {
        let prop = if f.op_norm() == 0.0 {
            propagator::identity_propagator(f.space().clone(), tau, p)
        } else {
            propagator::build_with_tau(f, tau, p)?
        };
        h_sup = h_sup.max(prop.h_t());
        factor_props.push(prop);
    }
    Ok(KronPropagator {
        factor_props,
        shift_phase: shift_propagator(kh.shift(), tau, p),
        h_sup,
        tau,
        total_dim: kh.total_dim(),
        product_space: kh.product_space()?,
    })
}

/// Apply one factored step to a product-space state without ever
/// materializing the tensor product: one reshape-multiply sweep per
/// factor, `O(total * sum_a N_a)` arithmetic, then the scalar shift
/// phase.
pub fn apply_kron(prop: &KronPropagator, psi: &Ket) -> Result<Ket> {
    if psi.dim() != prop.total_dim {
        return Err(Error::DimensionMismatch {
            expected: prop.total_dim,
            got: psi.dim(),
        });
    }
    let dims: Vec<usize> = prop.factor_props.iter().map(|p| p.space().dim()).collect();
    let mut state = psi.coords().to_vec();
    let mut scratch = vec![C64::new(0.0, 0.0); state.len()];
    let total = state.len();

    let mut right: usize = dims.iter().product();
    let mut left: usize = 1;
    for (alpha, fp) in prop.factor_props.iter().enumerate() {
        let n = dims[alpha];
        right /= n;
        let u = fp.weighted();
        // state viewed as (left, n, right); contract u into the middle mode.
        for l in 0..left {
            let block = l * n * right;
            for r in 0..right {
                for i in 0..n {
                    let mut acc = C64::new(0.0, 0.0);
                    for j in 0..n {
                        acc += u[[i, j]] * state[block + j * right + r];
                    }
                    scratch[block + i * right + r] = acc;
                }
            }
        }
        state[..total].copy_from_slice(&scratch[..total]);
        left *= n;
    }

    let phase = prop.shift_phase;
    let coords = Array1::from_iter(state.into_iter().map(|z| z * phase));
    Ok(Ket::from_coords(coords))
}

/// Repeated [`apply_kron`]; product-state inputs stay product states.
pub fn evolve_kron(prop: &KronPropagator, psi0: &Ket, m: usize) -> Result<Trajectory> {
    if psi0.dim() != prop.total_dim {
        return Err(Error::DimensionMismatch {
            expected: prop.total_dim,
            got: psi0.dim(),
        });
    }
    let mut states = Vec::with_capacity(m + 1);
    states.push(psi0.clone());
    for _ in 0..m {
        let next = apply_kron(prop, states.last().unwrap())?;
        states.push(next);
    }
    Ok(Trajectory::new(
        prop.product_space.clone(),
        prop.tau,
        states,
    ))
}

/// Tensor error bound `(2^M - 1) m^(2p+1)/(2p+1)! h^(2p+1)` with
/// `h = sup_a h_a`; a single factor reduces it to the m-step bound.
pub fn error_bound_kron(p: usize, m: usize, n_factors: usize, h_sup: f64) -> f64 {
    let prefactor = 2f64.powi(n_factors as i32) - 1.0;
    prefactor * propagator::error_bound_multi(p, m, h_sup)
}

/// Dense matrix of the factored one-step operator (oracle only).
pub fn dense_kron_step(prop: &KronPropagator) -> Result<CMat> {
    if prop.total_dim > DENSE_LIMIT {
        return Err(Error::TooLargeForDense {
            total: prop.total_dim,
            limit: DENSE_LIMIT,
        });
    }
    let mut out = linalg::identity(1);
    for fp in &prop.factor_props {
        out = linalg::kron(&out, fp.weighted());
    }
    Ok(out.mapv(|z| z * prop.shift_phase))
}
