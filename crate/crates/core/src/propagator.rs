//! Diagonal Padé approximants of the unitary evolution group, weighted
//! conjugation, trajectories, and a priori error certificates.
//!
//! For a Hamiltonian `H` self-adjoint on a weighted space, the
//! approximant is built from the conjugated Hermitian matrix
//! `Hc = W H W^-1`:
//!
//! * `S = N_pp(-i tau Hc)`, `D = N_pp(+i tau Hc) = S*`,
//! * `U` solves `D U = S` (a pivoted solve, never an explicit inverse),
//! * `Uw = W^-1 U W` is the step operator on the original coordinates.
//!
//! `U` is unitary in the plain Euclidean sense because `-i tau Hc` is
//! anti-Hermitian, so `Uw` preserves the weighted norm exactly and the
//! whole discrete group `{Uw^k}` is reversible through the weighted
//! adjoint. With the identity metric `Hc = H` and `Uw = U`.
//!
//! The step restriction `tau = h_t / |H|` with `h_t < 1` keeps the
//! certificate formulas meaningful; `h_t` is dimensionless.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::graphham::Hamiltonian;
use crate::hilbert::{Ket, WeightedSpace};
use crate::linalg;
use crate::{C64, CMat};

/// Largest supported diagonal Padé order.
pub const MAX_ORDER: usize = 6;

fn factorial_big(n: usize) -> BigInt {
    (1..=n).fold(BigInt::from(1u32), |acc, k| acc * k)
}

fn factorial_f64(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

fn pade_coefficient_rational(p: usize, q: usize, j: usize) -> BigRational {
    BigRational::new(
        factorial_big(p + q - j) * factorial_big(p),
        factorial_big(p + q) * factorial_big(j) * factorial_big(p - j),
    )
}

fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().expect("small Pade rationals fit in f64 range")
}

/// Coefficient of `X^j` in the numerator polynomial `N_pq(X)` of the
/// `(p, q)` Padé approximant of `exp(X)`:
/// `(p+q-j)! p! / ((p+q)! j! (p-j)!)`.
///
/// The denominator polynomial is `D_pq(X) = N_qp(-X)`, so its
/// coefficients are obtained by swapping the arguments.
pub fn pade_coefficient(p: usize, q: usize, j: usize) -> Result<f64> {
    if j > p {
        return Err(Error::IndexOutOfRange { index: j, max: p });
    }
    Ok(rational_to_f64(&pade_coefficient_rational(p, q, j)))
}

/// Taylor coefficient `c_{p,k}` of the scalar diagonal Padé rational
/// `N_pp(x)/D_pp(x)` about `x = 0`, computed by power-series division
/// in exact rational arithmetic and converted to double at the end.
pub fn taylor_coefficient(p: usize, k: usize) -> f64 {
    let zero = BigRational::from(BigInt::from(0u32));
    let numer: Vec<BigRational> = (0..=p).map(|j| pade_coefficient_rational(p, p, j)).collect();
    // D_pp(x) = N_pp(-x): alternate the signs.
    let denom: Vec<BigRational> = (0..=p)
        .map(|j| {
            let c = pade_coefficient_rational(p, p, j);
            if j % 2 == 0 { c } else { -c }
        })
        .collect();
    let mut series: Vec<BigRational> = Vec::with_capacity(k + 1);
    for t in 0..=k {
        let mut val = if t <= p { numer[t].clone() } else { zero.clone() };
        for i in 1..=t.min(p) {
            val -= denom[i].clone() * series[t - i].clone();
        }
        series.push(val);
    }
    rational_to_f64(&series[k])
}

/// Single-step bound `|1/(2p+1)! - c_{p,2p+1}| h^(2p+1)`.
pub fn error_bound_single(p: usize, h_t: f64) -> f64 {
    let k = 2 * p + 1;
    let gap = (1.0 / factorial_f64(k) - taylor_coefficient(p, k)).abs();
    gap * h_t.powi(k as i32)
}

/// m-step bound `m^(2p+1)/(2p+1)! h^(2p+1)`; zero steps give zero.
pub fn error_bound_multi(p: usize, m: usize, h_t: f64) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let k = (2 * p + 1) as i32;
    (m as f64).powi(k) / factorial_f64(2 * p + 1) * h_t.powi(k)
}

/// Scalar diagonal Padé rational `R_pp(z) = N_pp(z) / N_pp(-z)`.
pub fn scalar_pade(p: usize, z: C64) -> C64 {
    let coeffs: Vec<f64> = (0..=p)
        .map(|j| rational_to_f64(&pade_coefficient_rational(p, p, j)))
        .collect();
    let eval = |x: C64| -> C64 {
        let mut acc = C64::new(coeffs[p], 0.0);
        for j in (0..p).rev() {
            acc = acc * x + coeffs[j];
        }
        acc
    };
    eval(z) / eval(-z)
}

/// A priori bounds attached to a propagator.
#[derive(Debug, Clone)]
pub struct ErrorCertificate {
    /// Padé order.
    pub order_p: usize,
    /// Dimensionless step `tau * |H|`.
    pub h_t: f64,
    /// Time step.
    pub tau: f64,
    /// Lemma-style single-step bound.
    pub single_step_bound: f64,
    /// The Taylor coefficient `c_{p,2p+1}` entering the single-step gap.
    pub coefficient_c: f64,
}

impl ErrorCertificate {
    fn new(order_p: usize, h_t: f64, tau: f64) -> Self {
        Self {
            order_p,
            h_t,
            tau,
            single_step_bound: error_bound_single(order_p, h_t),
            coefficient_c: taylor_coefficient(order_p, 2 * order_p + 1),
        }
    }

    /// Bound on the m-step propagation error.
    pub fn m_step_bound(&self, m: usize) -> f64 {
        error_bound_multi(self.order_p, m, self.h_t)
    }
}

impl Serialize for ErrorCertificate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ErrorCertificate", 6)?;
        s.serialize_field("p", &self.order_p)?;
        s.serialize_field("h_t", &self.h_t)?;
        s.serialize_field("tau", &self.tau)?;
        s.serialize_field("single_step_bound", &self.single_step_bound)?;
        s.serialize_field("c_p_2p1", &self.coefficient_c)?;
        s.serialize_field(
            "m_step_bound_formula",
            "m^(2p+1)/(2p+1)! * h^(2p+1)",
        )?;
        s.end()
    }
}

/// A discrete evolution: the states `psi_0, psi_1, ..., psi_m`.
#[derive(Debug, Clone)]
pub struct Trajectory {
    space: Arc<WeightedSpace>,
    tau: f64,
    states: Vec<Ket>,
}

impl Trajectory {
    pub(crate) fn new(space: Arc<WeightedSpace>, tau: f64, states: Vec<Ket>) -> Self {
        Self { space, tau, states }
    }

    pub fn space(&self) -> &Arc<WeightedSpace> {
        &self.space
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn states(&self) -> &[Ket] {
        &self.states
    }

    /// Number of steps, one less than the number of stored states.
    pub fn steps(&self) -> usize {
        self.states.len() - 1
    }

    pub fn last(&self) -> &Ket {
        self.states.last().expect("a trajectory holds psi_0")
    }
}

/// Diagonal Padé approximant of the evolution operator for one step.
#[derive(Debug, Clone)]
pub struct PadePropagator {
    order_p: usize,
    tau: f64,
    h_t: f64,
    numerator_s: CMat,
    approximant: CMat,
    weighted: CMat,
    certificate: ErrorCertificate,
    space: Arc<WeightedSpace>,
}

impl PadePropagator {
    pub fn order(&self) -> usize {
        self.order_p
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn h_t(&self) -> f64 {
        self.h_t
    }

    /// The numerator `S = N_pp(-i tau Hc)`.
    pub fn numerator_s(&self) -> &CMat {
        &self.numerator_s
    }

    /// The Euclidean-unitary approximant `U`.
    pub fn approximant(&self) -> &CMat {
        &self.approximant
    }

    /// The step operator `W^-1 U W` acting on the space coordinates.
    pub fn weighted(&self) -> &CMat {
        &self.weighted
    }

    pub fn certificate(&self) -> &ErrorCertificate {
        &self.certificate
    }

    pub fn space(&self) -> &Arc<WeightedSpace> {
        &self.space
    }

    /// Propagate `m` steps forward by repeated matrix-vector products.
    pub fn evolve(&self, psi0: &Ket, m: usize) -> Result<Trajectory> {
        if psi0.dim() != self.space.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.space.dim(),
                got: psi0.dim(),
            });
        }
        let mut states = Vec::with_capacity(m + 1);
        states.push(psi0.clone());
        for _ in 0..m {
            let next = states.last().unwrap().apply(&self.weighted);
            states.push(next);
        }
        Ok(Trajectory::new(self.space.clone(), self.tau, states))
    }

    /// Propagate `m` steps backward by applying the weighted adjoint.
    pub fn evolve_reverse(&self, psi_m: &Ket, m: usize) -> Result<Trajectory> {
        if psi_m.dim() != self.space.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.space.dim(),
                got: psi_m.dim(),
            });
        }
        let back = self
            .space
            .adjoint(&self.weighted)
            .expect("weighted operator has the space dimension");
        let mut states = Vec::with_capacity(m + 1);
        states.push(psi_m.clone());
        for _ in 0..m {
            let next = states.last().unwrap().apply(&back);
            states.push(next);
        }
        Ok(Trajectory::new(self.space.clone(), -self.tau, states))
    }
}

fn validate_order(p: usize) -> Result<()> {
    if p < 1 || p > MAX_ORDER {
        return Err(Error::OrderOutOfRange(p));
    }
    Ok(())
}

fn numerator_coefficients(p: usize) -> Vec<f64> {
    (0..=p)
        .map(|j| rational_to_f64(&pade_coefficient_rational(p, p, j)))
        .collect()
}

/// Evaluate a real-coefficient polynomial at a matrix argument by
/// Horner's rule.
fn matrix_poly(coeffs: &[f64], x: &CMat) -> CMat {
    let n = x.nrows();
    let p = coeffs.len() - 1;
    let mut acc = linalg::identity(n).mapv(|z| z * coeffs[p]);
    for j in (0..p).rev() {
        acc = acc.dot(x) + &linalg::identity(n).mapv(|z| z * coeffs[j]);
    }
    acc
}

/// Evaluate `N_pp(x)` at a matrix argument.
fn matrix_numerator(p: usize, x: &CMat) -> CMat {
    matrix_poly(&numerator_coefficients(p), x)
}

/// Build the propagator with the step chosen from the restriction
/// `tau = h_t / |H|`, `0 < h_t < 1`.
pub fn build_propagator(h: &Hamiltonian, h_t: f64, p: usize) -> Result<PadePropagator> {
    validate_order(p)?;
    if !(h_t > 0.0 && h_t < 1.0) {
        return Err(Error::StepOutOfRange(h_t));
    }
    let norm = h.op_norm();
    if norm == 0.0 {
        return Err(Error::ZeroHamiltonian);
    }
    build_with_tau(h, h_t / norm, p)
}

/// Build the propagator at an explicitly chosen `tau`; the implied
/// `h_t = tau |H|` must stay below 1. A zero Hamiltonian is accepted
/// here (the approximant degenerates to the identity).
pub fn build_with_tau(h: &Hamiltonian, tau: f64, p: usize) -> Result<PadePropagator> {
    validate_order(p)?;
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::StepOutOfRange(tau));
    }
    let norm = h.op_norm();
    let h_t = tau * norm;
    if h_t >= 1.0 {
        return Err(Error::StepOutOfRange(h_t));
    }
    let space = h.space().clone();
    let w = space.root();
    let winv = space.root_inverse();
    // Conjugated Hermitian frame; the identity metric leaves H as is.
    let hc = linalg::hermitian_part(&w.dot(h.matrix()).dot(winv));
    let x = hc.mapv(|z| z * C64::new(0.0, -tau));
    let s = matrix_numerator(p, &x);
    let d = matrix_numerator(p, &x.mapv(|z| -z));
    let u = linalg::solve_refined(&d, &s)?;
    let weighted = if space.is_euclidean() {
        u.clone()
    } else {
        winv.dot(&u).dot(w)
    };
    Ok(PadePropagator {
        order_p: p,
        tau,
        h_t,
        numerator_s: s,
        approximant: u,
        weighted,
        certificate: ErrorCertificate::new(p, h_t, tau),
        space,
    })
}

/// Negative-control hook for the verification suite: builds the
/// propagator with the top numerator coefficient scaled by `1 + delta`
/// while the denominator keeps the true coefficients. Any nonzero
/// `delta` destroys unitarity, which the suite must detect.
#[doc(hidden)]
pub fn build_with_coefficient_fault(
    h: &Hamiltonian,
    h_t: f64,
    p: usize,
    delta: f64,
) -> Result<PadePropagator> {
    validate_order(p)?;
    if !(h_t > 0.0 && h_t < 1.0) {
        return Err(Error::StepOutOfRange(h_t));
    }
    let norm = h.op_norm();
    if norm == 0.0 {
        return Err(Error::ZeroHamiltonian);
    }
    let tau = h_t / norm;
    let space = h.space().clone();
    let w = space.root();
    let winv = space.root_inverse();
    let hc = linalg::hermitian_part(&w.dot(h.matrix()).dot(winv));
    let x = hc.mapv(|z| z * C64::new(0.0, -tau));
    let mut coeffs = numerator_coefficients(p);
    coeffs[p] *= 1.0 + delta;
    let s = matrix_poly(&coeffs, &x);
    let d = matrix_numerator(p, &x.mapv(|z| -z));
    let u = linalg::solve_refined(&d, &s)?;
    let weighted = if space.is_euclidean() {
        u.clone()
    } else {
        winv.dot(&u).dot(w)
    };
    Ok(PadePropagator {
        order_p: p,
        tau,
        h_t,
        numerator_s: s,
        approximant: u,
        weighted,
        certificate: ErrorCertificate::new(p, h_t, tau),
        space,
    })
}

/// The degenerate propagator for a zero Hamiltonian: the exact group is
/// the identity at every step, so the approximant is the identity and
/// the certificate is trivially zero. `tau` is the caller's choice.
pub fn identity_propagator(space: Arc<WeightedSpace>, tau: f64, p: usize) -> PadePropagator {
    let n = space.dim();
    let eye = linalg::identity(n);
    PadePropagator {
        order_p: p,
        tau,
        h_t: 0.0,
        numerator_s: eye.clone(),
        approximant: eye.clone(),
        weighted: eye,
        certificate: ErrorCertificate::new(p, 0.0, tau),
        space,
    }
}

/// Exact evolution through the eigendecomposition:
/// `psi(t) = W^-1 Q exp(-it Lambda) Q* W psi0`.
///
/// This is the oracle every approximation bound in the crate is checked
/// against.
pub fn exact_evolve(h: &Hamiltonian, t: f64, psi0: &Ket) -> Result<Ket> {
    if psi0.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            got: psi0.dim(),
        });
    }
    let spec = h.spectrum();
    let w = h.space().root();
    let winv = h.space().root_inverse();
    let mut y = linalg::dagger(&spec.hermitian_frame).dot(&w.dot(psi0.coords()));
    for (k, lambda) in spec.eigenvalues.iter().enumerate() {
        let phase = C64::new(0.0, -t * lambda).exp();
        y[k] *= phase;
    }
    Ok(Ket::from_coords(winv.dot(&spec.hermitian_frame.dot(&y))))
}

/// Dense exact one-step evolution matrix `exp(-i t H)` (oracle).
pub fn exact_matrix(h: &Hamiltonian, t: f64) -> CMat {
    let spec = h.spectrum();
    let w = h.space().root();
    let winv = h.space().root_inverse();
    let n = h.dim();
    let mut lambda: CMat = ndarray::Array2::zeros((n, n));
    for (k, l) in spec.eigenvalues.iter().enumerate() {
        lambda[[k, k]] = C64::new(0.0, -t * l).exp();
    }
    let core = spec
        .hermitian_frame
        .dot(&lambda)
        .dot(&linalg::dagger(&spec.hermitian_frame));
    winv.dot(&core).dot(w)
}
