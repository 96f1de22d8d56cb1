//! Expected-occupation observables over trajectories and rounding to
//! representative-graph vertices.
//!
//! The raw observable is `<psi| N |psi>` with `N` the number operator of
//! a [`LadderSet`]; because `N = raise * lower` and `raise` is the
//! adjoint of `lower`, the same value is the squared weighted norm of
//! `lower * psi`. Both routes are exposed so they can be cross-checked.
//! The value of a normalized state always lies in `[1, N]`, the range of
//! the number operator's spectrum.

use std::sync::Arc;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::graphham::RepGraph;
use crate::hilbert::{Ket, WeightedSpace};
use crate::ladder::LadderSet;
use crate::linalg;
use crate::propagator::Trajectory;
use crate::CMat;

/// Normalization tolerance on states entering an expectation.
pub const NORMALIZATION_TOL: f64 = 1e-8;

/// Tolerance on the ladder/number adjointness validation.
pub const LADDER_ADJOINT_TOL: f64 = 1e-10;

/// Rank-one tolerance for declaring a marginal a product-state factor.
pub const PRODUCT_STATE_TOL: f64 = 1e-8;

/// One step of an expected-occupation series.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectedState {
    /// Step index within the trajectory.
    pub step: usize,
    /// Raw expectation `<N>` at this step.
    pub raw: f64,
    /// Nearest representative-graph vertex.
    pub rounded: usize,
}

/// Per-step product observable over a multi-factor trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductExpectation {
    pub step: usize,
    pub per_factor: Vec<ExpectedState>,
    /// Product of the per-factor rounded labels.
    pub product: u64,
}

fn validate_ladder(ladder: &LadderSet, space: &WeightedSpace) -> Result<()> {
    if ladder.dim() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            got: ladder.dim(),
        });
    }
    // The number operator must be self-adjoint on this space and the
    // ladders mutually adjoint; otherwise the analysis basis is not
    // orthonormal with respect to the metric and the expectation value
    // would not even be real.
    let defect_n = space.self_adjoint_defect(ladder.number())?;
    if defect_n > LADDER_ADJOINT_TOL {
        return Err(Error::NotSelfAdjoint {
            defect: defect_n,
            tol: LADDER_ADJOINT_TOL,
        });
    }
    let adj_lower = space.adjoint(ladder.lower())?;
    let diff = ladder.raise() - &adj_lower;
    let defect = space.op_norm(&diff)? / space.op_norm(ladder.raise())?.max(1.0);
    if defect > LADDER_ADJOINT_TOL {
        return Err(Error::NotSelfAdjoint {
            defect,
            tol: LADDER_ADJOINT_TOL,
        });
    }
    Ok(())
}

/// Expectation `<psi| N |psi>` of the number operator on a normalized
/// state.
pub fn expected_number(ladder: &LadderSet, space: &WeightedSpace, psi: &Ket) -> Result<f64> {
    validate_ladder(ladder, space)?;
    let norm = space.norm(psi)?;
    if (norm - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized(norm));
    }
    let npsi = psi.apply(ladder.number());
    Ok(space.inner(psi, &npsi)?.re)
}

/// The same expectation through the other route, `|lower psi|^2`.
pub fn expected_number_via_lowering(
    ladder: &LadderSet,
    space: &WeightedSpace,
    psi: &Ket,
) -> Result<f64> {
    validate_ladder(ladder, space)?;
    let norm = space.norm(psi)?;
    if (norm - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized(norm));
    }
    let lowered = psi.apply(ladder.lower());
    Ok(space.norm(&lowered)?.powi(2))
}

/// Nearest vertex of the graph to `q`, ties broken toward the smaller
/// label. Values outside `[1, N]` clamp to the nearest endpoint.
pub fn round_to_vertex(q: f64, g: &RepGraph) -> usize {
    let n = g.n_vertices();
    if q <= 1.0 {
        return 1;
    }
    if q >= n as f64 {
        return n;
    }
    let lo = q.floor() as usize;
    let hi = lo + 1;
    // Tie goes to the smaller label.
    if q - lo as f64 <= hi as f64 - q { lo } else { hi }
}

/// Expected-occupation series of a single-factor trajectory.
pub fn expected_trajectory(
    ladder: &LadderSet,
    traj: &Trajectory,
    g: &RepGraph,
) -> Result<Vec<ExpectedState>> {
    let space = traj.space();
    let mut out = Vec::with_capacity(traj.states().len());
    for (step, psi) in traj.states().iter().enumerate() {
        let raw = expected_number(ladder, space, psi)?;
        out.push(ExpectedState {
            step,
            raw,
            rounded: round_to_vertex(raw, g),
        });
    }
    Ok(out)
}

/// Metric-weighted marginal density of factor `alpha`:
/// `rho = X M_other X*` with `X` the state reshaped so the factor index
/// comes first.
fn factor_marginal(
    psi: &Ket,
    spaces: &[Arc<WeightedSpace>],
    alpha: usize,
) -> CMat {
    let dims: Vec<usize> = spaces.iter().map(|s| s.dim()).collect();
    let n = dims[alpha];
    let left: usize = dims[..alpha].iter().product();
    let right: usize = dims[alpha + 1..].iter().product();
    let other = left * right;

    let mut x: CMat = Array2::zeros((n, other));
    let coords = psi.coords();
    for l in 0..left {
        for i in 0..n {
            for r in 0..right {
                x[[i, l * right + r]] = coords[(l * n + i) * right + r];
            }
        }
    }

    let all_euclidean = spaces
        .iter()
        .enumerate()
        .all(|(b, s)| b == alpha || s.is_euclidean());
    if all_euclidean {
        return x.dot(&linalg::dagger(&x));
    }
    let mut m_other = linalg::identity(1);
    for (b, s) in spaces.iter().enumerate() {
        if b == alpha {
            continue;
        }
        m_other = linalg::kron(&m_other, s.metric());
    }
    x.dot(&m_other).dot(&linalg::dagger(&x))
}

/// Per-step per-factor expectations of a product-state trajectory, plus
/// the product of the rounded labels.
///
/// Each state is checked to actually be a product state: the marginal
/// along every factor must be rank one within [`PRODUCT_STATE_TOL`].
pub fn expected_product(
    ladders: &[LadderSet],
    spaces: &[Arc<WeightedSpace>],
    traj: &Trajectory,
    graphs: &[RepGraph],
) -> Result<Vec<ProductExpectation>> {
    let m = ladders.len();
    if spaces.len() != m || graphs.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: spaces.len().min(graphs.len()),
        });
    }
    let total: usize = spaces.iter().map(|s| s.dim()).product();
    let mut out = Vec::with_capacity(traj.states().len());
    for (step, psi) in traj.states().iter().enumerate() {
        if psi.dim() != total {
            return Err(Error::DimensionMismatch {
                expected: total,
                got: psi.dim(),
            });
        }
        let mut per_factor = Vec::with_capacity(m);
        let mut product: u64 = 1;
        for alpha in 0..m {
            let rho = factor_marginal(psi, spaces, alpha);
            let trace: f64 = (0..rho.nrows()).map(|i| rho[[i, i]].re).sum();
            let (vals, vecs) = linalg::eigh(&linalg::hermitian_part(&rho));
            let top = vals.first().copied().unwrap_or(0.0);
            let defect = (trace - top).abs() / trace.abs().max(1.0);
            if defect > PRODUCT_STATE_TOL {
                return Err(Error::NotProductState { step, defect });
            }
            let marginal = Ket::from_coords(vecs.column(0).to_owned())
                .normalized(&spaces[alpha])?;
            let raw = expected_number(&ladders[alpha], &spaces[alpha], &marginal)?;
            let rounded = round_to_vertex(raw, &graphs[alpha]);
            product *= rounded as u64;
            per_factor.push(ExpectedState { step, raw, rounded });
        }
        out.push(ProductExpectation {
            step,
            per_factor,
            product,
        });
    }
    Ok(out)
}
