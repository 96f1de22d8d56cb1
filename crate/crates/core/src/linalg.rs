//! Dense complex linear-algebra kernels: Cholesky, triangular inverse,
//! partially pivoted LU, and a cyclic Jacobi eigensolver for Hermitian
//! matrices.
//!
//! Everything here is written for the small dense matrices this crate
//! works with (a few to a few hundred dimensions) and is fully
//! deterministic: same input bytes, same output bytes.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::{C64, CMat, CVec};

/// Identity matrix of dimension `n`.
pub fn identity(n: usize) -> CMat {
    Array2::eye(n)
}

/// Conjugate transpose.
pub fn dagger(a: &CMat) -> CMat {
    a.t().mapv(|z| z.conj())
}

/// Hermitian part `(A + A*)/2`; used to scrub floating-point asymmetry
/// before feeding a matrix to the Jacobi solver.
pub fn hermitian_part(a: &CMat) -> CMat {
    let ad = dagger(a);
    (a + &ad).mapv(|z| z * 0.5)
}

/// Largest entry modulus, zero for empty input.
pub fn max_abs(a: &CMat) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// Frobenius norm.
pub fn frobenius(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Deviation from Hermitian symmetry, `max |A - A*|` entrywise.
pub fn hermitian_defect(a: &CMat) -> f64 {
    let n = a.nrows();
    let mut defect = 0.0f64;
    for i in 0..n {
        for j in i..n {
            defect = defect.max((a[[i, j]] - a[[j, i]].conj()).norm());
        }
    }
    defect
}

/// Upper-triangular Cholesky factor `W` with `W* W = M` for a Hermitian
/// positive-definite `M`.
///
/// Only the upper triangle and the real diagonal of `M` are read, so a
/// metric that is Hermitian up to rounding factors cleanly. A pivot
/// `<= 0` reports [`Error::NotPositiveDefinite`].
pub fn cholesky_upper(m: &CMat) -> Result<CMat> {
    let n = m.nrows();
    // Build the lower factor L with M = L L*, then return W = L*.
    let mut l: CMat = Array2::zeros((n, n));
    for j in 0..n {
        let mut d = m[[j, j]].re;
        for k in 0..j {
            d -= l[[j, k]].norm_sqr();
        }
        if d <= 0.0 || !d.is_finite() {
            return Err(Error::NotPositiveDefinite { pivot: d, index: j });
        }
        let ljj = d.sqrt();
        l[[j, j]] = C64::new(ljj, 0.0);
        for i in (j + 1)..n {
            // M[i][j] = conj(M[j][i]); read the stored upper triangle.
            let mut s = m[[j, i]].conj();
            for k in 0..j {
                s -= l[[i, k]] * l[[j, k]].conj();
            }
            l[[i, j]] = s / ljj;
        }
    }
    Ok(dagger(&l))
}

/// Inverse of a nonsingular upper-triangular matrix by back substitution.
pub fn invert_upper_triangular(u: &CMat) -> CMat {
    let n = u.nrows();
    let mut inv: CMat = Array2::zeros((n, n));
    for col in 0..n {
        // Solve U x = e_col; x is zero below the diagonal entry `col`.
        for row in (0..=col).rev() {
            let mut s = if row == col {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            };
            for k in (row + 1)..=col {
                s -= u[[row, k]] * inv[[k, col]];
            }
            inv[[row, col]] = s / u[[row, row]];
        }
    }
    inv
}

/// LU factorization with partial pivoting.
pub struct LuFactors {
    lu: CMat,
    perm: Vec<usize>,
}

/// Factor `A = P L U`; a pivot below `tiny` relative to the matrix scale
/// reports [`Error::SingularDenominator`].
pub fn lu_factor(a: &CMat) -> Result<LuFactors> {
    let n = a.nrows();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let scale = max_abs(a).max(1.0);
    for col in 0..n {
        let mut pmax = 0.0;
        let mut prow = col;
        for row in col..n {
            let v = lu[[row, col]].norm();
            if v > pmax {
                pmax = v;
                prow = row;
            }
        }
        if pmax <= f64::EPSILON * scale {
            return Err(Error::SingularDenominator(pmax));
        }
        if prow != col {
            for j in 0..n {
                lu.swap([col, j], [prow, j]);
            }
            perm.swap(col, prow);
        }
        let pivot = lu[[col, col]];
        for row in (col + 1)..n {
            let factor = lu[[row, col]] / pivot;
            lu[[row, col]] = factor;
            for j in (col + 1)..n {
                let v = lu[[col, j]];
                lu[[row, j]] -= factor * v;
            }
        }
    }
    Ok(LuFactors { lu, perm })
}

impl LuFactors {
    /// Solve `A x = b` for a single right-hand side.
    pub fn solve_vec(&self, b: &CVec) -> CVec {
        let n = self.lu.nrows();
        let mut x: CVec = ndarray::Array1::zeros(n);
        for i in 0..n {
            x[i] = b[self.perm[i]];
        }
        // Forward: L y = P b (unit lower triangle).
        for i in 0..n {
            for k in 0..i {
                let v = x[k];
                x[i] -= self.lu[[i, k]] * v;
            }
        }
        // Backward: U x = y.
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                let v = x[k];
                x[i] -= self.lu[[i, k]] * v;
            }
            x[i] /= self.lu[[i, i]];
        }
        x
    }

    /// Solve `A X = B` column by column.
    pub fn solve_mat(&self, b: &CMat) -> CMat {
        let n = b.nrows();
        let m = b.ncols();
        let mut x: CMat = Array2::zeros((n, m));
        for j in 0..m {
            let col = b.column(j).to_owned();
            let sol = self.solve_vec(&col);
            x.column_mut(j).assign(&sol);
        }
        x
    }
}

/// Solve `A X = B` with one step of iterative refinement.
///
/// The refinement pass matters for the propagator path: it pushes the
/// unitarity defect of the Padé approximant down to a few ulps so that
/// thousand-step trajectories keep their norm within 1e-12.
pub fn solve_refined(a: &CMat, b: &CMat) -> Result<CMat> {
    let lu = lu_factor(a)?;
    let mut x = lu.solve_mat(b);
    let residual = b - &a.dot(&x);
    let correction = lu.solve_mat(&residual);
    x += &correction;
    Ok(x)
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Returns `(eigenvalues, q)` with eigenvalues sorted descending and the
/// columns of `q` the matching orthonormal eigenvectors. The input must
/// be Hermitian; feed it through [`hermitian_part`] first if it is only
/// Hermitian up to rounding.
pub fn eigh(a: &CMat) -> (Vec<f64>, CMat) {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "eigh requires a square matrix");
    let mut m = a.clone();
    let mut q = identity(n);
    if n == 0 {
        return (Vec::new(), q);
    }

    let scale = frobenius(&m);
    let stop = (n as f64) * f64::EPSILON * scale.max(f64::MIN_POSITIVE);
    const MAX_SWEEPS: usize = 60;

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for qi in (p + 1)..n {
                off += m[[p, qi]].norm_sqr();
            }
        }
        if off.sqrt() <= stop {
            break;
        }
        for p in 0..n - 1 {
            for qi in (p + 1)..n {
                let apq = m[[p, qi]];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let app = m[[p, p]].re;
                let aqq = m[[qi, qi]].re;
                // Absorb the phase of the off-diagonal entry, then apply
                // the classical real rotation that zeroes it.
                let u = apq / r;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let ub = u.conj();

                // Columns: col_p <- c*col_p - conj(u)*s*col_q,
                //          col_q <- s*col_p + conj(u)*c*col_q.
                for k in 0..n {
                    let mkp = m[[k, p]];
                    let mkq = m[[k, qi]];
                    m[[k, p]] = mkp * c - mkq * (ub * s);
                    m[[k, qi]] = mkp * s + mkq * (ub * c);
                }
                // Rows: row_p <- c*row_p - u*s*row_q,
                //       row_q <- s*row_p + u*c*row_q.
                for k in 0..n {
                    let mpk = m[[p, k]];
                    let mqk = m[[qi, k]];
                    m[[p, k]] = mpk * c - mqk * (u * s);
                    m[[qi, k]] = mpk * s + mqk * (u * c);
                }
                // The (p,q) pair is now diagonal by construction.
                m[[p, p]] = C64::new(app - t * r, 0.0);
                m[[qi, qi]] = C64::new(aqq + t * r, 0.0);
                m[[p, qi]] = C64::new(0.0, 0.0);
                m[[qi, p]] = C64::new(0.0, 0.0);

                for k in 0..n {
                    let vkp = q[[k, p]];
                    let vkq = q[[k, qi]];
                    q[[k, p]] = vkp * c - vkq * (ub * s);
                    q[[k, qi]] = vkp * s + vkq * (ub * c);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let eigvals: Vec<f64> = (0..n).map(|i| m[[i, i]].re).collect();
    // Descending eigenvalues; stable, so ties keep the pre-sort order.
    order.sort_by(|&i, &j| eigvals[j].partial_cmp(&eigvals[i]).unwrap());

    let sorted_vals: Vec<f64> = order.iter().map(|&i| eigvals[i]).collect();
    let mut sorted_q: CMat = Array2::zeros((n, n));
    for (new_col, &old_col) in order.iter().enumerate() {
        sorted_q.column_mut(new_col).assign(&q.column(old_col));
    }
    (sorted_vals, sorted_q)
}

/// Spectral norm (largest singular value), computed as the square root
/// of the largest eigenvalue of `A* A`.
pub fn spectral_norm(a: &CMat) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    let gram = dagger(a).dot(a);
    let (vals, _) = eigh(&hermitian_part(&gram));
    vals.first().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// Kronecker product `A (x) B`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (am, an) = a.dim();
    let (bm, bn) = b.dim();
    let mut out: CMat = Array2::zeros((am * bm, an * bn));
    for i in 0..am {
        for j in 0..an {
            let aij = a[[i, j]];
            if aij == C64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..bm {
                for l in 0..bn {
                    out[[i * bm + k, j * bn + l]] = aij * b[[k, l]];
                }
            }
        }
    }
    out
}
