//! Weighted finite-dimensional Hilbert spaces.
//!
//! A [`WeightedSpace`] carries a Hermitian positive-definite metric `M`
//! together with its upper-triangular factor `W` (`W* W = M`) and `W`'s
//! inverse. All inner products, norms, operator norms, and adjoints in
//! the crate go through these three matrices:
//!
//! * `<u|v>   = u* M v`
//! * `|u|     = |W u|_2`
//! * `|A|     = |W A W^-1|_2`  (spectral norm of the conjugated matrix)
//! * `adj(A)  = M^-1 A* M`
//!
//! With the identity metric everything collapses to the familiar
//! Euclidean conventions, and the factor `W` is the identity.

use std::sync::Arc;

use ndarray::Array1;

use crate::error::{Error, Result};
use crate::linalg;
use crate::{C64, CMat, CVec};

/// Relative tolerance for accepting an input metric as Hermitian.
pub const METRIC_HERMITICITY_TOL: f64 = 1e-10;

/// A finite-dimensional Hilbert space with a metric-weighted inner product.
#[derive(Debug, Clone)]
pub struct WeightedSpace {
    dim: usize,
    metric: CMat,
    root: CMat,
    root_inverse: CMat,
}

impl WeightedSpace {
    /// Build a space from a Hermitian positive-definite metric.
    ///
    /// The square root is the upper-triangular Cholesky factor; any
    /// factor with `W* W = M` induces the same norms, so the cheapest
    /// deterministic one is used.
    pub fn from_metric(metric: CMat) -> Result<Self> {
        let n = metric.nrows();
        if metric.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: metric.ncols(),
            });
        }
        let scale = linalg::max_abs(&metric).max(1.0);
        let asymmetry = linalg::hermitian_defect(&metric);
        if asymmetry > METRIC_HERMITICITY_TOL * scale {
            return Err(Error::NotHermitian {
                asymmetry: asymmetry / scale,
                tol: METRIC_HERMITICITY_TOL,
            });
        }
        let root = linalg::cholesky_upper(&metric)?;
        let root_inverse = linalg::invert_upper_triangular(&root);
        Ok(Self {
            dim: n,
            metric,
            root,
            root_inverse,
        })
    }

    /// The space with the identity metric.
    pub fn euclidean(dim: usize) -> Self {
        Self {
            dim,
            metric: linalg::identity(dim),
            root: linalg::identity(dim),
            root_inverse: linalg::identity(dim),
        }
    }

    /// Convenience: a shared Euclidean space.
    pub fn euclidean_shared(dim: usize) -> Arc<Self> {
        Arc::new(Self::euclidean(dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The inner-product matrix `M`.
    pub fn metric(&self) -> &CMat {
        &self.metric
    }

    /// The upper-triangular factor `W` with `W* W = M`.
    pub fn root(&self) -> &CMat {
        &self.root
    }

    /// `W^-1`.
    pub fn root_inverse(&self) -> &CMat {
        &self.root_inverse
    }

    /// True when the metric is exactly the identity; several operations
    /// take cheaper paths in that case.
    pub fn is_euclidean(&self) -> bool {
        let eye = linalg::identity(self.dim);
        self.metric == eye
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got,
            });
        }
        Ok(())
    }

    fn check_square(&self, a: &CMat) -> Result<()> {
        self.check_dim(a.nrows())?;
        self.check_dim(a.ncols())
    }

    /// Weighted inner product `<u|v> = u* M v`, conjugate-linear in `u`.
    pub fn inner(&self, u: &Ket, v: &Ket) -> Result<C64> {
        self.check_dim(u.dim())?;
        self.check_dim(v.dim())?;
        let mv = self.metric.dot(v.coords());
        Ok(u.coords()
            .iter()
            .zip(mv.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Weighted norm `|u| = |W u|_2`.
    pub fn norm(&self, u: &Ket) -> Result<f64> {
        self.check_dim(u.dim())?;
        let wu = self.root.dot(u.coords());
        Ok(wu.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
    }

    /// Weighted operator norm, the largest singular value of `W A W^-1`.
    pub fn op_norm(&self, a: &CMat) -> Result<f64> {
        self.check_square(a)?;
        let conj = self.root.dot(a).dot(&self.root_inverse);
        Ok(linalg::spectral_norm(&conj))
    }

    /// Adjoint with respect to the weighted inner product,
    /// `adj(A) = M^-1 A* M`.
    pub fn adjoint(&self, a: &CMat) -> Result<CMat> {
        self.check_square(a)?;
        // M^-1 = W^-1 W^-*; avoids forming the metric inverse.
        let astar_m = linalg::dagger(a).dot(&self.metric);
        let winv_star = linalg::dagger(&self.root_inverse);
        Ok(self.root_inverse.dot(&winv_star).dot(&astar_m))
    }

    /// Whether `A` equals its own weighted adjoint within `tol`,
    /// measured as `|A - adj(A)| <= tol * max(1, |A|)` in the weighted
    /// operator norm.
    pub fn is_self_adjoint(&self, a: &CMat, tol: f64) -> Result<bool> {
        let defect = self.self_adjoint_defect(a)?;
        Ok(defect <= tol)
    }

    /// Relative self-adjointness defect used by [`Self::is_self_adjoint`].
    pub fn self_adjoint_defect(&self, a: &CMat) -> Result<f64> {
        let adj = self.adjoint(a)?;
        let diff = a - &adj;
        let defect = self.op_norm(&diff)?;
        let scale = self.op_norm(a)?.max(1.0);
        Ok(defect / scale)
    }
}

/// A state vector tied (by dimension) to a [`WeightedSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    coords: CVec,
}

impl Ket {
    pub fn from_coords(coords: CVec) -> Self {
        Self { coords }
    }

    /// Canonical basis vector `e_label` with a 1-based label.
    pub fn basis_state(dim: usize, label: usize) -> Result<Self> {
        if label < 1 || label > dim {
            return Err(Error::InvalidVertex {
                vertex: label as i64,
                n_vertices: dim,
            });
        }
        let mut coords: CVec = Array1::zeros(dim);
        coords[label - 1] = C64::new(1.0, 0.0);
        Ok(Self { coords })
    }

    /// Kronecker product of factor states, leftmost factor slowest.
    pub fn product(factors: &[Ket]) -> Self {
        let mut coords: CVec = Array1::from_vec(vec![C64::new(1.0, 0.0)]);
        for f in factors {
            let mut next: CVec = Array1::zeros(coords.len() * f.dim());
            for (i, a) in coords.iter().enumerate() {
                for (j, b) in f.coords.iter().enumerate() {
                    next[i * f.dim() + j] = a * b;
                }
            }
            coords = next;
        }
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &CVec {
        &self.coords
    }

    pub fn into_coords(self) -> CVec {
        self.coords
    }

    /// Rescale to unit weighted norm. Zero states report
    /// [`Error::NotNormalized`].
    pub fn normalized(&self, space: &WeightedSpace) -> Result<Ket> {
        let n = space.norm(self)?;
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized(n));
        }
        Ok(Ket::from_coords(self.coords.mapv(|z| z / n)))
    }

    /// Apply a matrix.
    pub fn apply(&self, a: &CMat) -> Ket {
        Ket::from_coords(a.dot(&self.coords))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn diag_metric(entries: &[f64]) -> CMat {
        let n = entries.len();
        let mut m: CMat = ndarray::Array2::zeros((n, n));
        for (i, &e) in entries.iter().enumerate() {
            m[[i, i]] = c(e, 0.0);
        }
        m
    }

    fn random_spd_space(n: usize, rng: &mut ChaCha20Rng) -> WeightedSpace {
        let mut b: CMat = ndarray::Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                b[[i, j]] = c(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5));
            }
        }
        let metric = linalg::dagger(&b).dot(&b) + linalg::identity(n);
        WeightedSpace::from_metric(metric).unwrap()
    }

    fn random_ket(n: usize, rng: &mut ChaCha20Rng) -> Ket {
        Ket::from_coords(Array1::from_iter(
            (0..n).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))),
        ))
    }

    fn random_mat(n: usize, rng: &mut ChaCha20Rng) -> CMat {
        let mut a: CMat = ndarray::Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                a[[i, j]] = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            }
        }
        a
    }

    #[test]
    fn identity_metric_has_identity_root() {
        let s = WeightedSpace::from_metric(linalg::identity(2)).unwrap();
        assert_eq!(s.root(), &linalg::identity(2));
        assert_eq!(s.root_inverse(), &linalg::identity(2));
    }

    #[test]
    fn diagonal_metric_root() {
        let s = WeightedSpace::from_metric(diag_metric(&[4.0, 1.0])).unwrap();
        assert!((s.root()[[0, 0]] - c(2.0, 0.0)).norm() < 1e-15);
        assert!((s.root()[[1, 1]] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn dense_metric_root_reconstructs() {
        let m = array![[c(2.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(2.0, 0.0)]];
        let s = WeightedSpace::from_metric(m.clone()).unwrap();
        let back = linalg::dagger(s.root()).dot(s.root());
        for ((i, j), v) in back.indexed_iter() {
            assert!((v - m[[i, j]]).norm() <= 1e-14);
        }
    }

    #[test]
    fn non_hermitian_metric_rejected() {
        let m = array![[c(1.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
        assert!(matches!(
            WeightedSpace::from_metric(m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn inner_product_examples() {
        let s2 = WeightedSpace::euclidean(2);
        let e1 = Ket::basis_state(2, 1).unwrap();
        let e2 = Ket::basis_state(2, 2).unwrap();
        assert_eq!(s2.inner(&e1, &e1).unwrap(), c(1.0, 0.0));
        assert_eq!(s2.inner(&e1, &e2).unwrap(), c(0.0, 0.0));

        let sw = WeightedSpace::from_metric(diag_metric(&[4.0, 1.0])).unwrap();
        assert_eq!(sw.inner(&e1, &e1).unwrap(), c(4.0, 0.0));
    }

    #[test]
    fn norm_examples() {
        let s = WeightedSpace::euclidean(2);
        let u = Ket::from_coords(Array1::from_vec(vec![c(3.0, 0.0), c(4.0, 0.0)]));
        assert!((s.norm(&u).unwrap() - 5.0).abs() < 1e-15);

        let sw = WeightedSpace::from_metric(diag_metric(&[4.0, 1.0])).unwrap();
        let e1 = Ket::basis_state(2, 1).unwrap();
        assert!((sw.norm(&e1).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn op_norm_examples() {
        let s = WeightedSpace::euclidean(2);
        assert!((s.op_norm(&linalg::identity(2)).unwrap() - 1.0).abs() < 1e-13);
        assert!((s.op_norm(&diag_metric(&[2.0, -3.0])).unwrap() - 3.0).abs() < 1e-13);

        // W A W^-1 = [[0, 2], [0, 0]] for this metric, largest singular value 2.
        let sw = WeightedSpace::from_metric(diag_metric(&[4.0, 1.0])).unwrap();
        let a = array![[c(0.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]];
        assert!((sw.op_norm(&a).unwrap() - 2.0).abs() < 1e-13);
    }

    #[test]
    fn adjoint_examples() {
        // Identity metric: plain conjugate transpose.
        let s = WeightedSpace::euclidean(2);
        let a = array![[c(1.0, 2.0), c(0.0, -1.0)], [c(3.0, 0.0), c(0.5, 0.5)]];
        let adj = s.adjoint(&a).unwrap();
        let expect = linalg::dagger(&a);
        for ((i, j), v) in adj.indexed_iter() {
            assert!((v - expect[[i, j]]).norm() < 1e-14);
        }

        // diag(4,1): adj([[0,1],[0,0]]) = [[0,0],[4,0]].
        let sw = WeightedSpace::from_metric(diag_metric(&[4.0, 1.0])).unwrap();
        let b = array![[c(0.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]];
        let adj = sw.adjoint(&b).unwrap();
        assert!((adj[[1, 0]] - c(4.0, 0.0)).norm() < 1e-14);
        assert!(adj[[0, 0]].norm() < 1e-14);
        assert!(adj[[0, 1]].norm() < 1e-14);
        assert!(adj[[1, 1]].norm() < 1e-14);
    }

    #[test]
    fn adjoint_is_involution() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let s = random_spd_space(5, &mut rng);
        let a = random_mat(5, &mut rng);
        let back = s.adjoint(&s.adjoint(&a).unwrap()).unwrap();
        for ((i, j), v) in back.indexed_iter() {
            assert!((v - a[[i, j]]).norm() < 1e-12);
        }
    }

    #[test]
    fn self_adjointness_cases() {
        let s = WeightedSpace::euclidean(2);
        let sym = array![[c(1.0, 0.0), c(2.0, 0.0)], [c(2.0, 0.0), c(-1.0, 0.0)]];
        assert!(s.is_self_adjoint(&sym, 1e-10).unwrap());
        let nil = array![[c(0.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]];
        assert!(!s.is_self_adjoint(&nil, 1e-10).unwrap());

        // A = [[0,1],[4,0]] equals M^-1 A* M for M = diag(4,1).
        let sw = WeightedSpace::from_metric(diag_metric(&[4.0, 1.0])).unwrap();
        let a = array![[c(0.0, 0.0), c(1.0, 0.0)], [c(4.0, 0.0), c(0.0, 0.0)]];
        assert!(sw.is_self_adjoint(&a, 1e-10).unwrap());
    }

    #[test]
    fn dimension_mismatch_reported() {
        let s = WeightedSpace::euclidean(3);
        let u = Ket::basis_state(2, 1).unwrap();
        assert!(matches!(
            s.norm(&u),
            Err(Error::DimensionMismatch { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn adjoint_compatibility_random_triples() {
        let mut rng = ChaCha20Rng::seed_from_u64(17);
        for _ in 0..100 {
            let n = rng.random_range(2..=8);
            let s = random_spd_space(n, &mut rng);
            let a = random_mat(n, &mut rng);
            let u = random_ket(n, &mut rng);
            let v = random_ket(n, &mut rng);
            let lhs = s.inner(&u.apply(&a), &v).unwrap();
            let rhs = s.inner(&u, &v.apply(&s.adjoint(&a).unwrap())).unwrap();
            let bound = 1e-10
                * s.norm(&u).unwrap()
                * s.norm(&v).unwrap()
                * s.op_norm(&a).unwrap().max(1.0);
            assert!(
                (lhs - rhs).norm() <= bound,
                "adjoint compatibility violated: {:.3e} > {:.3e}",
                (lhs - rhs).norm(),
                bound
            );
        }
    }

    #[test]
    fn op_norm_submultiplicative() {
        let mut rng = ChaCha20Rng::seed_from_u64(23);
        for _ in 0..50 {
            let n = rng.random_range(2..=6);
            let s = random_spd_space(n, &mut rng);
            let a = random_mat(n, &mut rng);
            let b = random_mat(n, &mut rng);
            let ab = s.op_norm(&a.dot(&b)).unwrap();
            let bound = s.op_norm(&a).unwrap() * s.op_norm(&b).unwrap() * (1.0 + 1e-10);
            assert!(ab <= bound, "submultiplicativity violated: {ab} > {bound}");
        }
    }

    #[test]
    fn cholesky_and_symmetric_root_induce_equal_norms() {
        // Any factor with W* W = M gives the same norms; compare the
        // Cholesky factor against the principal symmetric square root.
        let mut rng = ChaCha20Rng::seed_from_u64(29);
        for _ in 0..20 {
            let n = rng.random_range(2..=6);
            let s = random_spd_space(n, &mut rng);
            let (vals, q) = linalg::eigh(&linalg::hermitian_part(s.metric()));
            let sqrt_diag = ndarray::Array2::from_diag(&Array1::from_iter(
                vals.iter().map(|&v| C64::new(v.max(0.0).sqrt(), 0.0)),
            ));
            let sym_root = q.dot(&sqrt_diag).dot(&linalg::dagger(&q));
            let u = random_ket(n, &mut rng);
            let via_cholesky = s.norm(&u).unwrap();
            let via_sym = sym_root
                .dot(u.coords())
                .iter()
                .map(|z| z.norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(
                (via_cholesky - via_sym).abs() <= 1e-12 * via_cholesky.max(1.0),
                "factor choice changed the norm: {via_cholesky} vs {via_sym}"
            );
        }
    }

    proptest! {
        #[test]
        fn norm_squared_matches_inner(seed in 0u64..500) {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let n = rng.random_range(2..=8);
            let s = random_spd_space(n, &mut rng);
            let u = random_ket(n, &mut rng);
            let norm2 = s.norm(&u).unwrap().powi(2);
            let inner = s.inner(&u, &u).unwrap();
            prop_assert!(inner.im.abs() <= 1e-10 * norm2.max(1.0));
            prop_assert!((norm2 - inner.re).abs() <= 1e-10 * norm2.max(1.0));
        }

        #[test]
        fn norm_zero_iff_zero_vector(seed in 0u64..200) {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let n = rng.random_range(2..=8);
            let s = random_spd_space(n, &mut rng);
            let u = random_ket(n, &mut rng);
            let norm = s.norm(&u).unwrap();
            prop_assert!(norm >= 0.0);
            let is_zero = u.coords().iter().all(|z| z.norm() == 0.0);
            prop_assert_eq!(norm == 0.0, is_zero);
        }
    }
}
