//! Representative graphs and the adjacency Hamiltonians they induce.
//!
//! Graph file format (UTF-8 text): the first non-comment line is the
//! vertex count `N`; each following non-comment line is `i j w` with
//! 1-based integer vertices and a decimal weight. Lines starting with
//! `#` are comments. Blank lines are ignored.

use std::collections::HashSet;
use std::sync::Arc;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::hilbert::WeightedSpace;
use crate::linalg;
use crate::{C64, CMat};

/// Tolerance at which a Hamiltonian must be self-adjoint w.r.t. its space.
pub const SELF_ADJOINT_TOL: f64 = 1e-10;

/// A weighted undirected graph on vertices `1..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct RepGraph {
    n_vertices: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl RepGraph {
    /// Validating constructor; edges keep their given order.
    pub fn new(n_vertices: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        if n_vertices == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut seen: HashSet<(usize, usize)> = HashSet::new();
        for &(i, j, w) in &edges {
            for v in [i, j] {
                if v < 1 || v > n_vertices {
                    return Err(Error::InvalidVertex {
                        vertex: v as i64,
                        n_vertices,
                    });
                }
            }
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            if !w.is_finite() {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("non-finite weight on edge ({i}, {j})"),
                });
            }
            let key = (i.min(j), i.max(j));
            if !seen.insert(key) {
                return Err(Error::DuplicateEdge { i: key.0, j: key.1 });
            }
        }
        Ok(Self { n_vertices, edges })
    }

    /// Parse the plain-text graph format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut n_vertices: Option<usize> = None;
        let mut edges: Vec<(usize, usize, f64)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match n_vertices {
                None => {
                    if tokens.len() != 1 {
                        return Err(Error::Parse {
                            line: line_no,
                            msg: "expected a single vertex count".into(),
                        });
                    }
                    let n: usize = tokens[0].parse().map_err(|_| Error::Parse {
                        line: line_no,
                        msg: format!("invalid vertex count '{}'", tokens[0]),
                    })?;
                    if n == 0 {
                        return Err(Error::EmptyGraph);
                    }
                    n_vertices = Some(n);
                }
                Some(n) => {
                    if tokens.len() != 3 {
                        return Err(Error::Parse {
                            line: line_no,
                            msg: format!("expected 'i j w', got {} tokens", tokens.len()),
                        });
                    }
                    let i: i64 = tokens[0].parse().map_err(|_| Error::Parse {
                        line: line_no,
                        msg: format!("invalid vertex '{}'", tokens[0]),
                    })?;
                    let j: i64 = tokens[1].parse().map_err(|_| Error::Parse {
                        line: line_no,
                        msg: format!("invalid vertex '{}'", tokens[1]),
                    })?;
                    let w: f64 = tokens[2].parse().map_err(|_| Error::Parse {
                        line: line_no,
                        msg: format!("invalid weight '{}'", tokens[2]),
                    })?;
                    for v in [i, j] {
                        if v < 1 || v > n as i64 {
                            return Err(Error::InvalidVertex {
                                vertex: v,
                                n_vertices: n,
                            });
                        }
                    }
                    if !w.is_finite() {
                        return Err(Error::Parse {
                            line: line_no,
                            msg: format!("non-finite weight '{}'", tokens[2]),
                        });
                    }
                    edges.push((i as usize, j as usize, w));
                }
            }
        }
        let n = n_vertices.ok_or(Error::Parse {
            line: 0,
            msg: "empty graph file".into(),
        })?;
        Self::new(n, edges)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    /// The double-slit graph used throughout the test fixtures: five
    /// vertices, complete bipartite between parts {2,3} and {1,4,5},
    /// unit weights.
    pub fn double_slit() -> Self {
        Self::new(
            5,
            vec![
                (1, 2, 1.0),
                (1, 3, 1.0),
                (2, 4, 1.0),
                (2, 5, 1.0),
                (3, 4, 1.0),
                (3, 5, 1.0),
            ],
        )
        .expect("fixture graph is valid")
    }
}

/// A Hamiltonian matrix together with the space it is self-adjoint on.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    space: Arc<WeightedSpace>,
    matrix: CMat,
}

impl Hamiltonian {
    /// Validating constructor: the matrix must be self-adjoint with
    /// respect to the space within [`SELF_ADJOINT_TOL`].
    pub fn new(space: Arc<WeightedSpace>, matrix: CMat) -> Result<Self> {
        if matrix.nrows() != space.dim() || matrix.ncols() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                got: matrix.nrows().max(matrix.ncols()),
            });
        }
        let defect = space.self_adjoint_defect(&matrix)?;
        if defect > SELF_ADJOINT_TOL {
            return Err(Error::NotSelfAdjoint {
                defect,
                tol: SELF_ADJOINT_TOL,
            });
        }
        Ok(Self { space, matrix })
    }

    pub fn space(&self) -> &Arc<WeightedSpace> {
        &self.space
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Weighted operator norm; for a self-adjoint matrix this is the
    /// largest eigenvalue modulus.
    pub fn op_norm(&self) -> f64 {
        self.space
            .op_norm(&self.matrix)
            .expect("dimensions validated at construction")
    }

    /// Eigendecomposition in the weighted geometry.
    ///
    /// The conjugated matrix `W H W^-1` is Hermitian, is diagonalized by
    /// Jacobi rotations, and the eigenvectors are pulled back through
    /// `W^-1`, so their columns are orthonormal with respect to the
    /// space. Eigenvalues come out sorted descending.
    pub fn spectrum(&self) -> Spectrum {
        let w = self.space.root();
        let winv = self.space.root_inverse();
        let conj = w.dot(&self.matrix).dot(winv);
        let (eigenvalues, q) = linalg::eigh(&linalg::hermitian_part(&conj));
        let eigenvectors = winv.dot(&q);
        Spectrum {
            eigenvalues,
            eigenvectors,
            hermitian_frame: q,
        }
    }
}

/// Result of [`Hamiltonian::spectrum`].
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Real eigenvalues, descending; ties keep the solver's order.
    pub eigenvalues: Vec<f64>,
    /// Columns orthonormal with respect to the weighted inner product.
    pub eigenvectors: CMat,
    /// Eigenvector columns of the conjugated Hermitian matrix `W H W^-1`
    /// (orthonormal in the plain Euclidean sense).
    pub hermitian_frame: CMat,
}

/// Build the adjacency Hamiltonian of a graph: `H[i][j] = H[j][i] = w`
/// for each edge `(i, j, w)`, zero elsewhere.
pub fn adjacency_hamiltonian(g: &RepGraph, space: Arc<WeightedSpace>) -> Result<Hamiltonian> {
    if space.dim() != g.n_vertices() {
        return Err(Error::DimensionMismatch {
            expected: g.n_vertices(),
            got: space.dim(),
        });
    }
    let n = g.n_vertices();
    let mut m: CMat = Array2::zeros((n, n));
    for &(i, j, w) in g.edges() {
        m[[i - 1, j - 1]] = C64::new(w, 0.0);
        m[[j - 1, i - 1]] = C64::new(w, 0.0);
    }
    Hamiltonian::new(space, m)
}
