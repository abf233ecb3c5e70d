//! Primitives of the finite-dimensional lattice `R^n` with the coordinatewise
//! order: nonnegative square matrices, vectors, functionals and coordinate
//! ideals (the closed ideals of `R^n` are exactly the coordinate subspaces).

use std::collections::BTreeSet;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Entries in `[-INPUT_CLAMP, 0)` are treated as serialization noise and set to zero.
pub const INPUT_CLAMP: f64 = 1e-12;

/// Numerical tolerances shared by the analyses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Frobenius distance under which two unit rays are identified.
    pub dedup: f64,
    /// Relative tolerance for spectral identities (eigen-equations, radii).
    pub spectral: f64,
    /// Singular values below `rank * sigma_max` are treated as zero.
    pub rank: f64,
    /// Relative band around the spectral radius defining the peripheral spectrum.
    pub peripheral: f64,
    /// Minimal relative gap between the peripheral band and the rest of the spectrum.
    pub gap: f64,
    /// Idempotency tolerance, relative to `1 + ||P||_F`.
    pub idempotent: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            dedup: 1e-9,
            spectral: 1e-6,
            rank: 1e-8,
            peripheral: 1e-8,
            gap: 1e-6,
            idempotent: 1e-8,
        }
    }
}

/// A square matrix with nonnegative entries, acting on `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix(DMatrix<f64>);

impl Matrix {
    /// Builds a matrix from row arrays, rejecting ragged, non-square or negative input.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Matrix> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty("matrix has no rows"));
        }
        for row in rows {
            if row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
        }
        Matrix::from_dmatrix(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    /// Validates a dense matrix as a positive operator.
    pub fn from_dmatrix(mut m: DMatrix<f64>) -> Result<Matrix> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(Error::Empty("matrix has dimension zero"));
        }
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                let v = m[(i, j)];
                if !v.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
                if v < -INPUT_CLAMP {
                    return Err(Error::NegativeEntry {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
                if v < 0.0 {
                    m[(i, j)] = 0.0;
                }
            }
        }
        Ok(Matrix(m))
    }

    /// Accepts a computed matrix (limit, projection) whose negative entries are
    /// rounding noise of size at most `rel_tol * max|entry|`.
    pub fn from_computed(mut m: DMatrix<f64>, rel_tol: f64) -> Result<Matrix> {
        let scale = m.amax().max(f64::MIN_POSITIVE);
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                let v = m[(i, j)];
                if !v.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
                if v < -rel_tol * scale {
                    return Err(Error::NegativeEntry {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
                if v < rel_tol * scale {
                    m[(i, j)] = 0.0;
                }
            }
        }
        Matrix::from_dmatrix(m)
    }

    pub fn identity(n: usize) -> Matrix {
        Matrix(DMatrix::identity(n, n))
    }

    pub fn zeros(n: usize) -> Matrix {
        Matrix(DMatrix::zeros(n, n))
    }

    /// Permutation matrix sending `e_i` to `e_{perm[i]}`.
    pub fn permutation(perm: &[usize]) -> Matrix {
        let n = perm.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, &j) in perm.iter().enumerate() {
            m[(j, i)] = 1.0;
        }
        Matrix(m)
    }

    /// The cyclic shift `e_i -> e_{i+1 mod n}`.
    pub fn cyclic_shift(n: usize) -> Matrix {
        let perm: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        Matrix::permutation(&perm)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_dmatrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.0[(i, j)]).collect())
            .collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0.0)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        Matrix(&self.0 * &other.0)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix(self.0.transpose())
    }

    /// Multiplies by a nonnegative scalar.
    pub fn scale(&self, c: f64) -> Matrix {
        assert!(c >= 0.0, "positive operators are scaled by nonnegative reals");
        Matrix(&self.0 * c)
    }

    pub fn apply(&self, x: &LatticeVector) -> Result<LatticeVector> {
        check_dim(self.dim(), x.dim())?;
        Ok(LatticeVector(&self.0 * &x.0))
    }

    /// Positivity digraph adjacency: `edge[i][j]` iff the entry `(j, i)` exceeds
    /// `threshold`, i.e. `A e_i` has a nonzero `j`-th coordinate.
    pub fn pattern(&self, threshold: f64) -> Vec<Vec<bool>> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| self.0[(j, i)] > threshold).collect())
            .collect()
    }

    /// Unit-Frobenius representative of the ray `R_+ A`, or `None` for zero.
    pub fn ray(&self) -> Option<Matrix> {
        let norm = self.frobenius_norm();
        if norm == 0.0 {
            None
        } else {
            Some(Matrix(&self.0 / norm))
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(|v| format!("{v}")).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        Err(Error::DimensionMismatch { expected, found })
    } else {
        Ok(())
    }
}

/// A vector of `R^n`; positivity is a checked predicate rather than an invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeVector(pub DVector<f64>);

impl LatticeVector {
    pub fn new(coords: Vec<f64>) -> LatticeVector {
        LatticeVector(DVector::from_vec(coords))
    }

    pub fn basis(n: usize, i: usize) -> LatticeVector {
        let mut v = DVector::zeros(n);
        v[i] = 1.0;
        LatticeVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        self.0.as_slice()
    }

    pub fn sup_norm(&self) -> f64 {
        self.0.amax()
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&v| v >= 0.0)
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.0.iter().all(|&v| v > 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0.0)
    }

    /// Coordinatewise minimum.
    pub fn meet(&self, other: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.zip_map(&other.0, f64::min))
    }

    pub fn abs(&self) -> LatticeVector {
        LatticeVector(self.0.abs())
    }
}

/// A linear functional on `R^n`, acting by the standard pairing.
#[derive(Debug, Clone, PartialEq)]
pub struct Functional(pub DVector<f64>);

impl Functional {
    pub fn new(coords: Vec<f64>) -> Functional {
        Functional(DVector::from_vec(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        self.0.as_slice()
    }

    pub fn apply(&self, x: &LatticeVector) -> Result<f64> {
        check_dim(self.dim(), x.dim())?;
        Ok(self.0.dot(&x.0))
    }
}

/// A closed ideal of `R^n`, i.e. the span of a set of coordinates.
/// Indices are zero-based internally and displayed one-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CoordinateIdeal {
    support: BTreeSet<usize>,
}

impl CoordinateIdeal {
    pub fn new(support: impl IntoIterator<Item = usize>) -> CoordinateIdeal {
        CoordinateIdeal {
            support: support.into_iter().collect(),
        }
    }

    pub fn full(n: usize) -> CoordinateIdeal {
        CoordinateIdeal::new(0..n)
    }

    pub fn support(&self) -> &BTreeSet<usize> {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.support.contains(&i)
    }

    /// Nonzero and not the whole space.
    pub fn is_proper(&self, n: usize) -> bool {
        !self.support.is_empty() && self.support.len() < n
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.support.iter().map(|i| i + 1).collect()
    }

    pub fn is_disjoint(&self, other: &CoordinateIdeal) -> bool {
        self.support.is_disjoint(&other.support)
    }

    /// Whether `span(self)` is mapped into itself by `a`.
    pub fn is_invariant_under(&self, a: &Matrix) -> bool {
        let n = a.dim();
        self.support
            .iter()
            .all(|&j| (0..n).all(|i| self.support.contains(&i) || a.get(i, j) == 0.0))
    }
}

impl fmt::Display for CoordinateIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.one_based().iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

impl Serialize for LatticeVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter())
    }
}

impl Serialize for Functional {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter())
    }
}

impl Serialize for CoordinateIdeal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

/// `x ⊥ y` within tolerance: `min(|x_i|, |y_i|) <= tol * (||x||_∞ + ||y||_∞)` for all `i`.
pub fn disjoint(x: &LatticeVector, y: &LatticeVector, tol: f64) -> Result<bool> {
    check_dim(x.dim(), y.dim())?;
    let bound = tol * (x.sup_norm() + y.sup_norm());
    Ok(x.0.iter().zip(y.0.iter()).all(|(a, b)| a.abs().min(b.abs()) <= bound))
}

/// The closed ideal generated by a set of vectors: the union of their supports.
pub fn ideal_closure(vectors: &[LatticeVector]) -> Result<CoordinateIdeal> {
    ideal_closure_with_tol(vectors, 0.0)
}

/// As [`ideal_closure`], ignoring coordinates with `|v_i| <= tol * ||v||_∞`.
pub fn ideal_closure_with_tol(vectors: &[LatticeVector], tol: f64) -> Result<CoordinateIdeal> {
    let Some(first) = vectors.first() else {
        return Ok(CoordinateIdeal::default());
    };
    let n = first.dim();
    let mut support = BTreeSet::new();
    for v in vectors {
        check_dim(n, v.dim())?;
        let cutoff = tol * v.sup_norm();
        support.extend((0..n).filter(|&i| v.0[i].abs() > cutoff));
    }
    Ok(CoordinateIdeal { support })
}
