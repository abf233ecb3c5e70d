//! The range of a positive projection as a lattice.
//!
//! For a positive projection `P` of rank `r` the range `X_P`, ordered by the
//! cone `P(X_+)` and with meet `x ∧* y = P(x ∧ y)`, is lattice isomorphic to
//! `R^r`. The cone is generated by the columns `P e_j`, so its `r` extreme
//! rays (the atoms) appear among the columns. A column is an atom exactly when
//! its *-meet with every other column is zero or proportional to itself.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{Functional, LatticeVector};
use crate::linalg;

/// Relative size under which a *-meet counts as zero.
const MEET_TOL: f64 = 1e-8;
/// Sup-norm distance of unit vectors under which two directions coincide.
const DIRECTION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct RangeLattice {
    pub rank: usize,
    /// Atoms `x_1 .. x_r`, positive, pairwise *-disjoint, unit sup-norm, ordered
    /// by the first index of their support.
    pub atoms: Vec<LatticeVector>,
    /// Positive functionals with `x_i*(x_j) = δ_ij` and `P = Σ x_i* ⊗ x_i`.
    pub duals: Vec<Functional>,
    /// `||P - Σ x_i* ⊗ x_i||_F`.
    pub reconstruction_error: f64,
}

impl RangeLattice {
    /// Atoms as the columns of an `n x r` matrix.
    pub fn atom_matrix(&self) -> DMatrix<f64> {
        columns(&self.atoms)
    }

    /// Duals as the rows of an `r x n` matrix.
    pub fn dual_matrix(&self) -> DMatrix<f64> {
        let n = self.atoms.first().map_or(0, LatticeVector::dim);
        DMatrix::from_fn(self.duals.len(), n, |i, j| self.duals[i].coords()[j])
    }
}

fn columns(vs: &[LatticeVector]) -> DMatrix<f64> {
    let n = vs.first().map_or(0, LatticeVector::dim);
    DMatrix::from_fn(n, vs.len(), |i, j| vs[j].coords()[i])
}

fn unit_sup(v: &DVector<f64>) -> DVector<f64> {
    v / v.amax()
}

/// `P(u ∧ v)`.
pub fn star_meet(p: &DMatrix<f64>, u: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
    p * u.zip_map(v, f64::min)
}

pub fn range_lattice(p: &DMatrix<f64>, rank_tol: f64) -> Result<RangeLattice> {
    let n = p.nrows();
    let rank = linalg::numerical_rank(p, rank_tol);
    if rank == 0 {
        return Err(Error::RangeNotLattice("zero projection".into()));
    }
    let scale = p.amax();
    let cols: Vec<DVector<f64>> = (0..n)
        .map(|j| p.column(j).into_owned())
        .filter(|c| c.amax() > MEET_TOL * scale)
        .map(|c| unit_sup(&c))
        .collect();
    if cols.iter().any(|c| c.min() < -MEET_TOL) {
        return Err(Error::RangeNotLattice("projection has negative entries".into()));
    }

    let mut atoms: Vec<DVector<f64>> = Vec::new();
    for c in &cols {
        let extreme = cols.iter().all(|d| {
            let m = star_meet(p, c, d);
            let size = m.amax();
            size <= MEET_TOL || (unit_sup(&m) - c).amax() <= DIRECTION_TOL
        });
        if extreme && !atoms.iter().any(|a| (a - c).amax() <= DIRECTION_TOL) {
            atoms.push(c.clone());
        }
    }
    if atoms.len() != rank {
        return Err(Error::RangeNotLattice(format!(
            "found {} atoms for a projection of rank {rank}",
            atoms.len()
        )));
    }
    for a in atoms.iter_mut() {
        a.apply(|v| *v = if v.abs() <= MEET_TOL { 0.0 } else { v.max(0.0) });
    }
    let first_support = |a: &DVector<f64>| a.iter().position(|&v| v > MEET_TOL).unwrap_or(n);
    atoms.sort_by_key(first_support);

    let x = DMatrix::from_columns(&atoms);
    let duals = dual_functionals(p, &x)?;
    let reconstruction_error = linalg::distance(&(&x * &duals), p);
    Ok(RangeLattice {
        rank,
        atoms: atoms.into_iter().map(LatticeVector).collect(),
        duals: duals.row_iter().map(|r| Functional(r.transpose())).collect(),
        reconstruction_error,
    })
}

/// Rows `F` with `P = X F`, i.e. `F = X^+ P`, cleaned of rounding noise.
pub fn dual_functionals(p: &DMatrix<f64>, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let mut f = linalg::pseudo_inverse(x, 1e-12) * p;
    let scale = f.amax();
    f.apply(|v| {
        if v.abs() <= 1e-10 * scale {
            *v = 0.0;
        }
    });
    Ok(f)
}
