//! Two commuting nonnegative matrices `S`, `K`, one of them irreducible: they
//! share a strictly positive eigenvector `x_0` with `K x_0 = r(K) x_0`, and
//! dually a strictly positive eigenfunctional; local spectral radii of `K` at
//! positive vectors equal `r(K)`.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::irreducibility;
use crate::lattice::{Functional, LatticeVector, Matrix};
use crate::linalg;
use crate::semigroup::{generate_ball_with, rank_r_projections, BallConfig};
use crate::spectral;

use super::permutation::permutation_structure;
use super::verify::{local_radius_sequence, positive_sample};

const COMMUTE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairConfig {
    pub horizon: usize,
    pub samples: usize,
    pub seed: u64,
    /// Word length of the ball used for the semigroup cross-check.
    pub length: usize,
}

impl Default for PairConfig {
    fn default() -> Self {
        PairConfig {
            horizon: 200,
            samples: 10,
            seed: 0,
            length: 4,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalRadii {
    /// `||K^n x||^(1/n)`, `n = 1..=horizon`, one sequence per sample.
    pub k: Vec<Vec<f64>>,
    pub s: Vec<Vec<f64>>,
    /// `||(K^T)^n x*||^(1/n)`.
    pub k_dual: Vec<Vec<f64>>,
    pub s_dual: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairReport {
    pub commutator: f64,
    pub s_irreducible: bool,
    pub k_irreducible: bool,
    /// Eigenvalue of `S` at `x_0`.
    pub lambda: f64,
    pub r_k: f64,
    pub x0: LatticeVector,
    pub x0star: Functional,
    /// Relative residuals of `S x0 = λ x0`, `K x0 = r(K) x0`, `S^T x0* = λ x0*`, `K^T x0* = r(K) x0*`.
    pub residuals: [f64; 4],
    pub x0_strictly_positive: bool,
    pub x0star_strictly_positive: bool,
    /// Angle between `x_0` and the common eigenvector obtained from the
    /// permutation structure of the generated semigroup, when available.
    pub semigroup_angle: Option<f64>,
    pub semigroup_note: Option<String>,
    #[serde(skip)]
    pub local_radii: LocalRadii,
    /// Final values `||K^N x||^(1/N)` and their dual counterparts.
    pub k_final: Vec<f64>,
    pub k_dual_final: Vec<f64>,
    pub s_final: Vec<f64>,
    pub s_dual_final: Vec<f64>,
}

/// Strictly positive eigenvector of an irreducible nonnegative matrix, unit sum.
fn positive_eigenvector(m: &DMatrix<f64>) -> Result<DVector<f64>> {
    let mat = Matrix::from_computed(m.clone(), 1e-12)?;
    Ok(spectral::perron_vector(&mat)?.0)
}

fn eigen_residual(m: &DMatrix<f64>, v: &DVector<f64>, value: f64) -> f64 {
    (m * v - v * value).norm() / (value.abs().max(1e-300) * v.norm())
}

pub fn analyze_commuting_pair(s: &Matrix, k: &Matrix, config: &PairConfig) -> Result<PairReport> {
    if s.dim() != k.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            found: k.dim(),
        });
    }
    let (sd, kd) = (s.as_dmatrix(), k.as_dmatrix());
    if s.is_zero() || k.is_zero() {
        return Err(Error::InvalidParameter("both operators must be nonzero".into()));
    }
    let commutator = (sd * kd - kd * sd).norm();
    if commutator > COMMUTE_TOL * sd.norm() * kd.norm() {
        return Err(Error::NotCommuting(commutator));
    }
    let s_irreducible = irreducibility::is_ideal_irreducible(std::slice::from_ref(s))?.verdict;
    let k_irreducible = irreducibility::is_ideal_irreducible(std::slice::from_ref(k))?.verdict;
    if !s_irreducible && !k_irreducible {
        return Err(Error::BothReducible);
    }

    // S + K is irreducible and commutes with both, so its Perron vector is a common eigenvector.
    let sum = sd + kd;
    let x0 = positive_eigenvector(&sum)?;
    let y0 = positive_eigenvector(&sum.transpose())?;
    let lambda = x0.dot(&(sd * &x0)) / x0.dot(&x0);
    let r_k = spectral::spectral_radius(k)?;
    let residuals = [
        eigen_residual(sd, &x0, lambda),
        eigen_residual(kd, &x0, r_k),
        eigen_residual(&sd.transpose(), &y0, lambda),
        eigen_residual(&kd.transpose(), &y0, r_k),
    ];

    let (semigroup_angle, semigroup_note) = match semigroup_eigenvector(s, k, config.length) {
        Ok(v) => {
            let a = DMatrix::from_column_slice(v.len(), 1, (&v / v.norm()).as_slice());
            let b = DMatrix::from_column_slice(x0.len(), 1, (&x0 / x0.norm()).as_slice());
            (Some(linalg::max_principal_angle(&a, &b)), None)
        }
        Err(e) => (None, Some(format!("semigroup cross-check unavailable: {e}"))),
    };

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = s.dim();
    let mut local = LocalRadii {
        k: vec![],
        s: vec![],
        k_dual: vec![],
        s_dual: vec![],
    };
    let (kt, st) = (kd.transpose(), sd.transpose());
    for _ in 0..config.samples {
        let x = positive_sample(&mut rng, n);
        let xs = positive_sample(&mut rng, n);
        local.k.push(local_radius_sequence(kd, &x, config.horizon));
        local.s.push(local_radius_sequence(sd, &x, config.horizon));
        local.k_dual.push(local_radius_sequence(&kt, &xs, config.horizon));
        local.s_dual.push(local_radius_sequence(&st, &xs, config.horizon));
    }
    let finals = |seqs: &Vec<Vec<f64>>| {
        seqs.iter()
            .map(|q| q.last().copied().unwrap_or(0.0))
            .collect::<Vec<_>>()
    };

    Ok(PairReport {
        commutator,
        s_irreducible,
        k_irreducible,
        lambda,
        r_k,
        x0_strictly_positive: x0.iter().all(|&v| v > 0.0),
        x0star_strictly_positive: y0.iter().all(|&v| v > 0.0),
        x0: LatticeVector(x0),
        x0star: Functional(y0),
        residuals,
        semigroup_angle,
        semigroup_note,
        k_final: finals(&local.k),
        k_dual_final: finals(&local.k_dual),
        s_final: finals(&local.s),
        s_dual_final: finals(&local.s_dual),
        local_radii: local,
    })
}

/// `x_0 = Σ x_i` from the permutation structure of the semigroup generated by `S` and `K`.
fn semigroup_eigenvector(s: &Matrix, k: &Matrix, length: usize) -> Result<DVector<f64>> {
    let ball = generate_ball_with(&[s.clone(), k.clone()], &BallConfig::new(length))?;
    let projections = rank_r_projections(&ball)?;
    let ps = permutation_structure(&ball, &projections, 0)?;
    Ok(ps.x0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_with_itself() {
        let c = Matrix::cyclic_shift(3);
        let rep = analyze_commuting_pair(&c, &c, &PairConfig::default()).unwrap();
        assert!((rep.lambda - 1.0).abs() < 1e-12 && (rep.r_k - 1.0).abs() < 1e-12);
        let x = rep.x0.coords();
        assert!((x[0] - x[1]).abs() < 1e-12 && (x[1] - x[2]).abs() < 1e-12);
    }

    #[test]
    fn polynomial_in_weighted_cycle() {
        let k = Matrix::from_rows(&[vec![0.0, 2.0], vec![3.0, 0.0]]).unwrap();
        let kd = k.as_dmatrix();
        let s = Matrix::from_dmatrix(kd * kd + kd * 2.0).unwrap();
        let rep = analyze_commuting_pair(&s, &k, &PairConfig::default()).unwrap();
        let r6 = 6f64.sqrt();
        assert!((rep.r_k - r6).abs() < 1e-12);
        assert!((rep.lambda - (6.0 + 2.0 * r6)).abs() < 1e-10);
        assert!(rep.residuals.iter().all(|&r| r < 1e-10));
        assert!(rep.semigroup_angle.unwrap() < 1e-7);
    }

    #[test]
    fn rejects_non_commuting_and_reducible() {
        let a = Matrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let b = Matrix::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert!(matches!(
            analyze_commuting_pair(&a, &b, &PairConfig::default()),
            Err(Error::NotCommuting(_))
        ));
        let i = Matrix::identity(2);
        assert!(matches!(
            analyze_commuting_pair(&i, &i, &PairConfig::default()),
            Err(Error::BothReducible)
        ));
    }
}
