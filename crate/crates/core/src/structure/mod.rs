//! Lattice and permutation structure carried by the minimal projections of an
//! irreducible semigroup, and the theorems built on it.

pub mod pair;
pub mod permutation;
pub mod range;
pub mod single;
pub mod verify;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::semigroup::{same_range, ProjectionRecord, SemigroupApprox};

pub use pair::{analyze_commuting_pair, PairConfig, PairReport};
pub use permutation::{
    block_decomposition, common_eigenvector, group_law, permutation_structure, BlockDecomposition, CommonEigenvector,
    GroupLaw, PermutationStructure, TableEntry,
};
pub use range::{range_lattice, RangeLattice};
pub use single::{analyze_single, SingleOperatorReport};
pub use verify::{verify_structure_theorems, Check, CheckStatus, StructureVerificationReport, VerifyConfig};

const RANGE_TOL: f64 = 1e-6;
const COMMUTE_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Diagnosis {
    DistinctRanges,
    SameRangeMultiple,
    UniqueProjection,
}

impl std::fmt::Display for Diagnosis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Diagnosis::DistinctRanges => "DistinctRanges",
            Diagnosis::SameRangeMultiple => "SameRangeMultiple",
            Diagnosis::UniqueProjection => "UniqueProjection",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SameRangeReport {
    pub diagnosis: Diagnosis,
    /// Largest principal angle between the ranges of each pair of projections.
    pub pairwise_angles: Vec<(usize, usize, f64)>,
    /// Every minimal-rank ray has the range of the first projection.
    pub minimal_rays_share_range: bool,
    /// `max ||(I - P) S P||_F` over stored rays, `P` the first projection.
    pub invariance_defect: f64,
    pub range_invariant: bool,
    /// In the single-projection case: whether `P` commutes with every stored ray.
    pub commutes: Option<bool>,
    pub max_commutator: Option<f64>,
}

pub fn same_range_diagnosis(approx: &SemigroupApprox, projections: &[ProjectionRecord]) -> Result<SameRangeReport> {
    let first = projections.first().ok_or(Error::NoProjection)?;
    let p0 = first.as_dmatrix();
    let n = p0.nrows();
    let tol = &approx.config.tolerances;
    let bases: Vec<DMatrix<f64>> = projections
        .iter()
        .map(|p| linalg::range_basis(p.as_dmatrix(), tol.rank))
        .collect();
    let mut pairwise_angles = Vec::new();
    let mut all_same = true;
    for i in 0..projections.len() {
        for j in (i + 1)..projections.len() {
            pairwise_angles.push((i, j, linalg::max_principal_angle(&bases[i], &bases[j])));
            all_same &= same_range(projections[i].as_dmatrix(), projections[j].as_dmatrix(), RANGE_TOL);
        }
    }
    let minimal_rays_share_range = approx.minimal_indices().iter().all(|&i| {
        let b = linalg::range_basis(approx.rays[i].matrix.as_dmatrix(), tol.rank);
        linalg::max_principal_angle(&b, &bases[0]) <= RANGE_TOL
    });
    let complement = DMatrix::<f64>::identity(n, n) - p0;
    let invariance_defect = approx
        .rays
        .iter()
        .map(|r| (&complement * r.matrix.as_dmatrix() * p0).norm())
        .fold(0.0, f64::max);
    let range_invariant = invariance_defect <= RANGE_TOL * (1.0 + p0.norm());

    let diagnosis = if projections.len() == 1 {
        Diagnosis::UniqueProjection
    } else if all_same {
        Diagnosis::SameRangeMultiple
    } else {
        Diagnosis::DistinctRanges
    };
    let (commutes, max_commutator) = if diagnosis == Diagnosis::UniqueProjection {
        let worst = approx
            .rays
            .iter()
            .map(|r| {
                let s = r.matrix.as_dmatrix();
                linalg::distance(&(p0 * s), &(s * p0))
            })
            .fold(0.0, f64::max);
        (Some(worst <= COMMUTE_TOL * (1.0 + p0.norm())), Some(worst))
    } else {
        (None, None)
    };
    Ok(SameRangeReport {
        diagnosis,
        pairwise_angles,
        minimal_rays_share_range,
        invariance_defect,
        range_invariant,
        commutes,
        max_commutator,
    })
}

/// Dimension of the common fixed space `∩ ran P_i` of the minimal projections.
pub fn fixed_space_intersection_dim(projections: &[ProjectionRecord]) -> usize {
    let Some(first) = projections.first() else { return 0 };
    let n = first.as_dmatrix().nrows();
    let mut stacked = DMatrix::zeros(n * projections.len(), n);
    for (k, p) in projections.iter().enumerate() {
        let d = DMatrix::<f64>::identity(n, n) - p.as_dmatrix();
        stacked.view_mut((k * n, 0), (n, n)).copy_from(&d);
    }
    n - linalg::numerical_rank(&stacked, 1e-8)
}
