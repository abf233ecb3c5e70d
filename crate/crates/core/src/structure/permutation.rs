//! Permutation representation of an irreducible semigroup on the atoms of a
//! minimal projection's range, the common eigenvector `x_0 = Σ x_i`, and the
//! induced block structure of every element.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::eigen;
use crate::error::{Error, Result};
use crate::lattice::{ideal_closure_with_tol, CoordinateIdeal, Functional, LatticeVector};
use crate::linalg;
use crate::semigroup::{ProjectionRecord, SemigroupApprox};

use super::range::range_lattice;
use super::{same_range_diagnosis, Diagnosis};

/// Entries of a compression above this fraction of its largest entry are nonzero.
const SUPPORT_TOL: f64 = 1e-7;
/// Relative entry size selecting a rescaling element.
const RESCALE_TOL: f64 = 1e-8;

/// Action of one stored ray on the atoms: `S x_i = scale · x_{π(i)}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableEntry {
    pub ray: usize,
    /// `r(S_Y)`, the spectral radius of the compression.
    pub scale: f64,
    /// `π_S` with `π(i)` the image of atom `i`; `None` when `S` vanishes on the range.
    pub permutation: Option<Vec<usize>>,
    /// `max_i ||S x_i - scale x_{π(i)}|| / (scale ||x_{π(i)}||)`.
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PermutationStructure {
    /// Index of the projection in the list it was built from.
    pub projection: usize,
    pub diagnosis: Diagnosis,
    /// Rescaled atoms `x_1 .. x_r`.
    pub basis: Vec<LatticeVector>,
    /// Matching duals `x_1* .. x_r*`.
    pub duals: Vec<Functional>,
    /// Factors `μ_i` applied to the sup-normalized atoms.
    pub scalings: Vec<f64>,
    pub table: Vec<TableEntry>,
    /// Distinct permutations occurring in the table.
    pub group: Vec<Vec<usize>>,
    pub transitive: bool,
    /// Dimension of the common fixed space of the permutations on `R^r`.
    pub fixed_space_dim: usize,
    pub x0: LatticeVector,
    /// Emitted only when the minimal projection is unique.
    pub x0star: Option<Functional>,
}

impl PermutationStructure {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_matrix(&self) -> DMatrix<f64> {
        let n = self.x0.dim();
        DMatrix::from_fn(n, self.rank(), |i, j| self.basis[j].coords()[i])
    }

    pub fn dual_matrix(&self) -> DMatrix<f64> {
        let n = self.x0.dim();
        DMatrix::from_fn(self.rank(), n, |i, j| self.duals[i].coords()[j])
    }

    /// `F S X` in the rescaled basis.
    pub fn compression(&self, s: &DMatrix<f64>) -> DMatrix<f64> {
        self.dual_matrix() * s * self.basis_matrix()
    }

    /// `(r(S_Y), π_S)` for an arbitrary matrix leaving the range invariant.
    pub fn classify(&self, s: &DMatrix<f64>) -> Result<(f64, Option<Vec<usize>>)> {
        classify_compression(&self.compression(s))
    }

    pub fn entry(&self, ray: usize) -> Option<&TableEntry> {
        self.table.iter().find(|e| e.ray == ray)
    }
}

/// Reads a compression as a scalar multiple of a permutation.
pub fn classify_compression(c: &DMatrix<f64>) -> Result<(f64, Option<Vec<usize>>)> {
    let r = c.nrows();
    let top = c.amax();
    if top <= 1e-12 {
        return Ok((0.0, None));
    }
    let mut perm = vec![0; r];
    let mut hit = vec![false; r];
    for i in 0..r {
        let big: Vec<usize> = (0..r).filter(|&j| c[(j, i)].abs() > SUPPORT_TOL * top).collect();
        if big.len() != 1 {
            return Err(Error::NotWeightedPermutation(format!(
                "column {} of the compression has {} significant entries",
                i + 1,
                big.len()
            )));
        }
        if hit[big[0]] {
            return Err(Error::NotWeightedPermutation(format!(
                "atom {} is hit twice",
                big[0] + 1
            )));
        }
        hit[big[0]] = true;
        perm[i] = big[0];
    }
    Ok((eigen::max_modulus(c)?, Some(perm)))
}

pub fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&i| p[i]).collect()
}

pub fn permutation_order(p: &[usize]) -> usize {
    let mut id: Vec<usize> = (0..p.len()).collect();
    let start = id.clone();
    for k in 1..=factorial_cap(p.len()) {
        id = compose(p, &id);
        if id == start {
            return k;
        }
    }
    unreachable!("a permutation has finite order")
}

fn factorial_cap(r: usize) -> usize {
    (1..=r)
        .try_fold(1usize, |acc, k| acc.checked_mul(k))
        .unwrap_or(usize::MAX)
}

fn permutation_matrix(p: &[usize]) -> DMatrix<f64> {
    let r = p.len();
    DMatrix::from_fn(r, r, |i, j| if p[j] == i { 1.0 } else { 0.0 })
}

pub fn permutation_structure(
    approx: &SemigroupApprox,
    projections: &[ProjectionRecord],
    index: usize,
) -> Result<PermutationStructure> {
    let diagnosis = same_range_diagnosis(approx, projections)?.diagnosis;
    if diagnosis == Diagnosis::DistinctRanges {
        return Err(Error::DistinctRanges);
    }
    let record = projections
        .get(index)
        .ok_or_else(|| Error::InvalidParameter(format!("no projection with index {index}")))?;
    let lattice = range_lattice(record.as_dmatrix(), approx.config.tolerances.rank)?;
    let r = lattice.rank;
    let mut x = lattice.atom_matrix();
    let mut f = lattice.dual_matrix();

    // Rescale so that a fixed element carries x_1 to exactly r(S_Y) x_i.
    let mut scalings = vec![1.0; r];
    for i in 1..r {
        let found = approx.rays.iter().find_map(|ray| {
            let c = &f * ray.matrix.as_dmatrix() * &x;
            let top = c.amax();
            (top > 0.0 && c[(i, 0)] > RESCALE_TOL * top).then_some(c)
        });
        let c =
            found.ok_or_else(|| Error::NotWeightedPermutation(format!("no element maps atom 1 to atom {}", i + 1)))?;
        let radius = eigen::max_modulus(&c)?;
        scalings[i] = c[(i, 0)] / radius;
    }
    for i in 0..r {
        x.column_mut(i).scale_mut(scalings[i]);
        f.row_mut(i).unscale_mut(scalings[i]);
    }

    let mut table = Vec::with_capacity(approx.rays.len());
    for (ray_index, ray) in approx.rays.iter().enumerate() {
        let s = ray.matrix.as_dmatrix();
        let (scale, permutation) = classify_compression(&(&f * s * &x))?;
        let residual = match &permutation {
            Some(p) => (0..r)
                .map(|i| {
                    let target = x.column(p[i]);
                    (s * x.column(i) - target * scale).norm() / (scale * target.norm())
                })
                .fold(0.0, f64::max),
            None => (s * &x).norm(),
        };
        table.push(TableEntry {
            ray: ray_index,
            scale,
            permutation,
            residual,
        });
    }

    let mut group: Vec<Vec<usize>> = Vec::new();
    for e in &table {
        if let Some(p) = &e.permutation {
            if !group.contains(p) {
                group.push(p.clone());
            }
        }
    }
    let mut orbit = vec![false; r];
    orbit[0] = true;
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        for p in &group {
            if !orbit[p[i]] {
                orbit[p[i]] = true;
                stack.push(p[i]);
            }
        }
    }
    let transitive = orbit.iter().all(|&b| b);

    let fixed_space_dim = if group.is_empty() {
        r
    } else {
        let mut stacked = DMatrix::zeros(r * group.len(), r);
        for (k, p) in group.iter().enumerate() {
            let d = permutation_matrix(p) - DMatrix::<f64>::identity(r, r);
            stacked.view_mut((k * r, 0), (r, r)).copy_from(&d);
        }
        r - linalg::numerical_rank(&stacked, 1e-8)
    };

    let basis: Vec<LatticeVector> = x.column_iter().map(|c| LatticeVector(c.into_owned())).collect();
    let duals: Vec<Functional> = f.row_iter().map(|row| Functional(row.transpose())).collect();
    let x0 = LatticeVector(x.column_sum());
    let x0star = (diagnosis == Diagnosis::UniqueProjection).then(|| Functional(f.row_sum().transpose()));
    Ok(PermutationStructure {
        projection: index,
        diagnosis,
        basis,
        duals,
        scalings,
        table,
        group,
        transitive,
        fixed_space_dim,
        x0,
        x0star,
    })
}

/// Worst violations of `π_{ST} = π_S ∘ π_T` and `c_{ST} = c_S c_T` over pairs of stored rays.
#[derive(Debug, Clone, Serialize)]
pub struct GroupLaw {
    pub pairs: usize,
    /// `max |c_{ST} - c_S c_T| / max(c_S c_T, 1e-12)` over pairs with nonzero compressions.
    pub max_scale_gap: f64,
    /// Ray pairs whose product acts by a different permutation, or not by one at all.
    pub mismatches: Vec<(usize, usize)>,
}

pub fn group_law(approx: &SemigroupApprox, ps: &PermutationStructure, max_rays: usize) -> Result<GroupLaw> {
    let m = approx.rays.len().min(max_rays);
    let mut law = GroupLaw {
        pairs: 0,
        max_scale_gap: 0.0,
        mismatches: Vec::new(),
    };
    for i in 0..m {
        for j in 0..m {
            let (a, b) = (&ps.table[i], &ps.table[j]);
            let product = approx.rays[i].matrix.as_dmatrix() * approx.rays[j].matrix.as_dmatrix();
            law.pairs += 1;
            let classified = ps.classify(&product);
            match (&a.permutation, &b.permutation, classified) {
                (Some(p), Some(q), Ok((scale, Some(pq)))) => {
                    let expected = a.scale * b.scale;
                    law.max_scale_gap = law.max_scale_gap.max((scale - expected).abs() / expected.max(1e-12));
                    if pq != compose(p, q) {
                        law.mismatches.push((i, j));
                    }
                }
                (None, _, Ok((_, None))) | (_, None, Ok((_, None))) => {}
                _ => law.mismatches.push((i, j)),
            }
        }
    }
    Ok(law)
}

#[derive(Debug, Clone, Serialize)]
pub struct CommonEigenvector {
    pub x0: LatticeVector,
    pub x0star: Option<Functional>,
    /// Eigenvalue `r(S_Y)` of each stored ray, in ray order.
    pub scalars: Vec<f64>,
    /// `max ||S x_0 - r(S_Y) x_0|| / ||x_0||` over unit rays.
    pub max_residual: f64,
    pub max_dual_residual: Option<f64>,
    /// Quasi-interior (weak unit) in finite dimension: every coordinate positive.
    pub strictly_positive: bool,
    pub dual_strictly_positive: Option<bool>,
    /// The fixed space of the permutation group is one-dimensional.
    pub unique: bool,
    /// Reason the dual eigenfunctional was withheld.
    pub dual_caveat: Option<String>,
}

pub fn common_eigenvector(approx: &SemigroupApprox, ps: &PermutationStructure) -> Result<CommonEigenvector> {
    if !ps.transitive {
        return Err(Error::NotWeightedPermutation(
            "permutation group is not transitive".into(),
        ));
    }
    let x0 = &ps.x0.0;
    let scalars: Vec<f64> = ps.table.iter().map(|e| e.scale).collect();
    let max_residual = approx
        .rays
        .iter()
        .zip(&scalars)
        .map(|(ray, &c)| (ray.matrix.as_dmatrix() * x0 - x0 * c).norm() / x0.norm())
        .fold(0.0, f64::max);
    let max_dual_residual = ps.x0star.as_ref().map(|fs| {
        approx
            .rays
            .iter()
            .zip(&scalars)
            .map(|(ray, &c)| (ray.matrix.as_dmatrix().transpose() * &fs.0 - &fs.0 * c).norm() / fs.0.norm())
            .fold(0.0, f64::max)
    });
    let dual_caveat = ps.x0star.is_none().then(|| {
        "dual eigenfunctional withheld: the minimal projection is not unique, so the adjoint semigroup need not have a common eigenfunctional".to_string()
    });
    Ok(CommonEigenvector {
        x0: ps.x0.clone(),
        x0star: ps.x0star.clone(),
        scalars,
        max_residual,
        max_dual_residual,
        strictly_positive: ps.x0.is_strictly_positive(),
        dual_strictly_positive: ps.x0star.as_ref().map(|f| f.coords().iter().all(|&v| v > 0.0)),
        unique: ps.fixed_space_dim == 1,
        dual_caveat,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockDecomposition {
    /// Support of each atom; `S` maps block `i` into block `π_S(i)`.
    pub blocks: Vec<CoordinateIdeal>,
    /// The blocks cover every coordinate.
    pub exhaustive: bool,
    /// Block pattern of each ray read as a permutation, when it is one.
    pub patterns: Vec<Option<Vec<usize>>>,
    /// Rays whose block pattern differs from their table permutation.
    pub mismatched: Vec<usize>,
}

pub fn block_decomposition(approx: &SemigroupApprox, ps: &PermutationStructure) -> Result<BlockDecomposition> {
    let n = ps.x0.dim();
    let r = ps.rank();
    let blocks: Vec<CoordinateIdeal> = ps
        .basis
        .iter()
        .map(|x| ideal_closure_with_tol(std::slice::from_ref(x), 1e-9))
        .collect::<Result<_>>()?;
    for i in 0..r {
        for j in (i + 1)..r {
            if !blocks[i].is_disjoint(&blocks[j]) {
                return Err(Error::DisjointnessViolated(i + 1, j + 1));
            }
        }
    }
    let covered: usize = blocks.iter().map(CoordinateIdeal::len).sum();

    let mut patterns = Vec::with_capacity(approx.rays.len());
    let mut mismatched = Vec::new();
    for (ray, entry) in approx.rays.iter().zip(&ps.table) {
        let s = ray.matrix.as_dmatrix();
        let thr = 1e-9 * s.amax();
        let nonzero = |a: usize, b: usize| {
            blocks[a]
                .support()
                .iter()
                .any(|&i| blocks[b].support().iter().any(|&j| s[(i, j)] > thr))
        };
        let mut pattern = Some(vec![0; r]);
        for b in 0..r {
            let targets: Vec<usize> = (0..r).filter(|&a| nonzero(a, b)).collect();
            match (targets.len(), pattern.as_mut()) {
                (1, Some(p)) => p[b] = targets[0],
                _ => pattern = None,
            }
        }
        let expected = entry.permutation.clone();
        if pattern != expected && !(expected.is_none() && (0..r).all(|b| (0..r).all(|a| !nonzero(a, b)))) {
            mismatched.push(entry.ray);
        }
        patterns.push(pattern);
    }
    Ok(BlockDecomposition {
        blocks,
        exhaustive: covered == n,
        patterns,
        mismatched,
    })
}
