//! Finite approximations of the `R_+`-closed semigroup generated by a family
//! of nonnegative matrices, and the minimal-rank objects living in it:
//! the ideal of minimal-rank rays, the minimal projections, flanking
//! projections and minimal right ideals.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use ordered_float::OrderedFloat;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{LatticeVector, Matrix, Tolerances};
use crate::linalg;
use crate::spectral::{self, ReturnScan};

/// Tolerance for identifying analytically constructed limits with stored rays.
const LIMIT_DEDUP: f64 = 1e-7;
/// Tolerance for identifying projections.
const PROJECTION_DEDUP: f64 = 1e-7;
/// Tolerance for ray membership in right ideals.
const IDEAL_TOL: f64 = 1e-6;
/// Longest return time searched when injecting peripheral limits.
const INJECTION_HORIZON: usize = 10_000;

/// A set of unit-norm matrices with tolerance lookup. Candidates are found by
/// a range query on a fixed linear functional, then confirmed by Frobenius
/// distance.
#[derive(Debug, Clone)]
pub struct RaySet {
    weights: Vec<f64>,
    index: BTreeMap<OrderedFloat<f64>, Vec<usize>>,
    items: Vec<DMatrix<f64>>,
}

impl RaySet {
    pub fn new(n: usize) -> RaySet {
        let mut weights: Vec<f64> = (0..n * n)
            .map(|k| ((k as f64 + 1.0) * 0.618_033_988_749_894_8).fract() + 0.5)
            .collect();
        let norm = weights.iter().map(|w| w * w).sum::<f64>().sqrt();
        weights.iter_mut().for_each(|w| *w /= norm);
        RaySet {
            weights,
            index: BTreeMap::new(),
            items: Vec::new(),
        }
    }

    fn key(&self, m: &DMatrix<f64>) -> f64 {
        m.iter().zip(&self.weights).map(|(a, w)| a * w).sum()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[DMatrix<f64>] {
        &self.items
    }

    /// Earliest stored item within `tol` of `m`.
    pub fn find(&self, m: &DMatrix<f64>, tol: f64) -> Option<usize> {
        let k = self.key(m);
        self.index
            .range(OrderedFloat(k - tol)..=OrderedFloat(k + tol))
            .flat_map(|(_, ids)| ids.iter().copied())
            .filter(|&i| linalg::distance(&self.items[i], m) <= tol)
            .min()
    }

    /// Inserts `m` unless an item within `tol` exists; returns the index and
    /// whether `m` was new.
    pub fn insert(&mut self, m: DMatrix<f64>, tol: f64) -> (usize, bool) {
        if let Some(i) = self.find(&m, tol) {
            return (i, false);
        }
        (self.push(m), true)
    }

    /// Appends `m` without a duplicate check.
    pub fn push(&mut self, m: DMatrix<f64>) -> usize {
        let k = OrderedFloat(self.key(&m));
        let id = self.items.len();
        self.items.push(m);
        self.index.entry(k).or_default().push(id);
        id
    }

    /// True iff every item of `self` is within `tol` of an item of `other`.
    pub fn is_subset_of(&self, other: &RaySet, tol: f64) -> bool {
        self.items.iter().all(|m| other.find(m, tol).is_some())
    }
}

/// Unit-Frobenius representative, or `None` for a zero matrix.
pub fn normalize(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let norm = m.norm();
    (norm > 0.0 && norm.is_finite()).then(|| m / norm)
}

/// How a ray entered the approximation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Origin {
    /// The product `G_{w0} G_{w1} ...`.
    Word(Vec<usize>),
    /// `(T / r(T))^power P_T` for the ray `T` at index `source`, with `P_T` its
    /// peripheral projection.
    Peripheral { source: usize, power: usize },
    /// `U^power N^k ⊕ 0` for the ray at index `source`.
    NilpotentLimit { source: usize, power: usize },
}

#[derive(Debug, Clone)]
pub struct Ray {
    /// Unit Frobenius norm.
    pub matrix: Matrix,
    pub origin: Origin,
    pub rank: usize,
    pub radius: f64,
}

impl Ray {
    pub fn word(&self) -> Option<&[usize]> {
        match &self.origin {
            Origin::Word(w) => Some(w),
            _ => None,
        }
    }

    pub fn is_word(&self) -> bool {
        matches!(self.origin, Origin::Word(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallConfig {
    pub length: usize,
    pub tau_dup: f64,
    pub cap: usize,
    /// Add the peripheral projections and nilpotent limits of every word ray.
    pub inject_limits: bool,
    pub tolerances: Tolerances,
}

impl BallConfig {
    pub fn new(length: usize) -> BallConfig {
        BallConfig {
            length,
            tau_dup: Tolerances::default().dedup,
            cap: 200_000,
            inject_limits: true,
            tolerances: Tolerances::default(),
        }
    }
}

/// Rays of all products of length at most `length`, deduplicated, plus the
/// analytically known limits of their powers.
#[derive(Debug, Clone)]
pub struct SemigroupApprox {
    pub gens: Vec<Matrix>,
    pub config: BallConfig,
    pub rays: Vec<Ray>,
    /// Shortest (length-lex first) word whose product is zero, if any.
    pub zero_word: Option<Vec<usize>>,
    /// Word rays whose peripheral data could not be computed (no limits injected).
    pub injection_skipped: usize,
    set: RaySet,
}

pub fn generate_ball(gens: &[Matrix], length: usize, tau_dup: f64) -> Result<SemigroupApprox> {
    generate_ball_with(
        gens,
        &BallConfig {
            tau_dup,
            ..BallConfig::new(length)
        },
    )
}

pub fn generate_ball_with(gens: &[Matrix], config: &BallConfig) -> Result<SemigroupApprox> {
    let first = gens.first().ok_or(Error::Empty("generator list"))?;
    let n = first.dim();
    for g in gens {
        if g.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: g.dim(),
            });
        }
    }
    if config.length == 0 {
        return Err(Error::InvalidParameter("word length must be at least 1".into()));
    }
    let tol = &config.tolerances;
    let mut set = RaySet::new(n);
    let mut words: Vec<Vec<usize>> = Vec::new();
    let mut zero_word = None;
    let mut frontier: Vec<usize> = Vec::new();

    // Length one, then extend the previous layer on the right.
    for (g, m) in gens.iter().enumerate() {
        push_product(
            &mut set,
            &mut words,
            &mut zero_word,
            &mut frontier,
            m.as_dmatrix(),
            vec![g],
            config,
        )?;
    }
    for _ in 1..config.length {
        let layer = std::mem::take(&mut frontier);
        for &i in &layer {
            for (g, m) in gens.iter().enumerate() {
                let product = &set.items[i] * m.as_dmatrix();
                let mut word = words[i].clone();
                word.push(g);
                push_product(
                    &mut set,
                    &mut words,
                    &mut zero_word,
                    &mut frontier,
                    &product,
                    word,
                    config,
                )?;
            }
        }
        if frontier.is_empty() {
            break;
        }
    }

    let mut rays = Vec::with_capacity(set.len());
    for (m, w) in set.items.iter().zip(words) {
        rays.push(make_ray(m.clone(), Origin::Word(w), tol)?);
    }

    let mut injection_skipped = 0;
    if config.inject_limits {
        let word_count = rays.len();
        for source in 0..word_count {
            if rays[source].radius <= 0.0 {
                continue;
            }
            match asymptotic_limits(&rays[source].matrix, tol) {
                Ok(limits) => {
                    for (origin, m) in limits.into_iter().map(|(nil, power, m)| {
                        let origin = if nil {
                            Origin::NilpotentLimit { source, power }
                        } else {
                            Origin::Peripheral { source, power }
                        };
                        (origin, m)
                    }) {
                        let ray = make_ray(m.clone(), origin, tol)?;
                        // A fast-converging power can sit within tolerance of its limit
                        // while still having higher numerical rank; keep both.
                        let fresh = match set.find(&m, LIMIT_DEDUP.max(config.tau_dup)) {
                            Some(i) => rays[i].rank != ray.rank,
                            None => true,
                        };
                        if fresh {
                            set.push(m);
                            rays.push(ray);
                            if rays.len() > config.cap {
                                return Err(Error::BallExplosion {
                                    elements: rays.len(),
                                    length: config.length,
                                });
                            }
                        }
                    }
                }
                Err(_) => injection_skipped += 1,
            }
        }
    }

    Ok(SemigroupApprox {
        gens: gens.to_vec(),
        config: *config,
        rays,
        zero_word,
        injection_skipped,
        set,
    })
}

fn push_product(
    set: &mut RaySet,
    words: &mut Vec<Vec<usize>>,
    zero_word: &mut Option<Vec<usize>>,
    frontier: &mut Vec<usize>,
    product: &DMatrix<f64>,
    word: Vec<usize>,
    config: &BallConfig,
) -> Result<()> {
    match normalize(product) {
        None => {
            if zero_word.is_none() {
                *zero_word = Some(word);
            }
        }
        Some(ray) => {
            let (id, fresh) = set.insert(ray, config.tau_dup);
            if fresh {
                words.push(word);
                frontier.push(id);
                if set.len() > config.cap {
                    return Err(Error::BallExplosion {
                        elements: set.len(),
                        length: word_len(words),
                    });
                }
            }
        }
    }
    Ok(())
}

fn word_len(words: &[Vec<usize>]) -> usize {
    words.last().map_or(0, Vec::len)
}

fn make_ray(m: DMatrix<f64>, origin: Origin, tol: &Tolerances) -> Result<Ray> {
    let matrix = Matrix::from_computed(m, 1e-9)?;
    let rank = linalg::numerical_rank(matrix.as_dmatrix(), tol.rank);
    let radius = spectral::spectral_radius(&matrix)?;
    Ok(Ray {
        matrix,
        origin,
        rank,
        radius,
    })
}

/// Normalized limits in `R_+ T`: the matrices `(T/r)^k P` for `k < q` when the
/// peripheral part is semisimple (`q` the order of `U`), otherwise
/// `U^t N^k ⊕ 0` for `t < q`. Each entry is `(nilpotent, power, ray)`.
pub fn asymptotic_limits(t: &Matrix, tol: &Tolerances) -> Result<Vec<(bool, usize, DMatrix<f64>)>> {
    let data = spectral::peripheral_split_with(t, tol)?;
    let scan = ReturnScan {
        max_power: INJECTION_HORIZON,
        ..ReturnScan::default()
    };
    let q = spectral::unimodular_order(&data.unimodular, &scan)?;
    let k = data.nilpotency_index;
    let base = if k == 0 {
        DMatrix::identity(data.dim(), data.dim())
    } else {
        linalg::power(&data.nilpotent, k)
    };
    let mut out = Vec::with_capacity(q);
    let mut acc = base;
    for power in 0..q {
        let full = &data.x1_basis * &acc * &data.x1_coords;
        if let Some(ray) = normalize(&full) {
            let clean = Matrix::from_computed(ray, 1e-8)?;
            if let Some(ray) = normalize(clean.as_dmatrix()) {
                out.push((k > 0, power, ray));
            }
        }
        acc = &data.unimodular * acc;
    }
    Ok(out)
}

impl SemigroupApprox {
    pub fn dim(&self) -> usize {
        self.gens[0].dim()
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn word_rays(&self) -> impl Iterator<Item = (usize, &Ray)> {
        self.rays.iter().enumerate().filter(|(_, r)| r.is_word())
    }

    /// Index of a stored ray within `tol` of the ray of `m`.
    pub fn find(&self, m: &DMatrix<f64>, tol: f64) -> Option<usize> {
        normalize(m).and_then(|ray| self.set.find(&ray, tol))
    }

    /// Smallest rank of a nonzero ray; `None` stands for `+∞`.
    pub fn minrank(&self) -> Option<usize> {
        self.rays.iter().map(|r| r.rank).filter(|&r| r > 0).min()
    }

    /// Indices of the rays of minimal rank.
    pub fn minimal_indices(&self) -> Vec<usize> {
        match self.minrank() {
            Some(r) => (0..self.rays.len()).filter(|&i| self.rays[i].rank == r).collect(),
            None => Vec::new(),
        }
    }

    /// Product of the word for a stored word ray, recomputed from the generators.
    pub fn evaluate(&self, word: &[usize]) -> DMatrix<f64> {
        let n = self.dim();
        word.iter()
            .fold(DMatrix::identity(n, n), |acc, &g| acc * self.gens[g].as_dmatrix())
    }
}

pub fn minrank(approx: &SemigroupApprox) -> Option<usize> {
    approx.minrank()
}

/// How a minimal projection was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ProjectionSource {
    /// A stored product of generators is a multiple of the projection.
    BallRay { ray: usize },
    /// Peripheral projection of the stored ray.
    PeripheralOfRay { ray: usize },
    /// Peripheral projection of the product of two stored rays.
    PeripheralOfProduct { left: usize, right: usize },
}

impl ProjectionSource {
    pub fn describe(&self) -> &'static str {
        match self {
            ProjectionSource::BallRay { .. } => "found as ball ray",
            _ => "constructed as peripheral projection of a ball element",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProjectionRecord {
    pub matrix: Matrix,
    pub rank: usize,
    /// Orthonormal basis of the range.
    pub range_basis: Vec<LatticeVector>,
    pub source: ProjectionSource,
}

impl ProjectionRecord {
    fn new(p: DMatrix<f64>, rank: usize, source: ProjectionSource, tol: &Tolerances) -> Option<ProjectionRecord> {
        let matrix = Matrix::from_computed(p, 1e-8).ok()?;
        let p = matrix.as_dmatrix();
        let residual = (p * p - p).norm();
        if residual > tol.idempotent * (1.0 + p.norm()) {
            return None;
        }
        if linalg::numerical_rank(p, tol.rank) != rank {
            return None;
        }
        let basis = linalg::range_basis(p, tol.rank);
        let range_basis = basis.column_iter().map(|c| LatticeVector(c.into_owned())).collect();
        Some(ProjectionRecord {
            matrix,
            rank,
            range_basis,
            source,
        })
    }

    pub fn as_dmatrix(&self) -> &DMatrix<f64> {
        self.matrix.as_dmatrix()
    }

    pub fn found_in_ball(&self) -> bool {
        matches!(self.source, ProjectionSource::BallRay { .. })
    }
}

fn peripheral_projection(m: &Matrix, tol: &Tolerances) -> Option<DMatrix<f64>> {
    spectral::peripheral_split_with(m, tol).ok().map(|d| d.projection)
}

fn push_projection(
    out: &mut Vec<ProjectionRecord>,
    p: DMatrix<f64>,
    rank: usize,
    source: ProjectionSource,
    tol: &Tolerances,
) {
    if out
        .iter()
        .any(|q| linalg::distance(q.as_dmatrix(), &p) <= PROJECTION_DEDUP)
    {
        return;
    }
    if let Some(rec) = ProjectionRecord::new(p, rank, source, tol) {
        out.push(rec);
    }
}

/// The projections of minimal rank: multiples of projections among the
/// minimal rays, and peripheral projections of non-nilpotent minimal rays.
/// When every minimal ray is nilpotent, products `A S` with stored `A` are
/// tried instead.
pub fn rank_r_projections(approx: &SemigroupApprox) -> Result<Vec<ProjectionRecord>> {
    let r = approx.minrank().ok_or(Error::NoProjection)?;
    let tol = &approx.config.tolerances;
    let minimal = approx.minimal_indices();
    let mut out = Vec::new();

    for pass_words in [true, false] {
        for &i in &minimal {
            let ray = &approx.rays[i];
            if ray.is_word() != pass_words {
                continue;
            }
            if let Some(p) = linalg::idempotent_scaling(ray.matrix.as_dmatrix(), tol.idempotent) {
                let source = match ray.origin {
                    Origin::Word(_) => ProjectionSource::BallRay { ray: i },
                    Origin::Peripheral { source, .. } | Origin::NilpotentLimit { source, .. } => {
                        ProjectionSource::PeripheralOfRay { ray: source }
                    }
                };
                push_projection(&mut out, p, r, source, tol);
            }
        }
    }
    for &i in &minimal {
        let ray = &approx.rays[i];
        if ray.radius > 0.0 {
            if let Some(p) = peripheral_projection(&ray.matrix, tol) {
                push_projection(&mut out, p, r, ProjectionSource::PeripheralOfRay { ray: i }, tol);
            }
        }
    }
    if out.is_empty() {
        'outer: for &i in &minimal {
            for (j, left) in approx.rays.iter().enumerate() {
                let product = left.matrix.as_dmatrix() * approx.rays[i].matrix.as_dmatrix();
                let Some(ray) = normalize(&product) else { continue };
                let Ok(m) = Matrix::from_computed(ray, 1e-9) else {
                    continue;
                };
                if spectral::spectral_radius(&m).map_or(true, |v| v == 0.0) {
                    continue;
                }
                if let Some(p) = peripheral_projection(&m, tol) {
                    push_projection(
                        &mut out,
                        p,
                        r,
                        ProjectionSource::PeripheralOfProduct { left: j, right: i },
                        tol,
                    );
                    if !out.is_empty() {
                        break 'outer;
                    }
                }
            }
        }
    }
    if out.is_empty() {
        return Err(Error::NoProjection);
    }
    Ok(out)
}

/// Projections `P, Q` with `P S = S Q = S`.
#[derive(Debug, Clone)]
pub struct Flanks {
    pub left: ProjectionRecord,
    pub right: ProjectionRecord,
}

const FLANK_TOL: f64 = 1e-7;

/// Searches `projections` for left and right flanks of `s`. Missing flanks are
/// constructed as peripheral projections of `s A` (left) or `A s` (right) over
/// the stored rays `A`.
pub fn flanking_projections(
    approx: &SemigroupApprox,
    projections: &[ProjectionRecord],
    s: &DMatrix<f64>,
) -> Result<Flanks> {
    let tol = &approx.config.tolerances;
    let rank = linalg::numerical_rank(s, tol.rank);
    let scale = s.norm();
    let is_left = |p: &DMatrix<f64>| linalg::distance(&(p * s), s) <= FLANK_TOL * scale;
    let is_right = |p: &DMatrix<f64>| linalg::distance(&(s * p), s) <= FLANK_TOL * scale;

    let find = |pred: &dyn Fn(&DMatrix<f64>) -> bool, left_side: bool| -> Option<ProjectionRecord> {
        if let Some(p) = projections.iter().find(|p| pred(p.as_dmatrix())) {
            return Some(p.clone());
        }
        for (j, a) in approx.rays.iter().enumerate() {
            let product = if left_side {
                s * a.matrix.as_dmatrix()
            } else {
                a.matrix.as_dmatrix() * s
            };
            let Some(ray) = normalize(&product) else { continue };
            let Ok(m) = Matrix::from_computed(ray, 1e-9) else {
                continue;
            };
            let Some(p) = peripheral_projection(&m, tol) else {
                continue;
            };
            if !pred(&p) {
                continue;
            }
            let source = ProjectionSource::PeripheralOfProduct {
                left: if left_side { usize::MAX } else { j },
                right: if left_side { j } else { usize::MAX },
            };
            if let Some(rec) = ProjectionRecord::new(p, rank, source, tol) {
                return Some(rec);
            }
        }
        None
    };
    let left = find(&is_left, true).ok_or(Error::FlankingFailed)?;
    let right = find(&is_right, false).ok_or(Error::FlankingFailed)?;
    Ok(Flanks { left, right })
}

/// `true` iff `ran P = ran Q` (equivalently `P Q = Q` and `Q P = P`).
pub fn same_range(p: &DMatrix<f64>, q: &DMatrix<f64>, tol: f64) -> bool {
    linalg::distance(&(p * q), q) <= tol * (1.0 + q.norm()) && linalg::distance(&(q * p), p) <= tol * (1.0 + p.norm())
}

/// Truth values of the four equivalent conditions on minimal right ideals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RightIdealConditions {
    pub same_range: bool,
    pub all_two_sided: bool,
    pub some_two_sided: bool,
    pub unique_minimal: bool,
}

impl RightIdealConditions {
    pub fn consistent(&self) -> bool {
        let v = self.same_range;
        self.all_two_sided == v && self.some_two_sided == v && self.unique_minimal == v
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RightIdealReport {
    /// Number of distinct rays in `P S` for each minimal projection `P`.
    pub sizes: Vec<usize>,
    /// Groups of projection indices with equal right ideals.
    pub classes: Vec<Vec<usize>>,
    pub two_sided: Vec<bool>,
    pub conditions: RightIdealConditions,
}

/// The right ideal `P S` over stored rays and minimal projections.
pub fn right_ideal(approx: &SemigroupApprox, projections: &[ProjectionRecord], p: &DMatrix<f64>) -> RaySet {
    let mut set = RaySet::new(approx.dim());
    let elements = approx
        .rays
        .iter()
        .map(|r| r.matrix.as_dmatrix())
        .chain(projections.iter().map(|q| q.as_dmatrix()));
    for x in elements {
        if let Some(ray) = normalize(&(p * x)) {
            set.insert(ray, PROJECTION_DEDUP);
        }
    }
    set
}

pub fn right_ideal_analysis(approx: &SemigroupApprox, projections: &[ProjectionRecord]) -> Result<RightIdealReport> {
    if projections.is_empty() {
        return Err(Error::NoProjection);
    }
    let ideals: Vec<RaySet> = projections
        .iter()
        .map(|p| right_ideal(approx, projections, p.as_dmatrix()))
        .collect();

    // For an element `Y` of the semigroup, `Y ∈ P S` iff `P Y = Y`; minimal right
    // ideals coincide iff each projection lies in the other's ideal.
    let absorbs = |p: &DMatrix<f64>, y: &DMatrix<f64>| linalg::distance(&(p * y), y) <= IDEAL_TOL * (1.0 + y.norm());
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..projections.len() {
        let equal = |j: usize| {
            let (p, q) = (projections[i].as_dmatrix(), projections[j].as_dmatrix());
            absorbs(p, q) && absorbs(q, p)
        };
        match classes.iter_mut().find(|c| equal(c[0])) {
            Some(c) => c.push(i),
            None => classes.push(vec![i]),
        }
    }

    let multipliers: Vec<&DMatrix<f64>> = approx
        .rays
        .iter()
        .map(|r| r.matrix.as_dmatrix())
        .chain(projections.iter().map(|q| q.as_dmatrix()))
        .collect();
    let two_sided: Vec<bool> = projections
        .iter()
        .zip(&ideals)
        .map(|(p, ideal)| {
            multipliers.iter().all(|s| {
                ideal.items().iter().all(|j| match normalize(&(*s * j)) {
                    None => true,
                    Some(ray) => absorbs(p.as_dmatrix(), &ray),
                })
            })
        })
        .collect();

    let same = projections.iter().all(|p| {
        projections
            .iter()
            .all(|q| same_range(p.as_dmatrix(), q.as_dmatrix(), IDEAL_TOL))
    });
    let conditions = RightIdealConditions {
        same_range: same,
        all_two_sided: two_sided.iter().all(|&b| b),
        some_two_sided: two_sided.iter().any(|&b| b),
        unique_minimal: classes.len() == 1,
    };
    Ok(RightIdealReport {
        sizes: ideals.iter().map(RaySet::len).collect(),
        classes,
        two_sided,
        conditions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn no_sr() -> Vec<Matrix> {
        vec![
            m(&[&[0.5, 0.5], &[0.5, 0.5]]),
            m(&[&[1.0 / 3.0, 1.0 / 3.0], &[2.0 / 3.0, 2.0 / 3.0]]),
        ]
    }

    #[test]
    fn cyclic_group_ball() {
        let ball = generate_ball(&[Matrix::cyclic_shift(3)], 5, 1e-9).unwrap();
        assert_eq!(ball.len(), 3);
        assert_eq!(ball.minrank(), Some(3));
        let projections = rank_r_projections(&ball).unwrap();
        assert_eq!(projections.len(), 1);
        assert!(linalg::distance(projections[0].as_dmatrix(), &DMatrix::identity(3, 3)) < 1e-12);
        assert!(projections[0].found_in_ball());
    }

    #[test]
    fn two_projection_ball() {
        let gens = no_sr();
        let ball = generate_ball(&gens, 6, 1e-9).unwrap();
        assert_eq!(ball.len(), 2);
        assert!(ball.rays.iter().all(|r| r.rank == 1));
        let projections = rank_r_projections(&ball).unwrap();
        assert_eq!(projections.len(), 2);
        for (p, g) in projections.iter().zip(&gens) {
            assert!(linalg::distance(p.as_dmatrix(), g.as_dmatrix()) < 1e-12);
        }
        let report = right_ideal_analysis(&ball, &projections).unwrap();
        assert_eq!(report.classes.len(), 2);
        assert!(report.conditions.consistent());
        assert!(!report.conditions.same_range);
    }

    #[test]
    fn flanks_of_a_projection_are_itself() {
        let gens = no_sr();
        let ball = generate_ball(&gens, 6, 1e-9).unwrap();
        let projections = rank_r_projections(&ball).unwrap();
        let flanks = flanking_projections(&ball, &projections, gens[0].as_dmatrix()).unwrap();
        assert!(linalg::distance(flanks.left.as_dmatrix(), gens[0].as_dmatrix()) < 1e-12);
        assert!(linalg::distance(flanks.right.as_dmatrix(), gens[0].as_dmatrix()) < 1e-12);
    }

    #[test]
    fn jordan_pair_has_rank_one_projection() {
        let gens = vec![m(&[&[1.0, 1.0], &[0.0, 1.0]]), m(&[&[0.0, 0.0], &[1.0, 0.0]])];
        let ball = generate_ball(&gens, 10, 1e-9).unwrap();
        assert_eq!(ball.minrank(), Some(1));
        let projections = rank_r_projections(&ball).unwrap();
        for p in &projections {
            let d = p.as_dmatrix();
            assert!((d * d - d).norm() < 1e-10);
            assert_eq!(linalg::numerical_rank(d, 1e-8), 1);
        }
        assert!(ball.find(&DMatrix::identity(2, 2), 1e-6).is_none());
    }

    #[test]
    fn stored_words_reproduce_their_rays() {
        let gens = vec![m(&[&[1.0, 1.0], &[0.0, 1.0]]), m(&[&[0.0, 0.0], &[1.0, 0.0]])];
        let ball = generate_ball(&gens, 8, 1e-9).unwrap();
        for (_, ray) in ball.word_rays() {
            let product = normalize(&ball.evaluate(ray.word().unwrap())).unwrap();
            assert!(linalg::distance(&product, ray.matrix.as_dmatrix()) < 1e-9);
        }
    }

    #[test]
    fn explosion_is_reported() {
        let gens = vec![m(&[&[1.0, 1.0], &[0.0, 1.0]]), m(&[&[1.0, 0.0], &[1.0, 1.0]])];
        let config = BallConfig {
            cap: 50,
            ..BallConfig::new(10)
        };
        assert!(matches!(
            generate_ball_with(&gens, &config),
            Err(Error::BallExplosion { .. })
        ));
    }

    #[test]
    fn limit_kept_next_to_fast_converging_power() {
        let t = m(&[&[0.7219497955099786, 0.57624640169767], &[0.055638839387004535, 0.0]]);
        let ball = generate_ball_with(&[t], &BallConfig::new(6)).unwrap();
        assert!(ball.rays.iter().any(|r| r.rank == 1));
        assert!(!rank_r_projections(&ball).unwrap().is_empty());
    }

    #[test]
    fn ray_set_lookup() {
        let mut set = RaySet::new(2);
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let b = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert_eq!(set.insert(a.clone(), 1e-9), (0, true));
        assert_eq!(set.insert(b, 1e-9), (1, true));
        let mut near = a.clone();
        near[(1, 1)] = 1e-12;
        assert_eq!(set.insert(near, 1e-9), (0, false));
    }
}
