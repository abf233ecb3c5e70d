//! Eigenstructure of a single nonnegative matrix: spectral radius, the
//! peripheral spectrum and its spectral projection, the decomposition of the
//! peripheral part as unimodular plus nilpotent, the unimodular/nilpotent
//! dichotomy for the asymptotic part of `R_+ A`, and the period of an
//! irreducible matrix.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::eigen;
use crate::error::{Error, Result};
use crate::irreducibility;
use crate::lattice::{LatticeVector, Matrix, Tolerances};
use crate::linalg;

/// Eigenvalues lying in the peripheral band `|λ| >= r (1 - tol)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeripheralSpectrum {
    pub radius: f64,
    /// Each eigenvalue repeated according to algebraic multiplicity.
    pub eigenvalues: Vec<Complex64>,
    /// Set when `r(A) = 0`; `eigenvalues` is then `{0}`.
    pub quasinilpotent: bool,
}

/// Spectral radius. Exactly zero for nilpotent (acyclic) patterns.
pub fn spectral_radius(a: &Matrix) -> Result<f64> {
    if irreducibility::is_nilpotent_pattern(a) {
        return Ok(0.0);
    }
    eigen::max_modulus(a.as_dmatrix())
}

pub fn peripheral_spectrum(a: &Matrix, tol_per: f64) -> Result<PeripheralSpectrum> {
    if irreducibility::is_nilpotent_pattern(a) {
        return Ok(PeripheralSpectrum {
            radius: 0.0,
            eigenvalues: vec![Complex64::new(0.0, 0.0)],
            quasinilpotent: true,
        });
    }
    let all = eigen::eigenvalues(a.as_dmatrix())?;
    let radius = all.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let eigenvalues = all
        .into_iter()
        .filter(|z| z.norm() >= radius * (1.0 - tol_per))
        .collect();
    Ok(PeripheralSpectrum {
        radius,
        eigenvalues,
        quasinilpotent: false,
    })
}

/// The peripheral decomposition `X = X1 ⊕ X2` of `A`, together with
/// `A / r(A)` restricted to `X1` split as `U + N`.
#[derive(Debug, Clone)]
pub struct PeripheralData {
    pub radius: f64,
    pub sigma_per: Vec<Complex64>,
    /// Spectral projection onto `X1` along `X2`.
    pub projection: DMatrix<f64>,
    /// Orthonormal real basis of `X1` (n x d).
    pub x1_basis: DMatrix<f64>,
    /// Coordinates on `X1` along `X2` (d x n); `projection = x1_basis * x1_coords`.
    pub x1_coords: DMatrix<f64>,
    /// `A / r` restricted to `X1`, in the basis `x1_basis` (d x d).
    pub restriction: DMatrix<f64>,
    /// Semisimple part, all eigenvalues on the unit circle.
    pub unimodular: DMatrix<f64>,
    /// Nilpotent part, commuting with `unimodular`.
    pub nilpotent: DMatrix<f64>,
    /// Largest `k` with `N^k != 0` (0 when `N = 0`).
    pub nilpotency_index: usize,
    /// Largest modulus among the non-peripheral eigenvalues.
    pub gap_radius: f64,
    /// Frobenius distance between the eigensolver projection and the cyclic-class
    /// projection, when `A` is irreducible. The latter is used when they disagree.
    pub combinatorial_discrepancy: Option<f64>,
}

impl PeripheralData {
    pub fn dim(&self) -> usize {
        self.x1_basis.ncols()
    }

    /// `U ⊕ 0` as an operator on the whole space.
    pub fn unimodular_full(&self) -> DMatrix<f64> {
        &self.x1_basis * &self.unimodular * &self.x1_coords
    }

    /// `N ⊕ 0` as an operator on the whole space.
    pub fn nilpotent_full(&self) -> DMatrix<f64> {
        &self.x1_basis * &self.nilpotent * &self.x1_coords
    }
}

pub fn peripheral_split(a: &Matrix) -> Result<PeripheralData> {
    peripheral_split_with(a, &Tolerances::default())
}

pub fn peripheral_split_with(a: &Matrix, tol: &Tolerances) -> Result<PeripheralData> {
    if irreducibility::is_nilpotent_pattern(a) {
        return Err(Error::Quasinilpotent);
    }
    let n = a.dim();
    let all = eigen::eigenvalues(a.as_dmatrix())?;
    let radius = all.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if radius == 0.0 {
        return Err(Error::Quasinilpotent);
    }
    let (sigma_per, rest): (Vec<Complex64>, Vec<Complex64>) = all
        .into_iter()
        .partition(|z| z.norm() >= radius * (1.0 - tol.peripheral));
    let gap_radius = rest.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if radius - gap_radius < tol.gap * radius {
        return Err(Error::NotSeparated {
            radius,
            gap: radius - gap_radius,
        });
    }

    let scaled = a.as_dmatrix() / radius;
    let d = sigma_per.len();
    let scaled_per: Vec<Complex64> = sigma_per.iter().map(|z| z / radius).collect();

    // X1 = ker q(Ã), X2 = ran q(Ã), q the real characteristic polynomial of the peripheral part.
    let q = real_factor_product(&scaled, &scaled_per);
    let (x1_basis, x1_coords) = if d == n {
        (DMatrix::identity(n, n), DMatrix::identity(n, n))
    } else {
        let dec = linalg::svd(&q);
        let x1 = dec.v.columns(n - d, d).into_owned();
        let x2 = dec.u.columns(0, n - d).into_owned();
        let mut w = DMatrix::zeros(n, n);
        w.columns_mut(0, d).copy_from(&x1);
        w.columns_mut(d, n - d).copy_from(&x2);
        let winv = w.try_inverse().ok_or(Error::NotSeparated {
            radius,
            gap: radius - gap_radius,
        })?;
        (x1, winv.rows(0, d).into_owned())
    };
    let mut projection = &x1_basis * &x1_coords;
    let mut x1_basis = x1_basis;
    let mut x1_coords = x1_coords;
    let mut restriction = &x1_coords * &scaled * &x1_basis;
    let (mut unimodular, mut nilpotent) = jordan_chevalley(&restriction, &scaled_per);
    let mut nilpotency_index = nilpotency_index(&nilpotent, &restriction);
    if nilpotency_index == 0 {
        nilpotent.fill(0.0);
    }

    let mut combinatorial_discrepancy = None;
    if irreducibility::is_strongly_connected(std::slice::from_ref(a), 0.0) {
        let pc = combinatorial_projection(a)?;
        let disc = linalg::distance(&projection, &pc);
        combinatorial_discrepancy = Some(disc);
        if disc > 1e-6 {
            // Irreducible matrices have semisimple peripheral part, so N = 0.
            x1_basis = linalg::range_basis(&pc, tol.rank);
            x1_coords = x1_basis.transpose() * &pc;
            restriction = &x1_coords * &scaled * &x1_basis;
            unimodular = restriction.clone();
            nilpotent = DMatrix::zeros(unimodular.nrows(), unimodular.ncols());
            nilpotency_index = 0;
            projection = pc;
        }
    }

    Ok(PeripheralData {
        radius,
        sigma_per,
        projection,
        x1_basis,
        x1_coords,
        restriction,
        unimodular,
        nilpotent,
        nilpotency_index,
        gap_radius,
        combinatorial_discrepancy,
    })
}

/// `∏ (M - μ)` over the given eigenvalues, pairing complex conjugates into
/// real quadratic factors.
fn real_factor_product(m: &DMatrix<f64>, roots: &[Complex64]) -> DMatrix<f64> {
    let n = m.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let mut acc = id.clone();
    let scale = roots.iter().map(|z| z.norm()).fold(1.0, f64::max);
    for z in roots {
        if z.im.abs() <= 1e-12 * scale {
            acc = &acc * (m - &id * z.re);
        } else if z.im > 0.0 {
            let quad = m * m - m * (2.0 * z.re) + &id * z.norm_sqr();
            acc = &acc * quad;
        }
    }
    acc
}

/// Distinct values among unimodular eigenvalues, merging numerically split clusters.
fn distinct_roots(roots: &[Complex64]) -> Vec<Complex64> {
    const CLUSTER: f64 = 1e-4;
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for &z in roots {
        if let Some(c) = clusters.iter_mut().find(|(c, k)| (*c / *k as f64 - z).norm() < CLUSTER) {
            c.0 += z;
            c.1 += 1;
        } else {
            clusters.push((z, 1));
        }
    }
    clusters
        .into_iter()
        .map(|(s, k)| {
            let c = s / k as f64;
            if c.im.abs() < CLUSTER {
                Complex64::new(c.re, 0.0)
            } else {
                c
            }
        })
        .collect()
}

/// Real coefficients (lowest degree first) of the monic polynomial with the
/// given conjugation-closed roots.
fn real_poly(roots: &[Complex64]) -> Vec<f64> {
    let mut coeffs = vec![1.0];
    let mul = |coeffs: &Vec<f64>, factor: &[f64]| {
        let mut out = vec![0.0; coeffs.len() + factor.len() - 1];
        for (i, a) in coeffs.iter().enumerate() {
            for (j, b) in factor.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        out
    };
    for z in roots {
        if z.im == 0.0 {
            coeffs = mul(&coeffs, &[-z.re, 1.0]);
        } else if z.im > 0.0 {
            coeffs = mul(&coeffs, &[z.norm_sqr(), -2.0 * z.re, 1.0]);
        }
    }
    coeffs
}

fn eval_poly(coeffs: &[f64], m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let mut acc = DMatrix::zeros(n, n);
    for &c in coeffs.iter().rev() {
        acc = &acc * m + DMatrix::identity(n, n) * c;
    }
    acc
}

/// Semisimple/nilpotent split of `t` by Newton's iteration
/// `S <- S - p(S) p'(S)^{-1}` with `p` square-free over the eigenvalues.
fn jordan_chevalley(t: &DMatrix<f64>, eigenvalues: &[Complex64]) -> (DMatrix<f64>, DMatrix<f64>) {
    let roots = distinct_roots(eigenvalues);
    let p = real_poly(&roots);
    let dp: Vec<f64> = p.iter().enumerate().skip(1).map(|(i, c)| i as f64 * c).collect();
    let mut s = t.clone();
    for _ in 0..50 {
        let ps = eval_poly(&p, &s);
        let Some(inv) = eval_poly(&dp, &s).try_inverse() else {
            break;
        };
        let step = ps * inv;
        s -= &step;
        if step.norm() <= 1e-15 * (1.0 + s.norm()) {
            break;
        }
    }
    let n = t - &s;
    (s, n)
}

fn nilpotency_index(nil: &DMatrix<f64>, scale_ref: &DMatrix<f64>) -> usize {
    let scale = 1.0 + scale_ref.norm();
    let mut k = 0;
    let mut pow = nil.clone();
    for j in 1..=nil.nrows() {
        if pow.norm() <= 1e-7 * scale.powi(j as i32) {
            break;
        }
        k = j;
        pow = &pow * nil;
    }
    k
}

/// Bounds for the search of return times `m_j` with `(A/r)^{m_j} -> P`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReturnScan {
    pub max_power: usize,
    /// Tolerance for `||U^m - I||` and, in the unimodular case, `||(A/r)^m - P||`.
    pub epsilon: f64,
    /// Tolerance for `||c_j (A/r)^{r_j} - N^k ⊕ 0||` in the nilpotent case.
    pub nilpotent_epsilon: f64,
    pub hits: usize,
}

impl Default for ReturnScan {
    fn default() -> Self {
        ReturnScan {
            max_power: 1_000_000,
            epsilon: 1e-6,
            nilpotent_epsilon: 1e-5,
            hits: 5,
        }
    }
}

/// Which of the two asymptotic regimes of `R_+ A` occurs.
#[derive(Debug, Clone)]
pub enum Dichotomy {
    /// `U^q = I`; `(A/r)^{m_j} -> P` along `returns`.
    Unimodular {
        order: usize,
        returns: Vec<usize>,
        residuals: Vec<f64>,
    },
    /// `c_j (A/r)^{r_j} -> N^k ⊕ 0`, a nonzero square-zero matrix, with
    /// `r_j = m_j + k` and `c_j = 1 / binom(r_j, k)`.
    Nilpotent {
        index: usize,
        order: usize,
        limit: DMatrix<f64>,
        returns: Vec<usize>,
        coefficients: Vec<f64>,
        residuals: Vec<f64>,
    },
}

#[derive(Debug, Clone)]
pub struct DichotomyResult {
    pub peripheral: PeripheralData,
    pub kind: Dichotomy,
}

impl DichotomyResult {
    pub fn is_unimodular(&self) -> bool {
        matches!(self.kind, Dichotomy::Unimodular { .. })
    }

    /// Order of the unimodular part: the least `q` with `U^q = I`.
    pub fn order(&self) -> usize {
        match self.kind {
            Dichotomy::Unimodular { order, .. } | Dichotomy::Nilpotent { order, .. } => order,
        }
    }
}

pub fn classify_dichotomy(a: &Matrix, max_power: usize) -> Result<DichotomyResult> {
    classify_dichotomy_with(
        a,
        &Tolerances::default(),
        &ReturnScan {
            max_power,
            ..ReturnScan::default()
        },
    )
}

pub fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (k - i) as f64)
}

pub fn classify_dichotomy_with(a: &Matrix, tol: &Tolerances, scan: &ReturnScan) -> Result<DichotomyResult> {
    let data = peripheral_split_with(a, tol)?;
    let order = unimodular_order(&data.unimodular, scan)?;
    let scaled = a.as_dmatrix() / data.radius;
    let k = data.nilpotency_index;

    let kind = if k == 0 {
        let p = data.projection.clone();
        let residual = |m: usize| linalg::distance(&linalg::power(&scaled, m), &p);
        let (returns, residuals) = find_returns(order, scan, scan.epsilon, residual)?;
        Dichotomy::Unimodular {
            order,
            returns,
            residuals,
        }
    } else {
        let limit = linalg::power(&data.nilpotent_full(), k);
        let residual = |m: usize| {
            let rj = m + k;
            linalg::distance(&(linalg::power(&scaled, rj) / binomial(rj, k)), &limit)
        };
        let (ms, residuals) = find_returns(order, scan, scan.nilpotent_epsilon, residual)?;
        let returns: Vec<usize> = ms.iter().map(|m| m + k).collect();
        let coefficients = returns.iter().map(|&rj| 1.0 / binomial(rj, k)).collect();
        Dichotomy::Nilpotent {
            index: k,
            order,
            limit,
            returns,
            coefficients,
            residuals,
        }
    };
    Ok(DichotomyResult { peripheral: data, kind })
}

/// Least `q <= max_power` with `||U^q - I||_F < epsilon`.
pub fn unimodular_order(u: &DMatrix<f64>, scan: &ReturnScan) -> Result<usize> {
    let d = u.nrows();
    let id = DMatrix::<f64>::identity(d, d);
    let mut pow = u.clone();
    let mut best = (0, f64::INFINITY);
    for m in 1..=scan.max_power {
        let res = linalg::distance(&pow, &id);
        if res < scan.epsilon {
            return Ok(m);
        }
        if res < best.1 {
            best = (m, res);
        }
        pow = &pow * u;
    }
    Err(Error::ReturnHorizonExceeded {
        best_m: best.0,
        best_residual: best.1,
    })
}

/// Smallest multiples `m = t q` with `residual(m) < eps`, then consecutive
/// multiples until `scan.hits` returns are collected.
fn find_returns(
    order: usize,
    scan: &ReturnScan,
    eps: f64,
    residual: impl Fn(usize) -> f64,
) -> Result<(Vec<usize>, Vec<f64>)> {
    let max_t = scan.max_power / order;
    let mut best = (order, f64::INFINITY);
    let mut check = |t: usize| {
        let r = residual(t * order);
        if r < best.1 {
            best = (t * order, r);
        }
        r
    };
    let mut hi = 1;
    while check(hi) >= eps {
        if hi >= max_t {
            return Err(Error::ReturnHorizonExceeded {
                best_m: best.0,
                best_residual: best.1,
            });
        }
        hi = (hi * 2).min(max_t);
    }
    let mut lo = hi / 2;
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if check(mid) < eps {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut returns = Vec::with_capacity(scan.hits);
    let mut residuals = Vec::with_capacity(scan.hits);
    let mut t = hi;
    while returns.len() < scan.hits && t <= max_t.max(hi + scan.hits) {
        let r = residual(t * order);
        if r < eps {
            returns.push(t * order);
            residuals.push(r);
        }
        t += 1;
    }
    Ok((returns, residuals))
}

/// Period (imprimitivity index) of an irreducible nonnegative matrix: the gcd of
/// closed-walk lengths of its positivity digraph.
pub fn period(a: &Matrix) -> Result<usize> {
    Ok(cyclic_classes(a)?.0)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Period `h` and the cyclic class (`0..h`) of every index.
pub fn cyclic_classes(a: &Matrix) -> Result<(usize, Vec<usize>)> {
    let report = irreducibility::is_ideal_irreducible(std::slice::from_ref(a))?;
    if !report.verdict {
        return Err(Error::Reducible {
            witness: report.witness.expect("reducible has witness"),
        });
    }
    let adj = a.pattern(0.0);
    let level = irreducibility::bfs_levels(&adj, 0);
    let n = a.dim();
    let mut h = 0;
    for u in 0..n {
        for v in 0..n {
            if adj[u][v] {
                let lu = level[u].expect("strongly connected");
                let lv = level[v].expect("strongly connected");
                h = gcd(h, (lu + 1).abs_diff(lv));
            }
        }
    }
    let h = h.max(1);
    let classes = level.iter().map(|l| l.expect("strongly connected") % h).collect();
    Ok((h, classes))
}

/// Peripheral spectral projection of an irreducible nonnegative matrix by the
/// cyclic-class route: `A^h` is block diagonal over the cyclic classes with
/// primitive blocks, and the projection is the direct sum of their rank-one
/// Perron projections `v w^T / (w^T v)`, each obtained by normalized
/// repeated squaring of the block.
pub fn combinatorial_projection(a: &Matrix) -> Result<DMatrix<f64>> {
    let (h, classes) = cyclic_classes(a)?;
    let n = a.dim();
    let norm = a.as_dmatrix().norm();
    let ah = linalg::power(&(a.as_dmatrix() / norm), h);
    let mut proj = DMatrix::zeros(n, n);
    for c in 0..h {
        let idx: Vec<usize> = (0..n).filter(|&i| classes[i] == c).collect();
        let m = idx.len();
        let mut q = DMatrix::from_fn(m, m, |i, j| ah[(idx[i], idx[j])]);
        q /= q.norm();
        let mut converged = false;
        for _ in 0..200 {
            let mut next = &q * &q;
            next /= next.norm();
            let delta = linalg::distance(&next, &q);
            q = next;
            if delta <= 1e-14 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::EigenNoConvergence { iterations: 200 });
        }
        let tr = q.trace();
        for i in 0..m {
            for j in 0..m {
                proj[(idx[i], idx[j])] = q[(i, j)] / tr;
            }
        }
    }
    Ok(proj)
}

/// Perron eigenvector of an irreducible nonnegative matrix, normalized to unit sum.
pub fn perron_vector(a: &Matrix) -> Result<LatticeVector> {
    let report = irreducibility::is_ideal_irreducible(std::slice::from_ref(a))?;
    if !report.verdict {
        return Err(Error::Reducible {
            witness: report.witness.expect("reducible has witness"),
        });
    }
    let n = a.dim();
    let r = spectral_radius(a)?;
    let shifted = a.as_dmatrix() - DMatrix::identity(n, n) * r;
    let v = linalg::kernel_basis(&shifted, 1).column(0).into_owned();
    let sum: f64 = v.sum();
    Ok(LatticeVector(v / sum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn radius_examples() {
        assert_eq!(spectral_radius(&m(&[&[1.0, 1.0], &[0.0, 1.0]])).unwrap(), 1.0);
        assert!((spectral_radius(&Matrix::identity(3)).unwrap() - 1.0).abs() < 1e-15);
        // Characteristic polynomial λ² - 6.
        let r = spectral_radius(&m(&[&[0.0, 2.0], &[3.0, 0.0]])).unwrap();
        assert!((r - 6f64.sqrt()).abs() < 1e-14);
        assert_eq!(spectral_radius(&m(&[&[0.0, 0.0], &[1.0, 0.0]])).unwrap(), 0.0);
    }

    #[test]
    fn peripheral_spectrum_examples() {
        let swap = peripheral_spectrum(&Matrix::cyclic_shift(2), 1e-8).unwrap();
        let mut re: Vec<f64> = swap.eigenvalues.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[0] + 1.0).abs() < 1e-14 && (re[1] - 1.0).abs() < 1e-14);

        let jordan = peripheral_spectrum(&m(&[&[1.0, 1.0], &[0.0, 1.0]]), 1e-8).unwrap();
        assert_eq!(jordan.eigenvalues, vec![Complex64::new(1.0, 0.0); 2]);

        let cyc = peripheral_spectrum(&Matrix::cyclic_shift(3), 1e-8).unwrap();
        assert_eq!(cyc.eigenvalues.len(), 3);
        for k in 0..3 {
            let root = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 3.0);
            assert!(cyc.eigenvalues.iter().any(|z| (z - root).norm() < 1e-12));
        }

        let nil = peripheral_spectrum(&m(&[&[0.0, 1.0], &[0.0, 0.0]]), 1e-8).unwrap();
        assert!(nil.quasinilpotent);
    }

    #[test]
    fn split_of_jordan_block() {
        let d = peripheral_split(&m(&[&[1.0, 1.0], &[0.0, 1.0]])).unwrap();
        assert!(linalg::distance(&d.projection, &DMatrix::identity(2, 2)) < 1e-12);
        assert!(linalg::distance(&d.unimodular_full(), &DMatrix::identity(2, 2)) < 1e-12);
        let n = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(linalg::distance(&d.nilpotent_full(), &n) < 1e-12);
        assert_eq!(d.nilpotency_index, 1);
    }

    #[test]
    fn split_of_projection_is_itself() {
        let q = m(&[&[1.0 / 3.0, 1.0 / 3.0], &[2.0 / 3.0, 2.0 / 3.0]]);
        let d = peripheral_split(&q).unwrap();
        assert!(linalg::distance(&d.projection, q.as_dmatrix()) < 1e-12);
        assert_eq!(d.nilpotency_index, 0);
        assert_eq!(d.dim(), 1);
    }

    #[test]
    fn split_rejects_quasinilpotent() {
        assert_eq!(
            peripheral_split(&m(&[&[0.0, 0.0], &[1.0, 0.0]])).unwrap_err(),
            Error::Quasinilpotent
        );
    }

    #[test]
    fn split_rejects_unseparated_spectrum() {
        let a = m(&[&[1.0, 0.0], &[0.0, 1.0 - 1e-7]]);
        assert!(matches!(peripheral_split(&a), Err(Error::NotSeparated { .. })));
    }

    #[test]
    fn dichotomy_examples() {
        let swap = classify_dichotomy(&Matrix::cyclic_shift(2), 1_000_000).unwrap();
        match swap.kind {
            Dichotomy::Unimodular { ref returns, .. } => assert_eq!(returns, &vec![2, 4, 6, 8, 10]),
            _ => panic!("swap is unimodular"),
        }
        let cyc = classify_dichotomy(&Matrix::cyclic_shift(3).scale(2.0), 1_000_000).unwrap();
        match cyc.kind {
            Dichotomy::Unimodular { ref returns, .. } => {
                assert!(returns.iter().all(|m| m % 3 == 0));
            }
            _ => panic!("scaled cycle is unimodular"),
        }
        let jordan = classify_dichotomy(&m(&[&[1.0, 1.0], &[0.0, 1.0]]), 1_000_000).unwrap();
        match jordan.kind {
            Dichotomy::Nilpotent {
                index,
                ref limit,
                ref residuals,
                ..
            } => {
                assert_eq!(index, 1);
                let expected = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
                assert!(linalg::distance(limit, &expected) < 1e-12);
                assert!(*residuals.last().unwrap() < 1e-5);
            }
            _ => panic!("jordan block is nilpotent"),
        }
    }

    #[test]
    fn return_horizon_is_reported() {
        let err = classify_dichotomy(&m(&[&[1.0, 1.0], &[0.0, 1.0]]), 1000).unwrap_err();
        assert!(matches!(err, Error::ReturnHorizonExceeded { .. }));
        assert!(err.is_inconclusive());
    }

    #[test]
    fn period_examples() {
        assert_eq!(period(&m(&[&[1.0, 2.0], &[3.0, 4.0]])).unwrap(), 1);
        assert_eq!(period(&Matrix::cyclic_shift(2)).unwrap(), 2);
        // 5-cycle plus chord 1 -> 3: cycles of lengths 5 and 4.
        let mut five = Matrix::cyclic_shift(5).into_dmatrix();
        five[(2, 0)] = 1.0;
        assert_eq!(period(&Matrix::from_dmatrix(five).unwrap()).unwrap(), 1);
        assert!(matches!(period(&Matrix::identity(2)), Err(Error::Reducible { .. })));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(7, 0), 1.0);
    }
}
