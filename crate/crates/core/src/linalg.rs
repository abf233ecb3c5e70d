//! Dense helpers on `DMatrix<f64>`: sorted SVD, numerical rank, kernels,
//! ranges, principal angles and powers.

use nalgebra::{DMatrix, DVector};

/// Singular triplets sorted by decreasing singular value.
pub struct SortedSvd {
    pub u: DMatrix<f64>,
    pub singular_values: Vec<f64>,
    pub v: DMatrix<f64>,
}

pub fn svd(m: &DMatrix<f64>) -> SortedSvd {
    let (rows, cols) = m.shape();
    let (u, s, v) = raw_svd(m);
    let k = rows.min(cols);
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]));
    let mut su = DMatrix::zeros(rows, k);
    let mut sv = DMatrix::zeros(cols, k);
    let mut sorted = Vec::with_capacity(k);
    for (dst, &src) in order.iter().enumerate() {
        su.set_column(dst, &u.column(src));
        sv.set_column(dst, &v.column(src));
        sorted.push(s[src]);
    }
    SortedSvd {
        u: su,
        singular_values: sorted,
        v: sv,
    }
}

type Triplets = (DMatrix<f64>, Vec<f64>, DMatrix<f64>);

fn reconstruction_ok(m: &DMatrix<f64>, (u, s, v): &Triplets) -> bool {
    let sigma = DMatrix::from_diagonal(&DVector::from_column_slice(s));
    (u * sigma * v.transpose() - m).norm() <= 1e-12 * (1.0 + m.norm())
}

fn nalgebra_svd(m: &DMatrix<f64>) -> Option<Triplets> {
    let d = m.clone().try_svd(true, true, f64::EPSILON, 10_000)?;
    let u = d.u.expect("u requested");
    let v = d.v_t.expect("v_t requested").transpose();
    Some((u, d.singular_values.iter().copied().collect(), v))
}

/// nalgebra's bidiagonal SVD occasionally returns factors that do not
/// reconstruct the input or fails to converge; retry on the transpose, then fall back to Jacobi.
fn raw_svd(m: &DMatrix<f64>) -> Triplets {
    if let Some(direct) = nalgebra_svd(m).filter(|t| reconstruction_ok(m, t)) {
        return direct;
    }
    if let Some(swapped) = nalgebra_svd(&m.transpose())
        .map(|(u, s, v)| (v, s, u))
        .filter(|t| reconstruction_ok(m, t))
    {
        return swapped;
    }
    jacobi_svd(m)
}

/// One-sided Jacobi SVD (thin, unsorted).
pub fn jacobi_svd(m: &DMatrix<f64>) -> Triplets {
    if m.nrows() < m.ncols() {
        let (u, s, v) = jacobi_svd(&m.transpose());
        return (v, s, u);
    }
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let mut v = DMatrix::<f64>::identity(cols, cols);
    for _ in 0..100 {
        let mut rotated = false;
        for i in 0..cols {
            for j in i + 1..cols {
                let alpha = a.column(i).norm_squared();
                let beta = a.column(j).norm_squared();
                let gamma = a.column(i).dot(&a.column(j));
                if gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for target in [&mut a, &mut v] {
                    for r in 0..target.nrows() {
                        let (x, y) = (target[(r, i)], target[(r, j)]);
                        target[(r, i)] = c * x - s * y;
                        target[(r, j)] = s * x + c * y;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma: Vec<f64> = (0..cols).map(|j| a.column(j).norm()).collect();
    let top = sigma.iter().copied().fold(0.0, f64::max);
    let mut u = DMatrix::zeros(rows, cols);
    let mut filled = Vec::new();
    for j in 0..cols {
        if sigma[j] > f64::EPSILON * top * cols as f64 && sigma[j] > 0.0 {
            u.set_column(j, &(a.column(j) / sigma[j]));
            filled.push(j);
        }
    }
    // Complete the left factor for (numerically) zero singular values.
    for j in 0..cols {
        if filled.contains(&j) {
            continue;
        }
        let residual = |i: usize| {
            let mut e = DVector::<f64>::zeros(rows);
            e[i] = 1.0;
            for &k in &filled {
                let proj = u.column(k).dot(&e);
                e -= u.column(k) * proj;
            }
            e
        };
        let best = (0..rows)
            .map(residual)
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .expect("rows > 0");
        u.set_column(j, &best.normalize());
        filled.push(j);
    }
    (u, sigma, v)
}

/// Moore-Penrose pseudo-inverse, cutting singular values below `rel_tol * sigma_max`.
pub fn pseudo_inverse(m: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let d = svd(m);
    let top = d.singular_values.first().copied().unwrap_or(0.0);
    let mut out = DMatrix::zeros(m.ncols(), m.nrows());
    for (k, &s) in d.singular_values.iter().enumerate() {
        if top > 0.0 && s > rel_tol * top {
            out += d.v.column(k) * d.u.column(k).transpose() / s;
        }
    }
    out
}

/// Number of singular values above `rel_tol * sigma_max`.
pub fn numerical_rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    let s = svd(m).singular_values;
    match s.first() {
        Some(&top) if top > 0.0 => s.iter().filter(|&&v| v > rel_tol * top).count(),
        _ => 0,
    }
}

/// Orthonormal basis of the numerical column space.
pub fn range_basis(m: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let d = svd(m);
    let top = d.singular_values.first().copied().unwrap_or(0.0);
    let r = d
        .singular_values
        .iter()
        .filter(|&&v| top > 0.0 && v > rel_tol * top)
        .count();
    d.u.columns(0, r).into_owned()
}

/// Orthonormal basis of the `dim`-dimensional approximate kernel of a square matrix
/// (the right singular vectors of the `dim` smallest singular values).
pub fn kernel_basis(m: &DMatrix<f64>, dim: usize) -> DMatrix<f64> {
    let d = svd(m);
    let n = m.ncols();
    d.v.columns(n - dim, dim).into_owned()
}

/// Numerical kernel dimension.
pub fn nullity(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    m.ncols() - numerical_rank(m, rel_tol)
}

/// Largest principal angle (radians) between the column spaces of two
/// orthonormal bases of equal dimension.
pub fn max_principal_angle(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    if a.ncols() != b.ncols() {
        return std::f64::consts::FRAC_PI_2;
    }
    if a.ncols() == 0 {
        return 0.0;
    }
    let cross = a.transpose() * b;
    let s = svd(&cross).singular_values;
    let smallest = s.iter().copied().fold(f64::INFINITY, f64::min).clamp(-1.0, 1.0);
    smallest.acos()
}

/// `m^k` by repeated squaring.
pub fn power(m: &DMatrix<f64>, mut k: usize) -> DMatrix<f64> {
    let n = m.nrows();
    let mut result = DMatrix::identity(n, n);
    let mut base = m.clone();
    while k > 0 {
        if k & 1 == 1 {
            result = &result * &base;
        }
        k >>= 1;
        if k > 0 {
            base = &base * &base;
        }
    }
    result
}

/// Frobenius distance.
pub fn distance(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).norm()
}

/// Distance between the rays of two nonzero matrices (both normalized to unit Frobenius norm).
pub fn ray_distance(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let na = a.norm();
    let nb = b.norm();
    if na == 0.0 || nb == 0.0 {
        return if na == nb { 0.0 } else { 1.0 };
    }
    (a / na - b / nb).norm()
}

/// If `m` is a positive multiple of an idempotent, returns that idempotent.
pub fn idempotent_scaling(m: &DMatrix<f64>, tol: f64) -> Option<DMatrix<f64>> {
    let sq = m * m;
    let denom = m.norm_squared();
    if denom == 0.0 {
        return None;
    }
    let beta = sq.dot(m) / denom;
    if beta <= 0.0 {
        return None;
    }
    let p = m / beta;
    let residual = (&p * &p - &p).norm();
    (residual <= tol * (1.0 + p.norm())).then_some(p)
}
