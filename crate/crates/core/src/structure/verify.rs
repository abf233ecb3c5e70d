//! Numerical verification of the consequences of the permutation structure:
//! spectral radii of compressions, multiplicativity of the spectral radius,
//! roots of unity among peripheral eigenvalues, lower bounds for local
//! spectral radii, strong expansion of the minimal projection, and the
//! lattice property of Perron eigenspaces.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::eigen;
use crate::error::Result;
use crate::linalg;
use crate::semigroup::{ProjectionRecord, SemigroupApprox};

use super::permutation::{permutation_order, PermutationStructure};
use super::Diagnosis;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CheckStatus {
    Pass,
    Fail,
    Inconclusive,
    Skipped,
    NotApplicable,
}

impl CheckStatus {
    pub fn label(&self) -> &'static str {
        match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Inconclusive => "INCONCLUSIVE",
            CheckStatus::Skipped => "SKIPPED",
            CheckStatus::NotApplicable => "N/A",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub id: &'static str,
    pub name: &'static str,
    pub citation: &'static str,
    pub status: CheckStatus,
    pub evidence: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct StructureVerificationReport {
    pub checks: Vec<Check>,
}

impl StructureVerificationReport {
    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn any_failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == CheckStatus::Fail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    /// Power horizon for local spectral radii.
    pub horizon: usize,
    pub samples: usize,
    /// Allowed relative shortfall of the local radius at the horizon.
    pub delta: f64,
    pub seed: u64,
    /// Rays used for pairwise multiplicativity checks.
    pub max_pairs: usize,
    /// Relative tolerance for spectral identities.
    pub tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            horizon: 200,
            samples: 10,
            delta: 0.01,
            seed: 0,
            max_pairs: 60,
            tol: 1e-6,
        }
    }
}

/// `||S^N x||^{1/N}` for `N = 1..=horizon`, accumulated in logarithms.
pub fn local_radius_sequence(s: &DMatrix<f64>, x: &DVector<f64>, horizon: usize) -> Vec<f64> {
    let mut y = x.clone();
    let mut log_acc = 0.0;
    let mut out = Vec::with_capacity(horizon);
    for k in 1..=horizon {
        y = s * y;
        let norm = y.norm();
        if norm == 0.0 {
            out.extend(std::iter::repeat_n(0.0, horizon + 1 - k));
            break;
        }
        log_acc += norm.ln();
        y /= norm;
        out.push((log_acc / k as f64).exp());
    }
    out
}

/// Growth rate over the second half of a local-radius sequence,
/// `(||S^N x|| / ||S^(N/2) x||)^(2/N)`, which discards the constant factor.
pub fn tail_rate(seq: &[f64]) -> f64 {
    let n = seq.len();
    if n < 2 {
        return seq.last().copied().unwrap_or(0.0);
    }
    let half = n / 2;
    let (a, b) = (seq[n - 1], seq[half - 1]);
    if b == 0.0 {
        return 0.0;
    }
    let log_rate = (n as f64 * a.ln() - half as f64 * b.ln()) / (n - half) as f64;
    log_rate.exp()
}

/// A unit vector whose coordinates are drawn uniformly from `(0, 1]` before normalization.
pub fn positive_sample(rng: &mut ChaCha8Rng, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |_, _| 1.0 - rng.gen::<f64>()).normalize()
}

fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

pub fn verify_structure_theorems(
    approx: &SemigroupApprox,
    projections: &[ProjectionRecord],
    ps: &PermutationStructure,
    config: &VerifyConfig,
) -> Result<StructureVerificationReport> {
    let r = ps.rank();
    let mut checks = Vec::with_capacity(6);

    // (a) r(S_Y) = r(S).
    let mut worst = (0.0, 0usize);
    for (ray, e) in approx.rays.iter().zip(&ps.table) {
        let gap = if ray.radius == 0.0 && e.scale == 0.0 {
            0.0
        } else {
            relative_gap(ray.radius, e.scale)
        };
        if gap > worst.0 {
            worst = (gap, e.ray);
        }
    }
    checks.push(Check {
        id: "a",
        name: "compression radius equals spectral radius",
        citation: "every element has the same spectral radius as its action on the range of a minimal projection",
        status: if worst.0 <= config.tol {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        evidence: format!(
            "max relative gap {:.3e} at ray {} over {} rays",
            worst.0,
            worst.1,
            approx.rays.len()
        ),
    });

    // (b) r(ST) = r(S) r(T).
    let sample: Vec<&DMatrix<f64>> = approx
        .rays
        .iter()
        .take(config.max_pairs)
        .map(|r| r.matrix.as_dmatrix())
        .collect();
    let radii: Vec<f64> = approx.rays.iter().take(config.max_pairs).map(|r| r.radius).collect();
    let mut worst_b = (0.0, 0, 0);
    for i in 0..sample.len() {
        for j in 0..sample.len() {
            let rst = eigen::max_modulus(&(sample[i] * sample[j]))?;
            let expected = radii[i] * radii[j];
            let gap = (rst - expected).abs() / expected.max(1e-12);
            if gap > worst_b.0 {
                worst_b = (gap, i, j);
            }
        }
    }
    checks.push(Check {
        id: "b",
        name: "spectral radius is multiplicative",
        citation: "spectral radius is multiplicative on the semigroup",
        status: if worst_b.0 <= config.tol {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        evidence: format!(
            "max relative gap {:.3e} at rays ({}, {}) over {} pairs",
            worst_b.0,
            worst_b.1,
            worst_b.2,
            sample.len() * sample.len()
        ),
    });

    // (c) at least r unimodular eigenvalues of S / r(S_Y); those of S_Y are roots of unity of order dividing r!.
    let mut c_fail: Option<String> = None;
    let mut c_checked = 0;
    for (ray, e) in approx.rays.iter().zip(&ps.table) {
        let Some(perm) = &e.permutation else { continue };
        if e.scale <= 0.0 {
            continue;
        }
        c_checked += 1;
        let exponent = if r <= 8 {
            (1..=r).product::<usize>()
        } else {
            permutation_order(perm)
        };
        let s = ray.matrix.as_dmatrix() / e.scale;
        let ev = eigen::eigenvalues(&s)?;
        let unimodular = ev.iter().filter(|z| (z.norm() - 1.0).abs() <= config.tol).count();
        if unimodular < r {
            c_fail.get_or_insert(format!(
                "ray {} has {unimodular} unimodular eigenvalues, expected >= {r}",
                e.ray
            ));
        }
        for z in eigen::eigenvalues(&ps.compression(&s))? {
            let dev = (z.powu(exponent as u32) - 1.0).norm();
            if dev > config.tol * exponent as f64 {
                c_fail.get_or_insert(format!(
                    "ray {}: |λ^{exponent} - 1| = {dev:.3e} for λ = {z} on Y",
                    e.ray
                ));
            }
        }
    }
    checks.push(Check {
        id: "c",
        name: "eigenvalues on the common range are roots of unity",
        citation: "a normalized element has at least r unimodular eigenvalues, and those of its restriction to the common range satisfy λ^(r!) = 1",
        status: if c_fail.is_some() {
            CheckStatus::Fail
        } else {
            CheckStatus::Pass
        },
        evidence: c_fail.unwrap_or_else(|| {
            format!(
                "{c_checked} rays checked with exponent {}",
                if r <= 8 { "r!" } else { "ord(π_S)" }
            )
        }),
    });

    // (d) local spectral radii at positive vectors and functionals.
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = approx.dim();
    let mut worst_d = f64::INFINITY;
    let mut d_fail = None;
    let mut d_short = None;
    for (ray, e) in approx.rays.iter().zip(&ps.table) {
        if e.scale <= 0.0 {
            continue;
        }
        let s = ray.matrix.as_dmatrix();
        let st = s.transpose();
        for _ in 0..config.samples {
            let x = positive_sample(&mut rng, n);
            let xs = positive_sample(&mut rng, n);
            for (label, m, v) in [("x", s, &x), ("x*", &st, &xs)] {
                let seq = local_radius_sequence(m, v, config.horizon);
                let last = *seq.last().unwrap_or(&0.0);
                let bound = e.scale * (1.0 - config.delta);
                worst_d = worst_d.min(last / e.scale);
                if last >= bound {
                    continue;
                }
                if tail_rate(&seq) < bound {
                    d_fail.get_or_insert(format!(
                        "ray {} ({label}): ||S^N v||^(1/N) = {last:.6} and tail growth {:.6} below (1-δ) r(S_Y) = {bound:.6}",
                        e.ray,
                        tail_rate(&seq)
                    ));
                } else {
                    d_short.get_or_insert(format!(
                        "ray {} ({label}): ||S^N v||^(1/N) = {last:.6} < {bound:.6} at N = {}, tail growth {:.6}; increase N",
                        e.ray,
                        config.horizon,
                        tail_rate(&seq)
                    ));
                }
            }
        }
    }
    let (status, evidence) = match (d_fail, d_short) {
        (Some(f), _) => (CheckStatus::Fail, f),
        (None, Some(s)) => (CheckStatus::Inconclusive, s),
        (None, None) => (
            CheckStatus::Pass,
            format!(
                "min ratio to r(S_Y) at N = {}: {:.6} over {} samples per ray",
                config.horizon, worst_d, config.samples
            ),
        ),
    };
    checks.push(Check {
        id: "d",
        name: "local spectral radius lower bound",
        citation: "liminf ||S^n x||^(1/n) >= r(S_Y) for x > 0, and dually for x* > 0",
        status,
        evidence,
    });

    // (e) the minimal projection is strongly expanding iff r = 1.
    let p = projections[ps.projection].as_dmatrix();
    let scale = p.amax();
    let dead: Vec<usize> = (0..n)
        .filter(|&j| p.column(j).iter().any(|&v| v <= 1e-12 * scale))
        .collect();
    let zero_columns: Vec<String> = (0..n)
        .filter(|&j| p.column(j).amax() <= 1e-12 * scale)
        .map(|j| format!("P e_{} = 0", j + 1))
        .collect();
    let expanding = dead.is_empty();
    let detail = if expanding {
        "P e_j strictly positive for every j".to_string()
    } else if !zero_columns.is_empty() {
        zero_columns.join(", ")
    } else {
        format!("P e_{} not strictly positive", dead[0] + 1)
    };
    let (status, evidence) = if ps.diagnosis == Diagnosis::UniqueProjection {
        let ok = expanding == (r == 1);
        (
            if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            format!("r = {r}, strongly expanding = {expanding}; {detail}"),
        )
    } else {
        (
            CheckStatus::NotApplicable,
            format!(
                "requires a unique minimal projection (diagnosis {}); recorded: r = {r}, strongly expanding = {expanding}; {detail}; minimal projections need not be strictly positive here",
                ps.diagnosis
            ),
        )
    };
    checks.push(Check {
        id: "e",
        name: "strong expansion of the minimal projection",
        citation: "with a unique minimal projection P, P is strongly expanding iff the minimal rank is one",
        status,
        evidence,
    });

    // (f) the eigenspace of r(S) is closed under |.| when r(S) is a simple eigenvalue.
    let mut f_checked = 0;
    let mut f_skipped = 0;
    let mut f_fail = None;
    for (i, ray) in approx.rays.iter().enumerate() {
        if ray.radius <= 0.0 {
            continue;
        }
        let ev = eigen::eigenvalues(ray.matrix.as_dmatrix())?;
        let near = ev
            .iter()
            .filter(|z| (*z - ray.radius).norm() <= config.tol * ray.radius)
            .count();
        if near != 1 {
            f_skipped += 1;
            continue;
        }
        f_checked += 1;
        let s = ray.matrix.as_dmatrix();
        let shifted = s - DMatrix::<f64>::identity(n, n) * ray.radius;
        let v = linalg::kernel_basis(&shifted, 1).column(0).abs();
        let residual = (s * &v - &v * ray.radius).norm() / (ray.radius * v.norm());
        if residual > config.tol {
            f_fail.get_or_insert(format!("ray {i}: ||S|v| - r|v||| / (r ||v||) = {residual:.3e}"));
        }
    }
    let status = if f_fail.is_some() {
        CheckStatus::Fail
    } else if f_checked == 0 {
        CheckStatus::Skipped
    } else {
        CheckStatus::Pass
    };
    checks.push(Check {
        id: "f",
        name: "Perron eigenspace is a sublattice",
        citation: "the eigenspace of r(S) is a sublattice",
        status,
        evidence: f_fail
            .unwrap_or_else(|| format!("{f_checked} rays checked, {f_skipped} skipped (clustered eigenvalue)")),
    });

    Ok(StructureVerificationReport { checks })
}
