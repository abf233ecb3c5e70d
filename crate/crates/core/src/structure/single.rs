//! A single irreducible nonnegative matrix `T`: its peripheral part cyclically
//! permutes `r` disjoint positive vectors, `r` being simultaneously the period,
//! the minimal rank in `R_+ T` and the number of peripheral eigenvalues.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::irreducibility;
use crate::lattice::{CoordinateIdeal, LatticeVector, Matrix, Tolerances};
use crate::semigroup::{self, generate_ball_with, normalize, BallConfig, Origin};
use crate::spectral;

use super::permutation::{permutation_order, permutation_structure};

#[derive(Debug, Clone, Serialize)]
pub struct SingleOperatorReport {
    pub radius: f64,
    /// Cycle length `r`, taken from the period.
    pub r: usize,
    pub period: usize,
    pub minrank: Option<usize>,
    pub peripheral_multiplicity: usize,
    /// The three computations of `r` coincide.
    pub agree: bool,
    /// Cyclic basis `x_1 .. x_r` with `T x_i = r(T) x_{σ(i)}`.
    pub basis: Vec<LatticeVector>,
    pub cycle: Vec<usize>,
    pub full_cycle: bool,
    /// For a proper sub-cycle, whether the ideal spanned by its atoms is `T`-invariant.
    pub subcycle_witness_invariant: Option<bool>,
    /// `max_i ||T x_i - r(T) x_{σ(i)}|| / (r(T) ||x_{σ(i)}||)`.
    pub action_residual: f64,
    #[serde(serialize_with = "serialize_complex")]
    pub sigma_per: Vec<Complex64>,
    /// Largest distance of a peripheral eigenvalue from `r(T) e^{2πik/r}`, relative to `r(T)`.
    pub roots_deviation: f64,
    /// Every peripheral eigenvalue is simple.
    pub simple: bool,
    /// The rays `T_1^k ⊕ 0`, `k = 0..r-1`, in unit Frobenius norm.
    #[serde(skip)]
    pub asymptotic: Vec<DMatrix<f64>>,
    /// The asymptotic rays are exactly the analytically injected limits in the ball.
    pub asymptotic_in_ball: bool,
}

fn serialize_complex<S: serde::Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>().serialize(s)
}

pub fn analyze_single(t: &Matrix, length: usize) -> Result<SingleOperatorReport> {
    let report = irreducibility::is_ideal_irreducible(std::slice::from_ref(t))?;
    if !report.verdict {
        return Err(Error::Reducible {
            witness: report.witness.expect("reducible has witness"),
        });
    }
    let tol = Tolerances::default();
    let radius = spectral::spectral_radius(t)?;
    let (period, _) = spectral::cyclic_classes(t)?;
    let peripheral = spectral::peripheral_spectrum(t, tol.peripheral)?;
    let peripheral_multiplicity = peripheral.eigenvalues.len();

    let ball = generate_ball_with(std::slice::from_ref(t), &BallConfig::new(length))?;
    let minrank = ball.minrank();
    let agree = minrank == Some(period) && peripheral_multiplicity == period;

    let projections = semigroup::rank_r_projections(&ball)?;
    let ps = permutation_structure(&ball, &projections, 0)?;
    let t_ray = ball
        .rays
        .iter()
        .position(|r| r.origin == Origin::Word(vec![0]))
        .expect("the generator is the first ray");
    let entry = ps.entry(t_ray).expect("every ray has a table entry");
    let cycle = entry
        .permutation
        .clone()
        .ok_or_else(|| Error::NotWeightedPermutation("T vanishes on the peripheral range".into()))?;
    let r = ps.rank();
    let full_cycle = permutation_order(&cycle) == r && is_single_cycle(&cycle);

    let subcycle_witness_invariant = (!full_cycle).then(|| {
        let mut orbit = vec![0];
        while let Some(&last) = orbit.last() {
            let next = cycle[last];
            if next == 0 {
                break;
            }
            orbit.push(next);
        }
        let support: Vec<LatticeVector> = orbit.iter().map(|&i| ps.basis[i].clone()).collect();
        crate::lattice::ideal_closure_with_tol(&support, 1e-9)
            .map(|ideal: CoordinateIdeal| ideal.is_invariant_under(t))
            .unwrap_or(false)
    });

    let x = ps.basis_matrix();
    let action_residual = (0..r)
        .map(|i| {
            let target = x.column(cycle[i]);
            (t.as_dmatrix() * x.column(i) - target * radius).norm() / (radius * target.norm())
        })
        .fold(0.0, f64::max);

    let mut roots_deviation: f64 = 0.0;
    let mut simple = peripheral_multiplicity == period;
    for k in 0..period {
        let predicted = Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / period as f64);
        let close: Vec<f64> = peripheral
            .eigenvalues
            .iter()
            .map(|z| (z - predicted).norm() / radius)
            .collect();
        let best = close.iter().copied().fold(f64::INFINITY, f64::min);
        roots_deviation = roots_deviation.max(best);
        simple &= close.iter().filter(|&&d| d <= 1e-6).count() == 1;
    }

    let data = spectral::peripheral_split(t)?;
    let scaled = t.as_dmatrix() / radius;
    let mut asymptotic = Vec::with_capacity(r);
    let mut acc = data.projection.clone();
    for _ in 0..r {
        asymptotic.push(normalize(&acc).expect("peripheral projection is nonzero"));
        acc = &scaled * acc;
    }
    let asymptotic_in_ball = asymptotic.iter().all(|m| ball.find(m, 1e-6).is_some());

    Ok(SingleOperatorReport {
        radius,
        r: period,
        period,
        minrank,
        peripheral_multiplicity,
        agree,
        basis: ps.basis.clone(),
        cycle,
        full_cycle,
        subcycle_witness_invariant,
        action_residual,
        sigma_per: peripheral.eigenvalues,
        roots_deviation,
        simple,
        asymptotic,
        asymptotic_in_ball,
    })
}

fn is_single_cycle(p: &[usize]) -> bool {
    let mut i = p[0];
    let mut len = 1;
    while i != 0 {
        i = p[i];
        len += 1;
        if len > p.len() {
            return false;
        }
    }
    len == p.len()
}
