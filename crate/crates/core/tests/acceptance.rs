//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

#![allow(clippy::needless_range_loop)]

mod common;

use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_complex::Complex64;
use positive_semigroups::irreducibility::is_ideal_irreducible;
use positive_semigroups::linalg::{max_principal_angle, range_basis, ray_distance};
use positive_semigroups::semigroup::{
    generate_ball, generate_ball_with, normalize, rank_r_projections, right_ideal_analysis, same_range, BallConfig,
};
use positive_semigroups::spectral::{
    classify_dichotomy, combinatorial_projection, period, peripheral_spectrum, peripheral_split, perron_vector,
    spectral_radius, Dichotomy,
};
use positive_semigroups::structure::{
    analyze_commuting_pair, analyze_single, common_eigenvector, fixed_space_intersection_dim, permutation_structure,
    same_range_diagnosis, verify_structure_theorems, CheckStatus, Diagnosis, PairConfig, VerifyConfig,
};
use positive_semigroups::Matrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if $cond {
        } else {
            return Err(format!($($msg)+));
        }
    };
}

fn jordan_pair() -> Vec<Matrix> {
    vec![m(&[&[1.0, 1.0], &[0.0, 1.0]]), m(&[&[0.0, 0.0], &[1.0, 0.0]])]
}

fn criterion_1() -> Outcome {
    let gens = jordan_pair();
    ensure!(
        is_ideal_irreducible(&gens).map_err(|e| e.to_string())?.verdict,
        "{{A, B}} reported reducible"
    );
    let ball = generate_ball(&gens, 12, 1e-9).map_err(|e| e.to_string())?;
    ensure!(ball.minrank() == Some(1), "minrank {:?}", ball.minrank());
    let powers: Vec<DMatrix<f64>> = (1..=12)
        .map(|k| DMatrix::from_row_slice(2, 2, &[1.0, k as f64, 0.0, 1.0]))
        .collect();
    let mut rank_two = 0;
    for ray in ball.rays.iter().filter(|r| r.rank == 2) {
        rank_two += 1;
        let d = powers
            .iter()
            .map(|p| ray_distance(ray.matrix.as_dmatrix(), p))
            .fold(f64::INFINITY, f64::min);
        ensure!(d <= 1e-8, "rank-2 ray {:?} is {d:e} from every power of A", ray.origin);
    }
    let identity = normalize(&DMatrix::identity(2, 2)).unwrap();
    ensure!(ball.find(&identity, 1e-8).is_none(), "I found in the ball");
    let dich = classify_dichotomy(&gens[0], 1_000_000).map_err(|e| e.to_string())?;
    let Dichotomy::Nilpotent { limit, .. } = &dich.kind else {
        return Err("A classified as unimodular".into());
    };
    let expected = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
    let d = ray_distance(limit, &expected);
    ensure!(d <= 1e-8, "nilpotent limit {d:e} from [[0,1],[0,0]]");
    Ok(format!(
        "{} rays, {rank_two} of rank 2, all powers of A; I absent; limit ray error {d:.1e}",
        ball.len()
    ))
}

fn criterion_2() -> Outcome {
    let set = load("distinct_ranges.toml");
    let ball = generate_ball(&set.generators, 6, 1e-9).map_err(|e| e.to_string())?;
    let projections = rank_r_projections(&ball).map_err(|e| e.to_string())?;
    ensure!(projections.len() == 2, "{} projections", projections.len());
    ensure!(
        projections.iter().all(|p| p.rank == 1),
        "projection ranks differ from 1"
    );
    let angle = max_principal_angle(
        &range_basis(projections[0].as_dmatrix(), 1e-8),
        &range_basis(projections[1].as_dmatrix(), 1e-8),
    );
    ensure!(angle > 0.1, "principal angle {angle}");
    let diag = same_range_diagnosis(&ball, &projections).map_err(|e| e.to_string())?;
    ensure!(
        diag.diagnosis == Diagnosis::DistinctRanges,
        "diagnosis {}",
        diag.diagnosis
    );
    let fixed = fixed_space_intersection_dim(&projections);
    ensure!(fixed == 0, "fixed-space intersection dimension {fixed}");
    // Oracle: Px = x and Qx = x force x into span(1/2, 1/2) ∩ span(1/3, 2/3).
    let stacked = DMatrix::<f64>::from_row_slice(2, 2, &[0.5, 1.0 / 3.0, 0.5, 2.0 / 3.0]);
    ensure!(stacked.determinant().abs() > 1e-3, "oracle ranges coincide");
    Ok(format!(
        "2 rank-1 projections, principal angle {angle:.4} rad, fixed-space intersection 0"
    ))
}

fn criterion_3() -> Outcome {
    let set = load("same_range.toml");
    let ball = generate_ball(&set.generators, 6, 1e-9).map_err(|e| e.to_string())?;
    let projections = rank_r_projections(&ball).map_err(|e| e.to_string())?;
    ensure!(projections.len() == 2, "{} projections", projections.len());
    let (p, q) = (projections[0].as_dmatrix(), projections[1].as_dmatrix());
    ensure!((p - q).norm() > 0.1, "projections coincide");
    ensure!(same_range(p, q, 1e-8), "ranges differ");
    let angle = max_principal_angle(&range_basis(p, 1e-8), &range_basis(q, 1e-8));
    ensure!(angle <= 1e-8, "principal angle {angle:e}");
    let ps = permutation_structure(&ball, &projections, 0).map_err(|e| e.to_string())?;
    ensure!(
        ps.diagnosis == Diagnosis::SameRangeMultiple,
        "diagnosis {}",
        ps.diagnosis
    );
    let x0 = &ps.x0.0;
    let one = nalgebra::DVector::from_element(2, 1.0);
    ensure!((x0 - &one).amax() <= 1e-8, "x0 = {x0:?}");
    ensure!(
        (p * x0 - x0).amax() <= 1e-8 && (q * x0 - x0).amax() <= 1e-8,
        "x0 not fixed"
    );
    let ce = common_eigenvector(&ball, &ps).map_err(|e| e.to_string())?;
    ensure!(
        ce.x0star.is_none() && ce.dual_caveat.is_some(),
        "dual eigenfunctional emitted"
    );
    // Oracle: the adjoints fix [1, 1] and [1, 2] respectively, so they share no fixed functional.
    let pt = set.generators[0].as_dmatrix().transpose();
    let qt = set.generators[1].as_dmatrix().transpose();
    let (a, b) = (
        nalgebra::DVector::from_vec(vec![1.0, 1.0]),
        nalgebra::DVector::from_vec(vec![1.0, 2.0]),
    );
    ensure!(
        (&pt * &a - &a).amax() < 1e-12 && (&qt * &b - &b).amax() < 1e-12,
        "adjoint oracle"
    );
    Ok("2 projections sharing range span(1,1), x0 = (1,1), dual emission withheld".into())
}

fn criterion_4() -> Outcome {
    let set = load("not_strictly_positive.toml");
    let (p, q) = (&set.generators[0], &set.generators[1]);
    ensure!(
        p.rows() == vec![vec![1.0, 0.0], vec![1.0, 0.0]],
        "P entries {:?}",
        p.rows()
    );
    let mut witnesses = Vec::new();
    for g in [p, q] {
        let rep = is_ideal_irreducible(std::slice::from_ref(g)).map_err(|e| e.to_string())?;
        let w = rep.witness.ok_or("generator reported irreducible")?;
        ensure!(
            w.is_invariant_under(g) && w.is_proper(2) && !w.is_empty(),
            "witness {w} not a proper invariant ideal"
        );
        witnesses.push(w.to_string());
    }
    ensure!(
        is_ideal_irreducible(&set.generators)
            .map_err(|e| e.to_string())?
            .verdict,
        "pair reported reducible"
    );
    let ball = generate_ball(&set.generators, 6, 1e-9).map_err(|e| e.to_string())?;
    let projections = rank_r_projections(&ball).map_err(|e| e.to_string())?;
    let ri = right_ideal_analysis(&ball, &projections).map_err(|e| e.to_string())?;
    ensure!(
        ri.conditions.unique_minimal,
        "minimal right ideal not unique: {:?}",
        ri.classes
    );
    let ps = permutation_structure(&ball, &projections, 0).map_err(|e| e.to_string())?;
    let report =
        verify_structure_theorems(&ball, &projections, &ps, &VerifyConfig::default()).map_err(|e| e.to_string())?;
    let e = report.check("e").ok_or("no check (e)")?;
    ensure!(e.evidence.contains("P e_2 = 0"), "check (e) evidence: {}", e.evidence);
    ensure!(
        e.status == CheckStatus::NotApplicable,
        "check (e) status {:?}",
        e.status
    );
    Ok(format!(
        "witnesses {} and {}, pair irreducible, unique minimal right ideal, P e_2 = 0 recorded",
        witnesses[0], witnesses[1]
    ))
}

/// Peripheral projection from complex null vectors of `A - λ` and `A^T - λ`.
fn eigenvector_projection(a: &DMatrix<f64>, eigenvalues: &[Complex64]) -> DMatrix<f64> {
    let n = a.nrows();
    let ac = a.map(|v| Complex64::new(v, 0.0));
    let null_vector = |m: DMatrix<Complex64>| {
        let svd = m.svd(false, true);
        let k = svd.singular_values.imin();
        svd.v_t.unwrap().row(k).adjoint()
    };
    let mut p = DMatrix::<Complex64>::zeros(n, n);
    for &lam in eigenvalues {
        let shift = DMatrix::<Complex64>::identity(n, n) * lam;
        let v = null_vector(&ac - &shift);
        let w = null_vector(ac.transpose() - &shift);
        let scale = (w.transpose() * &v)[(0, 0)];
        p += &v * w.transpose() / scale;
    }
    p.map(|z| z.re)
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut worst_eig, mut worst_proj, mut min_perron) = (0.0f64, 0.0f64, f64::INFINITY);
    let mut periods = std::collections::BTreeMap::new();
    for trial in 0..200 {
        let n = rng.gen_range(1..=8);
        let a = random_irreducible(&mut rng, n);
        let h = period_oracle(&a);
        *periods.entry(h).or_insert(0) += 1;
        let hp = period(&a).map_err(|e| e.to_string())?;
        ensure!(hp == h, "trial {trial}: period {hp}, oracle {h}");
        let r = spectral_radius(&a).map_err(|e| e.to_string())?;
        let per = peripheral_spectrum(&a, 1e-8).map_err(|e| e.to_string())?;
        ensure!(
            per.eigenvalues.len() == h,
            "trial {trial}: {} peripheral eigenvalues, period {h}",
            per.eigenvalues.len()
        );
        for k in 0..h {
            let target = Complex64::from_polar(r, 2.0 * std::f64::consts::PI * k as f64 / h as f64);
            let d = per
                .eigenvalues
                .iter()
                .map(|z| (z - target).norm())
                .fold(f64::INFINITY, f64::min);
            worst_eig = worst_eig.max(d / r);
            ensure!(d <= 1e-6 * r, "trial {trial}: no eigenvalue within 1e-6 r of {target}");
        }
        let oracle = eigenvector_projection(a.as_dmatrix(), &per.eigenvalues);
        let combinatorial = combinatorial_projection(&a).map_err(|e| e.to_string())?;
        let split = peripheral_split(&a).map_err(|e| e.to_string())?.projection;
        let d = (&combinatorial - &oracle).norm().max((&split - &oracle).norm());
        worst_proj = worst_proj.max(d);
        ensure!(
            d <= 1e-6,
            "trial {trial}: projection differs from eigenvector oracle by {d:e}"
        );
        let v = perron_vector(&a).map_err(|e| e.to_string())?.0;
        let v = &v / v.sum();
        min_perron = min_perron.min(v.min());
        ensure!(v.min() > 1e-10, "trial {trial}: Perron vector min {:e}", v.min());
        ensure!(
            (a.as_dmatrix() * &v - &v * r).norm() <= 1e-9 * r * v.norm(),
            "trial {trial}: Perron residual"
        );
    }
    Ok(format!(
        "200 matrices, periods {periods:?}; max eigenvalue error {worst_eig:.1e} r, max projection error {worst_proj:.1e}, min Perron coordinate {min_perron:.1e}"
    ))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    let mut max_r = 0;
    for trial in 0..100 {
        let n = rng.gen_range(1..=8);
        let t = random_irreducible(&mut rng, n);
        let rep =
            analyze_single(&t, (2 * n + 2).min(20)).map_err(|e| format!("trial {trial}: {e}; T = {:?}", t.rows()))?;
        let r = rep.r;
        max_r = max_r.max(r);
        ensure!(
            rep.period == period_oracle(&t) && rep.minrank == Some(r) && rep.peripheral_multiplicity == r,
            "trial {trial}: period {}, minrank {:?}, peripheral {}",
            rep.period,
            rep.minrank,
            rep.peripheral_multiplicity
        );
        ensure!(
            rep.basis.len() == r && rep.cycle.len() == r,
            "trial {trial}: basis of size {}",
            rep.basis.len()
        );
        let mut i = rep.cycle[0];
        let mut len = 1;
        while i != 0 && len <= r {
            i = rep.cycle[i];
            len += 1;
        }
        ensure!(len == r, "trial {trial}: cycle {:?} is not a full r-cycle", rep.cycle);
        for i in 0..r {
            let xi = &rep.basis[i].0;
            let target = &rep.basis[rep.cycle[i]].0;
            let res = (t.as_dmatrix() * xi - target * rep.radius).norm();
            worst = worst.max(res / (rep.radius * target.norm()));
            ensure!(
                res <= 1e-6 * rep.radius * target.norm(),
                "trial {trial}: ||T x_{i} - r x_σ(i)|| = {res:e}"
            );
            for j in (i + 1)..r {
                let (a, b) = (xi, &rep.basis[j].0);
                let bound = 1e-9 * (a.amax() + b.amax());
                ensure!(
                    a.iter().zip(b.iter()).all(|(u, v)| u.abs().min(v.abs()) <= bound),
                    "trial {trial}: x_{i} and x_{j} overlap"
                );
            }
        }
    }
    Ok(format!(
        "100 matrices up to r = {max_r}; max action residual {worst:.1e}"
    ))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut worst_res, mut worst_law, mut pairs) = (0.0f64, 0.0f64, 0);
    for trial in 0..30 {
        let n = rng.gen_range(2..=6);
        let gens = loop {
            let mut draw = || {
                let terms = rng.gen_range(1..=2);
                let coeffs: Vec<(usize, f64)> = (0..terms)
                    .map(|_| (rng.gen_range(0..n), 1.0 - rng.gen::<f64>()))
                    .collect();
                circulant(n, &coeffs)
            };
            let g = vec![draw(), draw()];
            if is_ideal_irreducible(&g).unwrap().verdict {
                break g;
            }
        };
        let ball = generate_ball(&gens, 5, 1e-9).map_err(|e| format!("trial {trial}: {e}"))?;
        let projections = rank_r_projections(&ball).map_err(|e| format!("trial {trial}: {e}"))?;
        let ps = permutation_structure(&ball, &projections, 0).map_err(|e| format!("trial {trial}: {e}"))?;
        let (x, f) = (ps.basis_matrix(), ps.dual_matrix());
        let r = ps.rank();
        for (ray, e) in ball.rays.iter().zip(&ps.table) {
            let perm = e
                .permutation
                .as_ref()
                .ok_or(format!("trial {trial}: ray {} vanishes on the range", e.ray))?;
            let s = ray.matrix.as_dmatrix();
            for i in 0..r {
                let target = x.column(perm[i]);
                let res = (s * x.column(i) - target * e.scale).norm() / (e.scale * target.norm());
                worst_res = worst_res.max(res);
                ensure!(res <= 1e-6, "trial {trial}: ray {} residual {res:e}", e.ray);
            }
        }
        for (u, eu) in ball.rays.iter().zip(&ps.table) {
            for (v, ev) in ball.rays.iter().zip(&ps.table) {
                let (pu, pv) = (eu.permutation.as_ref().unwrap(), ev.permutation.as_ref().unwrap());
                let composed: Vec<usize> = pv.iter().map(|&i| pu[i]).collect();
                let c = eu.scale * ev.scale;
                let expected = DMatrix::from_fn(r, r, |i, j| if composed[j] == i { c } else { 0.0 });
                let actual = &f * u.matrix.as_dmatrix() * v.matrix.as_dmatrix() * &x;
                let gap = (actual - expected).amax() / c;
                worst_law = worst_law.max(gap);
                pairs += 1;
                ensure!(gap <= 1e-6, "trial {trial}: group law gap {gap:e}");
            }
        }
    }
    Ok(format!(
        "30 circulant pairs, {pairs} ray pairs; max residual {worst_res:.1e}, max group-law gap {worst_law:.1e}"
    ))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut worst_id, mut worst_local) = (0.0f64, 0.0f64);
    for trial in 0..50 {
        let n = rng.gen_range(2..=6);
        let k = random_irreducible(&mut rng, n);
        let kd = k.as_dmatrix();
        let coeffs: Vec<f64> = (0..4).map(|_| rng.gen::<f64>()).collect();
        let mut s = DMatrix::identity(n, n) * coeffs[0];
        let mut power = DMatrix::identity(n, n);
        for c in &coeffs[1..] {
            power = kd * power;
            s += &power * *c;
        }
        let s = Matrix::from_dmatrix(s).unwrap();
        let config = PairConfig {
            horizon: 200,
            samples: 10,
            seed: trial,
            length: 3,
        };
        let rep = analyze_commuting_pair(&s, &k, &config).map_err(|e| format!("trial {trial}: {e}"))?;
        let (x, y) = (&rep.x0.0, &rep.x0star.0);
        ensure!(
            x.min() > 0.0 && y.min() > 0.0,
            "trial {trial}: x0 or x0* not strictly positive"
        );
        let sd = s.as_dmatrix();
        let ids = [
            (sd * x - x * rep.lambda).norm() / (rep.lambda * x.norm()),
            (kd * x - x * rep.r_k).norm() / (rep.r_k * x.norm()),
            (sd.transpose() * y - y * rep.lambda).norm() / (rep.lambda * y.norm()),
            (kd.transpose() * y - y * rep.r_k).norm() / (rep.r_k * y.norm()),
        ];
        let id = ids.iter().copied().fold(0.0, f64::max);
        worst_id = worst_id.max(id);
        ensure!(id <= 1e-6, "trial {trial}: eigen-identity residual {id:e}");
        // Collatz-Wielandt bracket for a strictly positive vector certifies r(K).
        let kx = kd * x;
        let ratios: Vec<f64> = (0..n).map(|i| kx[i] / x[i]).collect();
        let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().copied().fold(0.0, f64::max);
        ensure!(
            lo <= rep.r_k * (1.0 + 1e-9) && hi >= rep.r_k * (1.0 - 1e-9) && hi - lo <= 1e-6 * rep.r_k,
            "trial {trial}: r(K) = {} outside [{lo}, {hi}]",
            rep.r_k
        );
        for v in rep.k_final.iter().chain(&rep.k_dual_final) {
            let gap = (v - rep.r_k).abs() / rep.r_k;
            worst_local = worst_local.max(gap);
            ensure!(gap <= 0.01, "trial {trial}: local radius {v} vs r(K) = {}", rep.r_k);
        }
        ensure!(
            rep.k_final.len() == 10 && rep.k_dual_final.len() == 10,
            "trial {trial}: sample count"
        );
    }
    Ok(format!(
        "50 pairs; max identity residual {worst_id:.1e}, max local-radius gap {:.2}% at N = 200",
        worst_local * 100.0
    ))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut irreducible, mut reducible) = (0, 0);
    for trial in 0..100 {
        let n = 1 + trial % 10;
        let count = rng.gen_range(1..=3);
        let density = rng.gen_range(0.05..0.4);
        let gens: Vec<Matrix> = (0..count).map(|_| random_sparse(&mut rng, n, density)).collect();
        let verdict = is_ideal_irreducible(&gens).map_err(|e| e.to_string())?.verdict;
        // The zero family on R is excluded from irreducibility by convention.
        let nonzero = gens.iter().any(|g| !g.is_zero());
        let oracle = nonzero && !has_invariant_subset(&gens);
        ensure!(
            verdict == oracle,
            "trial {trial} (n = {n}): SCC {verdict}, exhaustive {oracle}"
        );
        if oracle {
            irreducible += 1
        } else {
            reducible += 1
        }
    }
    Ok(format!(
        "100 sets, n = 1..=10: {irreducible} irreducible, {reducible} reducible, all agree"
    ))
}

fn criterion_10() -> Outcome {
    let mut summary = Vec::new();
    for (file, expected) in [
        ("two_projections_r3.toml", false),
        ("distinct_ranges.toml", false),
        ("same_range.toml", true),
        ("not_strictly_positive.toml", true),
    ] {
        let set = load(file);
        let ball = generate_ball_with(&set.generators, &BallConfig::new(6)).map_err(|e| e.to_string())?;
        let projections = rank_r_projections(&ball).map_err(|e| e.to_string())?;
        let c = right_ideal_analysis(&ball, &projections)
            .map_err(|e| e.to_string())?
            .conditions;
        ensure!(c.consistent(), "{file}: conditions {c:?}");
        ensure!(
            c.same_range == expected,
            "{file}: same range {}, expected {expected}",
            c.same_range
        );
        summary.push(format!("{}={}", file.trim_end_matches(".toml"), c.same_range));
    }
    Ok(format!("four conditions agree: {}", summary.join(", ")))
}

fn main() {
    let criteria: [Criterion; 10] = [
        (
            "jordan pair: I not in the semigroup",
            criterion_1,
            Duration::from_secs(2),
        ),
        (
            "two projections with distinct ranges",
            criterion_2,
            Duration::from_secs(1),
        ),
        (
            "two projections with a common range",
            criterion_3,
            Duration::from_secs(1),
        ),
        (
            "irreducible pair of reducible projections",
            criterion_4,
            Duration::from_secs(1),
        ),
        ("Perron-Frobenius battery", criterion_5, Duration::from_secs(20)),
        (
            "single-operator cyclic structure battery",
            criterion_6,
            Duration::from_secs(15),
        ),
        (
            "circulant scaled-permutation battery",
            criterion_7,
            Duration::from_secs(10),
        ),
        ("commuting pair battery", criterion_8, Duration::from_secs(20)),
        ("irreducibility oracle", criterion_9, Duration::from_secs(10)),
        (
            "right ideal equivalence on fixtures",
            criterion_10,
            Duration::from_secs(2),
        ),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let elapsed = t.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > *limit => Err(format!("{msg}; took {elapsed:.2?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS criterion {:>2} ({name}) [{elapsed:.2?}]: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {:>2} ({name}) [{elapsed:.2?}]: {msg}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed in {:.2?}",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
