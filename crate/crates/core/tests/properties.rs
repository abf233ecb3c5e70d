mod common;

use nalgebra::DMatrix;
use positive_semigroups::cli::{emit_matrix_set, parse_matrix_set_str, MatrixSet, Params};
use positive_semigroups::irreducibility::{evaluate_word, is_ideal_irreducible};
use positive_semigroups::semigroup::normalize;
use positive_semigroups::spectral::{peripheral_split, perron_vector, spectral_radius};
use positive_semigroups::{CoordinateIdeal, Matrix};
use proptest::prelude::*;

fn entry() -> impl Strategy<Value = f64> {
    prop_oneof![2 => Just(0.0), 3 => 0.01f64..10.0]
}

fn matrix(n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(entry(), n * n)
        .prop_map(move |v| Matrix::from_dmatrix(DMatrix::from_row_slice(n, n, &v)).unwrap())
}

fn family() -> impl Strategy<Value = Vec<Matrix>> {
    (1usize..=6, 1usize..=3).prop_flat_map(|(n, k)| prop::collection::vec(matrix(n), k))
}

fn family_and_perm() -> impl Strategy<Value = (Vec<Matrix>, Vec<usize>)> {
    family().prop_flat_map(|gens| {
        let n = gens[0].dim();
        (Just(gens), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

/// `Π A Πᵀ` for the permutation `Π e_j = e_{perm[j]}`.
fn conjugate(a: &Matrix, perm: &[usize]) -> Matrix {
    let n = a.dim();
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            d[(perm[i], perm[j])] = a.get(i, j);
        }
    }
    Matrix::from_dmatrix(d).unwrap()
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn normalize_ignores_positive_scale(a in (1usize..=5).prop_flat_map(matrix), c in 1e-3f64..1e3) {
        match (normalize(a.as_dmatrix()), normalize(&(a.as_dmatrix() * c))) {
            (None, None) => {}
            (Some(x), Some(y)) => prop_assert!((x - y).norm() < 1e-12),
            _ => prop_assert!(false, "zero pattern changed under scaling"),
        }
    }

    #[test]
    fn irreducibility_invariant_under_relabeling((gens, perm) in family_and_perm()) {
        let before = is_ideal_irreducible(&gens).unwrap();
        let moved: Vec<Matrix> = gens.iter().map(|g| conjugate(g, &perm)).collect();
        let after = is_ideal_irreducible(&moved).unwrap();
        prop_assert_eq!(before.verdict, after.verdict);
        let oracle = if gens[0].dim() == 1 { gens.iter().any(|g| !g.is_zero()) } else { !common::has_invariant_subset(&gens) };
        prop_assert_eq!(before.verdict, oracle);
        if let Some(w) = before.witness {
            let relabeled = CoordinateIdeal::new(w.support().iter().map(|&i| perm[i]));
            prop_assert!(moved.iter().all(|g| relabeled.is_invariant_under(g)));
        }
    }

    #[test]
    fn certificates_and_witnesses_are_valid(gens in family()) {
        let n = gens[0].dim();
        let rep = is_ideal_irreducible(&gens).unwrap();
        if rep.verdict {
            prop_assert_eq!(rep.certificate.len(), n * n);
            for p in &rep.certificate {
                prop_assert!(evaluate_word(&gens, &p.word).get(p.to, p.from) > 0.0);
            }
        } else {
            let w = rep.witness.unwrap();
            prop_assert!(n == 1 || (!w.is_empty() && w.is_proper(n)));
            prop_assert!(gens.iter().all(|g| w.is_invariant_under(g)));
        }
    }

    #[test]
    fn spectral_radius_is_homogeneous_and_transpose_invariant(
        a in (1usize..=6).prop_flat_map(matrix),
        c in 0.1f64..10.0,
    ) {
        let r = spectral_radius(&a).unwrap();
        let scale = a.frobenius_norm().max(1e-300);
        prop_assert!((spectral_radius(&a.scale(c)).unwrap() - c * r).abs() <= 1e-8 * c * scale);
        prop_assert!((spectral_radius(&a.transpose()).unwrap() - r).abs() <= 1e-8 * scale);
    }

    #[test]
    fn peripheral_projection_is_invariant_idempotent(a in (1usize..=6).prop_flat_map(matrix)) {
        let data = match peripheral_split(&a) {
            Err(positive_semigroups::Error::Quasinilpotent) => return Ok(()),
            other => other.unwrap(),
        };
        let p = &data.projection;
        let ad = a.as_dmatrix();
        let size = p.norm().max(1.0);
        prop_assert!((p * p - p).norm() <= 1e-6 * size);
        prop_assert!((ad * p - p * ad).norm() <= 1e-6 * size * ad.norm());
    }

    #[test]
    fn perron_vector_is_positive_eigenvector(n in 1usize..=8, seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let a = common::random_irreducible(&mut rng, n);
        let r = spectral_radius(&a).unwrap();
        let x = perron_vector(&a).unwrap();
        prop_assert!(x.is_strictly_positive());
        let xd = nalgebra::DVector::from_column_slice(x.coords());
        prop_assert!(rel_close((a.as_dmatrix() * &xd).norm(), r * xd.norm(), 1e-8));
        prop_assert!((a.as_dmatrix() * &xd - &xd * r).norm() <= 1e-8 * r * xd.norm());
    }

    #[test]
    fn toml_round_trip(gens in family(), length in prop::option::of(1usize..=20), seed in prop::option::of(any::<u64>())) {
        let names = (0..gens.len()).map(|i| format!("G{i}")).collect();
        let params = Params { length, seed, ..Params::default() };
        let set = MatrixSet { names, generators: gens, params };
        let text = emit_matrix_set(&set);
        prop_assert_eq!(parse_matrix_set_str(&text).unwrap(), set);
    }
}
