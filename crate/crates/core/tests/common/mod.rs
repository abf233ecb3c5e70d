#![allow(dead_code)]

use std::path::PathBuf;

use nalgebra::DMatrix;
use positive_semigroups::cli::{parse_matrix_set, MatrixSet};
use positive_semigroups::irreducibility::is_ideal_irreducible;
use positive_semigroups::Matrix;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn load(name: &str) -> MatrixSet {
    parse_matrix_set(&fixture(name)).expect("fixture parses")
}

pub fn m(rows: &[&[f64]]) -> Matrix {
    Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

fn weight(rng: &mut ChaCha8Rng) -> f64 {
    1.0 - rng.gen::<f64>()
}

/// Random pattern of the given density with weights in `(0, 1]`.
pub fn random_sparse(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Matrix {
    let d = DMatrix::from_fn(n, n, |_, _| if rng.gen_bool(density) { weight(rng) } else { 0.0 });
    Matrix::from_dmatrix(d).unwrap()
}

/// Random matrix whose digraph only has edges from class `c` to class `c + 1 mod h`.
pub fn random_cyclic_blocks(rng: &mut ChaCha8Rng, n: usize, h: usize) -> Matrix {
    let mut class: Vec<usize> = (0..n).map(|i| if i < h { i } else { rng.gen_range(0..h) }).collect();
    class.shuffle(rng);
    let density = rng.gen_range(0.4..0.9);
    let d = DMatrix::from_fn(n, n, |v, u| {
        if class[v] == (class[u] + 1) % h && rng.gen_bool(density) {
            weight(rng)
        } else {
            0.0
        }
    });
    Matrix::from_dmatrix(d).unwrap()
}

/// Random irreducible matrix; half of the draws have a prescribed random period.
pub fn random_irreducible(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let periodic = rng.gen_bool(0.5);
    let h = rng.gen_range(1..=n);
    let density = rng.gen_range(0.25..0.7);
    loop {
        let t = if periodic {
            random_cyclic_blocks(rng, n, h)
        } else {
            random_sparse(rng, n, density)
        };
        if is_ideal_irreducible(std::slice::from_ref(&t)).unwrap().verdict {
            return t;
        }
    }
}

/// Boolean-pattern period: gcd of the lengths `k <= n` of closed walks.
pub fn period_oracle(t: &Matrix) -> usize {
    let n = t.dim();
    let b = t.pattern(0.0);
    let mut power = b.clone();
    let mut g = 0;
    for k in 1..=n {
        if (0..n).any(|i| power[i][i]) {
            g = gcd(g, k);
        }
        let mut next = vec![vec![false; n]; n];
        for i in 0..n {
            for l in 0..n {
                if power[i][l] {
                    for j in 0..n {
                        next[i][j] |= b[l][j];
                    }
                }
            }
        }
        power = next;
    }
    g
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `Σ c_k S^k` for the cyclic shift `S`.
pub fn circulant(n: usize, coeffs: &[(usize, f64)]) -> Matrix {
    let shift = Matrix::cyclic_shift(n);
    let mut d = DMatrix::zeros(n, n);
    for &(k, c) in coeffs {
        let mut p = DMatrix::identity(n, n);
        for _ in 0..k {
            p = shift.as_dmatrix() * p;
        }
        d += p * c;
    }
    Matrix::from_dmatrix(d).unwrap()
}

/// Exhaustive search for a proper nonempty coordinate set invariant under every generator.
pub fn has_invariant_subset(gens: &[Matrix]) -> bool {
    let n = gens[0].dim();
    (1u32..(1u32 << n) - 1).any(|mask| {
        gens.iter().all(|g| {
            (0..n)
                .filter(|j| mask >> j & 1 == 1)
                .all(|j| (0..n).filter(|i| mask >> i & 1 == 0).all(|i| g.get(i, j) == 0.0))
        })
    })
}
