//! Enumerate the word ball of a pair of generators up to positive scaling and
//! report its rank profile.

use std::collections::BTreeMap;

use positive_semigroups::semigroup::{generate_ball, Origin};
use positive_semigroups::Matrix;

fn main() -> positive_semigroups::Result<()> {
    let a = Matrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]])?;
    let b = Matrix::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0]])?;
    let ball = generate_ball(&[a, b], 12, 1e-9)?;

    let mut profile = BTreeMap::new();
    for ray in &ball.rays {
        *profile.entry(ray.rank).or_insert(0) += 1;
    }
    println!(
        "{} rays, rank profile {profile:?}, minimal rank {:?}",
        ball.rays.len(),
        ball.minrank()
    );
    println!("zero word: {:?}", ball.zero_word);
    for ray in ball.rays.iter().filter(|r| r.rank == 2).take(4) {
        if let Origin::Word(w) = &ray.origin {
            println!("rank 2 word {w:?}");
        }
    }
    Ok(())
}
