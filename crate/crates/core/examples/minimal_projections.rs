//! Minimal-rank projections of the generated semigroup and the equivalent
//! conditions on its minimal right ideals.

use positive_semigroups::semigroup::{generate_ball, rank_r_projections, right_ideal_analysis};
use positive_semigroups::Matrix;

fn main() -> positive_semigroups::Result<()> {
    let p = Matrix::from_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]])?;
    let distinct = Matrix::from_rows(&[vec![1.0 / 3.0, 1.0 / 3.0], vec![2.0 / 3.0, 2.0 / 3.0]])?;
    let shared = Matrix::from_rows(&[vec![1.0 / 3.0, 2.0 / 3.0], vec![1.0 / 3.0, 2.0 / 3.0]])?;

    for (name, q) in [("distinct ranges", distinct), ("shared range", shared)] {
        let ball = generate_ball(&[p.clone(), q], 6, 1e-9)?;
        let projections = rank_r_projections(&ball)?;
        let ideals = right_ideal_analysis(&ball, &projections)?;
        println!(
            "{name}: {} projections of rank {}",
            projections.len(),
            projections[0].rank
        );
        println!(
            "  conditions {:?}, consistent {}",
            ideals.conditions,
            ideals.conditions.consistent()
        );
    }
    Ok(())
}
