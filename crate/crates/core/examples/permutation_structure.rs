//! Compressions `P S P` of the semigroup generated by two circulants act on
//! the range of a minimal projection as scaled permutations.

use positive_semigroups::semigroup::{generate_ball, rank_r_projections};
use positive_semigroups::structure::{group_law, permutation_structure};
use positive_semigroups::Matrix;

fn main() -> positive_semigroups::Result<()> {
    let shift = Matrix::cyclic_shift(4);
    let s = shift.as_dmatrix();
    let a = Matrix::from_dmatrix(s * 2.0 + s * s * s)?;
    let b = Matrix::from_dmatrix(s * s * 3.0)?;
    let ball = generate_ball(&[a, b], 6, 1e-9)?;
    let projections = rank_r_projections(&ball)?;
    let ps = permutation_structure(&ball, &projections, 0)?;

    println!("rank {}, {:?}, transitive {}", ps.rank(), ps.diagnosis, ps.transitive);
    println!("permutation group {:?}", ps.group);
    for entry in ps.table.iter().take(5) {
        println!(
            "ray {}: scale {:.4}, permutation {:?}",
            entry.ray, entry.scale, entry.permutation
        );
    }
    let law = group_law(&ball, &ps, 50)?;
    println!(
        "group law on {} pairs, max scale gap {:.2e}, mismatches {}",
        law.pairs,
        law.max_scale_gap,
        law.mismatches.len()
    );
    println!("common eigenvector {:?}", ps.x0.coords());
    Ok(())
}
