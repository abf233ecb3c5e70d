//! Run the full battery of structure checks on a family of generators.

use positive_semigroups::semigroup::{generate_ball, rank_r_projections};
use positive_semigroups::structure::{permutation_structure, verify_structure_theorems, VerifyConfig};
use positive_semigroups::Matrix;

fn main() -> positive_semigroups::Result<()> {
    let p = Matrix::from_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]])?;
    let q = Matrix::from_rows(&[vec![1.0 / 3.0, 2.0 / 3.0], vec![1.0 / 3.0, 2.0 / 3.0]])?;
    let ball = generate_ball(&[p, q], 8, 1e-9)?;
    let projections = rank_r_projections(&ball)?;
    let ps = permutation_structure(&ball, &projections, 0)?;
    let report = verify_structure_theorems(&ball, &projections, &ps, &VerifyConfig::default())?;
    for check in &report.checks {
        println!("{:?} [{}] {}: {}", check.status, check.id, check.name, check.evidence);
    }
    Ok(())
}
