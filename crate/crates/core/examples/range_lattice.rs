//! Atoms and dual functionals of the range of a positive projection.

use nalgebra::DMatrix;
use positive_semigroups::structure::range_lattice;

fn main() -> positive_semigroups::Result<()> {
    // Two blocks, each a rank-one positive projection.
    let p = DMatrix::from_row_slice(
        4,
        4,
        &[
            0.5, 0.5, 0.0, 0.0, 0.5, 0.5, 0.0, 0.0, 0.0, 0.0, 0.25, 0.75, 0.0, 0.0, 0.25, 0.75,
        ],
    );
    let lattice = range_lattice(&p, 1e-10)?;
    println!(
        "rank {}, reconstruction error {:.2e}",
        lattice.rank, lattice.reconstruction_error
    );
    for (x, f) in lattice.atoms.iter().zip(&lattice.duals) {
        println!("atom {:?}  dual {:?}", x.coords(), f.coords());
    }
    Ok(())
}
