//! Peripheral spectrum, spectral projection and the unimodular/nilpotent split
//! of `A / r(A)` on the peripheral subspace.

use positive_semigroups::spectral::peripheral_split;
use positive_semigroups::Matrix;

fn main() -> positive_semigroups::Result<()> {
    let jordan = Matrix::from_rows(&[vec![2.0, 1.0, 0.0], vec![0.0, 2.0, 0.0], vec![0.0, 0.0, 1.0]])?;
    let cycle = Matrix::from_rows(&[vec![0.0, 2.0], vec![3.0, 0.0]])?;

    for (name, a) in [("jordan", jordan), ("weighted cycle", cycle)] {
        let d = peripheral_split(&a)?;
        println!("{name}: r = {:.6}, peripheral eigenvalues {:?}", d.radius, d.sigma_per);
        println!(
            "  projection {:?}",
            d.projection
                .row_iter()
                .map(|r| r.iter().map(|v| (v * 1e6).round() / 1e6).collect::<Vec<_>>())
                .collect::<Vec<_>>()
        );
        println!(
            "  dim X1 = {}, nilpotency index {}, ||N|| = {:.4}",
            d.dim(),
            d.nilpotency_index,
            d.nilpotent.norm()
        );
    }
    Ok(())
}
