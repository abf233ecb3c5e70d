//! Decide ideal irreducibility of a family and print the certificate or the
//! invariant coordinate ideal.

use positive_semigroups::irreducibility::is_ideal_irreducible;
use positive_semigroups::Matrix;

fn main() -> positive_semigroups::Result<()> {
    let p = Matrix::from_rows(&[vec![1.0, 0.0], vec![1.0, 0.0]])?;
    let q = Matrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 1.0]])?;

    for (name, family) in [
        ("{P}", vec![p.clone()]),
        ("{Q}", vec![q.clone()]),
        ("{P, Q}", vec![p, q]),
    ] {
        let report = is_ideal_irreducible(&family)?;
        match report.witness {
            Some(ideal) => println!(
                "{name}: reducible, invariant ideal on coordinates {:?}",
                ideal.one_based()
            ),
            None => {
                println!("{name}: irreducible");
                for w in &report.certificate {
                    println!("  ({} -> {}) via word {:?}", w.from + 1, w.to + 1, w.word);
                }
            }
        }
    }
    Ok(())
}
