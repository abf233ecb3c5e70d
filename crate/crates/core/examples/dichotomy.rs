//! Which asymptotic regime `R_+ A` falls into: powers returning to the
//! peripheral projection, or rescaled powers converging to a nilpotent limit.

use positive_semigroups::spectral::{classify_dichotomy, Dichotomy};
use positive_semigroups::Matrix;

fn main() -> positive_semigroups::Result<()> {
    let examples = [
        ("three-cycle", Matrix::cyclic_shift(3)),
        ("jordan block", Matrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]])?),
    ];
    for (name, a) in examples {
        match classify_dichotomy(&a, 1_000_000)?.kind {
            Dichotomy::Unimodular { order, returns, .. } => {
                println!("{name}: unimodular, U has order {order}, returns {returns:?}");
            }
            Dichotomy::Nilpotent {
                index, limit, returns, ..
            } => {
                println!(
                    "{name}: nilpotent of index {index}, returns {returns:?}, limit {:?}",
                    limit
                        .row_iter()
                        .map(|r| r.iter().map(|v| v.round()).collect::<Vec<_>>())
                        .collect::<Vec<_>>()
                );
            }
        }
    }
    Ok(())
}
