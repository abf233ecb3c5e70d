//! Common positive eigenvector of two commuting matrices and the local
//! spectral radius of `K` at positive vectors.

use positive_semigroups::structure::{analyze_commuting_pair, PairConfig};
use positive_semigroups::Matrix;

fn main() -> positive_semigroups::Result<()> {
    let k = Matrix::from_rows(&[vec![0.0, 2.0], vec![3.0, 0.0]])?;
    let s = Matrix::from_rows(&[vec![6.0, 4.0], vec![6.0, 6.0]])?;
    let rep = analyze_commuting_pair(&s, &k, &PairConfig::default())?;
    println!("r(K) = {:.6}, S x0 = {:.6} x0", rep.r_k, rep.lambda);
    println!("x0 = {:?}, x0* = {:?}", rep.x0.coords(), rep.x0star.coords());
    println!("residuals {:?}", rep.residuals);
    println!("||K^N x||^(1/N) at N = 200: {:?}", rep.k_final);
    Ok(())
}
