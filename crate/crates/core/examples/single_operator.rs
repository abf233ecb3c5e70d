//! Cyclic structure of one irreducible matrix: period, minimal rank and
//! peripheral multiplicity agree, and the matrix permutes a disjoint basis.

use positive_semigroups::structure::analyze_single;
use positive_semigroups::Matrix;

fn main() -> positive_semigroups::Result<()> {
    // Two cyclic classes {1, 2} and {3}.
    let t = Matrix::from_rows(&[vec![0.0, 0.0, 1.0], vec![0.0, 0.0, 2.0], vec![1.0, 3.0, 0.0]])?;
    let rep = analyze_single(&t, 8)?;
    println!("r(T) = {:.6}", rep.radius);
    println!(
        "period {}, minimal rank {:?}, peripheral multiplicity {}",
        rep.period, rep.minrank, rep.peripheral_multiplicity
    );
    println!("cycle {:?} (full = {})", rep.cycle, rep.full_cycle);
    for x in &rep.basis {
        println!("basis vector {:?}", x.coords());
    }
    Ok(())
}
