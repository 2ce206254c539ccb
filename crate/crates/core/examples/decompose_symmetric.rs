//! Symmetric-group decompositions for composite n, where no affine group is
//! available.

use unitary_birkhoff::perm::GroupKind;
use unitary_birkhoff::{
    decompose, haar_unitary, xu_from_unitary, DecomposeOptions, Strategy, Tolerances,
};

fn main() -> unitary_birkhoff::Result<()> {
    let n = 6;
    let x = xu_from_unitary(&haar_unitary(n - 1, 5), n)?;
    for strategy in [Strategy::First, Strategy::Second] {
        let d = decompose(
            &x,
            GroupKind::symmetric(n),
            strategy,
            &DecomposeOptions::default(),
        )?;
        println!("P({n}) {strategy}: {} nonzero terms", d.nonzero_count());
        println!("{}", d.verify(x.matrix(), Tolerances::default())?);
    }
    Ok(())
}
