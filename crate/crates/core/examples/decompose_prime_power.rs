//! Decomposes over the affine group GA(w, p) with both character strategies.
//! The second uses only the even permutations.

use unitary_birkhoff::perm::GroupKind;
use unitary_birkhoff::{
    decompose, haar_unitary, xu_from_unitary, DecomposeOptions, Strategy, Tolerances,
};

fn main() -> unitary_birkhoff::Result<()> {
    for (p, w) in [(2, 2), (3, 2), (2, 3)] {
        let group = GroupKind::epicirculant(p, w)?;
        let n = group.degree();
        let x = xu_from_unitary(&haar_unitary(n - 1, 3), n)?;
        for strategy in [Strategy::First, Strategy::Second] {
            match decompose(&x, group, strategy, &DecomposeOptions::default()) {
                Ok(d) => {
                    let r = d.verify(x.matrix(), Tolerances::default())?;
                    println!(
                        "{group} {strategy}: {} nonzero of {}, |sum c - 1| {:.1e}, residual {:.1e}",
                        d.nonzero_count(),
                        d.terms.len(),
                        r.sum_c_error,
                        r.residual
                    );
                }
                Err(e) => println!("{group} {strategy}: {e}"),
            }
        }
    }
    Ok(())
}
