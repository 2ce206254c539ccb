//! The structural decomposition: at most n² - n shift/pitch terms read off
//! the inner unitary directly, without summing over the group.

use unitary_birkhoff::{decompose_structural, haar_unitary, xu_from_unitary, Tolerances};

fn main() -> unitary_birkhoff::Result<()> {
    for n in [3, 4, 5, 7, 8, 9, 27] {
        let x = xu_from_unitary(&haar_unitary(n - 1, 11), n)?;
        let d = decompose_structural(&x)?;
        let r = d.verify(x.matrix(), Tolerances::default())?;
        println!(
            "n = {n:2}: {:4} terms (group order {:7}), sum |c|^2 = {:.12}, residual {:.1e}",
            d.terms.len(),
            d.order,
            d.sum_abs2(),
            r.residual
        );
    }
    Ok(())
}
