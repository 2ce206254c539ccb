//! Decomposes a random XU(p) matrix over the supercirculant group of p² - p
//! permutations.

use std::env;

use unitary_birkhoff::perm::GroupKind;
use unitary_birkhoff::{decompose_strategy1, haar_unitary, xu_from_unitary, Tolerances};

fn main() -> unitary_birkhoff::Result<()> {
    let p: usize = env::args()
        .nth(1)
        .map_or(7, |a| a.parse().expect("prime argument"));
    let x = xu_from_unitary(&haar_unitary(p - 1, 1), p)?;
    let d = decompose_strategy1(&x, GroupKind::supercirculant(p)?)?;
    println!("{} terms", d.terms.len());
    for t in d.terms.iter().take(6) {
        println!(
            "  {:<12} {:+.6} {:+.6}i",
            t.label.to_string(),
            t.weight.re,
            t.weight.im
        );
    }
    println!("{}", d.verify(x.matrix(), Tolerances::default())?);
    Ok(())
}
