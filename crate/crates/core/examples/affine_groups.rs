//! Enumerates the permutation groups used for decompositions and checks the
//! label algebra against permutation-matrix products.

use unitary_birkhoff::perm::{enumerate_group, GroupKind, Parity};
use unitary_birkhoff::ComplexMatrix;

fn summarize(kind: GroupKind) -> unitary_birkhoff::Result<()> {
    let elements = enumerate_group(kind)?;
    let even = elements
        .iter()
        .filter(|e| e.perm.parity() == Parity::Even)
        .count();
    let mut traces: Vec<usize> = elements.iter().map(|e| e.perm.trace()).collect();
    traces.sort_unstable();
    traces.dedup();

    let mut law_ok = true;
    for a in elements.iter().take(24) {
        for b in elements.iter().take(24) {
            let product = a.label.compose(&b.label)?.to_perm();
            let matrices =
                ComplexMatrix::permutation(&a.perm).mul(&ComplexMatrix::permutation(&b.perm))?;
            law_ok &= ComplexMatrix::permutation(&product) == matrices;
        }
    }
    println!(
        "{kind}: N = {}, even = {even}, traces {traces:?}, labels compose like matrices: {law_ok}",
        elements.len()
    );
    println!(
        "  first elements: {}",
        elements
            .iter()
            .take(3)
            .map(|e| e.label.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    );
    Ok(())
}

fn main() -> unitary_birkhoff::Result<()> {
    summarize(GroupKind::supercirculant(7)?)?;
    summarize(GroupKind::epicirculant(2, 2)?)?;
    summarize(GroupKind::epicirculant(3, 2)?)?;
    summarize(GroupKind::epicirculant(2, 3)?)?;
    summarize(GroupKind::symmetric(5))?;
    Ok(())
}
