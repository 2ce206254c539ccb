//! Builds Haar-random unit-line-sum unitaries and maps them back to the
//! (n-1)-dimensional unitary they were built from.

use unitary_birkhoff::linalg::{build_t, unitary_from_xu, van_der_waerden, TChoice};
use unitary_birkhoff::{haar_unitary, xu_from_unitary};

fn main() -> unitary_birkhoff::Result<()> {
    for n in [2, 4, 6, 9] {
        let u = haar_unitary(n - 1, 7);
        let x = xu_from_unitary(&u, n)?;
        let back = unitary_from_xu(&x)?;
        println!(
            "n = {n}: T = {}, unitarity residual {:.1e}, line-sum deviation {:.1e}, round trip {:.1e}",
            TChoice::for_dimension(n),
            x.report().unitarity_residual,
            x.report().line_sum_deviation,
            back.frobenius_dist(&u)?
        );
    }
    let w = van_der_waerden(4);
    println!(
        "J/n for n = 4 has line sums 1 but is not unitary: residual {:.3}",
        w.unitarity_residual()
    );
    println!("T(4) column 0 is flat: {:?}", build_t(4).row(0)[0]);
    Ok(())
}
