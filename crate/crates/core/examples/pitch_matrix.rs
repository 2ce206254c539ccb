//! Pitch matrices over GF(p): an invertible x with xᵀ s = r for each pair of
//! nonzero dit vectors.

use std::env;

use unitary_birkhoff::field::{to_dits, Prime};
use unitary_birkhoff::gfmatrix::{gl_order, pitch_matrix};

fn main() -> unitary_birkhoff::Result<()> {
    let mut args = env::args()
        .skip(1)
        .map(|a| a.parse::<usize>().expect("integer argument"));
    let p = Prime::new(args.next().unwrap_or(3))?;
    let w = args.next().unwrap_or(2);
    let n = p.checked_pow(w).expect("p^w fits in usize");
    println!("GF({})^{w}: |GL| = {:?}", p.get(), gl_order(w, p));

    for (r, s) in [(1, 1), (1, n - 1), (n - 1, 1), (2 % n, n - 1)] {
        if r == 0 {
            continue;
        }
        let x = pitch_matrix(r, s, p, w)?;
        let (rd, sd) = (to_dits(r, p, w)?, to_dits(s, p, w)?);
        let lhs = x.transpose().matvec(&sd)?;
        println!(
            "r = {:?} s = {:?} x = {:?} det {}  xᵀs = {:?}",
            rd.digits(),
            sd.digits(),
            x.rows(),
            x.det(),
            lhs.digits()
        );
    }
    Ok(())
}
