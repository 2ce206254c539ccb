//! Prime-field arithmetic, dit vectors and discrete logarithms.

use unitary_birkhoff::field::{
    ditwise_product, dlog_position, mod_inverse, primitive_root, to_dits, Prime,
};

fn main() -> unitary_birkhoff::Result<()> {
    for p in [3, 5, 7, 11, 13] {
        let prime = Prime::new(p)?;
        let g = primitive_root(prime);
        let inverses: Vec<usize> = (1..p)
            .map(|a| mod_inverse(a, prime))
            .collect::<Result<_, _>>()?;
        let logs: Vec<usize> = (1..p)
            .map(|a| dlog_position(a, prime))
            .collect::<Result<_, _>>()?;
        println!("p = {p:2}  g = {g}  inverses {inverses:?}  dlog {logs:?}");
    }

    let p = Prime::new(3)?;
    let v = to_dits(7, p, 3)?;
    println!("7 in base 3, little-endian: {:?}", v.digits());
    println!(
        "ditwise product 5 . 7 (p = 3) = {}",
        ditwise_product(5, 7, p)
    );
    Ok(())
}
