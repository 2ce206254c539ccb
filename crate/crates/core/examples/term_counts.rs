//! Number of terms needed by the automatically selected group and strategy.

use unitary_birkhoff::term_count;

fn main() {
    let max_n: usize = std::env::args()
        .nth(1)
        .map_or(20, |a| a.parse().expect("integer argument"));
    for n in 1..=max_n {
        let c = term_count(n);
        println!("{n:3}  {:>24}  {}  {}", c.count, c.group, c.strategy);
    }
}
