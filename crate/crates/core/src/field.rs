//! Arithmetic in Z_p and base-p digit ("dit") codecs.
//!
//! Residues are plain `usize` values in `0..p`. Everything here is exact
//! integer arithmetic sized for desk-scale primes.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A prime modulus, checked by trial division on construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Prime(usize);

impl Prime {
    pub fn new(p: usize) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0
    }

    /// `p^w`, or `None` on overflow.
    pub fn checked_pow(self, w: usize) -> Option<usize> {
        (0..w).try_fold(1usize, |acc, _| acc.checked_mul(self.0))
    }

    #[inline]
    pub fn add(self, a: usize, b: usize) -> usize {
        (a + b) % self.0
    }

    #[inline]
    pub fn sub(self, a: usize, b: usize) -> usize {
        (a + self.0 - b % self.0) % self.0
    }

    #[inline]
    pub fn mul(self, a: usize, b: usize) -> usize {
        (a * b) % self.0
    }

    #[inline]
    pub fn neg(self, a: usize) -> usize {
        (self.0 - a % self.0) % self.0
    }

    pub fn pow(self, base: usize, mut exp: usize) -> usize {
        let mut result = 1 % self.0;
        let mut b = base % self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul(result, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        result
    }
}

impl TryFrom<usize> for Prime {
    type Error = Error;

    fn try_from(p: usize) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for usize {
    fn from(p: Prime) -> usize {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `n` as `p^w` with `p` prime and `w >= 1`.
pub fn prime_power(n: usize) -> Option<(Prime, usize)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n.is_multiple_of(*d))?;
    let mut m = n;
    let mut w = 0;
    while m.is_multiple_of(p) {
        m /= p;
        w += 1;
    }
    (m == 1).then_some((Prime(p), w))
}

/// Multiplicative inverse of `a` modulo `p` (extended Euclid).
pub fn mod_inverse(a: usize, p: Prime) -> Result<usize> {
    let m = p.get() as i64;
    let a = (a % p.get()) as i64;
    if a == 0 {
        return Err(Error::Domain(format!("0 has no inverse modulo {p}")));
    }
    let (mut old_r, mut r) = (a, m);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    Ok(old_s.rem_euclid(m) as usize)
}

/// Multiplicative order of a nonzero residue.
pub fn multiplicative_order(a: usize, p: Prime) -> usize {
    let mut x = a % p.get();
    let mut k = 1;
    while x != 1 {
        x = p.mul(x, a);
        k += 1;
    }
    k
}

/// Smallest generator of the multiplicative group mod `p`, by brute force.
pub fn primitive_root(p: Prime) -> usize {
    (1..p.get())
        .find(|&g| multiplicative_order(g, p) == p.get() - 1)
        .expect("every prime has a primitive root")
}

/// Discrete-log position of `a` with respect to [`primitive_root`]:
/// the exponent `e` in `0..p-1` with `g^e = a (mod p)`.
pub fn dlog_position(a: usize, p: Prime) -> Result<usize> {
    let a = a % p.get();
    if a == 0 {
        return Err(Error::Domain(format!("0 has no discrete log modulo {p}")));
    }
    let g = primitive_root(p);
    let mut x = 1;
    for e in 0..p.get() - 1 {
        if x == a {
            return Ok(e);
        }
        x = p.mul(x, g);
    }
    unreachable!("a primitive root generates every nonzero residue")
}

/// Little-endian base-`p` digits of an index: `digits[0]` is least significant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DitVector {
    p: Prime,
    digits: Vec<usize>,
}

impl DitVector {
    pub fn new(p: Prime, digits: Vec<usize>) -> Result<Self> {
        if let Some(&d) = digits.iter().find(|&&d| d >= p.get()) {
            return Err(Error::Domain(format!("dit {d} out of range for p = {p}")));
        }
        Ok(DitVector { p, digits })
    }

    pub fn zero(p: Prime, w: usize) -> Self {
        DitVector {
            p,
            digits: vec![0; w],
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn width(&self) -> usize {
        self.digits.len()
    }

    pub fn digits(&self) -> &[usize] {
        &self.digits
    }

    pub fn value(&self) -> usize {
        from_dits(self)
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    /// Index of the least-significant nonzero dit.
    pub fn lowest_nonzero(&self) -> Option<usize> {
        self.digits.iter().position(|&d| d != 0)
    }

    pub fn add(&self, other: &DitVector) -> Result<DitVector> {
        self.check_compatible(other)?;
        let digits = self
            .digits
            .iter()
            .zip(&other.digits)
            .map(|(&a, &b)| self.p.add(a, b))
            .collect();
        Ok(DitVector { p: self.p, digits })
    }

    pub fn neg(&self) -> DitVector {
        let digits = self.digits.iter().map(|&a| self.p.neg(a)).collect();
        DitVector { p: self.p, digits }
    }

    /// Ditwise product `Σ_j a_j b_j mod p`.
    pub fn dot(&self, other: &DitVector) -> Result<usize> {
        self.check_compatible(other)?;
        Ok(self
            .digits
            .iter()
            .zip(&other.digits)
            .fold(0, |acc, (&a, &b)| self.p.add(acc, self.p.mul(a, b))))
    }

    fn check_compatible(&self, other: &DitVector) -> Result<()> {
        if self.p != other.p || self.digits.len() != other.digits.len() {
            return Err(Error::Dimension(format!(
                "dit vectors over (p={}, w={}) and (p={}, w={})",
                self.p,
                self.width(),
                other.p,
                other.width()
            )));
        }
        Ok(())
    }
}

pub fn to_dits(z: usize, p: Prime, w: usize) -> Result<DitVector> {
    let bound = p.checked_pow(w).unwrap_or(usize::MAX);
    if z >= bound {
        return Err(Error::Domain(format!(
            "{z} does not fit in {w} dits base {p}"
        )));
    }
    let mut rest = z;
    let digits = (0..w)
        .map(|_| {
            let d = rest % p.get();
            rest /= p.get();
            d
        })
        .collect();
    Ok(DitVector { p, digits })
}

pub fn from_dits(v: &DitVector) -> usize {
    v.digits.iter().rev().fold(0, |acc, &d| acc * v.p.get() + d)
}

/// Ditwise product of the base-`p` expansions of two indices, the exponent
/// pattern of a tensor power of Fourier matrices.
pub fn ditwise_product(x: usize, y: usize, p: Prime) -> usize {
    let (mut x, mut y, mut acc) = (x, y, 0);
    while x > 0 && y > 0 {
        acc = p.add(acc, p.mul(x % p.get(), y % p.get()));
        x /= p.get();
        y /= p.get();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(n: usize) -> Prime {
        Prime::new(n).unwrap()
    }

    fn inverse_by_search(a: usize, p: usize) -> usize {
        (1..p).find(|b| a * b % p == 1).unwrap()
    }

    #[test]
    fn primality() {
        let primes: Vec<usize> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(matches!(Prime::new(9), Err(Error::NotPrime(9))));
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(8), Some((p(2), 3)));
        assert_eq!(prime_power(9), Some((p(3), 2)));
        assert_eq!(prime_power(7), Some((p(7), 1)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(mod_inverse(1, p(7)).unwrap(), 1);
        assert_eq!(mod_inverse(3, p(7)).unwrap(), inverse_by_search(3, 7));
        assert_eq!(mod_inverse(3, p(7)).unwrap(), 5);
        assert_eq!(mod_inverse(2, p(5)).unwrap(), 3);
        assert!(matches!(mod_inverse(0, p(7)), Err(Error::Domain(_))));
        assert!(matches!(mod_inverse(14, p(7)), Err(Error::Domain(_))));
    }

    #[test]
    fn inverse_exhaustive() {
        for q in [2, 3, 5, 7, 11, 13, 17] {
            for a in 1..q {
                let b = mod_inverse(a, p(q)).unwrap();
                assert_eq!(b, inverse_by_search(a, q));
                assert_eq!(a * b % q, 1);
            }
        }
    }

    #[test]
    fn primitive_root_examples() {
        assert_eq!(primitive_root(p(2)), 1);
        assert_eq!(primitive_root(p(5)), 2);
        assert_eq!(primitive_root(p(7)), 3);
        for q in [3, 5, 7, 11, 13, 17, 19] {
            let g = primitive_root(p(q));
            let mut x = 1;
            for _ in 1..q - 1 {
                x = x * g % q;
                assert_ne!(x, 1);
            }
        }
    }

    #[test]
    fn dlog_examples() {
        assert_eq!(dlog_position(1, p(7)).unwrap(), 0);
        assert_eq!(dlog_position(3, p(7)).unwrap(), 1);
        assert_eq!(dlog_position(2, p(7)).unwrap(), 2);
        assert!(dlog_position(0, p(7)).is_err());
    }

    #[test]
    fn dlog_is_a_homomorphism() {
        for q in [3, 5, 7, 11, 13] {
            let pr = p(q);
            for a in 1..q {
                for b in 1..q {
                    let lhs = dlog_position(a * b % q, pr).unwrap();
                    let rhs =
                        (dlog_position(a, pr).unwrap() + dlog_position(b, pr).unwrap()) % (q - 1);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn dit_examples() {
        assert_eq!(to_dits(0, p(2), 3).unwrap().digits(), &[0, 0, 0]);
        assert_eq!(to_dits(6, p(2), 3).unwrap().digits(), &[0, 1, 1]);
        assert_eq!(to_dits(5, p(3), 2).unwrap().digits(), &[2, 1]);
        assert!(to_dits(8, p(2), 3).is_err());
        assert!(DitVector::new(p(3), vec![0, 3]).is_err());
    }

    #[test]
    fn ditwise_product_matches_vectors() {
        let pr = p(3);
        for x in 0..27 {
            for y in 0..27 {
                let dx = to_dits(x, pr, 3).unwrap();
                let dy = to_dits(y, pr, 3).unwrap();
                assert_eq!(ditwise_product(x, y, pr), dx.dot(&dy).unwrap());
            }
        }
    }

    proptest! {
        #[test]
        fn dits_round_trip(q in prop::sample::select(vec![2usize, 3, 5, 7]), w in 1usize..5, seed in any::<usize>()) {
            let pr = p(q);
            let z = seed % pr.checked_pow(w).unwrap();
            prop_assert_eq!(from_dits(&to_dits(z, pr, w).unwrap()), z);
        }
    }
}
