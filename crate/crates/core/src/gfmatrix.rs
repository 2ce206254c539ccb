//! Square matrices over the prime field F_p.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{mod_inverse, DitVector, Prime};

/// Largest number of candidate matrices `enumerate_gl` will scan.
pub const GL_ENUMERATION_GUARD: usize = 10_000_000;

/// A `w x w` matrix over F_p, row-major, entries in `0..p`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GfMatrix {
    p: Prime,
    w: usize,
    entries: Vec<usize>,
}

impl GfMatrix {
    pub fn new(p: Prime, w: usize, entries: Vec<usize>) -> Result<Self> {
        if entries.len() != w * w {
            return Err(Error::Dimension(format!(
                "{} entries for a {w}x{w} matrix",
                entries.len()
            )));
        }
        if let Some(&e) = entries.iter().find(|&&e| e >= p.get()) {
            return Err(Error::Domain(format!("entry {e} out of range for p = {p}")));
        }
        Ok(GfMatrix { p, w, entries })
    }

    pub fn from_rows(p: Prime, rows: &[Vec<usize>]) -> Result<Self> {
        let w = rows.len();
        if rows.iter().any(|r| r.len() != w) {
            return Err(Error::Dimension(
                "pitch matrix rows must form a square".into(),
            ));
        }
        GfMatrix::new(p, w, rows.concat())
    }

    pub fn zero(p: Prime, w: usize) -> Self {
        GfMatrix {
            p,
            w,
            entries: vec![0; w * w],
        }
    }

    pub fn identity(p: Prime, w: usize) -> Self {
        let mut m = GfMatrix::zero(p, w);
        for i in 0..w {
            m.entries[i * w + i] = 1;
        }
        m
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.w
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.entries[i * self.w + j]
    }

    fn set(&mut self, i: usize, j: usize, v: usize) {
        self.entries[i * self.w + j] = v % self.p.get();
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.entries
            .chunks(self.w.max(1))
            .take(self.w)
            .map(<[usize]>::to_vec)
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == GfMatrix::identity(self.p, self.w)
    }

    fn check_compatible(&self, other_p: Prime, other_w: usize) -> Result<()> {
        if self.p != other_p || self.w != other_w {
            return Err(Error::Dimension(format!(
                "F_{} {}x{} against F_{} of width {}",
                self.p, self.w, self.w, other_p, other_w
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &GfMatrix) -> Result<GfMatrix> {
        self.check_compatible(other.p, other.w)?;
        let (p, w) = (self.p, self.w);
        let mut out = GfMatrix::zero(p, w);
        for i in 0..w {
            for j in 0..w {
                let s = (0..w).fold(0, |acc, k| {
                    p.add(acc, p.mul(self.get(i, k), other.get(k, j)))
                });
                out.set(i, j, s);
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &DitVector) -> Result<DitVector> {
        self.check_compatible(v.prime(), v.width())?;
        let p = self.p;
        let digits = (0..self.w)
            .map(|i| {
                v.digits()
                    .iter()
                    .enumerate()
                    .fold(0, |acc, (k, &d)| p.add(acc, p.mul(self.get(i, k), d)))
            })
            .collect();
        DitVector::new(p, digits)
    }

    pub fn transpose(&self) -> GfMatrix {
        let mut out = GfMatrix::zero(self.p, self.w);
        for i in 0..self.w {
            for j in 0..self.w {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn sub(&self, other: &GfMatrix) -> Result<GfMatrix> {
        self.check_compatible(other.p, other.w)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| self.p.sub(a, b))
            .collect();
        Ok(GfMatrix {
            p: self.p,
            w: self.w,
            entries,
        })
    }

    /// Row-reduces a copy, returning (rank, determinant).
    fn eliminate(&self) -> (usize, usize) {
        let (p, w) = (self.p, self.w);
        let mut a = self.clone();
        let mut det = 1 % p.get();
        let mut rank = 0;
        for col in 0..w {
            let Some(pivot) = (rank..w).find(|&r| a.get(r, col) != 0) else {
                det = 0;
                continue;
            };
            if pivot != rank {
                for j in 0..w {
                    a.entries.swap(pivot * w + j, rank * w + j);
                }
                det = p.neg(det);
            }
            let pv = a.get(rank, col);
            det = p.mul(det, pv);
            let inv = mod_inverse(pv, p).expect("pivot is nonzero");
            for r in rank + 1..w {
                let factor = p.mul(a.get(r, col), inv);
                if factor == 0 {
                    continue;
                }
                for j in col..w {
                    let v = p.sub(a.get(r, j), p.mul(factor, a.get(rank, j)));
                    a.set(r, j, v);
                }
            }
            rank += 1;
        }
        (rank, if rank == w { det } else { 0 })
    }

    pub fn det(&self) -> usize {
        self.eliminate().1
    }

    pub fn rank(&self) -> usize {
        self.eliminate().0
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.w
    }

    /// Gauss-Jordan inverse over F_p.
    pub fn invert(&self) -> Result<GfMatrix> {
        let (p, w) = (self.p, self.w);
        let mut a = self.clone();
        let mut inv = GfMatrix::identity(p, w);
        for col in 0..w {
            let pivot = (col..w)
                .find(|&r| a.get(r, col) != 0)
                .ok_or_else(|| Error::Domain(format!("singular matrix over F_{p}")))?;
            for j in 0..w {
                a.entries.swap(pivot * w + j, col * w + j);
                inv.entries.swap(pivot * w + j, col * w + j);
            }
            let s = mod_inverse(a.get(col, col), p)?;
            for j in 0..w {
                a.set(col, j, p.mul(a.get(col, j), s));
                inv.set(col, j, p.mul(inv.get(col, j), s));
            }
            for r in 0..w {
                let factor = a.get(r, col);
                if r == col || factor == 0 {
                    continue;
                }
                for j in 0..w {
                    a.set(r, j, p.sub(a.get(r, j), p.mul(factor, a.get(col, j))));
                    inv.set(r, j, p.sub(inv.get(r, j), p.mul(factor, inv.get(col, j))));
                }
            }
        }
        Ok(inv)
    }
}

impl fmt::Display for GfMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(usize::to_string).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

/// Order of GL(w, p): `Π_{i<w} (p^w - p^i)`.
pub fn gl_order(w: usize, p: Prime) -> Option<u128> {
    let q = (p.get() as u128).checked_pow(w as u32)?;
    (0..w).try_fold(1u128, |acc, i| {
        let pi = (p.get() as u128).checked_pow(i as u32)?;
        acc.checked_mul(q - pi)
    })
}

/// All invertible `w x w` matrices over F_p, in lexicographic row-major order.
pub fn enumerate_gl(w: usize, p: Prime) -> Result<Vec<GfMatrix>> {
    let candidates = p
        .checked_pow(w * w)
        .filter(|&c| c <= GL_ENUMERATION_GUARD)
        .ok_or_else(|| {
            Error::Resource(format!(
                "GL({w},{p}) needs {p}^{} candidates, guard is {GL_ENUMERATION_GUARD}",
                w * w
            ))
        })?;
    let mut out = Vec::with_capacity(gl_order(w, p).unwrap_or(0) as usize);
    let mut entries = vec![0usize; w * w];
    for _ in 0..candidates {
        let m = GfMatrix {
            p,
            w,
            entries: entries.clone(),
        };
        if m.is_invertible() {
            out.push(m);
        }
        // big-endian increment: the last entry is least significant
        for e in entries.iter_mut().rev() {
            *e += 1;
            if *e < p.get() {
                break;
            }
            *e = 0;
        }
    }
    Ok(out)
}

/// Invertible pitch matrix `x` with `Σ_j s_j x[j][v] = r_v` for every `v`,
/// i.e. `xᵀ·s = r`, built from the least-significant nonzero dits of `r`
/// and `s`.
///
/// With `α` the lowest nonzero dit of `r` and `β` that of `s` (`α != β`):
/// every row except `α` and `β` is a unit row, row `α` is `e_β`, and row
/// `β` is solved from the column equations. When `α == β` (always the case
/// for `w = 1`) row `α` stays a unit row and the same solve gives
/// `x[β][β] = r_β / s_β`.
pub fn pitch_matrix(r: usize, s: usize, p: Prime, w: usize) -> Result<GfMatrix> {
    if r == 0 || s == 0 {
        return Err(Error::Domain("pitch matrix needs nonzero r and s".into()));
    }
    let rd = crate::field::to_dits(r, p, w)?;
    let sd = crate::field::to_dits(s, p, w)?;
    let (rd, sd) = (rd.digits(), sd.digits());
    let alpha = rd.iter().position(|&d| d != 0).expect("r is nonzero");
    let beta = sd.iter().position(|&d| d != 0).expect("s is nonzero");
    let sb_inv = mod_inverse(sd[beta], p)?;

    let mut x = GfMatrix::zero(p, w);
    for v in 0..w {
        if v != beta && (v != alpha || alpha == beta) {
            x.set(v, v, 1);
        }
    }
    if alpha != beta {
        x.set(alpha, beta, 1);
    }
    // row β: column v receives Σ_{j != β} s_j x[j][v] from the rows fixed above
    for (v, &r_v) in rd.iter().enumerate() {
        let fixed = (0..w)
            .filter(|&j| j != beta)
            .fold(0, |acc, j| p.add(acc, p.mul(sd[j], x.get(j, v))));
        x.set(beta, v, p.mul(p.sub(r_v, fixed), sb_inv));
    }
    Ok(x)
}
