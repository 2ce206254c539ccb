//! Permutations and the three permutation groups used for decompositions:
//! the full symmetric group, the supercirculant group S(p) and the
//! epicirculant group E(p^w), which is the general affine group GA(w, p).
//!
//! A permutation is stored in one-line notation: row `k` of its matrix has
//! its unit entry in column `images[k]`. Composition follows matrix
//! multiplication, so `σ.compose(τ)` is the permutation of `P_σ · P_τ`.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{mod_inverse, to_dits, DitVector, Prime};
use crate::gfmatrix::{enumerate_gl, gl_order, GfMatrix};

/// Largest group `enumerate_group` will materialize.
pub const GROUP_ENUMERATION_GUARD: u128 = 500_000;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    images: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> i32 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }
}

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Domain(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Perm { images })
    }

    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n).collect(),
        }
    }

    /// Permutation from disjoint cycles, `k -> next element of its cycle`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        for c in cycles {
            for (i, &k) in c.iter().enumerate() {
                *images
                    .get_mut(k)
                    .ok_or_else(|| Error::Domain(format!("point {k} outside 0..{n}")))? =
                    c[(i + 1) % c.len()];
            }
        }
        Perm::new(images)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, k: usize) -> usize {
        self.images[k]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &i)| k == i)
    }

    pub fn compose(&self, other: &Perm) -> Result<Perm> {
        if self.len() != other.len() {
            return Err(Error::Dimension(format!(
                "composing permutations of {} and {} points",
                self.len(),
                other.len()
            )));
        }
        Ok(Perm {
            images: self.images.iter().map(|&f| other.images[f]).collect(),
        })
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.len()];
        for (k, &i) in self.images.iter().enumerate() {
            images[i] = k;
        }
        Perm { images }
    }

    /// Trace of the permutation matrix: the number of fixed points.
    pub fn trace(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|&(k, &i)| k == i)
            .count()
    }

    pub fn cycle_count(&self) -> usize {
        let mut seen = vec![false; self.len()];
        let mut cycles = 0;
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                k = self.images[k];
            }
        }
        cycles
    }

    pub fn parity(&self) -> Parity {
        if (self.len() - self.cycle_count()).is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Advances to the next permutation in lexicographic one-line order.
    fn next_lex(&mut self) -> bool {
        let v = &mut self.images;
        let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
            return false;
        };
        let j = (i..v.len())
            .rev()
            .find(|&j| v[j] > v[i - 1])
            .expect("suffix has a larger element");
        v.swap(i - 1, j);
        v[i..].reverse();
        true
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(usize::to_string).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// Label of the supercirculant permutation `S_{a,x}`: unit entries at
/// `(k, a + k x mod p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SuperLabel {
    pub p: Prime,
    /// shift
    pub a: usize,
    /// pitch
    pub x: usize,
}

impl SuperLabel {
    pub fn new(p: Prime, a: usize, x: usize) -> Result<Self> {
        if a >= p.get() || x >= p.get() {
            return Err(Error::Domain(format!(
                "S_({a},{x}) out of range for p = {p}"
            )));
        }
        if x == 0 {
            return Err(Error::Domain("supercirculant pitch must be nonzero".into()));
        }
        Ok(SuperLabel { p, a, x })
    }

    pub fn identity(p: Prime) -> Self {
        SuperLabel { p, a: 0, x: 1 }
    }

    pub fn to_perm(&self) -> Perm {
        let p = self.p;
        Perm {
            images: (0..p.get())
                .map(|k| p.add(self.a, p.mul(k, self.x)))
                .collect(),
        }
    }

    /// `S_{a,x} S_{b,y} = S_{b + a y, x y}`.
    pub fn compose(&self, other: &SuperLabel) -> Result<SuperLabel> {
        if self.p != other.p {
            return Err(Error::Dimension(format!(
                "S({}) against S({})",
                self.p, other.p
            )));
        }
        let p = self.p;
        SuperLabel::new(
            p,
            p.add(other.a, p.mul(self.a, other.x)),
            p.mul(self.x, other.x),
        )
    }

    /// `S_{a,x}^{-1} = S_{-a x^{-1}, x^{-1}}`.
    pub fn inverse(&self) -> SuperLabel {
        let p = self.p;
        let xi = mod_inverse(self.x, p).expect("pitch is nonzero");
        SuperLabel {
            p,
            a: p.neg(p.mul(self.a, xi)),
            x: xi,
        }
    }

    /// Fixed-point count from the closed form: 1 for non-unit pitch, 0 for a
    /// nontrivial circulant, `p` for the identity.
    pub fn closed_form_trace(&self) -> usize {
        match (self.a, self.x) {
            (0, 1) => self.p.get(),
            (_, 1) => 0,
            _ => 1,
        }
    }
}

impl fmt::Display for SuperLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S(a={}, x={})", self.a, self.x)
    }
}

/// Label of the epicirculant permutation `E_{a,x}` on `p^w` points: row
/// `k` has its unit entry in column `a + x k`, computed ditwise over F_p.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EpiLabel {
    pub a: DitVector,
    pub x: GfMatrix,
}

impl EpiLabel {
    pub fn new(a: DitVector, x: GfMatrix) -> Result<Self> {
        if a.prime() != x.prime() || a.width() != x.dim() {
            return Err(Error::Dimension(
                "shift vector and pitch matrix disagree".into(),
            ));
        }
        if !x.is_invertible() {
            return Err(Error::Domain(format!("pitch matrix {x} is singular")));
        }
        Ok(EpiLabel { a, x })
    }

    pub fn identity(p: Prime, w: usize) -> Self {
        EpiLabel {
            a: DitVector::zero(p, w),
            x: GfMatrix::identity(p, w),
        }
    }

    pub fn prime(&self) -> Prime {
        self.x.prime()
    }

    pub fn width(&self) -> usize {
        self.x.dim()
    }

    pub fn points(&self) -> usize {
        self.prime()
            .checked_pow(self.width())
            .expect("label fits in memory")
    }

    pub fn to_perm(&self) -> Perm {
        let (p, w) = (self.prime(), self.width());
        let images = (0..self.points())
            .map(|k| {
                let kd = to_dits(k, p, w).expect("k < p^w");
                let img = self
                    .x
                    .matvec(&kd)
                    .and_then(|xk| self.a.add(&xk))
                    .expect("shapes agree");
                img.value()
            })
            .collect();
        Perm { images }
    }

    /// `E_{a,x} E_{b,y} = E_{b + y a, y x}`.
    pub fn compose(&self, other: &EpiLabel) -> Result<EpiLabel> {
        let ya = other.x.matvec(&self.a)?;
        Ok(EpiLabel {
            a: other.a.add(&ya)?,
            x: other.x.mul(&self.x)?,
        })
    }

    /// `E_{a,x}^{-1} = E_{-x^{-1} a, x^{-1}}`.
    pub fn inverse(&self) -> EpiLabel {
        let xi = self.x.invert().expect("pitch is invertible");
        let a = xi.matvec(&self.a).expect("shapes agree").neg();
        EpiLabel { a, x: xi }
    }

    /// Fixed-point count from the affine equation `(1 - x) u = a`: zero when
    /// it is inconsistent, otherwise the kernel size `p^(w - rank(1 - x))`.
    pub fn closed_form_trace(&self) -> usize {
        let (p, w) = (self.prime(), self.width());
        let lin = GfMatrix::identity(p, w).sub(&self.x).expect("same shape");
        let lambda = lin.rank();
        if !in_column_space(&lin, &self.a) {
            return 0;
        }
        p.checked_pow(w - lambda).expect("fits")
    }
}

/// Whether `b` lies in the column space of `m` (rank test on `[m | b]`).
fn in_column_space(m: &GfMatrix, b: &DitVector) -> bool {
    let (p, w) = (m.prime(), m.dim());
    // rank of [m | b] computed on the transpose padded to a square
    let size = w + 1;
    let mut entries = vec![0; size * size];
    for i in 0..w {
        for j in 0..w {
            entries[j * size + i] = m.get(i, j);
        }
        entries[w * size + i] = b.digits()[i];
    }
    let aug = GfMatrix::new(p, size, entries).expect("entries reduced");
    aug.rank() == m.rank()
}

impl fmt::Display for EpiLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E(a={:?}, x={})", self.a.digits(), self.x)
    }
}

/// Structured name of a group element.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupLabel {
    Perm(Perm),
    Super(SuperLabel),
    Epi(EpiLabel),
}

impl GroupLabel {
    pub fn to_perm(&self) -> Perm {
        match self {
            GroupLabel::Perm(p) => p.clone(),
            GroupLabel::Super(s) => s.to_perm(),
            GroupLabel::Epi(e) => e.to_perm(),
        }
    }

    pub fn inverse(&self) -> GroupLabel {
        match self {
            GroupLabel::Perm(p) => GroupLabel::Perm(p.inverse()),
            GroupLabel::Super(s) => GroupLabel::Super(s.inverse()),
            GroupLabel::Epi(e) => GroupLabel::Epi(e.inverse()),
        }
    }

    pub fn compose(&self, other: &GroupLabel) -> Result<GroupLabel> {
        match (self, other) {
            (GroupLabel::Perm(a), GroupLabel::Perm(b)) => a.compose(b).map(GroupLabel::Perm),
            (GroupLabel::Super(a), GroupLabel::Super(b)) => a.compose(b).map(GroupLabel::Super),
            (GroupLabel::Epi(a), GroupLabel::Epi(b)) => a.compose(b).map(GroupLabel::Epi),
            _ => Err(Error::Dimension(
                "composing labels of different groups".into(),
            )),
        }
    }

    pub fn points(&self) -> usize {
        match self {
            GroupLabel::Perm(p) => p.len(),
            GroupLabel::Super(s) => s.p.get(),
            GroupLabel::Epi(e) => e.points(),
        }
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupLabel::Perm(p) => write!(f, "P{p}"),
            GroupLabel::Super(s) => s.fmt(f),
            GroupLabel::Epi(e) => e.fmt(f),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    /// All `n x n` permutation matrices.
    Symmetric { n: usize },
    /// Supercirculant permutations of a prime number of points.
    Supercirculant { p: Prime },
    /// Affine maps of F_p^w acting on `p^w` points.
    Epicirculant { p: Prime, w: usize },
}

impl GroupKind {
    pub fn symmetric(n: usize) -> Self {
        GroupKind::Symmetric { n }
    }

    pub fn supercirculant(p: usize) -> Result<Self> {
        Ok(GroupKind::Supercirculant { p: Prime::new(p)? })
    }

    pub fn epicirculant(p: usize, w: usize) -> Result<Self> {
        if w == 0 {
            return Err(Error::Domain(
                "epicirculant width must be at least 1".into(),
            ));
        }
        Ok(GroupKind::Epicirculant {
            p: Prime::new(p)?,
            w,
        })
    }

    /// Number of points acted on.
    pub fn degree(&self) -> usize {
        match *self {
            GroupKind::Symmetric { n } => n,
            GroupKind::Supercirculant { p } => p.get(),
            GroupKind::Epicirculant { p, w } => p.checked_pow(w).unwrap_or(usize::MAX),
        }
    }

    /// Group order, `None` when it overflows `u128`.
    pub fn order(&self) -> Option<u128> {
        match *self {
            GroupKind::Symmetric { n } => {
                (1..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k))
            }
            GroupKind::Supercirculant { p } => Some(p.get() as u128 * (p.get() as u128 - 1)),
            GroupKind::Epicirculant { p, w } => {
                let q = (p.get() as u128).checked_pow(w as u32)?;
                gl_order(w, p)?.checked_mul(q)
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GroupKind::Symmetric { .. } => "symmetric",
            GroupKind::Supercirculant { .. } => "supercirculant",
            GroupKind::Epicirculant { .. } => "epicirculant",
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Symmetric { n } => write!(f, "P({n})"),
            GroupKind::Supercirculant { p } => write!(f, "S({p})"),
            GroupKind::Epicirculant { p, w } => write!(f, "E({p}^{w}) = GA({w},{p})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    pub perm: Perm,
    pub label: GroupLabel,
}

impl GroupElement {
    pub fn from_label(label: GroupLabel) -> Self {
        GroupElement {
            perm: label.to_perm(),
            label,
        }
    }
}

/// Every element of the group in a fixed order, identity first.
///
/// Symmetric: lexicographic one-line order. Supercirculant: lexicographic
/// in `(a, x)`. Epicirculant: by shift value, then by pitch matrix with the
/// identity pitch first and the rest of GL(w, p) in lexicographic order.
pub fn enumerate_group(kind: GroupKind) -> Result<Vec<GroupElement>> {
    let order = kind.order().unwrap_or(u128::MAX);
    if order > GROUP_ENUMERATION_GUARD {
        return Err(Error::Resource(format!(
            "{kind} has order {order}, enumeration guard is {GROUP_ENUMERATION_GUARD}"
        )));
    }
    let mut out = Vec::with_capacity(order as usize);
    match kind {
        GroupKind::Symmetric { n } => {
            let mut p = Perm::identity(n);
            loop {
                out.push(GroupElement {
                    perm: p.clone(),
                    label: GroupLabel::Perm(p.clone()),
                });
                if !p.next_lex() {
                    break;
                }
            }
        }
        GroupKind::Supercirculant { p } => {
            for a in 0..p.get() {
                for x in 1..p.get() {
                    out.push(GroupElement::from_label(GroupLabel::Super(SuperLabel {
                        p,
                        a,
                        x,
                    })));
                }
            }
        }
        GroupKind::Epicirculant { p, w } => {
            let id = GfMatrix::identity(p, w);
            let mut pitches = enumerate_gl(w, p)?;
            pitches.retain(|x| *x != id);
            pitches.insert(0, id);
            for a in 0..kind.degree() {
                let a = to_dits(a, p, w)?;
                for x in &pitches {
                    out.push(GroupElement::from_label(GroupLabel::Epi(EpiLabel {
                        a: a.clone(),
                        x: x.clone(),
                    })));
                }
            }
        }
    }
    Ok(out)
}
