//! Dense complex matrices plus the constant matrices of the construction:
//! Fourier matrices, the dephased Hadamard basis `T`, the van der Waerden
//! matrix `W` and the unit-modulus matrices `M_{r,s}`.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{ditwise_product, prime_power, Prime};
use crate::perm::Perm;

/// Default tolerance for XU membership checks.
pub const XU_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let data = (0..rows * cols)
            .map(|i| f(i / cols.max(1), i % cols.max(1)))
            .collect();
        ComplexMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let data: Vec<Complex64> = rows.into_iter().flatten().collect();
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Domain("matrix entries must be finite".into()));
        }
        Ok(ComplexMatrix {
            rows: r,
            cols: c,
            data,
        })
    }

    /// 0/1 matrix with row `k` holding its unit entry in column `images[k]`.
    pub fn permutation(p: &Perm) -> Self {
        let n = p.len();
        let mut m = ComplexMatrix::zeros(n, n);
        for k in 0..n {
            m[(k, p.apply(k))] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    fn same_shape(&self, other: &ComplexMatrix, what: &str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{what}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn kron(&self, other: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            self[(i / other.rows, j / other.cols)] * other[(i % other.rows, j % other.cols)]
        })
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.same_shape(other, "sum")?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.same_shape(other, "difference")?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, c: Complex64) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    /// `self += c * P_perm` in place.
    pub fn add_scaled_permutation(&mut self, c: Complex64, p: &Perm) {
        for k in 0..p.len() {
            self.data[k * self.cols + p.apply(k)] += c;
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data
            .iter()
            .map(Complex64::norm_sqr)
            .sum::<f64>()
            .sqrt()
    }

    pub fn frobenius_dist(&self, other: &ComplexMatrix) -> Result<f64> {
        Ok(self.sub(other)?.frobenius_norm())
    }

    /// Copy of the block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    /// `diag(1, self)`.
    pub fn bordered(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.rows + 1, self.cols + 1, |i, j| match (i, j) {
            (0, 0) => Complex64::new(1.0, 0.0),
            (0, _) | (_, 0) => Complex64::new(0.0, 0.0),
            _ => self[(i - 1, j - 1)],
        })
    }

    /// Frobenius residual `||A^† A - I||`.
    pub fn unitarity_residual(&self) -> f64 {
        let g = self.adjoint().mul(self).expect("square shapes agree");
        g.frobenius_dist(&ComplexMatrix::identity(self.cols))
            .expect("same shape")
    }

    /// Largest `|line sum - 1|` over every row and column.
    pub fn line_sum_deviation(&self) -> f64 {
        let one = Complex64::new(1.0, 0.0);
        let rows = (0..self.rows).map(|i| (self.row(i).iter().sum::<Complex64>() - one).norm());
        let cols = (0..self.cols)
            .map(|j| ((0..self.rows).map(|i| self[(i, j)]).sum::<Complex64>() - one).norm());
        rows.chain(cols).fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self
                .row(i)
                .iter()
                .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
                .collect();
            writeln!(f, "{}", cells.join("  "))?;
        }
        Ok(())
    }
}

/// `exp(2πi t / m)` evaluated from the integer exponent.
#[inline]
pub fn root_of_unity(t: usize, m: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (t % m) as f64 / m as f64)
}

/// Unitary DFT: `F[k][l] = ω^{kl} / √m` with `ω = exp(2πi/m)`.
pub fn fourier(m: usize) -> ComplexMatrix {
    let norm = 1.0 / (m as f64).sqrt();
    ComplexMatrix::from_fn(m, m, |k, l| root_of_unity(k * l % m, m) * norm)
}

/// Which dephased Hadamard basis `T` was used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TChoice {
    /// DFT of the full dimension (primes and composite non-prime-powers).
    Dft { n: usize },
    /// `w`-fold tensor power of the `p`-point DFT.
    FourierTensor { p: usize, w: usize },
}

impl TChoice {
    pub fn for_dimension(n: usize) -> Self {
        match prime_power(n) {
            Some((p, w)) if w >= 2 => TChoice::FourierTensor { p: p.get(), w },
            _ => TChoice::Dft { n },
        }
    }

    pub fn dimension(&self) -> usize {
        match *self {
            TChoice::Dft { n } => n,
            TChoice::FourierTensor { p, w } => p.pow(w as u32),
        }
    }

    pub fn build(&self) -> ComplexMatrix {
        match *self {
            TChoice::Dft { n } => fourier(n),
            TChoice::FourierTensor { p, w } => {
                let prime = Prime::new(p).expect("tag holds a prime");
                let n = p.pow(w as u32);
                let norm = 1.0 / (n as f64).sqrt();
                ComplexMatrix::from_fn(n, n, |a, b| {
                    root_of_unity(ditwise_product(a, b, prime), p) * norm
                })
            }
        }
    }
}

impl fmt::Display for TChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TChoice::Dft { n } => write!(f, "dft({n})"),
            TChoice::FourierTensor { p, w } => write!(f, "dft({p})^{w}"),
        }
    }
}

/// The dephased unitary Hadamard basis for dimension `n`: `F_p^{⊗w}` when
/// `n = p^w` with `w ≥ 2`, the `n`-point DFT otherwise.
pub fn build_t(n: usize) -> ComplexMatrix {
    TChoice::for_dimension(n).build()
}

/// `(M_{r,s})[k][l] = n T[k][r] conj(T[l][s])` for `1 ≤ r, s ≤ n-1`.
pub fn m_matrix(t: &ComplexMatrix, r: usize, s: usize) -> Result<ComplexMatrix> {
    let n = t.rows();
    if !(1..n).contains(&r) || !(1..n).contains(&s) {
        return Err(Error::Domain(format!(
            "M_(r,s) needs 1 <= r, s <= {}, got ({r},{s})",
            n.saturating_sub(1)
        )));
    }
    let nf = n as f64;
    Ok(ComplexMatrix::from_fn(n, n, |k, l| {
        t[(k, r)] * t[(l, s)].conj() * nf
    }))
}

/// The doubly stochastic matrix with every entry `1/n`.
pub fn van_der_waerden(n: usize) -> ComplexMatrix {
    let v = Complex64::new(1.0 / n as f64, 0.0);
    ComplexMatrix::from_fn(n, n, |_, _| v)
}

/// Haar-distributed unitary from Gram-Schmidt QR of a complex Gaussian
/// matrix. The `R` factor of Gram-Schmidt has a positive diagonal, so no
/// further phase correction is needed.
pub fn haar_unitary(m: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols: Vec<Vec<Complex64>> = (0..m)
        .map(|_| {
            (0..m)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    Complex64::new(re, im)
                })
                .collect()
        })
        .collect();
    for j in 0..m {
        let (done, rest) = cols.split_at_mut(j);
        let v = &mut rest[0];
        // two passes keep the basis orthogonal to working precision
        for _ in 0..2 {
            for q in done.iter() {
                let proj: Complex64 = q.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let norm = v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        for vi in v.iter_mut() {
            *vi /= norm;
        }
    }
    ComplexMatrix::from_fn(m, m, |i, j| cols[j][i])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XuReport {
    pub unitarity_residual: f64,
    pub line_sum_deviation: f64,
    pub tolerance: f64,
}

impl XuReport {
    pub fn is_unitary(&self) -> bool {
        self.unitarity_residual <= self.tolerance
    }

    pub fn has_unit_line_sums(&self) -> bool {
        self.line_sum_deviation <= self.tolerance
    }

    pub fn passed(&self) -> bool {
        self.is_unitary() && self.has_unit_line_sums()
    }

    /// Names the failed checks, if any.
    pub fn failure(&self) -> Option<String> {
        let mut failed = Vec::new();
        if !self.is_unitary() {
            failed.push(format!(
                "not unitary (||X^†X - I||_F = {:e} > {:e})",
                self.unitarity_residual, self.tolerance
            ));
        }
        if !self.has_unit_line_sums() {
            failed.push(format!(
                "line sums differ from 1 (max deviation {:e} > {:e})",
                self.line_sum_deviation, self.tolerance
            ));
        }
        (!failed.is_empty()).then(|| failed.join("; "))
    }
}

pub fn check_xu(x: &ComplexMatrix, tol: f64) -> Result<XuReport> {
    if !x.is_square() {
        return Err(Error::Dimension(format!(
            "XU check on a {}x{} matrix",
            x.rows(),
            x.cols()
        )));
    }
    Ok(XuReport {
        unitarity_residual: x.unitarity_residual(),
        line_sum_deviation: x.line_sum_deviation(),
        tolerance: tol,
    })
}

/// A matrix that passed [`check_xu`].
#[derive(Clone, Debug)]
pub struct XuMatrix {
    matrix: ComplexMatrix,
    report: XuReport,
}

impl XuMatrix {
    pub fn new(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        let report = check_xu(&matrix, tol)?;
        match report.failure() {
            Some(msg) => Err(Error::NotXu(msg)),
            None => Ok(XuMatrix { matrix, report }),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn report(&self) -> &XuReport {
        &self.report
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn into_inner(self) -> ComplexMatrix {
        self.matrix
    }
}

/// `X = T diag(1, U) T^†` with `T = build_t(n)`.
pub fn xu_from_unitary(u: &ComplexMatrix, n: usize) -> Result<XuMatrix> {
    xu_from_unitary_with(u, &build_t(n))
}

pub fn xu_from_unitary_with(u: &ComplexMatrix, t: &ComplexMatrix) -> Result<XuMatrix> {
    let n = t.rows();
    if u.rows() + 1 != n || !u.is_square() {
        return Err(Error::Dimension(format!(
            "U must be {0}x{0} for n = {n}",
            n.saturating_sub(1)
        )));
    }
    let res = u.unitarity_residual();
    if res > XU_TOLERANCE {
        return Err(Error::Domain(format!(
            "U is not unitary (residual {res:e})"
        )));
    }
    let x = t.mul(&u.bordered())?.mul(&t.adjoint())?;
    XuMatrix::new(x, XU_TOLERANCE)
}

/// Lower-right `(n-1) x (n-1)` block of `T^† X T` with `T = build_t(n)`.
pub fn unitary_from_xu(x: &XuMatrix) -> Result<ComplexMatrix> {
    lower_block(
        &build_t(x.dim()),
        x.matrix(),
        x.report().tolerance.max(XU_TOLERANCE),
    )
}

/// Lower-right block of `T^† A T`, checking that the first row and column
/// are `(1, 0, ..., 0)` within `tol`.
pub fn lower_block(t: &ComplexMatrix, a: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let n = t.rows();
    let full = t.adjoint().mul(a)?.mul(t)?;
    let mut border = 0f64;
    for i in 0..n {
        let expected = if i == 0 { 1.0 } else { 0.0 };
        border = border
            .max((full[(0, i)] - expected).norm())
            .max((full[(i, 0)] - expected).norm());
    }
    if border > tol * n as f64 {
        return Err(Error::Consistency(format!(
            "T^† A T is not block diagonal: border deviation {border:e}"
        )));
    }
    Ok(full.block(1, 1, n - 1, n - 1))
}
