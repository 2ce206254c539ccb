//! Decomposition engine: writes an XU(n) matrix as a complex-weighted sum of
//! permutation matrices drawn from a doubly transitive group.
//!
//! Two routes are provided. The character route evaluates every weight from
//! the standard representation `D(σ)`, the lower-right block of
//! `T^† P_σ T`:
//!
//! ```text
//! c_σ = δ_σ + k (n-1)/N · [Tr(D(σ⁻¹) U) - χ(σ⁻¹)]
//! ```
//!
//! with `k = 1` over the whole group (first strategy) or `k = 2` over its
//! even elements only (second strategy, needs an inequivalent anti-standard
//! representation). Both give `Σ c = 1` and `Σ |c|² = 1`. The structural
//! route expands `X = W + (1/n) Σ U[r-1][s-1] M_{r,s}` and writes every
//! `M_{r,s}` as a sum of `n` supercirculant or epicirculant matrices; it
//! only guarantees `Σ c = 1`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigUint;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{prime_power, to_dits, Prime};
use crate::gfmatrix::pitch_matrix;
use crate::linalg::{build_t, lower_block, m_matrix, ComplexMatrix, TChoice, XuMatrix};
use crate::perm::{
    enumerate_group, EpiLabel, GroupElement, GroupKind, GroupLabel, Parity, Perm, SuperLabel,
};

/// Default bound on `|Σc - 1|` and `|Σ|c|² - 1|`.
pub const SUM_TOLERANCE: f64 = 1e-9;
/// Default Frobenius reconstruction bound, multiplied by `n`.
pub const RESIDUAL_TOLERANCE_PER_N: f64 = 1e-8;
/// Weights below this modulus are reported as negligible (never pruned).
pub const NEGLIGIBLE_WEIGHT: f64 = 1e-13;
/// Complex entries a cached irrep table may hold before streaming is required.
pub const IRREP_CACHE_LIMIT: u128 = 20_000_000;
/// Term count above which sums switch to pairwise reduction.
const PAIRWISE_THRESHOLD: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    /// Character formula over the whole group.
    #[serde(rename = "strategy1")]
    First,
    /// Character formula over the even elements, doubled coefficient.
    #[serde(rename = "strategy2")]
    Second,
    /// Expansion in `W` and the `M_{r,s}` matrices.
    #[serde(rename = "structural")]
    Structural,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::First => "strategy1",
            Strategy::Second => "strategy2",
            Strategy::Structural => "structural",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct DecomposeOptions {
    /// Permit groups whose irrep tables exceed [`IRREP_CACHE_LIMIT`]; weights
    /// are then computed on the fly instead of from a cached table.
    pub allow_large: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub label: GroupLabel,
    pub weight: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub n: usize,
    pub group: GroupKind,
    pub strategy: Strategy,
    pub t_choice: TChoice,
    /// Order of the group the weights range over.
    pub order: u128,
    pub terms: Vec<Term>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub sum: f64,
    pub residual_per_n: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            sum: SUM_TOLERANCE,
            residual_per_n: RESIDUAL_TOLERANCE_PER_N,
        }
    }
}

impl Tolerances {
    pub fn uniform(tol: f64) -> Self {
        Tolerances {
            sum: tol,
            residual_per_n: tol,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub sum_c: Complex64,
    pub sum_abs2: f64,
    /// `|Σc - 1|`
    pub sum_c_error: f64,
    /// `|Σ|c|² - 1|`
    pub sum_abs2_error: f64,
    /// `false` for structural decompositions, where `Σ|c|² = 1` does not hold in general.
    pub sum_abs2_asserted: bool,
    /// `||Σ c_σ P_σ - X||_F`
    pub residual: f64,
    pub residual_bound: f64,
    pub sum_tolerance: f64,
    pub term_count: usize,
    pub nonzero_count: usize,
    pub negligible_count: usize,
}

impl VerifyReport {
    pub fn sum_c_ok(&self) -> bool {
        self.sum_c_error <= self.sum_tolerance
    }

    pub fn sum_abs2_ok(&self) -> bool {
        !self.sum_abs2_asserted || self.sum_abs2_error <= self.sum_tolerance
    }

    pub fn residual_ok(&self) -> bool {
        self.residual <= self.residual_bound
    }

    pub fn passed(&self) -> bool {
        self.sum_c_ok() && self.sum_abs2_ok() && self.residual_ok()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |ok: bool| if ok { "ok" } else { "FAIL" };
        writeln!(
            f,
            "|sum c - 1|        = {:e} (tol {:e}) {}",
            self.sum_c_error,
            self.sum_tolerance,
            mark(self.sum_c_ok())
        )?;
        if self.sum_abs2_asserted {
            writeln!(
                f,
                "|sum |c|^2 - 1|    = {:e} (tol {:e}) {}",
                self.sum_abs2_error,
                self.sum_tolerance,
                mark(self.sum_abs2_ok())
            )?;
        } else {
            writeln!(
                f,
                "|sum |c|^2 - 1|    = {:e} (not asserted for structural decompositions)",
                self.sum_abs2_error
            )?;
        }
        writeln!(
            f,
            "||sum c P - X||_F  = {:e} (tol {:e}) {}",
            self.residual,
            self.residual_bound,
            mark(self.residual_ok())
        )?;
        write!(
            f,
            "terms = {}, nonzero = {}, negligible (< {:e}) = {}",
            self.term_count, self.nonzero_count, NEGLIGIBLE_WEIGHT, self.negligible_count
        )
    }
}

fn sum_complex(values: &[Complex64]) -> Complex64 {
    if values.len() <= PAIRWISE_THRESHOLD {
        return values.iter().sum();
    }
    let (a, b) = values.split_at(values.len() / 2);
    sum_complex(a) + sum_complex(b)
}

fn sum_real(values: &[f64]) -> f64 {
    if values.len() <= PAIRWISE_THRESHOLD {
        return values.iter().sum();
    }
    let (a, b) = values.split_at(values.len() / 2);
    sum_real(a) + sum_real(b)
}

impl Decomposition {
    pub fn weights(&self) -> Vec<Complex64> {
        self.terms.iter().map(|t| t.weight).collect()
    }

    pub fn sum_weights(&self) -> Complex64 {
        sum_complex(&self.weights())
    }

    pub fn sum_abs2(&self) -> f64 {
        sum_real(
            &self
                .terms
                .iter()
                .map(|t| t.weight.norm_sqr())
                .collect::<Vec<_>>(),
        )
    }

    pub fn nonzero_count(&self) -> usize {
        self.terms
            .iter()
            .filter(|t| t.weight != Complex64::new(0.0, 0.0))
            .count()
    }

    /// `Σ c_σ P_σ`.
    pub fn reconstruct(&self) -> Result<ComplexMatrix> {
        if let Some(t) = self.terms.iter().find(|t| t.label.points() != self.n) {
            return Err(Error::Dimension(format!(
                "label {} does not act on {} points",
                t.label, self.n
            )));
        }
        let perms: Vec<(Perm, Complex64)> = self
            .terms
            .iter()
            .map(|t| (t.label.to_perm(), t.weight))
            .collect();
        Ok(accumulate(&perms, self.n))
    }

    pub fn verify(&self, x: &ComplexMatrix, tol: Tolerances) -> Result<VerifyReport> {
        if !x.is_square() || x.rows() != self.n {
            return Err(Error::Dimension(format!(
                "decomposition of size {} against a {}x{} matrix",
                self.n,
                x.rows(),
                x.cols()
            )));
        }
        let sum_c = self.sum_weights();
        let sum_abs2 = self.sum_abs2();
        let residual = self.reconstruct()?.frobenius_dist(x)?;
        Ok(VerifyReport {
            sum_c,
            sum_abs2,
            sum_c_error: (sum_c - 1.0).norm(),
            sum_abs2_error: (sum_abs2 - 1.0).abs(),
            sum_abs2_asserted: self.strategy != Strategy::Structural,
            residual,
            residual_bound: tol.residual_per_n * self.n as f64,
            sum_tolerance: tol.sum,
            term_count: self.terms.len(),
            nonzero_count: self.nonzero_count(),
            negligible_count: self
                .terms
                .iter()
                .filter(|t| {
                    t.weight != Complex64::new(0.0, 0.0) && t.weight.norm() < NEGLIGIBLE_WEIGHT
                })
                .count(),
        })
    }
}

fn accumulate(terms: &[(Perm, Complex64)], n: usize) -> ComplexMatrix {
    if terms.len() <= PAIRWISE_THRESHOLD {
        let mut out = ComplexMatrix::zeros(n, n);
        for (p, c) in terms {
            out.add_scaled_permutation(*c, p);
        }
        return out;
    }
    let (a, b) = terms.split_at(terms.len() / 2);
    accumulate(a, n).add(&accumulate(b, n)).expect("same shape")
}

/// `D(σ)`: lower-right block of `T^† P_σ T`.
pub fn standard_irrep(p: &Perm, t: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = t.rows();
    if p.len() != n {
        return Err(Error::Dimension(format!(
            "permutation of {} points against T of size {n}",
            p.len()
        )));
    }
    // (P T)[k][j] = T[σ(k)][j]
    let mut full = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            full[(i, j)] = (0..n).map(|k| t[(k, i)].conj() * t[(p.apply(k), j)]).sum();
        }
    }
    let one = Complex64::new(1.0, 0.0);
    let border = (1..n)
        .map(|i| full[(0, i)].norm().max(full[(i, 0)].norm()))
        .fold((full[(0, 0)] - one).norm(), f64::max);
    if border > 1e-10 * n as f64 {
        return Err(Error::Consistency(format!(
            "T^† P T has border deviation {border:e} for {p}"
        )));
    }
    Ok(full.block(1, 1, n - 1, n - 1))
}

/// Standard-representation matrices and characters for every group element,
/// in enumeration order.
#[derive(Clone, Debug)]
pub struct StandardIrrepTable {
    pub elements: Vec<GroupElement>,
    pub blocks: Vec<ComplexMatrix>,
    pub characters: Vec<i64>,
}

impl StandardIrrepTable {
    pub fn build(group: GroupKind, t: &ComplexMatrix) -> Result<Self> {
        let elements = enumerate_group(group)?;
        let blocks = elements
            .par_iter()
            .map(|e| standard_irrep(&e.perm, t))
            .collect::<Result<Vec<_>>>()?;
        let characters = elements.iter().map(|e| character(&e.perm)).collect();
        Ok(StandardIrrepTable {
            elements,
            blocks,
            characters,
        })
    }
}

/// `χ(σ) = Tr(P_σ) - 1`.
pub fn character(p: &Perm) -> i64 {
    p.trace() as i64 - 1
}

/// Every value the standard character can take on the group.
pub fn allowed_characters(group: GroupKind) -> Vec<i64> {
    match group {
        GroupKind::Symmetric { n } => {
            let n = n as i64;
            (-1..n).filter(|&c| c != n - 2 || n < 2).collect()
        }
        GroupKind::Supercirculant { p } => vec![-1, 0, p.get() as i64 - 1],
        GroupKind::Epicirculant { p, w } => {
            let mut v = vec![-1];
            v.extend((0..=w).map(|k| p.get().pow(k as u32) as i64 - 1));
            v
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Applicability {
    pub applicable: bool,
    /// Whether `N >= 2 + 2 (n-1)^2`, a necessary condition.
    pub order_condition: bool,
    pub reason: String,
}

/// Whether the second strategy may be used on the group.
pub fn strategy2_applicable(group: GroupKind) -> Applicability {
    let n = group.degree() as u128;
    let order_condition = match group.order() {
        Some(order) => n >= 1 && order >= 2 + 2 * (n - 1) * (n - 1),
        None => true,
    };
    let (applicable, reason) = match group {
        GroupKind::Symmetric { n } if n > 3 => (true, format!("P({n}) has an anti-standard representation for n > 3")),
        GroupKind::Symmetric { n } => (false, format!("P({n}) has no anti-standard representation for n <= 3")),
        GroupKind::Supercirculant { p } => (
            false,
            format!(
                "S({p}) has no inequivalent anti-standard representation: odd supercirculant permutations all have standard character 0"
            ),
        ),
        GroupKind::Epicirculant { p, w: 1 } => (
            false,
            format!("GA(1,{p}) is the supercirculant group S({p}), which has no inequivalent anti-standard representation"),
        ),
        GroupKind::Epicirculant { p, w: 2 } => (true, format!("GA(2,{p}) has an odd element with nonzero standard character")),
        GroupKind::Epicirculant { p, w } if p.get() == 2 => {
            (false, format!("GA({w},2) with w >= 3 contains only even permutations"))
        }
        GroupKind::Epicirculant { p, w } => (true, format!("GA({w},{p}) with odd p has an odd element with nonzero standard character")),
    };
    Applicability {
        applicable,
        order_condition,
        reason,
    }
}

fn check_group(x: &XuMatrix, group: GroupKind) -> Result<()> {
    if group.degree() != x.dim() {
        return Err(Error::Dimension(format!(
            "{group} acts on {} points, X is {}x{}",
            group.degree(),
            x.dim(),
            x.dim()
        )));
    }
    Ok(())
}

fn trivial(group: GroupKind, strategy: Strategy) -> Decomposition {
    Decomposition {
        n: 1,
        group,
        strategy,
        t_choice: TChoice::Dft { n: 1 },
        order: 1,
        terms: vec![Term {
            label: GroupLabel::Perm(Perm::identity(1)),
            weight: Complex64::new(1.0, 0.0),
        }],
    }
}

/// `Tr(A B)` for square matrices of equal size.
fn trace_of_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    let m = a.rows();
    (0..m)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .map(|(i, j)| a[(i, j)] * b[(j, i)])
        .sum()
}

fn character_route(
    x: &XuMatrix,
    group: GroupKind,
    strategy: Strategy,
    opts: &DecomposeOptions,
) -> Result<Decomposition> {
    check_group(x, group)?;
    let n = x.dim();
    if n == 1 {
        return Ok(trivial(group, strategy));
    }
    if strategy == Strategy::Second {
        let app = strategy2_applicable(group);
        if !app.applicable {
            return Err(Error::Unsupported(format!(
                "second strategy on {group}: {}",
                app.reason
            )));
        }
    }
    let order = group
        .order()
        .ok_or_else(|| Error::Resource(format!("order of {group} overflows")))?;
    let t_choice = TChoice::for_dimension(n);
    let t = t_choice.build();
    let u = lower_block(&t, x.matrix(), x.report().tolerance)?;
    let cache_entries = order.saturating_mul(((n - 1) * (n - 1)) as u128);
    let factor = match strategy {
        Strategy::First => 1.0,
        _ => 2.0,
    } * (n - 1) as f64
        / order as f64;
    let allowed = allowed_characters(group);

    let weight = |inv_block: &ComplexMatrix, elem: &GroupElement| -> Result<Complex64> {
        if strategy == Strategy::Second && elem.perm.parity() == Parity::Odd {
            return Ok(Complex64::new(0.0, 0.0));
        }
        // χ(σ⁻¹) = χ(σ): same fixed points
        let chi = character(&elem.perm);
        if !allowed.contains(&chi) {
            return Err(Error::Consistency(format!(
                "character {chi} of {} is outside the value set of {group}",
                elem.label
            )));
        }
        let delta = if elem.perm.is_identity() { 1.0 } else { 0.0 };
        Ok(delta + factor * (trace_of_product(inv_block, &u) - chi as f64))
    };

    let elements;
    let weights: Vec<Complex64> = if cache_entries <= IRREP_CACHE_LIMIT {
        let table = StandardIrrepTable::build(group, &t)?;
        let index: HashMap<&Perm, usize> = table
            .elements
            .iter()
            .enumerate()
            .map(|(i, e)| (&e.perm, i))
            .collect();
        let weights = table
            .elements
            .par_iter()
            .map(|e| {
                let inv = e.label.inverse().to_perm();
                weight(&table.blocks[index[&inv]], e)
            })
            .collect::<Result<Vec<_>>>()?;
        elements = table.elements;
        weights
    } else if opts.allow_large {
        elements = enumerate_group(group)?;
        elements
            .par_iter()
            .map(|e| {
                if strategy == Strategy::Second && e.perm.parity() == Parity::Odd {
                    return Ok(Complex64::new(0.0, 0.0));
                }
                let inv = e.label.inverse().to_perm();
                weight(&standard_irrep(&inv, &t)?, e)
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        return Err(Error::Resource(format!(
            "{group} needs {cache_entries} cached irrep entries (limit {IRREP_CACHE_LIMIT}); pass allow_large to stream"
        )));
    };

    let terms = elements
        .into_iter()
        .zip(weights)
        .map(|(e, weight)| Term {
            label: e.label,
            weight,
        })
        .collect();
    Ok(Decomposition {
        n,
        group,
        strategy,
        t_choice,
        order,
        terms,
    })
}

/// Character-formula weights over the whole group.
pub fn decompose_strategy1(x: &XuMatrix, group: GroupKind) -> Result<Decomposition> {
    character_route(x, group, Strategy::First, &DecomposeOptions::default())
}

/// Character-formula weights over the even elements, zero on odd ones.
pub fn decompose_strategy2(x: &XuMatrix, group: GroupKind) -> Result<Decomposition> {
    character_route(x, group, Strategy::Second, &DecomposeOptions::default())
}

/// The group the structural expansion lands in for a prime-power `n`.
pub fn natural_group(n: usize) -> Option<GroupKind> {
    match prime_power(n)? {
        (p, 1) => Some(GroupKind::Supercirculant { p }),
        (p, w) => Some(GroupKind::Epicirculant { p, w }),
    }
}

/// Orders structural terms like the group enumeration.
fn enumeration_key(label: &GroupLabel) -> (usize, bool, Vec<usize>) {
    match label {
        GroupLabel::Super(s) => (s.a, s.x != 1, vec![s.x]),
        GroupLabel::Epi(e) => (e.a.value(), !e.x.is_identity(), e.x.entries().to_vec()),
        GroupLabel::Perm(p) => (0, false, p.images().to_vec()),
    }
}

fn structural_label(p: Prime, w: usize, a: usize, r: Option<(usize, usize)>) -> Result<GroupLabel> {
    if w == 1 {
        let x = match r {
            Some((r, s)) => pitch_matrix(r, s, p, 1)?.get(0, 0),
            None => 1,
        };
        return Ok(GroupLabel::Super(SuperLabel::new(p, a, x)?));
    }
    let x = match r {
        Some((r, s)) => pitch_matrix(r, s, p, w)?,
        None => crate::gfmatrix::GfMatrix::identity(p, w),
    };
    Ok(GroupLabel::Epi(EpiLabel::new(to_dits(a, p, w)?, x)?))
}

/// Expansion of `X` through `W` and the `M_{r,s}` matrices, with weights
/// merged per distinct supercirculant or epicirculant label.
pub fn decompose_structural(x: &XuMatrix) -> Result<Decomposition> {
    let n = x.dim();
    let group = natural_group(n).ok_or_else(|| {
        Error::Unsupported(format!(
            "structural decomposition needs a prime-power dimension, got {n}"
        ))
    })?;
    let (p, w) = match group {
        GroupKind::Supercirculant { p } => (p, 1),
        GroupKind::Epicirculant { p, w } => (p, w),
        GroupKind::Symmetric { .. } => unreachable!(),
    };
    let t_choice = TChoice::for_dimension(n);
    let t = build_t(n);
    let u = lower_block(&t, x.matrix(), x.report().tolerance)?;
    let inv_n = 1.0 / n as f64;

    let mut acc: BTreeMap<(usize, bool, Vec<usize>), (GroupLabel, Complex64)> = BTreeMap::new();
    let mut add = |label: GroupLabel, c: Complex64| {
        acc.entry(enumeration_key(&label))
            .or_insert_with(|| (label, Complex64::new(0.0, 0.0)))
            .1 += c;
    };
    // W = Σ_a (1/n) E_{a,1}
    for a in 0..n {
        add(structural_label(p, w, a, None)?, Complex64::new(inv_n, 0.0));
    }
    for r in 1..n {
        for s in 1..n {
            let m = m_matrix(&t, r, s)?;
            let coeff = u[(r - 1, s - 1)] * inv_n;
            for a in 0..n {
                add(structural_label(p, w, a, Some((r, s)))?, coeff * m[(0, a)]);
            }
        }
    }
    let terms = acc
        .into_values()
        .map(|(label, weight)| Term { label, weight })
        .collect();
    Ok(Decomposition {
        n,
        group,
        strategy: Strategy::Structural,
        t_choice,
        order: group.order().unwrap_or(0),
        terms,
    })
}

/// Dispatches on the strategy.
pub fn decompose(
    x: &XuMatrix,
    group: GroupKind,
    strategy: Strategy,
    opts: &DecomposeOptions,
) -> Result<Decomposition> {
    match strategy {
        Strategy::Structural => {
            check_group(x, group)?;
            if x.dim() == 1 {
                return Ok(trivial(group, strategy));
            }
            if natural_group(x.dim()) != Some(group) {
                return Err(Error::Unsupported(format!(
                    "structural decomposition of a {0}x{0} matrix lands in its affine group, not {group}",
                    x.dim()
                )));
            }
            decompose_structural(x)
        }
        s => character_route(x, group, s, opts),
    }
}

/// Smallest group and strategy for dimension `n`.
pub fn auto_selection(n: usize) -> (GroupKind, Strategy) {
    match prime_power(n) {
        None if n <= 1 => (GroupKind::Symmetric { n: n.max(1) }, Strategy::First),
        None => (GroupKind::Symmetric { n }, Strategy::Second),
        Some((p, 1)) => (GroupKind::Supercirculant { p }, Strategy::First),
        Some((p, w)) => {
            let g = GroupKind::Epicirculant { p, w };
            if strategy2_applicable(g).applicable {
                (g, Strategy::Second)
            } else {
                (g, Strategy::First)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermCount {
    pub n: usize,
    pub count: BigUint,
    pub group: GroupKind,
    pub strategy: Strategy,
}

/// Number of Birkhoff terms the smallest applicable construction needs.
pub fn term_count(n: usize) -> TermCount {
    let (group, strategy) = auto_selection(n);
    let full: BigUint = match group {
        GroupKind::Symmetric { n } => (1..=n as u64).map(BigUint::from).product(),
        g => BigUint::from(g.order().expect("prime-power groups fit in u128")),
    };
    let count = if n <= 1 {
        BigUint::from(1u32)
    } else if strategy == Strategy::Second {
        full / 2u32
    } else {
        full
    };
    TermCount {
        n,
        count,
        group,
        strategy,
    }
}
