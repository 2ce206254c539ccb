//! File formats and the commands behind the `xu-birkhoff` binary.
//!
//! Matrices and decompositions are stored as JSON. Complex numbers are
//! `[re, im]` pairs written with shortest round-trip precision, so a
//! reloaded file reproduces every bit of the original values.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::birkhoff::{
    auto_selection, decompose, natural_group, strategy2_applicable, term_count, DecomposeOptions,
    Decomposition, Strategy, Term, Tolerances, VerifyReport, RESIDUAL_TOLERANCE_PER_N,
    SUM_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::field::{prime_power, DitVector, Prime};
use crate::gfmatrix::GfMatrix;
use crate::linalg::{haar_unitary, xu_from_unitary, ComplexMatrix, TChoice, XuMatrix};
use crate::perm::{EpiLabel, GroupKind, GroupLabel, Perm, SuperLabel};

/// Largest `n` accepted by [`cmd_counts`].
pub const MAX_COUNT_N: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixMetadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<MatrixMetadata>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix, metadata: Option<MatrixMetadata>) -> Self {
        let entries = m
            .to_rows()
            .into_iter()
            .map(|row| row.into_iter().map(|z| [z.re, z.im]).collect())
            .collect();
        MatrixFile {
            n: m.rows(),
            entries,
            metadata,
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.entries.len() != self.n || self.entries.iter().any(|r| r.len() != self.n) {
            return Err(Error::Dimension(format!(
                "matrix file declares n = {} but entries are not {0}x{0}",
                self.n
            )));
        }
        ComplexMatrix::from_rows(
            self.entries
                .iter()
                .map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
                .collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum LabelRecord {
    Perm {
        images: Vec<usize>,
    },
    Super {
        p: usize,
        a: usize,
        x: usize,
    },
    Epi {
        p: usize,
        a_dits: Vec<usize>,
        x_rows: Vec<Vec<usize>>,
    },
}

impl LabelRecord {
    pub fn from_label(label: &GroupLabel) -> Self {
        match label {
            GroupLabel::Perm(p) => LabelRecord::Perm {
                images: p.images().to_vec(),
            },
            GroupLabel::Super(s) => LabelRecord::Super {
                p: s.p.get(),
                a: s.a,
                x: s.x,
            },
            GroupLabel::Epi(e) => LabelRecord::Epi {
                p: e.prime().get(),
                a_dits: e.a.digits().to_vec(),
                x_rows: e.x.rows(),
            },
        }
    }

    pub fn to_label(&self) -> Result<GroupLabel> {
        Ok(match self {
            LabelRecord::Perm { images } => GroupLabel::Perm(Perm::new(images.clone())?),
            LabelRecord::Super { p, a, x } => {
                GroupLabel::Super(SuperLabel::new(Prime::new(*p)?, *a, *x)?)
            }
            LabelRecord::Epi { p, a_dits, x_rows } => {
                let p = Prime::new(*p)?;
                GroupLabel::Epi(EpiLabel::new(
                    DitVector::new(p, a_dits.clone())?,
                    GfMatrix::from_rows(p, x_rows)?,
                )?)
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupRecord {
    Symmetric { n: usize },
    Supercirculant { p: usize },
    Epicirculant { p: usize, w: usize },
}

impl From<GroupKind> for GroupRecord {
    fn from(g: GroupKind) -> Self {
        match g {
            GroupKind::Symmetric { n } => GroupRecord::Symmetric { n },
            GroupKind::Supercirculant { p } => GroupRecord::Supercirculant { p: p.get() },
            GroupKind::Epicirculant { p, w } => GroupRecord::Epicirculant { p: p.get(), w },
        }
    }
}

impl TryFrom<&GroupRecord> for GroupKind {
    type Error = Error;

    fn try_from(g: &GroupRecord) -> Result<Self> {
        match *g {
            GroupRecord::Symmetric { n } => Ok(GroupKind::symmetric(n)),
            GroupRecord::Supercirculant { p } => GroupKind::supercirculant(p),
            GroupRecord::Epicirculant { p, w } => GroupKind::epicirculant(p, w),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub label: LabelRecord,
    pub weight: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub sum_c: [f64; 2],
    pub sum_abs2: f64,
    pub residual: f64,
    pub nonzero_count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionFile {
    pub n: usize,
    pub group: GroupRecord,
    pub strategy: Strategy,
    /// Group order `N`.
    pub order: u128,
    pub t_choice: TChoice,
    pub terms: Vec<TermRecord>,
    pub audit: AuditRecord,
}

impl DecompositionFile {
    pub fn new(d: &Decomposition, report: &VerifyReport) -> Self {
        DecompositionFile {
            n: d.n,
            group: d.group.into(),
            strategy: d.strategy,
            order: d.order,
            t_choice: d.t_choice,
            terms: d
                .terms
                .iter()
                .map(|t| TermRecord {
                    label: LabelRecord::from_label(&t.label),
                    weight: [t.weight.re, t.weight.im],
                })
                .collect(),
            audit: AuditRecord {
                sum_c: [report.sum_c.re, report.sum_c.im],
                sum_abs2: report.sum_abs2,
                residual: report.residual,
                nonzero_count: report.nonzero_count,
            },
        }
    }

    pub fn to_decomposition(&self) -> Result<Decomposition> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                Ok(Term {
                    label: t.label.to_label()?,
                    weight: Complex64::new(t.weight[0], t.weight[1]),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Decomposition {
            n: self.n,
            group: GroupKind::try_from(&self.group)?,
            strategy: self.strategy,
            t_choice: self.t_choice,
            order: self.order,
            terms,
        })
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix> {
    read_json::<MatrixFile>(path)?.to_matrix()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum GroupChoice {
    #[default]
    Auto,
    Symmetric,
    Supercirculant,
    Epicirculant,
}

impl FromStr for GroupChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "auto" => Ok(GroupChoice::Auto),
            "symmetric" => Ok(GroupChoice::Symmetric),
            "supercirculant" => Ok(GroupChoice::Supercirculant),
            "epicirculant" => Ok(GroupChoice::Epicirculant),
            other => Err(format!(
                "unknown group {other:?} (auto|symmetric|supercirculant|epicirculant)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum StrategyChoice {
    #[default]
    Auto,
    First,
    Second,
    Structural,
}

impl FromStr for StrategyChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "auto" => Ok(StrategyChoice::Auto),
            "1" => Ok(StrategyChoice::First),
            "2" => Ok(StrategyChoice::Second),
            "structural" => Ok(StrategyChoice::Structural),
            other => Err(format!("unknown strategy {other:?} (auto|1|2|structural)")),
        }
    }
}

/// Turns the user's group and strategy choices into a concrete pair for
/// dimension `n`. `auto` picks the smallest applicable group and prefers
/// the second strategy wherever it is applicable.
pub fn resolve_choice(
    n: usize,
    group: GroupChoice,
    strategy: StrategyChoice,
) -> Result<(GroupKind, Strategy)> {
    if n == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    let kind = match group {
        GroupChoice::Auto => None,
        GroupChoice::Symmetric => Some(GroupKind::symmetric(n)),
        GroupChoice::Supercirculant => match prime_power(n) {
            Some((p, 1)) => Some(GroupKind::Supercirculant { p }),
            _ => {
                return Err(Error::Unsupported(format!(
                    "supercirculant groups need a prime dimension, got {n}"
                )))
            }
        },
        GroupChoice::Epicirculant => match prime_power(n) {
            Some((p, w)) => Some(GroupKind::Epicirculant { p, w }),
            None => {
                return Err(Error::Unsupported(format!(
                    "epicirculant groups need a prime-power dimension, got {n}"
                )))
            }
        },
    };
    let second_or_first = |g: GroupKind| {
        if strategy2_applicable(g).applicable {
            Strategy::Second
        } else {
            Strategy::First
        }
    };
    Ok(match (kind, strategy) {
        (None, StrategyChoice::Auto) => auto_selection(n),
        (None, StrategyChoice::First) => (
            natural_group(n).unwrap_or(GroupKind::symmetric(n)),
            Strategy::First,
        ),
        (None, StrategyChoice::Second) => {
            let g = natural_group(n)
                .filter(|&g| strategy2_applicable(g).applicable)
                .unwrap_or(GroupKind::symmetric(n));
            let app = strategy2_applicable(g);
            if !app.applicable {
                return Err(Error::Unsupported(format!(
                    "second strategy in dimension {n}: {}",
                    app.reason
                )));
            }
            (g, Strategy::Second)
        }
        (None, StrategyChoice::Structural) => match natural_group(n) {
            Some(g) => (g, Strategy::Structural),
            None if n == 1 => (GroupKind::symmetric(1), Strategy::Structural),
            None => {
                return Err(Error::Unsupported(format!(
                    "structural decomposition needs a prime-power dimension, got {n}"
                )))
            }
        },
        (Some(g), StrategyChoice::Auto) => (g, second_or_first(g)),
        (Some(g), StrategyChoice::First) => (g, Strategy::First),
        (Some(g), StrategyChoice::Second) => {
            let app = strategy2_applicable(g);
            if !app.applicable {
                return Err(Error::Unsupported(format!(
                    "second strategy on {g}: {}",
                    app.reason
                )));
            }
            (g, Strategy::Second)
        }
        (Some(g), StrategyChoice::Structural) => (g, Strategy::Structural),
    })
}

/// Tolerances derived from a single `--tol`: sums use `tol` directly and the
/// Frobenius residual bound is `10 tol n`, the same ratio as the defaults.
pub fn tolerances(tol: Option<f64>) -> Tolerances {
    match tol {
        Some(t) => Tolerances {
            sum: t,
            residual_per_n: t * RESIDUAL_TOLERANCE_PER_N / SUM_TOLERANCE,
        },
        None => Tolerances::default(),
    }
}

/// Haar-derived XU(n) matrix, written to `out`.
pub fn cmd_gen(n: usize, seed: u64, out: &Path) -> Result<MatrixFile> {
    if n == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    let x = if n == 1 {
        ComplexMatrix::identity(1)
    } else {
        xu_from_unitary(&haar_unitary(n - 1, seed), n)?.into_inner()
    };
    let file = MatrixFile::from_matrix(
        &x,
        Some(MatrixMetadata {
            seed: Some(seed),
            source: Some("haar".into()),
        }),
    );
    write_json(out, &file)?;
    Ok(file)
}

#[derive(Clone, Debug)]
pub struct DecomposeOutcome {
    pub file: DecompositionFile,
    pub report: VerifyReport,
}

pub fn cmd_decompose(
    input: &Path,
    group: GroupChoice,
    strategy: StrategyChoice,
    out: &Path,
    tol: Option<f64>,
    allow_large: bool,
) -> Result<DecomposeOutcome> {
    let tol = tolerances(tol);
    let x = XuMatrix::new(read_matrix(input)?, tol.sum)?;
    let (kind, strategy) = resolve_choice(x.dim(), group, strategy)?;
    let d = decompose(&x, kind, strategy, &DecomposeOptions { allow_large })?;
    let report = d.verify(x.matrix(), tol)?;
    let file = DecompositionFile::new(&d, &report);
    write_json(out, &file)?;
    Ok(DecomposeOutcome { file, report })
}

pub fn cmd_verify(matrix: &Path, decomposition: &Path, tol: Option<f64>) -> Result<VerifyReport> {
    let x = read_matrix(matrix)?;
    let d = read_json::<DecompositionFile>(decomposition)?.to_decomposition()?;
    d.verify(&x, tolerances(tol))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountRow {
    pub n: usize,
    pub count: String,
    pub group: String,
    pub strategy: Strategy,
}

pub fn count_rows(max_n: usize) -> Result<Vec<CountRow>> {
    if max_n > MAX_COUNT_N {
        return Err(Error::Domain(format!(
            "counts are limited to n <= {MAX_COUNT_N}"
        )));
    }
    Ok((1..=max_n)
        .map(|n| {
            let t = term_count(n);
            CountRow {
                n,
                count: t.count.to_string(),
                group: t.group.to_string(),
                strategy: t.strategy,
            }
        })
        .collect())
}

/// Term-count table for `1..=max_n`; also written as CSV when `csv` is set.
pub fn cmd_counts(max_n: usize, csv: Option<&Path>) -> Result<String> {
    let rows = count_rows(max_n)?;
    let width = rows.iter().map(|r| r.count.len()).max().unwrap_or(0).max(5);
    let mut table = String::new();
    writeln!(
        table,
        "{:>3}  {:>width$}  {:<18}  strategy",
        "n", "terms", "group"
    )
    .expect("string write");
    for r in &rows {
        writeln!(
            table,
            "{:>3}  {:>width$}  {:<18}  {}",
            r.n, r.count, r.group, r.strategy
        )
        .expect("string write");
    }
    if let Some(path) = csv {
        let mut text = String::from("n,count,group,strategy\n");
        for r in &rows {
            writeln!(text, "{},{},{},{}", r.n, r.count, r.group, r.strategy).expect("string write");
        }
        fs::write(path, text)?;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn choice_resolution() {
        let sym = |n| GroupKind::symmetric(n);
        assert_eq!(
            resolve_choice(9, GroupChoice::Auto, StrategyChoice::Auto).unwrap(),
            (GroupKind::epicirculant(3, 2).unwrap(), Strategy::Second)
        );
        assert_eq!(
            resolve_choice(6, GroupChoice::Auto, StrategyChoice::Auto).unwrap(),
            (sym(6), Strategy::Second)
        );
        assert_eq!(
            resolve_choice(7, GroupChoice::Auto, StrategyChoice::Second).unwrap(),
            (sym(7), Strategy::Second)
        );
        assert_eq!(
            resolve_choice(5, GroupChoice::Auto, StrategyChoice::First).unwrap(),
            (GroupKind::supercirculant(5).unwrap(), Strategy::First)
        );
        assert!(matches!(
            resolve_choice(7, GroupChoice::Supercirculant, StrategyChoice::Second),
            Err(Error::Unsupported(_))
        ));
        assert!(resolve_choice(3, GroupChoice::Auto, StrategyChoice::Second).is_err());
        assert!(resolve_choice(6, GroupChoice::Supercirculant, StrategyChoice::Auto).is_err());
        assert!(resolve_choice(6, GroupChoice::Auto, StrategyChoice::Structural).is_err());
        assert_eq!(
            resolve_choice(8, GroupChoice::Epicirculant, StrategyChoice::Auto).unwrap(),
            (GroupKind::epicirculant(2, 3).unwrap(), Strategy::First)
        );
    }

    #[test]
    fn label_records_round_trip() {
        let p = Prime::new(3).unwrap();
        let labels = [
            GroupLabel::Perm(Perm::new(vec![2, 0, 1]).unwrap()),
            GroupLabel::Super(SuperLabel::new(p, 2, 1).unwrap()),
            GroupLabel::Epi(
                EpiLabel::new(
                    DitVector::new(p, vec![1, 2]).unwrap(),
                    GfMatrix::from_rows(p, &[vec![0, 1], vec![2, 1]]).unwrap(),
                )
                .unwrap(),
            ),
        ];
        for l in labels {
            let rec = LabelRecord::from_label(&l);
            let json = serde_json::to_string(&rec).unwrap();
            assert_eq!(
                serde_json::from_str::<LabelRecord>(&json)
                    .unwrap()
                    .to_label()
                    .unwrap(),
                l
            );
        }
        let bad = LabelRecord::Epi {
            p: 2,
            a_dits: vec![0, 0],
            x_rows: vec![vec![1, 1], vec![1, 1]],
        };
        assert!(bad.to_label().is_err());
    }

    #[test]
    fn counts_guard() {
        assert!(count_rows(65).is_err());
        assert_eq!(count_rows(64).unwrap().len(), 64);
    }

    #[test]
    fn tolerance_scaling() {
        assert_eq!(tolerances(None), Tolerances::default());
        let t = tolerances(Some(1e-6));
        assert_eq!(t.sum, 1e-6);
        assert!((t.residual_per_n - 1e-5).abs() < 1e-18);
    }
}
