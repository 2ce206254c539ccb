//! Unitary Birkhoff decompositions.
//!
//! Every unitary matrix whose rows and columns all sum to 1 (the group
//! XU(n)) is a complex-weighted sum of permutation matrices with weights
//! summing to 1 and squared moduli summing to 1. This crate builds such
//! decompositions over the smallest group it can:
//!
//! * the symmetric group for any `n` (only even permutations for `n ≥ 4`),
//! * the supercirculant group S(p) of order `p(p-1)` for prime `n = p`,
//! * the epicirculant group E(p^w) ≅ GA(w, p) for prime powers `n = p^w`.
//!
//! Modules follow the layers of the construction: [`field`] and
//! [`gfmatrix`] do exact F_p arithmetic, [`perm`] holds the permutation
//! groups, [`linalg`] the complex matrices, [`birkhoff`] the engine and
//! [`cli`] the file formats and commands behind the `xu-birkhoff` binary.

pub mod birkhoff;
pub mod cli;
pub mod error;
pub mod field;
pub mod gfmatrix;
pub mod linalg;
pub mod perm;

pub use birkhoff::{
    auto_selection, decompose, decompose_strategy1, decompose_strategy2, decompose_structural,
    term_count, DecomposeOptions, Decomposition, Strategy, Term, Tolerances, VerifyReport,
};
pub use error::{Error, Result};
pub use linalg::{haar_unitary, xu_from_unitary, ComplexMatrix, XuMatrix};
pub use perm::{enumerate_group, GroupKind, GroupLabel, Perm};
