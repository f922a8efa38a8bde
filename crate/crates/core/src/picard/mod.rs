//! Picard lattices of blowups of the plane.
//!
//! A [`BlowupLattice`] with `r` blown-up points has basis `(L, E_1..E_r)`
//! and intersection form `diag(1, −1, …, −1)`. Classes are integer vectors
//! in that basis and matrices act on column vectors: column `j` of a matrix
//! is the image of the `j`-th basis vector.

mod action;
mod class;
mod matrix;
mod minus_one;

pub use action::{
    invariant_sublattice, is_pair_minimal, orbits, validate_action, verify_mori_fibration,
    InvariantLattice, Isometry, LatticeAction, Minimality, MoriVerdict, DEFAULT_CLOSURE_CAP,
};
pub use class::{BlowupLattice, DivisorClass, FiberedMarking, MAX_R};
pub use matrix::IntMatrix;
pub use minus_one::{enumerate_minus_one_classes, enumerate_minus_one_classes_with, MAX_DEGREE};

use thiserror::Error;

use crate::json::DecodeError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("D² + D·K is odd for {0}, so no genus is defined")]
    NonIntegralGenus(String),
    #[error("unsupported number of blown-up points: {0}")]
    UnsupportedRank(usize),
    #[error("matrix does not preserve the intersection form")]
    NotIsometry,
    #[error("matrix does not fix the canonical class")]
    MovesCanonicalClass,
    #[error("group closure exceeded {0} elements")]
    GroupClosureCapExceeded(usize),
    #[error("class {0} is mapped outside the given set")]
    NotClosedUnderAction(String),
    #[error("integer overflow in lattice arithmetic")]
    Overflow,
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Decode(#[from] DecodeError),
}
