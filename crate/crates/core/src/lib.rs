//! Exact computations for classifying maximal groups of birational maps of
//! the plane that act on rational surfaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: points, lines and conics of the projective plane and
//!   Möbius maps of the projective line, all over exact rationals.
//! * [`picard`]: Picard lattices of blowups of the plane, integral isometry
//!   groups acting on them, (−1)-classes, invariant sublattices and the
//!   lattice-level minimality criterion.
//! * [`square_class`]: square classes of `C(x)*` as even point sets on the
//!   line, ramification triplets, Möbius stabilizers and canonical forms.
//! * [`bundles`]: Hirzebruch surfaces, exceptional conic bundles and
//!   `(Z/2)^2`-conic bundles, their involution matrices, the plane
//!   constructions and the Diophantine obstruction solvers.
//! * [`classifier`]: the decision tree mapping a surface-with-group
//!   descriptor to one of the eleven maximal families.
//!
//! Heavy enumerations take an [`Exec`] strategy. With the `parallel`
//! feature (on by default) [`Exec::Parallel`] runs on rayon; without it
//! every strategy runs sequentially. Results never depend on the strategy.

#![allow(clippy::needless_range_loop)]

pub mod bundles;
pub mod classifier;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod json;
pub mod linalg;
pub mod picard;
pub mod square_class;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Exec;
