//! The decision tree sending a surface with a group action to one of the
//! eleven families of maximal groups of birational maps of the plane, or
//! to a chain of contractions, blowups and reinterpretations
//! ending in one of them.
//!
//! Inputs are [`GSurfaceDescriptor`]s read from JSON. Fixed-point data of
//! del Pezzo surfaces of degree 2 and 3 enters as a report and a table tag;
//! it is never recomputed from equations.

mod decide;
mod descriptor;
mod links;
mod tables;
mod verdict;

pub use decide::{classify, conjugacy_invariant, MAX_CHAIN};
pub use descriptor::{
    CubicFamily, DelPezzoDescriptor, FixedPointReport, GSurfaceDescriptor, QuarticRow,
};
pub use links::{link_feasibility, LinkReport, LinkStatus, LinkType};
pub use tables::{cubic_j_invariant, QUARTIC_TABLE};
pub use verdict::{Family, Invariant, Stage, Step, StepKind, Verdict};

use thiserror::Error;

use crate::bundles::BundleError;
use crate::geometry::GeometryError;
use crate::json::DecodeError;
use crate::picard::LatticeError;
use crate::square_class::SquareClassError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("no conjugacy invariant: the verdict is not a maximal family")]
    NotApplicable,
    #[error("not a G-Mori fibration: {0}")]
    NotAMoriFibration(String),
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    SquareClass(#[from] SquareClassError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
}

impl ClassifyError {
    /// Whether the error reports a broken internal invariant rather than bad
    /// input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            ClassifyError::InvariantViolation(_)
                | ClassifyError::Lattice(LatticeError::InvariantViolation(_))
                | ClassifyError::Bundle(BundleError::InvariantViolation(_))
                | ClassifyError::Bundle(BundleError::Lattice(LatticeError::InvariantViolation(_)))
        )
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> ClassifyError {
    ClassifyError::InvalidDescriptor(msg.into())
}
