use thiserror::Error;

use crate::bundles::BundleError;
use crate::classifier::ClassifyError;
use crate::geometry::GeometryError;
use crate::json::DecodeError;
use crate::picard::LatticeError;
use crate::square_class::SquareClassError;

/// Any error raised by this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    SquareClass(#[from] SquareClassError),
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Whether the error reports a broken internal invariant rather than bad
    /// input.
    pub fn is_internal(&self) -> bool {
        match self {
            Error::Lattice(LatticeError::InvariantViolation(_)) => true,
            Error::Bundle(BundleError::InvariantViolation(_))
            | Error::Bundle(BundleError::Lattice(LatticeError::InvariantViolation(_))) => true,
            Error::Classify(e) => e.is_internal(),
            _ => false,
        }
    }
}
