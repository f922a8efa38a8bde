//! Conic-bundle models: Hirzebruch surfaces, exceptional conic bundles and
//! `(Z/2)²`-conic bundles, with their involutions on the Picard lattice, the
//! two plane constructions and the numerical obstruction solvers.
//!
//! Conic bundles with `k` singular fibers live on the blowup lattice with
//! basis `(L, E_0, E_1..E_k)` (see [`FiberedMarking`]): `E_0` is the class
//! of the point the pencil of lines is centred at, `f = L − E_0` is the
//! fiber, and `E_j` is one component of the `j`-th singular fiber, the other
//! being `f − E_j`.
//!
//! [`FiberedMarking`]: crate::picard::FiberedMarking

mod constructions;
mod exceptional;
mod jonquieres;
mod solvers;
mod z22;

pub use constructions::{build_from_four_lines, build_from_three_lines_conic};
pub use exceptional::{exceptional_from_delta, AutDescriptor, ExceptionalBundleModel};
pub use jonquieres::{jonquieres_involution, jonquieres_involution_matrix};
pub use solvers::{
    minimality_obstruction_solver, obstruction_table, second_fibration_solver, Obstruction,
    SecondFibration,
};
pub use z22::{
    del_pezzo_verdict_for_profile, example_triplet, fixed_curve_class, halphen_check,
    is_del_pezzo_bundle, realisable_profiles, z22_from_triplet, Certificate, CertificateKind,
    FixedCurve, HalphenReport, Z22BundleModel,
};

use serde_json::{json, Value};
use thiserror::Error;

use crate::geometry::GeometryError;
use crate::json::DecodeError;
use crate::picard::LatticeError;
use crate::square_class::SquareClassError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BundleError {
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),
    #[error("intersection points are not defined over Q")]
    NonRationalIntersection,
    #[error("the centre q lies on the configuration")]
    QOnConfiguration,
    #[error("alignment violation: {0}")]
    AlignmentViolation(String),
    #[error("Δ must have an even number of points, got {0}")]
    OddDelta(usize),
    #[error("Δ needs at least 2 points, got {0}")]
    TooFew(usize),
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Geometry(GeometryError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    SquareClass(#[from] SquareClassError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
}

impl From<GeometryError> for BundleError {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::NonRationalIntersection => BundleError::NonRationalIntersection,
            GeometryError::Decode(d) => BundleError::Decode(d),
            other => BundleError::Geometry(other),
        }
    }
}

/// Whether a `(Z/2)²`-conic bundle is a del Pezzo surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DelPezzoVerdict {
    Yes,
    No(String),
    Indeterminate(String),
}

impl DelPezzoVerdict {
    pub fn to_json(&self) -> Value {
        match self {
            DelPezzoVerdict::Yes => json!({ "kind": "yes" }),
            DelPezzoVerdict::No(r) => json!({ "kind": "no", "reason": r }),
            DelPezzoVerdict::Indeterminate(r) => json!({ "kind": "indeterminate", "reason": r }),
        }
    }
}

/// The Hirzebruch surface `F_n`. Its automorphism group is kept as a
/// symbolic tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HirzebruchModel {
    pub n: u64,
}

impl HirzebruchModel {
    pub fn new(n: u64) -> Self {
        HirzebruchModel { n }
    }

    pub fn structure_tag(&self) -> String {
        match self.n {
            0 => "(PGL(2,C) × PGL(2,C)) ⋊ Z/2".to_string(),
            n => format!("C^{} ⋊ GL(2,C)/μ_{}", n + 1, n),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "kind": "hirzebruch", "n": self.n, "structure": self.structure_tag() })
    }
}
