//! Exact projective geometry over Q.
//!
//! Every object is stored as a primitive integer vector (gcd 1) whose first
//! nonzero entry is positive, so equality of objects is equality of
//! representatives.

mod line;
mod plane;

pub use line::{mobius_from_triples, Mobius, P1Point};
pub use plane::{
    are_collinear, intersect_line_conic, is_general_position, project_from, Conic, Line, P2Point,
};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::json::DecodeError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("all coordinates are zero")]
    ZeroVector,
    #[error("Möbius matrix is singular")]
    SingularMobius,
    #[error("triple contains a repeated point")]
    DegenerateTriple,
    #[error("the two points coincide")]
    SamePoint,
    #[error("the two lines coincide")]
    SameLine,
    #[error("intersection points are not defined over Q")]
    NonRationalIntersection,
    #[error("the line is a component of the conic")]
    LineInConic,
    #[error("at most 8 points are supported, got {0}")]
    TooManyPoints(usize),
    #[error("point {0} occurs twice")]
    DuplicatePoint(String),
    #[error(transparent)]
    Decode(#[from] DecodeError),
}

/// Divides by the gcd and makes the first nonzero entry positive.
pub(crate) fn normalize(v: &mut [BigInt]) -> Result<(), GeometryError> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return Err(GeometryError::ZeroVector);
    }
    let negate = v
        .iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x.is_negative());
    for x in v.iter_mut() {
        *x = &*x / &g;
        if negate {
            *x = -&*x;
        }
    }
    Ok(())
}

pub(crate) fn cross(a: &[BigInt; 3], b: &[BigInt; 3]) -> [BigInt; 3] {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

pub(crate) fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        let mut v = vec![BigInt::from(0), BigInt::from(-4), BigInt::from(6)];
        normalize(&mut v).unwrap();
        assert_eq!(v, vec![BigInt::from(0), BigInt::from(2), BigInt::from(-3)]);
        let mut z = vec![BigInt::from(0); 3];
        assert_eq!(normalize(&mut z), Err(GeometryError::ZeroVector));
    }
}
