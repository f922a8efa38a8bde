//! Exceptional conic bundles: `2n` singular fibers over `Δ ⊂ P¹` and two
//! disjoint sections of self-intersection `−n`.

use serde_json::{json, Value};

use super::z22::build_sigma;
use super::BundleError;
use crate::geometry::{Mobius, P1Point};
use crate::linalg;
use crate::picard::{DivisorClass, FiberedMarking, Isometry, LatticeAction};
use crate::square_class::{stabilizer, SquareClassError};

/// The exact sequence `1 → C* ⋊ Z/2 → Aut(S, π) → H_Δ → 1`, with `H_Δ` the
/// Möbius stabilizer of `Δ` (infinite when `|Δ| = 2`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutDescriptor {
    pub kernel: &'static str,
    /// Elements of `H_Δ` over Q, `None` when the group is infinite.
    pub quotient: Option<Vec<Mobius>>,
}

impl AutDescriptor {
    pub fn to_json(&self) -> Value {
        let order = match &self.quotient {
            Some(q) => json!(q.len()),
            None => json!("infinite"),
        };
        json!({ "kernel": self.kernel, "quotient_order": order })
    }
}

#[derive(Clone, Debug)]
pub struct ExceptionalBundleModel {
    delta: Vec<P1Point>,
    marking: FiberedMarking,
    swap: Isometry,
    sections: [DivisorClass; 2],
    aut: AutDescriptor,
}

impl ExceptionalBundleModel {
    /// `Δ` in point order; fiber `j` lies over `delta()[j - 1]`.
    pub fn delta(&self) -> &[P1Point] {
        &self.delta
    }

    pub fn n(&self) -> usize {
        self.delta.len() / 2
    }

    pub fn marking(&self) -> &FiberedMarking {
        &self.marking
    }

    /// The involution exchanging the two sections and the components of
    /// every singular fiber.
    pub fn swap(&self) -> &Isometry {
        &self.swap
    }

    /// `s_1 = E_0 − Σ_{j<n} E_j` and `s_2 = L − Σ_{j≥n} E_j`.
    pub fn sections(&self) -> &[DivisorClass; 2] {
        &self.sections
    }

    pub fn aut_descriptor(&self) -> &AutDescriptor {
        &self.aut
    }

    pub fn action(&self) -> LatticeAction {
        LatticeAction::from_isometries(*self.marking.lattice(), vec![self.swap.clone()])
    }

    /// Special cases where `Aut(S)` is larger than `Aut(S, π)`.
    pub fn flag(&self) -> Option<&'static str> {
        (self.n() == 1).then_some("del Pezzo degree 6; Aut(S) ≠ Aut(S,π)")
    }

    /// Multiplicities of the eigenvalues `+1` and `−1` of the swap, read on
    /// the Q-basis `(K, f, f − 2E_1, …, f − 2E_{2n})`.
    pub fn eigen_multiplicities(&self) -> Result<(usize, usize), BundleError> {
        let lat = self.marking.lattice();
        let f = self.marking.fiber();
        let plus = vec![lat.canonical(), f.clone()];
        let minus: Vec<DivisorClass> = (1..=self.marking.k())
            .map(|j| f.sub(&self.marking.component(j).scale(2)))
            .collect();
        let all: Vec<Vec<i64>> = plus
            .iter()
            .chain(&minus)
            .map(|c| c.coeffs().to_vec())
            .collect();
        if linalg::rank(&linalg::from_i64(&all)) != lat.rank() {
            return Err(BundleError::InvariantViolation(
                "eigenvectors do not form a basis".to_string(),
            ));
        }
        for v in &plus {
            if self.swap.apply(v)? != *v {
                return Err(BundleError::InvariantViolation(format!("swap moves {v}")));
            }
        }
        for v in &minus {
            if self.swap.apply(v)? != v.neg() {
                return Err(BundleError::InvariantViolation(format!(
                    "swap does not negate {v}"
                )));
            }
        }
        Ok((plus.len(), minus.len()))
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "delta": self.delta.iter().map(P1Point::to_json).collect::<Vec<_>>(),
            "n": self.n(),
            "r": self.marking.lattice().r(),
            "generators": [self.swap.matrix().to_json()],
            "sections": self.sections.iter().map(DivisorClass::to_json).collect::<Vec<_>>(),
            "aut": self.aut.to_json(),
        });
        if let Some(flag) = self.flag() {
            v["flag"] = json!(flag);
        }
        v
    }
}

pub fn exceptional_from_delta(delta: &[P1Point]) -> Result<ExceptionalBundleModel, BundleError> {
    let mut pts = delta.to_vec();
    pts.sort();
    if let Some(w) = pts.windows(2).find(|w| w[0] == w[1]) {
        return Err(SquareClassError::DuplicatePoint(w[0].to_string()).into());
    }
    if pts.len() < 2 {
        return Err(BundleError::TooFew(pts.len()));
    }
    if !pts.len().is_multiple_of(2) {
        return Err(BundleError::OddDelta(pts.len()));
    }
    let two_n = pts.len();
    let n = two_n / 2;
    let marking = FiberedMarking::new(two_n)?;
    let all: Vec<usize> = (1..=two_n).collect();
    let swap = build_sigma(&marking, &all)?;
    let lat = marking.lattice();
    let mut s1 = marking.section();
    for j in 1..n {
        s1 = s1.sub(&marking.component(j));
    }
    let mut s2 = lat.line();
    for j in n..=two_n {
        s2 = s2.sub(&marking.component(j));
    }
    let ni = n as i64;
    if lat.square(&s1)? != -ni || lat.square(&s2)? != -ni || lat.intersect(&s1, &s2)? != 0 {
        return Err(BundleError::InvariantViolation(
            "sections are not disjoint (−n)-classes".to_string(),
        ));
    }
    if swap.apply(&s1)? != s2 {
        return Err(BundleError::InvariantViolation(
            "swap does not exchange the sections".to_string(),
        ));
    }
    let quotient = if two_n >= 3 {
        Some(stabilizer(&pts)?)
    } else {
        None
    };
    Ok(ExceptionalBundleModel {
        delta: pts,
        marking,
        swap,
        sections: [s1, s2],
        aut: AutDescriptor {
            kernel: "C* ⋊ Z/2",
            quotient,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(xs: &[i64]) -> Vec<P1Point> {
        xs.iter().map(|&x| P1Point::finite(x)).collect()
    }

    #[test]
    fn small_delta_is_flagged() {
        let m = exceptional_from_delta(&pts(&[0, 1])).unwrap();
        assert!(m.flag().unwrap().contains("del Pezzo degree 6"));
        assert_eq!(m.aut_descriptor().quotient, None);
    }

    #[test]
    fn invariant_rank_two() {
        let d = vec![
            P1Point::finite(0),
            P1Point::finite(1),
            P1Point::infinity(),
            P1Point::finite(2),
        ];
        let m = exceptional_from_delta(&d).unwrap();
        assert_eq!(m.action().invariant_sublattice().unwrap().rank, 2);
        assert_eq!(m.eigen_multiplicities().unwrap(), (2, 4));
        assert!(m.swap().compose(m.swap()).unwrap().matrix().is_identity());
    }

    #[test]
    fn eigenvalues_for_all_n() {
        for n in 1..=5 {
            let d: Vec<i64> = (0..2 * n as i64).collect();
            let m = exceptional_from_delta(&pts(&d)).unwrap();
            assert_eq!(m.eigen_multiplicities().unwrap(), (2, 2 * n));
        }
    }

    #[test]
    fn errors() {
        assert_eq!(
            exceptional_from_delta(&pts(&[0, 1, 2])).unwrap_err(),
            BundleError::OddDelta(3)
        );
        assert_eq!(
            exceptional_from_delta(&pts(&[0])).unwrap_err(),
            BundleError::TooFew(1)
        );
        assert!(exceptional_from_delta(&pts(&[0, 0])).is_err());
    }
}
