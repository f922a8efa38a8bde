use std::cmp::Ordering;
use std::fmt;

use serde_json::Value;

use super::LatticeError;
use crate::json::{self, DecodeError};

/// Largest supported number of blown-up points (lattice rank 14).
pub const MAX_R: usize = 13;

/// An integer vector in the basis `(L, E_1..E_r)`.
///
/// Classes order by the coefficient of `L` ascending, then by the remaining
/// coefficients in descending lexicographic order, so that `E_1 < E_2 < …`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DivisorClass(Vec<i64>);

impl DivisorClass {
    pub fn new(coeffs: Vec<i64>) -> Self {
        DivisorClass(coeffs)
    }

    pub fn zero(len: usize) -> Self {
        DivisorClass(vec![0; len])
    }

    /// The `i`-th basis vector.
    pub fn basis(len: usize, i: usize) -> Self {
        let mut v = vec![0; len];
        v[i] = 1;
        DivisorClass(v)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &DivisorClass) -> DivisorClass {
        DivisorClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &DivisorClass) -> DivisorClass {
        DivisorClass(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> DivisorClass {
        DivisorClass(self.0.iter().map(|a| k * a).collect())
    }

    pub fn neg(&self) -> DivisorClass {
        self.scale(-1)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.0.iter().map(|&x| Value::from(x)).collect())
    }

    pub fn from_json(v: &Value) -> Result<Self, DecodeError> {
        json::parse_i64_array(v).map(DivisorClass)
    }
}

impl std::ops::Index<usize> for DivisorClass {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl Ord for DivisorClass {
    fn cmp(&self, other: &Self) -> Ordering {
        let head = |v: &DivisorClass| v.0.first().copied();
        head(self)
            .cmp(&head(other))
            .then_with(|| other.0.get(1..).cmp(&self.0.get(1..)))
    }
}

impl PartialOrd for DivisorClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Picard lattice of the blowup of `r` points of the plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BlowupLattice {
    r: usize,
}

impl BlowupLattice {
    pub fn new(r: usize) -> Result<Self, LatticeError> {
        if r > MAX_R {
            return Err(LatticeError::UnsupportedRank(r));
        }
        Ok(BlowupLattice { r })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Rank of the lattice, `r + 1`.
    pub fn rank(&self) -> usize {
        self.r + 1
    }

    /// `K² = 9 − r`.
    pub fn degree(&self) -> i64 {
        9 - self.r as i64
    }

    /// Diagonal of the Gram matrix.
    pub fn gram_diagonal(&self) -> Vec<i64> {
        (0..self.rank())
            .map(|i| if i == 0 { 1 } else { -1 })
            .collect()
    }

    pub fn line(&self) -> DivisorClass {
        DivisorClass::basis(self.rank(), 0)
    }

    /// `E_i` for `1 ≤ i ≤ r`.
    pub fn exceptional(&self, i: usize) -> DivisorClass {
        assert!(1 <= i && i <= self.r, "E_{i} out of range");
        DivisorClass::basis(self.rank(), i)
    }

    /// `K = −3L + ΣE_i`.
    pub fn canonical(&self) -> DivisorClass {
        let mut v = vec![1; self.rank()];
        v[0] = -3;
        DivisorClass(v)
    }

    pub fn class(&self, coeffs: Vec<i64>) -> Result<DivisorClass, LatticeError> {
        self.check(&coeffs)?;
        Ok(DivisorClass(coeffs))
    }

    fn check(&self, v: &[i64]) -> Result<(), LatticeError> {
        if v.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rank(),
                found: v.len(),
            });
        }
        Ok(())
    }

    pub fn intersect(&self, a: &DivisorClass, b: &DivisorClass) -> Result<i64, LatticeError> {
        self.check(&a.0)?;
        self.check(&b.0)?;
        Ok(self.dot(a, b))
    }

    /// Intersection without dimension checks; callers guarantee lengths.
    pub(crate) fn dot(&self, a: &DivisorClass, b: &DivisorClass) -> i64 {
        let mut s = a.0[0] * b.0[0];
        for i in 1..a.0.len() {
            s -= a.0[i] * b.0[i];
        }
        s
    }

    pub fn square(&self, a: &DivisorClass) -> Result<i64, LatticeError> {
        self.intersect(a, a)
    }

    /// Arithmetic genus `1 + (D² + D·K)/2`.
    ///
    /// `K` is a characteristic vector of the form, so `D² + D·K` is always
    /// even here; [`LatticeError::NonIntegralGenus`] guards the formula
    /// rather than a reachable case.
    pub fn adjunction_genus(&self, d: &DivisorClass) -> Result<i64, LatticeError> {
        let s = self.square(d)? + self.intersect(d, &self.canonical())?;
        if s % 2 != 0 {
            return Err(LatticeError::NonIntegralGenus(d.to_string()));
        }
        Ok(1 + s / 2)
    }
}

/// Conic-bundle bookkeeping on a blowup lattice with basis
/// `(L, E_0, E_1..E_k)`, i.e. the lattice with `r = k + 1` where the first
/// exceptional class plays the role of the section `E_0`.
///
/// The fiber class is `f = L − E_0`, and `E_1..E_k` are one component of
/// each singular fiber.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiberedMarking {
    lattice: BlowupLattice,
}

impl FiberedMarking {
    /// Marking with `k` singular fibers.
    pub fn new(k: usize) -> Result<Self, LatticeError> {
        Ok(FiberedMarking {
            lattice: BlowupLattice::new(k + 1)?,
        })
    }

    pub fn lattice(&self) -> &BlowupLattice {
        &self.lattice
    }

    pub fn k(&self) -> usize {
        self.lattice.r - 1
    }

    pub fn fiber(&self) -> DivisorClass {
        let mut v = vec![0; self.lattice.rank()];
        v[0] = 1;
        v[1] = -1;
        DivisorClass(v)
    }

    pub fn section(&self) -> DivisorClass {
        DivisorClass::basis(self.lattice.rank(), 1)
    }

    /// `E_j` for `1 ≤ j ≤ k`, one component of the `j`-th singular fiber.
    pub fn component(&self, j: usize) -> DivisorClass {
        assert!(1 <= j && j <= self.k(), "fiber component {j} out of range");
        DivisorClass::basis(self.lattice.rank(), j + 1)
    }

    /// Checks `f² = 0`, `f·K = −2`, and `E_j·f = 0`, `E_j² = −1`,
    /// `E_j·K = −1` for every fiber component.
    pub fn check(&self) -> Result<(), LatticeError> {
        let lat = &self.lattice;
        let f = self.fiber();
        let k = lat.canonical();
        let bad = |what: &str| Err(LatticeError::InvariantViolation(what.to_string()));
        if lat.dot(&f, &f) != 0 || lat.dot(&f, &k) != -2 {
            return bad("fiber class");
        }
        for j in 1..=self.k() {
            let e = self.component(j);
            if lat.dot(&e, &f) != 0 || lat.dot(&e, &e) != -1 || lat.dot(&e, &k) != -1 {
                return bad("fiber component");
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intersection_examples() {
        let lat = BlowupLattice::new(6).unwrap();
        let l = lat.line();
        assert_eq!(lat.intersect(&l, &l).unwrap(), 1);
        let (e1, e2) = (lat.exceptional(1), lat.exceptional(2));
        assert_eq!(lat.intersect(&e1, &e2).unwrap(), 0);
        assert_eq!(lat.intersect(&e1, &e1).unwrap(), -1);
        let k = lat.canonical();
        assert_eq!(lat.intersect(&k, &k).unwrap(), 3);
        assert_eq!(
            lat.intersect(&l, &DivisorClass::new(vec![1, 0])),
            Err(LatticeError::DimensionMismatch {
                expected: 7,
                found: 2
            })
        );
    }

    #[test]
    fn canonical_degree() {
        for r in 0..=MAX_R {
            let lat = BlowupLattice::new(r).unwrap();
            let k = lat.canonical();
            assert_eq!(lat.dot(&k, &k), lat.degree());
        }
        assert_eq!(
            BlowupLattice::new(14),
            Err(LatticeError::UnsupportedRank(14))
        );
    }

    #[test]
    fn genus_examples() {
        let p2 = BlowupLattice::new(0).unwrap();
        assert_eq!(p2.adjunction_genus(&p2.line()).unwrap(), 0);
        let dp1 = BlowupLattice::new(8).unwrap();
        assert_eq!(dp1.adjunction_genus(&dp1.canonical().neg()).unwrap(), 1);
        assert_eq!(dp1.adjunction_genus(&dp1.exceptional(1)).unwrap(), 0);
        // A plane cubic has genus 1, a conic genus 0.
        assert_eq!(p2.adjunction_genus(&p2.line().scale(3)).unwrap(), 1);
        assert_eq!(p2.adjunction_genus(&p2.line().scale(2)).unwrap(), 0);
    }

    proptest::proptest! {
        #[test]
        fn genus_is_always_integral(v in proptest::collection::vec(-9i64..10, 9)) {
            let lat = BlowupLattice::new(8).unwrap();
            proptest::prop_assert!(lat.adjunction_genus(&DivisorClass::new(v)).is_ok());
        }
    }

    #[test]
    fn natural_order() {
        let lat = BlowupLattice::new(3).unwrap();
        let mut v = vec![
            DivisorClass::new(vec![1, -1, -1, 0]),
            lat.exceptional(3),
            lat.exceptional(1),
            lat.exceptional(2),
        ];
        v.sort();
        assert_eq!(
            v,
            vec![
                lat.exceptional(1),
                lat.exceptional(2),
                lat.exceptional(3),
                DivisorClass::new(vec![1, -1, -1, 0]),
            ]
        );
    }

    #[test]
    fn marking_invariants() {
        for k in 0..=10 {
            let m = FiberedMarking::new(k).unwrap();
            m.check().unwrap();
            let lat = m.lattice();
            assert_eq!(lat.dot(&m.fiber(), &m.section()), 1);
        }
    }
}
