//! `(Z/2)²`-conic bundles built from ramification triplets.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use super::{BundleError, DelPezzoVerdict};
use crate::geometry::{P1Point, P2Point};
use crate::picard::{
    validate_action, BlowupLattice, DivisorClass, FiberedMarking, IntMatrix, Isometry,
    LatticeAction,
};
use crate::square_class::{validate_triplet, RamificationTriplet};

/// How a realisation certificate was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CertificateKind {
    /// Four lines in general position; the sections are pairwise disjoint.
    FourLines,
    /// Three lines and a conic; sections ordered `(L_a, L_b, L_c, C)`, where
    /// `L_a·L_b = L_c·C = 1` and all other pairs are disjoint.
    ThreeLinesConic,
}

impl CertificateKind {
    pub fn name(self) -> &'static str {
        match self {
            CertificateKind::FourLines => "four_lines",
            CertificateKind::ThreeLinesConic => "three_lines_conic",
        }
    }

    /// Expected intersection numbers between distinct sections.
    fn pairing(self, i: usize, j: usize) -> i64 {
        match self {
            CertificateKind::FourLines => 0,
            CertificateKind::ThreeLinesConic => {
                let pair = (i.min(j), i.max(j));
                i64::from(pair == (0, 1) || pair == (2, 3))
            }
        }
    }
}

/// Four (−2)-sections realising a `(Z/2)²`-conic bundle in the plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub sections: [DivisorClass; 4],
    /// Centre of the pencil.
    pub q: P2Point,
    /// Blown-up points, in fiber order.
    pub points: Vec<P2Point>,
}

impl Certificate {
    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind.name(),
            "sections": self.sections.iter().map(DivisorClass::to_json).collect::<Vec<_>>(),
            "q": self.q.to_json(),
            "points": self.points.iter().map(P2Point::to_json).collect::<Vec<_>>(),
        })
    }
}

/// A `(Z/2)²`-conic bundle: its triplet, fibers, and the three involutions
/// of `Aut(S/P¹)` acting on `Pic(S)`.
#[derive(Clone, Debug)]
pub struct Z22BundleModel {
    triplet: RamificationTriplet,
    fibers: Vec<P1Point>,
    marking: FiberedMarking,
    sigma: [Isometry; 3],
    certificate: Option<Certificate>,
}

impl Z22BundleModel {
    pub fn triplet(&self) -> &RamificationTriplet {
        &self.triplet
    }

    /// Base points of the singular fibers; fiber `j` (1-based) lies over
    /// `fibers()[j - 1]`.
    pub fn fibers(&self) -> &[P1Point] {
        &self.fibers
    }

    pub fn k(&self) -> usize {
        self.fibers.len()
    }

    pub fn marking(&self) -> &FiberedMarking {
        &self.marking
    }

    pub fn lattice(&self) -> &BlowupLattice {
        self.marking.lattice()
    }

    /// `σ_i` for `i ∈ {1, 2, 3}`.
    pub fn sigma(&self, i: usize) -> &Isometry {
        &self.sigma[i - 1]
    }

    /// The two involutions exchanging the components of fiber `j`.
    pub fn swapping_involutions(&self, j: usize) -> Vec<usize> {
        let p = &self.fibers[j - 1];
        (1..=3)
            .filter(|&i| self.triplet.set(i).contains(p))
            .collect()
    }

    /// `Aut(S/P¹) = ⟨σ_1, σ_2⟩`.
    pub fn action(&self) -> LatticeAction {
        LatticeAction::from_isometries(
            *self.lattice(),
            vec![self.sigma[0].clone(), self.sigma[1].clone()],
        )
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        self.certificate.as_ref()
    }

    pub(crate) fn with_certificate(mut self, c: Certificate) -> Result<Self, BundleError> {
        self.certificate = Some(c);
        self.check_certificate()?;
        Ok(self)
    }

    /// Checks the attached certificate: four sections of self-intersection
    /// −2 with the expected intersection pattern, permuted transitively by
    /// `⟨σ_1, σ_2⟩`.
    pub fn check_certificate(&self) -> Result<(), BundleError> {
        let Some(c) = &self.certificate else {
            return Ok(());
        };
        let lat = self.lattice();
        let f = self.marking.fiber();
        let fail = |m: String| Err(BundleError::InvariantViolation(m));
        for (i, s) in c.sections.iter().enumerate() {
            if lat.intersect(s, s)? != -2 {
                return fail(format!("section {s} is not a (−2)-class"));
            }
            if lat.intersect(s, &f)? != 1 {
                return fail(format!("class {s} is not a section"));
            }
            for (j, t) in c.sections.iter().enumerate().skip(i + 1) {
                if lat.intersect(s, t)? != c.kind.pairing(i, j) {
                    return fail(format!("sections {s} and {t} meet unexpectedly"));
                }
            }
        }
        let set: BTreeSet<DivisorClass> = c.sections.iter().cloned().collect();
        let orbits = self.action().orbits(&c.sections)?;
        if set.len() != 4 || orbits.len() != 1 {
            return fail("sections are not permuted transitively".to_string());
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "triplet": self.triplet.to_json(),
            "profile": self.triplet.profile(),
            "k": self.k(),
            "r": self.lattice().r(),
            "fibers": self.fibers.iter().map(P1Point::to_json).collect::<Vec<_>>(),
            "generators": self.sigma.iter().map(|s| s.matrix().to_json()).collect::<Vec<_>>(),
        });
        if let Some(c) = &self.certificate {
            v["certificate"] = c.to_json();
        }
        v
    }
}

/// Matrix of `σ` exchanging the components of the fibers in `swapped`
/// (1-based fiber indices) on the lattice with `k` fibers.
///
/// Swapped `E_j ↦ f − E_j`, other `E_j` fixed, and
/// `E_0 ↦ a·L − (a−1)·E_0 − Σ E_j`, `L ↦ (a+1)·L − a·E_0 − Σ E_j` where the
/// sums run over the `2a` swapped fibers.
pub(crate) fn fiber_swap_matrix(k: usize, swapped: &[usize]) -> IntMatrix {
    let n = k + 2;
    let a = swapped.len() as i64 / 2;
    let mut cols: Vec<DivisorClass> = (0..n).map(|i| DivisorClass::basis(n, i)).collect();
    let mut sum = vec![0i64; n];
    for &j in swapped {
        sum[j + 1] = 1;
    }
    let mut l = sum.iter().map(|x| -x).collect::<Vec<_>>();
    l[0] = a + 1;
    l[1] = -a;
    cols[0] = DivisorClass::new(l);
    let mut e0 = sum.iter().map(|x| -x).collect::<Vec<_>>();
    e0[0] = a;
    e0[1] = -(a - 1);
    cols[1] = DivisorClass::new(e0);
    for &j in swapped {
        let mut v = vec![0; n];
        v[0] = 1;
        v[1] = -1;
        v[j + 1] = -1;
        cols[j + 1] = DivisorClass::new(v);
    }
    IntMatrix::from_columns(&cols).expect("square")
}

/// Recomputes `σ(E_0)` from `E_0 = (−3f + Σ E_j − K)/2`, which holds in the
/// basis `(L, E_0, E_1..E_k)`, using that `σ` fixes `K` and `f`.
fn section_image_from_fibers(marking: &FiberedMarking, m: &IntMatrix) -> Option<DivisorClass> {
    let lat = marking.lattice();
    let k = marking.k();
    let mut acc = marking.fiber().scale(-3).sub(&lat.canonical());
    for j in 1..=k {
        acc = acc.add(&m.column(j + 1));
    }
    if acc.coeffs().iter().any(|x| x % 2 != 0) {
        return None;
    }
    Some(DivisorClass::new(
        acc.coeffs().iter().map(|x| x / 2).collect(),
    ))
}

pub(crate) fn build_sigma(
    marking: &FiberedMarking,
    swapped: &[usize],
) -> Result<Isometry, BundleError> {
    let m = fiber_swap_matrix(marking.k(), swapped);
    let derived = section_image_from_fibers(marking, &m);
    if derived.as_ref() != Some(&m.column(1)) {
        return Err(BundleError::InvariantViolation(
            "section image disagrees with the fiber-derived value".to_string(),
        ));
    }
    let sigma = validate_action(marking.lattice(), m)?;
    let f = marking.fiber();
    if sigma.apply(&f)? != f {
        return Err(BundleError::InvariantViolation(
            "σ moves the fiber class".to_string(),
        ));
    }
    if !sigma.compose(&sigma)?.matrix().is_identity() {
        return Err(BundleError::InvariantViolation(
            "σ is not an involution".to_string(),
        ));
    }
    Ok(sigma)
}

pub fn z22_from_triplet(t: &RamificationTriplet) -> Result<Z22BundleModel, BundleError> {
    let fibers = t.support();
    let marking = FiberedMarking::new(fibers.len())?;
    let mut sigma = Vec::with_capacity(3);
    for i in 1..=3 {
        let swapped: Vec<usize> = fibers
            .iter()
            .enumerate()
            .filter(|(_, p)| t.set(i).contains(*p))
            .map(|(j, _)| j + 1)
            .collect();
        sigma.push(build_sigma(&marking, &swapped)?);
    }
    let sigma: [Isometry; 3] = sigma.try_into().expect("three involutions");
    if sigma[0].compose(&sigma[1])? != sigma[2] {
        return Err(BundleError::InvariantViolation("σ_1σ_2 ≠ σ_3".to_string()));
    }
    Ok(Z22BundleModel {
        triplet: t.clone(),
        fibers,
        marking,
        sigma,
        certificate: None,
    })
}

/// Fixed curve of `σ_i`: its class, self-intersection and genus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedCurve {
    pub class: DivisorClass,
    pub self_intersection: i64,
    pub genus: i64,
}

impl FixedCurve {
    pub fn to_json(&self) -> Value {
        json!({
            "class": self.class.to_json(),
            "self_intersection": self.self_intersection,
            "genus": self.genus,
        })
    }
}

/// `C_i = −K + (a_i − 2)f`, with `C_i² = 4a_i − k` and genus `a_i − 1`.
pub fn fixed_curve_class(model: &Z22BundleModel, i: usize) -> Result<FixedCurve, BundleError> {
    assert!((1..=3).contains(&i), "involution index {i} out of range");
    let lat = model.lattice();
    let a = model.triplet.a()[i - 1] as i64;
    let class = lat
        .canonical()
        .neg()
        .add(&model.marking.fiber().scale(a - 2));
    let self_intersection = lat.square(&class)?;
    let genus = lat.adjunction_genus(&class)?;
    if self_intersection != 4 * a - model.k() as i64 || genus != a - 1 {
        return Err(BundleError::InvariantViolation(format!(
            "fixed curve of σ_{i} has C² = {self_intersection}, g = {genus}"
        )));
    }
    Ok(FixedCurve {
        class,
        self_intersection,
        genus,
    })
}

/// Del Pezzo decision from the sorted profile `(a_1, a_2, a_3)` alone.
///
/// `certified` records that four (−2)-sections were exhibited by one of the
/// plane constructions.
pub fn del_pezzo_verdict_for_profile(profile: [usize; 3], certified: bool) -> DelPezzoVerdict {
    let k = profile.iter().sum::<usize>() as i64;
    let min = *profile.iter().min().expect("three entries");
    if k >= 8 {
        DelPezzoVerdict::No(format!("K² = {} ≤ 0", 8 - k))
    } else if k <= 5 {
        DelPezzoVerdict::Yes
    } else if min == 1 {
        DelPezzoVerdict::No(format!("rational fixed curve, self-int {}", 4 - k))
    } else if certified {
        DelPezzoVerdict::No("four (−2)-sections".to_string())
    } else {
        DelPezzoVerdict::Indeterminate(
            "requires geometric realization; see construction search".to_string(),
        )
    }
}

pub fn is_del_pezzo_bundle(model: &Z22BundleModel) -> DelPezzoVerdict {
    del_pezzo_verdict_for_profile(model.triplet.profile(), model.certificate.is_some())
}

/// Sorted profiles `(a_1, a_2, a_3)` with sum `k` that some triplet
/// realises, i.e. those satisfying `a_3 ≤ a_1 + a_2`.
pub fn realisable_profiles(k: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a1 in 1..=k {
        for a2 in a1..=k {
            if a1 + a2 >= k {
                break;
            }
            let a3 = k - a1 - a2;
            if a3 >= a2 && a3 <= a1 + a2 {
                out.push([a1, a2, a3]);
            }
        }
    }
    out
}

/// A triplet with profile `a` on the points `0, 1, …, k−1`, or `None` when
/// the profile is not realisable.
pub fn example_triplet(a: [usize; 3]) -> Option<RamificationTriplet> {
    let [a1, a2, a3] = a.map(|x| x as i64);
    let (x, y, z) = (a1 + a2 - a3, a1 + a3 - a2, a2 + a3 - a1);
    if a.contains(&0) || x < 0 || y < 0 || z < 0 {
        return None;
    }
    let pts = |from: i64, n: i64| (from..from + n).map(P1Point::finite).collect::<Vec<_>>();
    let (px, py, pz) = (pts(0, x), pts(x, y), pts(x + y, z));
    let join = |u: &[P1Point], v: &[P1Point]| [u, v].concat();
    validate_triplet(&join(&px, &py), &join(&px, &pz), &join(&py, &pz)).ok()
}

/// Data of the Halphen-type bundle with eight singular fibers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalphenReport {
    pub k2: i64,
    pub c1: DivisorClass,
    pub c2: DivisorClass,
    pub minus_k: DivisorClass,
    pub genus: i64,
    pub flag: String,
}

impl HalphenReport {
    pub fn to_json(&self) -> Value {
        json!({
            "K2": self.k2,
            "C1": self.c1.to_json(),
            "C2": self.c2.to_json(),
            "minus_K": self.minus_k.to_json(),
            "genus": self.genus,
            "flag": self.flag,
        })
    }
}

/// Reports the case `|A_1| = |A_2| = 4`, `A_3 = A_1 ∪ A_2` (in any order of
/// the three sets), where `−K` is the class of an elliptic fibration.
pub fn halphen_check(t: &RamificationTriplet) -> Option<HalphenReport> {
    let a = t.a();
    let big = (1..=3).find(|&i| a[i - 1] == 4)?;
    let (i, j) = match big {
        1 => (2, 3),
        2 => (1, 3),
        _ => (1, 2),
    };
    if a[i - 1] != 2 || a[j - 1] != 2 || !t.set(i).is_disjoint(t.set(j)) {
        return None;
    }
    let model = z22_from_triplet(t).expect("eight fibers fit in a supported lattice");
    let c1 = fixed_curve_class(&model, i).expect("valid model");
    let c2 = fixed_curve_class(&model, j).expect("valid model");
    let lat = model.lattice();
    let minus_k = lat.canonical().neg();
    Some(HalphenReport {
        k2: lat.degree(),
        genus: c1.genus,
        c1: c1.class,
        c2: c2.class,
        minus_k,
        flag: "Aut(S) not algebraic; Aut(S,π) maximal family 11".to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triplet(a: &[i64], b: &[i64], c: &[i64]) -> RamificationTriplet {
        let p = |xs: &[i64]| xs.iter().map(|&x| P1Point::finite(x)).collect::<Vec<_>>();
        validate_triplet(&p(a), &p(b), &p(c)).unwrap()
    }

    #[test]
    fn sigma_on_the_section_for_222() {
        let t = example_triplet([2, 2, 2]).unwrap();
        let m = z22_from_triplet(&t).unwrap();
        let s1 = m.sigma(1);
        let img = s1.apply(&m.marking().section()).unwrap();
        let mut want = vec![0i64; 8];
        want[0] = 2;
        want[1] = -1;
        for (j, p) in m.fibers().iter().enumerate() {
            if t.set(1).contains(p) {
                want[j + 2] = -1;
            }
        }
        assert_eq!(img, DivisorClass::new(want));
    }

    #[test]
    fn sigma_on_the_section_for_112() {
        let t = triplet(&[0, 1], &[2, 3], &[0, 1, 2, 3]);
        let m = z22_from_triplet(&t).unwrap();
        let img = m.sigma(3).apply(&m.marking().section()).unwrap();
        assert_eq!(img, DivisorClass::new(vec![2, -1, -1, -1, -1, -1]));
    }

    #[test]
    fn involutions_multiply() {
        for k in 3..=10 {
            for p in realisable_profiles(k) {
                let m = z22_from_triplet(&example_triplet(p).unwrap()).unwrap();
                assert_eq!(m.sigma(1).compose(m.sigma(2)).unwrap(), *m.sigma(3));
                assert_eq!(m.action().order().unwrap(), 4);
            }
        }
    }

    #[test]
    fn swapping_involutions_per_fiber() {
        let t = triplet(&[0, 1], &[1, 2], &[0, 2]);
        let m = z22_from_triplet(&t).unwrap();
        assert_eq!(m.swapping_involutions(1), vec![1, 3]);
        assert_eq!(m.swapping_involutions(2), vec![1, 2]);
        assert_eq!(m.swapping_involutions(3), vec![2, 3]);
    }

    #[test]
    fn fixed_curves() {
        let m = z22_from_triplet(&example_triplet([2, 2, 2]).unwrap()).unwrap();
        let c = fixed_curve_class(&m, 1).unwrap();
        assert_eq!(c.class, m.lattice().canonical().neg());
        assert_eq!((c.self_intersection, c.genus), (2, 1));
        let m = z22_from_triplet(&example_triplet([1, 2, 3]).unwrap()).unwrap();
        let c = fixed_curve_class(&m, 1).unwrap();
        assert_eq!((c.self_intersection, c.genus), (-2, 0));
        let m = z22_from_triplet(&example_triplet([2, 2, 4]).unwrap()).unwrap();
        let c = fixed_curve_class(&m, 1).unwrap();
        assert_eq!(c.class, m.lattice().canonical().neg());
        assert_eq!((c.self_intersection, c.genus), (0, 1));
    }

    #[test]
    fn del_pezzo_examples() {
        assert!(matches!(
            del_pezzo_verdict_for_profile([3, 3, 3], false),
            DelPezzoVerdict::No(_)
        ));
        assert_eq!(
            del_pezzo_verdict_for_profile([1, 1, 2], false),
            DelPezzoVerdict::Yes
        );
        assert_eq!(
            del_pezzo_verdict_for_profile([1, 1, 4], false),
            DelPezzoVerdict::No("rational fixed curve, self-int -2".to_string())
        );
        assert!(matches!(
            del_pezzo_verdict_for_profile([2, 2, 2], false),
            DelPezzoVerdict::Indeterminate(_)
        ));
        assert_eq!(
            del_pezzo_verdict_for_profile([2, 2, 3], true),
            DelPezzoVerdict::No("four (−2)-sections".to_string())
        );
    }

    #[test]
    fn profiles() {
        assert_eq!(realisable_profiles(3), vec![[1, 1, 1]]);
        assert_eq!(realisable_profiles(6), vec![[1, 2, 3], [2, 2, 2]]);
        assert_eq!(realisable_profiles(7), vec![[1, 3, 3], [2, 2, 3]]);
        assert!(example_triplet([1, 1, 4]).is_none());
        for k in 3..=12 {
            for p in realisable_profiles(k) {
                assert_eq!(example_triplet(p).unwrap().profile(), p);
            }
        }
    }

    #[test]
    fn halphen() {
        let t = triplet(&[0, 1, 2, 3], &[4, 5, 6, 7], &[0, 1, 2, 3, 4, 5, 6, 7]);
        let h = halphen_check(&t).unwrap();
        assert_eq!(h.k2, 0);
        assert_eq!(h.c1, h.minus_k);
        assert_eq!(h.c2, h.minus_k);
        assert_eq!(h.genus, 1);
        assert!(halphen_check(&triplet(&[0, 1], &[2, 3], &[0, 1, 2, 3])).is_none());
    }
}
