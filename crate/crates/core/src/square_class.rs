//! Square classes of `C(x)*` as even point sets on P¹, ramification
//! triplets, Möbius stabilizers and canonical forms.
//!
//! The class of a polynomial `∏(b_i·x − a_i)` is identified with the set of
//! its roots `(a_i : b_i)`; when the degree is odd, ∞ joins the set so that
//! every support has even size. All Möbius computations are over Q: two
//! sets that are equivalent only under an irrational Möbius map have
//! different canonical forms here.

use std::collections::BTreeSet;
use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::geometry::{mobius_from_triples, GeometryError, Mobius, P1Point};
use crate::json::{self as js, DecodeError};
use crate::Exec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SquareClassError {
    #[error("a square class needs an even number of points, got {0}")]
    OddCardinality(usize),
    #[error("point {0} occurs twice")]
    DuplicatePoint(String),
    #[error("set A{0} has fewer than 2 points")]
    TooSmall(usize),
    #[error("points covered by exactly 1 or 3 sets: {}", .0.join(", "))]
    CoverageViolation(Vec<String>),
    #[error("at least 3 points are needed, got {0}")]
    TooFewPoints(usize),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
}

pub type PointSet = BTreeSet<P1Point>;

fn collect_distinct(points: &[P1Point]) -> Result<PointSet, SquareClassError> {
    let mut set = PointSet::new();
    for p in points {
        if !set.insert(p.clone()) {
            return Err(SquareClassError::DuplicatePoint(p.to_string()));
        }
    }
    Ok(set)
}

pub fn points_to_json(points: &PointSet) -> Value {
    Value::Array(points.iter().map(P1Point::to_json).collect())
}

pub fn points_from_json(v: &Value) -> Result<Vec<P1Point>, SquareClassError> {
    js::array(v)?
        .iter()
        .enumerate()
        .map(|(i, p)| {
            P1Point::from_json(p).map_err(|e| match e {
                GeometryError::Decode(d) => d.within(&format!("[{i}]")).into(),
                other => other.into(),
            })
        })
        .collect()
}

/// An element of `C(x)*/(C(x)*)²`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SquareClass {
    support: PointSet,
}

impl SquareClass {
    pub fn trivial() -> Self {
        SquareClass::default()
    }

    pub fn support(&self) -> &PointSet {
        &self.support
    }

    pub fn is_trivial(&self) -> bool {
        self.support.is_empty()
    }

    /// Product in the group: the symmetric difference of supports.
    pub fn multiply(&self, other: &SquareClass) -> SquareClass {
        SquareClass {
            support: self
                .support
                .symmetric_difference(&other.support)
                .cloned()
                .collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        points_to_json(&self.support)
    }
}

impl fmt::Debug for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.support.iter().map(|p| p.to_string()))
            .finish()
    }
}

/// The class with support `points`.
pub fn xi(points: &[P1Point]) -> Result<SquareClass, SquareClassError> {
    if !points.len().is_multiple_of(2) {
        return Err(SquareClassError::OddCardinality(points.len()));
    }
    Ok(SquareClass {
        support: collect_distinct(points)?,
    })
}

pub fn multiply(a: &SquareClass, b: &SquareClass) -> SquareClass {
    a.multiply(b)
}

/// An involution of PGL(2, C(x)), represented by its determinant class.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InvolutionRep {
    pub determinant_class: SquareClass,
}

/// Two involutions are conjugate iff their determinant classes agree.
pub fn involutions_conjugate(s: &InvolutionRep, t: &InvolutionRep) -> bool {
    s.determinant_class == t.determinant_class
}

/// Three even point sets with every point in exactly 0 or 2 of them.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RamificationTriplet {
    sets: [PointSet; 3],
}

impl RamificationTriplet {
    pub fn sets(&self) -> &[PointSet; 3] {
        &self.sets
    }

    /// `A_i` for `i ∈ {1, 2, 3}`.
    pub fn set(&self, i: usize) -> &PointSet {
        &self.sets[i - 1]
    }

    /// `a_i = |A_i| / 2`, in the stored order.
    pub fn a(&self) -> [usize; 3] {
        [0, 1, 2].map(|i| self.sets[i].len() / 2)
    }

    /// `(a_1, a_2, a_3)` sorted ascending.
    pub fn profile(&self) -> [usize; 3] {
        let mut a = self.a();
        a.sort_unstable();
        a
    }

    /// Number of singular fibers `k = a_1 + a_2 + a_3`.
    pub fn k(&self) -> usize {
        self.a().iter().sum()
    }

    /// `A_1 ∪ A_2 ∪ A_3` in point order.
    pub fn support(&self) -> Vec<P1Point> {
        self.sets
            .iter()
            .flatten()
            .cloned()
            .collect::<PointSet>()
            .into_iter()
            .collect()
    }

    /// The same triplet with sets sorted by size, then lexicographically.
    pub fn sorted(&self) -> RamificationTriplet {
        let mut v = self.sets.clone();
        v.sort_by(set_order);
        RamificationTriplet { sets: v }
    }

    pub fn map(&self, m: &Mobius) -> RamificationTriplet {
        RamificationTriplet {
            sets: self
                .sets
                .clone()
                .map(|s| s.iter().map(|p| m.apply(p)).collect()),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "A1": points_to_json(&self.sets[0]),
            "A2": points_to_json(&self.sets[1]),
            "A3": points_to_json(&self.sets[2]),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, SquareClassError> {
        let mut sets = Vec::new();
        for name in ["A1", "A2", "A3"] {
            let pts = points_from_json(js::field(v, name)?).map_err(|e| match e {
                SquareClassError::Decode(d) => d.within(name).into(),
                other => other,
            })?;
            sets.push(pts);
        }
        validate_triplet(&sets[0], &sets[1], &sets[2])
    }
}

impl fmt::Debug for RamificationTriplet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |s: &PointSet| {
            s.iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            f,
            "({{{}}}, {{{}}}, {{{}}})",
            show(&self.sets[0]),
            show(&self.sets[1]),
            show(&self.sets[2])
        )
    }
}

fn set_order(a: &PointSet, b: &PointSet) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter()))
}

pub fn validate_triplet(
    a1: &[P1Point],
    a2: &[P1Point],
    a3: &[P1Point],
) -> Result<RamificationTriplet, SquareClassError> {
    let mut sets = Vec::new();
    for (i, a) in [a1, a2, a3].into_iter().enumerate() {
        if a.len() < 2 {
            return Err(SquareClassError::TooSmall(i + 1));
        }
        if a.len() % 2 != 0 {
            return Err(SquareClassError::OddCardinality(a.len()));
        }
        sets.push(collect_distinct(a)?);
    }
    let all: PointSet = sets.iter().flatten().cloned().collect();
    let bad: Vec<String> = all
        .iter()
        .filter(|p| sets.iter().filter(|s| s.contains(*p)).count() != 2)
        .map(|p| p.to_string())
        .collect();
    if !bad.is_empty() {
        return Err(SquareClassError::CoverageViolation(bad));
    }
    let sets: [PointSet; 3] = sets.try_into().expect("three sets");
    Ok(RamificationTriplet { sets })
}

fn ordered_triples(n: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i != j && j != k && i != k {
                    out.push([i, j, k]);
                }
            }
        }
    }
    out
}

fn standard_triple() -> [P1Point; 3] {
    [P1Point::finite(0), P1Point::finite(1), P1Point::infinity()]
}

/// Möbius maps sending an ordered triple of `points` to `(0, 1, ∞)`.
fn normalizing_maps(points: &[P1Point], exec: Exec) -> Vec<Mobius> {
    let std = standard_triple();
    exec.map(&ordered_triples(points.len()), |&[i, j, k]| {
        mobius_from_triples(
            [&points[i], &points[j], &points[k]],
            [&std[0], &std[1], &std[2]],
        )
        .expect("distinct points")
    })
}

pub fn stabilizer(points: &[P1Point]) -> Result<Vec<Mobius>, SquareClassError> {
    stabilizer_with(points, Exec::default())
}

/// Every Möbius map over Q permuting `points`, sorted.
///
/// A map is determined by the image of one ordered triple, so the search
/// runs over all ordered triples of images.
pub fn stabilizer_with(points: &[P1Point], exec: Exec) -> Result<Vec<Mobius>, SquareClassError> {
    let set = collect_distinct(points)?;
    if set.len() < 3 {
        return Err(SquareClassError::TooFewPoints(set.len()));
    }
    let pts: Vec<P1Point> = set.iter().cloned().collect();
    let src = [&pts[0], &pts[1], &pts[2]];
    let mut out = exec.flat_map(&ordered_triples(pts.len()), |&[i, j, k]| {
        let m = mobius_from_triples(src, [&pts[i], &pts[j], &pts[k]]).expect("distinct points");
        if pts.iter().all(|p| set.contains(&m.apply(p))) {
            vec![m]
        } else {
            Vec::new()
        }
    });
    out.sort();
    Ok(out)
}

pub fn triplet_canonical_form(
    t: &RamificationTriplet,
) -> Result<RamificationTriplet, SquareClassError> {
    triplet_canonical_form_with(t, Exec::default())
}

/// Least image of `t`, with sets in (size, lexicographic) order, over all
/// Möbius maps sending three support points to `(0, 1, ∞)`.
pub fn triplet_canonical_form_with(
    t: &RamificationTriplet,
    exec: Exec,
) -> Result<RamificationTriplet, SquareClassError> {
    let support = t.support();
    if support.len() < 3 {
        return Err(SquareClassError::TooFewPoints(support.len()));
    }
    let std = standard_triple();
    let best = exec
        .min_of(&ordered_triples(support.len()), |&[i, j, k]| {
            let m = mobius_from_triples(
                [&support[i], &support[j], &support[k]],
                [&std[0], &std[1], &std[2]],
            )
            .expect("distinct points");
            let img = t.map(&m).sorted();
            img.sets.map(|s| s.into_iter().collect::<Vec<_>>())
        })
        .expect("at least one triple");
    let sets = best.map(|v| v.into_iter().collect::<PointSet>());
    Ok(RamificationTriplet { sets })
}

pub fn delta_canonical_form(points: &[P1Point]) -> Result<Vec<P1Point>, SquareClassError> {
    delta_canonical_form_with(points, Exec::default())
}

/// Least Möbius image of `points` (as a sorted list) over all maps sending
/// three of them to `(0, 1, ∞)`.
pub fn delta_canonical_form_with(
    points: &[P1Point],
    exec: Exec,
) -> Result<Vec<P1Point>, SquareClassError> {
    let set = collect_distinct(points)?;
    if set.len() < 3 {
        return Err(SquareClassError::TooFewPoints(set.len()));
    }
    let pts: Vec<P1Point> = set.into_iter().collect();
    let maps = normalizing_maps(&pts, exec);
    let best = exec
        .min_of(&maps, |m| {
            pts.iter()
                .map(|p| m.apply(p))
                .collect::<PointSet>()
                .into_iter()
                .collect::<Vec<_>>()
        })
        .expect("at least one triple");
    Ok(best)
}
