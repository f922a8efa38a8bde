//! Numerical obstructions to the four types of elementary links leaving a
//! G-Mori fibration.

use std::fmt;

use serde_json::{json, Map, Value};

use super::descriptor::{CubicFamily, FixedPointReport, GSurfaceDescriptor};
use super::ClassifyError;
use crate::bundles::{
    is_del_pezzo_bundle, second_fibration_solver, DelPezzoVerdict, SecondFibration,
};
use crate::picard::MoriVerdict;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum LinkType {
    I,
    II,
    III,
    IV,
}

impl fmt::Display for LinkType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LinkType::I => "I",
            LinkType::II => "II",
            LinkType::III => "III",
            LinkType::IV => "IV",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinkStatus {
    Excluded(String),
    /// Not ruled out by the numerical conditions.
    PossiblyOpen(String),
}

impl LinkStatus {
    pub fn is_excluded(&self) -> bool {
        matches!(self, LinkStatus::Excluded(_))
    }

    fn to_json(&self) -> Value {
        match self {
            LinkStatus::Excluded(r) => json!({ "status": "excluded", "reason": r }),
            LinkStatus::PossiblyOpen(r) => json!({ "status": "possibly_open", "reason": r }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkReport {
    pub k2: i64,
    /// `"point"` or `"P1"`.
    pub base: &'static str,
    pub links: [(LinkType, LinkStatus); 4],
    pub second_fibration: Option<SecondFibration>,
}

impl LinkReport {
    pub fn status(&self, t: LinkType) -> &LinkStatus {
        &self.links[t as usize].1
    }

    pub fn to_json(&self) -> Value {
        let links: Map<String, Value> = self
            .links
            .iter()
            .map(|(t, s)| (t.to_string(), s.to_json()))
            .collect();
        let mut v = json!({ "K2": self.k2, "base": self.base, "links": links });
        if let Some(s) = &self.second_fibration {
            v["second_fibration"] = s.to_json();
        }
        v
    }
}

enum Shape {
    /// Positive-dimensional group without finite orbits.
    NoFiniteOrbit {
        k2: i64,
        base: &'static str,
    },
    /// Del Pezzo surface over a point; orbits off the exceptional curves
    /// have at least `orbit_bound` points.
    Point {
        k2: i64,
        orbit_bound: i64,
    },
    /// Conic bundle over P1; `del_pezzo` is unknown when `None`.
    Bundle {
        k2: i64,
        del_pezzo: Option<bool>,
    },
    F1,
}

fn not_mori(msg: impl Into<String>) -> ClassifyError {
    ClassifyError::NotAMoriFibration(msg.into())
}

fn shape(d: &GSurfaceDescriptor) -> Result<Shape, ClassifyError> {
    Ok(match d {
        GSurfaceDescriptor::DelPezzo(dp) => {
            let k2 = dp.degree as i64;
            if let Some(a) = &dp.action {
                if dp.degree != 3 && a.verify_mori_fibration(None)? != MoriVerdict::DelPezzoPoint {
                    return Err(not_mori("the action has invariant rank greater than 1"));
                }
            }
            match dp.degree {
                9 | 6 => Shape::NoFiniteOrbit { k2, base: "point" },
                8 if dp.p1xp1 => Shape::NoFiniteOrbit { k2, base: "point" },
                8 => return Err(not_mori("Aut(F1) preserves its exceptional curve")),
                7 => return Err(not_mori("Aut(S) preserves an exceptional curve")),
                5 => Shape::Point { k2, orbit_bound: 6 },
                4 => Shape::Point { k2, orbit_bound: 4 },
                3 => {
                    let a = dp.action.as_ref().ok_or_else(|| {
                        super::invalid("a cubic surface descriptor needs its action")
                    })?;
                    if !a.is_pair_minimal()?.minimal {
                        return Err(not_mori("the pair is not minimal"));
                    }
                    let no_fixed = match &dp.cubic_family {
                        Some(CubicFamily::FixedPoint { .. }) => false,
                        Some(_) => true,
                        None => dp.fixed_points == Some(FixedPointReport::OnExceptionalCurves),
                    };
                    Shape::Point {
                        k2,
                        orbit_bound: if no_fixed { 3 } else { 1 },
                    }
                }
                2 => {
                    let in_table = dp.table_row.as_ref().is_some_and(|r| r.in_table());
                    Shape::Point {
                        k2,
                        orbit_bound: if in_table { 2 } else { 1 },
                    }
                }
                _ => Shape::Point { k2, orbit_bound: 1 },
            }
        }
        GSurfaceDescriptor::Hirzebruch(h) => match h.n {
            0 => Shape::NoFiniteOrbit {
                k2: 8,
                base: "point",
            },
            1 => Shape::F1,
            _ => Shape::NoFiniteOrbit { k2: 8, base: "P1" },
        },
        GSurfaceDescriptor::Exceptional(m) => {
            if m.action().verify_mori_fibration(Some(m.marking()))?
                != MoriVerdict::ConicBundleOverP1
            {
                return Err(not_mori("invariant lattice is not ZK ⊕ Zf"));
            }
            Shape::Bundle {
                k2: m.marking().lattice().degree(),
                del_pezzo: Some(m.n() == 1),
            }
        }
        GSurfaceDescriptor::Z22(m) => {
            if m.action().verify_mori_fibration(Some(m.marking()))?
                != MoriVerdict::ConicBundleOverP1
            {
                return Err(not_mori("invariant lattice is not ZK ⊕ Zf"));
            }
            let del_pezzo = match is_del_pezzo_bundle(m) {
                DelPezzoVerdict::Yes => Some(true),
                DelPezzoVerdict::No(_) => Some(false),
                DelPezzoVerdict::Indeterminate(_) => None,
            };
            Shape::Bundle {
                k2: m.lattice().degree(),
                del_pezzo,
            }
        }
    })
}

/// Reports, for each link type, whether the numerical conditions on `K²`,
/// orbit sizes and second fibrations exclude it. This checks obstructions;
/// it does not prove superrigidity.
pub fn link_feasibility(d: &GSurfaceDescriptor) -> Result<LinkReport, ClassifyError> {
    use LinkStatus::{Excluded, PossiblyOpen};
    let ex = |s: &str| Excluded(s.to_string());
    let report = |k2, base, s: [LinkStatus; 4], second| LinkReport {
        k2,
        base,
        links: {
            let [a, b, c, d] = s;
            [
                (LinkType::I, a),
                (LinkType::II, b),
                (LinkType::III, c),
                (LinkType::IV, d),
            ]
        },
        second_fibration: second,
    };
    Ok(match shape(d)? {
        Shape::NoFiniteOrbit { k2, base } => report(
            k2,
            base,
            [
                ex("the group has no finite orbit"),
                ex("the group has no finite orbit"),
                ex("the group has no finite orbit"),
                ex("no second invariant conic bundle structure"),
            ],
            None,
        ),
        Shape::F1 => report(
            8,
            "P1",
            [
                ex("the base is P1; type I links start over a point"),
                ex("the group has no finite orbit"),
                PossiblyOpen("S is F1: contracting the exceptional section gives P2".to_string()),
                ex("F1 has a single conic bundle structure"),
            ],
            None,
        ),
        Shape::Point { k2, orbit_bound } => {
            let one = if [4, 8, 9].contains(&k2) {
                PossiblyOpen(format!("K² = {k2} ∈ {{4,8,9}}"))
            } else {
                Excluded(format!("K² = {k2} ∉ {{4,8,9}}"))
            };
            let two = if orbit_bound >= k2 {
                Excluded(format!(
                    "orbits off the exceptional curves have at least {orbit_bound} points, not fewer than K² = {k2}"
                ))
            } else {
                PossiblyOpen(format!(
                    "an orbit of {orbit_bound} point(s) off the exceptional curves is smaller than K² = {k2}"
                ))
            };
            report(
                k2,
                "point",
                [
                    one,
                    two,
                    ex("the base is a point; type III links start from a conic bundle"),
                    ex("the base is a point; type IV links change a conic bundle structure"),
                ],
                None,
            )
        }
        Shape::Bundle { k2, del_pezzo } => {
            let three = if [3, 5, 6].contains(&k2) {
                PossiblyOpen(format!("K² = {k2} ∈ {{3,5,6}}"))
            } else {
                Excluded(format!("K² = {k2} ∉ {{3,5,6}}"))
            };
            let second = second_fibration_solver(k2);
            let four = match second {
                SecondFibration::None => Excluded(format!(
                    "no class −aK + bf is a second fibration when K² = {k2}"
                )),
                SecondFibration::P1xP1 => PossiblyOpen("S is P1 × P1".to_string()),
                SecondFibration::Solution { a, b } if del_pezzo == Some(false) => {
                    Excluded(format!(
                        "(a, b) = ({a}, {b}) solves the numerics but S is not a del Pezzo surface"
                    ))
                }
                SecondFibration::Solution { a, b } => PossiblyOpen(format!(
                    "C = −{a}K {b:+}f is numerically a second fibration"
                )),
            };
            report(
                k2,
                "P1",
                [
                    ex("the base is P1; type I links start over a point"),
                    ex("the fiberwise group has no fixed point on smooth fibers"),
                    three,
                    four,
                ],
                Some(second),
            )
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundles::{example_triplet, z22_from_triplet, HirzebruchModel};
    use crate::classifier::DelPezzoDescriptor;

    #[test]
    fn hirzebruch_all_excluded() {
        for n in [0, 2, 3, 7] {
            let r =
                link_feasibility(&GSurfaceDescriptor::Hirzebruch(HirzebruchModel::new(n))).unwrap();
            assert!(r.links.iter().all(|(_, s)| s.is_excluded()), "n = {n}");
        }
    }

    #[test]
    fn z22_k7_excludes_type_three() {
        let m = z22_from_triplet(&example_triplet([2, 2, 3]).unwrap()).unwrap();
        let r = link_feasibility(&GSurfaceDescriptor::Z22(m)).unwrap();
        assert_eq!(r.k2, 1);
        assert!(r.status(LinkType::III).is_excluded());
        assert_eq!(
            r.second_fibration,
            Some(SecondFibration::Solution { a: 4, b: -1 })
        );
    }

    #[test]
    fn z22_k4_second_fibration() {
        let m = z22_from_triplet(&example_triplet([1, 1, 2]).unwrap()).unwrap();
        let r = link_feasibility(&GSurfaceDescriptor::Z22(m)).unwrap();
        assert_eq!(r.k2, 4);
        assert_eq!(
            r.second_fibration,
            Some(SecondFibration::Solution { a: 1, b: -1 })
        );
        assert!(!r.status(LinkType::IV).is_excluded());
    }

    #[test]
    fn del_pezzo_points() {
        let r = |d| {
            link_feasibility(&GSurfaceDescriptor::DelPezzo(
                DelPezzoDescriptor::of_degree(d),
            ))
        };
        let four = r(4).unwrap();
        assert!(!four.status(LinkType::I).is_excluded());
        assert!(four.status(LinkType::II).is_excluded());
        let five = r(5).unwrap();
        assert!(five.links.iter().all(|(_, s)| s.is_excluded()));
        assert!(matches!(r(7), Err(ClassifyError::NotAMoriFibration(_))));
        assert!(matches!(r(8), Err(ClassifyError::NotAMoriFibration(_))));
    }
}
