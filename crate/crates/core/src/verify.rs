//! Invariant suites run by `cremona verify`.
//!
//! Each suite recomputes structural facts of one module from scratch and
//! records one check per fact. A suite passes when all its checks pass.

use serde_json::{json, Value};

use crate::bundles::{
    build_from_four_lines, build_from_three_lines_conic, del_pezzo_verdict_for_profile,
    example_triplet, exceptional_from_delta, fixed_curve_class, halphen_check,
    jonquieres_involution, minimality_obstruction_solver, realisable_profiles,
    second_fibration_solver, z22_from_triplet, DelPezzoVerdict, SecondFibration,
};
use crate::classifier::{
    classify, conjugacy_invariant, DelPezzoDescriptor, Family, GSurfaceDescriptor, Invariant,
    Verdict,
};
use crate::geometry::{are_collinear, is_general_position, Conic, Line, Mobius, P1Point, P2Point};
use crate::picard::{
    enumerate_minus_one_classes, validate_action, BlowupLattice, DivisorClass, FiberedMarking,
    IntMatrix,
};
use crate::square_class::{
    stabilizer, triplet_canonical_form, validate_triplet, xi, RamificationTriplet,
};

pub const SUITES: [&str; 5] = [
    "geometry",
    "lattice",
    "square_class",
    "bundles",
    "classifier",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "passed": c.passed,
                "detail": c.detail,
            })).collect::<Vec<_>>(),
        })
    }
}

struct Recorder {
    suite: &'static str,
    checks: Vec<Check>,
}

impl Recorder {
    fn new(suite: &'static str) -> Self {
        Recorder {
            suite,
            checks: Vec::new(),
        }
    }

    fn check(&mut self, name: &str, f: impl FnOnce() -> Result<(), String>) {
        let (passed, detail) = match f() {
            Ok(()) => (true, String::new()),
            Err(e) => (false, e),
        };
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail,
        });
    }

    fn finish(self) -> SuiteReport {
        SuiteReport {
            suite: self.suite,
            checks: self.checks,
        }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Runs one suite by name, or `None` for an unknown name.
pub fn run_suite(name: &str) -> Option<SuiteReport> {
    Some(match name {
        "geometry" => geometry(),
        "lattice" => lattice(),
        "square_class" => square_class(),
        "bundles" => bundles(),
        "classifier" => classifier(),
        _ => return None,
    })
}

pub fn run_all() -> Vec<SuiteReport> {
    SUITES
        .iter()
        .map(|s| run_suite(s).expect("known suite"))
        .collect()
}

fn p2(x: i64, y: i64, z: i64) -> P2Point {
    P2Point::new(x, y, z).expect("nonzero")
}

fn line(u: i64, v: i64, w: i64) -> Line {
    Line::new(u, v, w).expect("nonzero")
}

fn geometry() -> SuiteReport {
    let mut r = Recorder::new("geometry");
    r.check("collinearity", || {
        ensure(
            are_collinear(&p2(1, 0, 0), &p2(0, 1, 0), &p2(1, 1, 0)),
            || "z = 0".into(),
        )?;
        ensure(
            !are_collinear(&p2(1, 0, 0), &p2(0, 1, 0), &p2(0, 0, 1)),
            || "triangle".into(),
        )?;
        ensure(
            are_collinear(&p2(1, 1, 1), &p2(1, 2, 3), &p2(1, 3, 5)),
            || "arithmetic".into(),
        )
    });
    r.check("general position of the standard frame", || {
        let pts = [p2(1, 0, 0), p2(0, 1, 0), p2(0, 0, 1), p2(1, 1, 1)];
        ensure(is_general_position(&pts).map_err(err)?, || {
            "not general".into()
        })
    });
    r.check("Möbius composition with inverse", || {
        let m = Mobius::new(2, 3, 5, 7).map_err(err)?;
        ensure(m.compose(&m.inverse()).is_identity(), || "m m⁻¹ ≠ 1".into())
    });
    r.check("four-lines construction", || {
        let lines = [
            line(1, 0, 0),
            line(0, 1, 0),
            line(1, 1, -1),
            line(1, -2, -3),
        ];
        let m = build_from_four_lines(&lines, &p2(3, 5, 7)).map_err(err)?;
        ensure(m.triplet().profile() == [2, 2, 2], || {
            format!("{:?}", m.triplet().profile())
        })
    });
    r.check("three-lines-and-conic construction", || {
        let chord = |t: i64, s: i64| line(1, -(t + s), t * s);
        let conic = Conic::new([0, 0, 1, -1, 0, 0]).map_err(err)?;
        let (la, lb) = (chord(1, 2), chord(3, -1));
        let d1 = la.meet(&lb).map_err(err)?;
        let m = build_from_three_lines_conic(&[la, lb, chord(4, -2)], &conic, &d1, &p2(4, -2, 1))
            .map_err(err)?;
        ensure(m.triplet().profile() == [2, 2, 3], || {
            format!("{:?}", m.triplet().profile())
        })
    });
    r.finish()
}

fn lattice() -> SuiteReport {
    let mut r = Recorder::new("lattice");
    for (n, want) in [
        (1, 1),
        (2, 3),
        (3, 6),
        (4, 10),
        (5, 16),
        (6, 27),
        (7, 56),
        (8, 240),
    ] {
        r.check(&format!("(−1)-classes for r = {n}"), || {
            let lat = BlowupLattice::new(n).map_err(err)?;
            let cls = enumerate_minus_one_classes(&lat).map_err(err)?;
            ensure(cls.len() == want, || format!("found {}", cls.len()))?;
            let k = lat.canonical();
            for c in &cls {
                let (sq, dk) = (
                    lat.square(c).map_err(err)?,
                    lat.intersect(c, &k).map_err(err)?,
                );
                ensure(sq == -1 && dk == -1, || {
                    format!("{c} has D² = {sq}, D·K = {dk}")
                })?;
            }
            Ok(())
        });
    }
    r.check("de Jonquières involution", || {
        let m = FiberedMarking::new(4).map_err(err)?;
        let s = jonquieres_involution(&m).map_err(err)?;
        ensure(s.compose(&s).map_err(err)?.matrix().is_identity(), || {
            "σ² ≠ 1".into()
        })?;
        for j in 1..=4 {
            let e = m.component(j);
            ensure(s.apply(&e).map_err(err)? == m.fiber().sub(&e), || {
                format!("σ(E_{j})")
            })?;
        }
        Ok(())
    });
    r.check("adjunction genus is integral", || {
        let lat = BlowupLattice::new(4).map_err(err)?;
        for d in -3..=3 {
            for m in -2..=2 {
                let c = DivisorClass::new(vec![d, m, -m, 1, 0]);
                lat.adjunction_genus(&c).map_err(err)?;
            }
        }
        Ok(())
    });
    r.check("non-isometries are rejected", || {
        let lat = BlowupLattice::new(2).map_err(err)?;
        let m =
            IntMatrix::from_rows(vec![vec![2, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).map_err(err)?;
        ensure(validate_action(&lat, m).is_err(), || "accepted".into())
    });
    r.finish()
}

fn sample_maps() -> Vec<Mobius> {
    [
        (1, 1, 0, 1),
        (0, 1, 1, 0),
        (2, -3, 5, 7),
        (1, -1, 1, 1),
        (3, 1, -2, 5),
    ]
    .iter()
    .map(|&(p, q, r, s)| Mobius::new(p, q, r, s).expect("invertible"))
    .collect()
}

fn square_class() -> SuiteReport {
    let mut r = Recorder::new("square_class");
    r.check("stabilizer of {0, 1, ∞}", || {
        let pts = [P1Point::finite(0), P1Point::finite(1), P1Point::infinity()];
        let s = stabilizer(&pts).map_err(err)?;
        ensure(s.len() == 6, || format!("order {}", s.len()))
    });
    r.check("ξ is a homomorphism", || {
        let p = |xs: &[i64]| xs.iter().map(|&x| P1Point::finite(x)).collect::<Vec<_>>();
        let a = xi(&p(&[0, 1, 2, 3])).map_err(err)?;
        let b = xi(&p(&[2, 3, 4, 5])).map_err(err)?;
        let c = xi(&p(&[0, 1, 4, 5])).map_err(err)?;
        ensure(a.multiply(&b) == c, || "ξ(A)ξ(B) ≠ ξ(A Δ B)".into())
    });
    r.check("canonical triplets are Möbius invariant", || {
        for k in 3..=7 {
            for prof in realisable_profiles(k) {
                let t = example_triplet(prof).ok_or("unrealisable")?;
                let c = triplet_canonical_form(&t).map_err(err)?;
                for m in sample_maps() {
                    let c2 = triplet_canonical_form(&t.map(&m)).map_err(err)?;
                    ensure(c == c2, || format!("{prof:?} under {m:?}"))?;
                }
            }
        }
        Ok(())
    });
    r.check("triplets reject uncovered points", || {
        let p = |xs: &[i64]| xs.iter().map(|&x| P1Point::finite(x)).collect::<Vec<_>>();
        ensure(
            validate_triplet(&p(&[0, 1]), &p(&[0, 2]), &p(&[0, 3])).is_err(),
            || "accepted".into(),
        )
    });
    r.finish()
}

fn bundles() -> SuiteReport {
    let mut r = Recorder::new("bundles");
    for k in 3..=10 {
        r.check(&format!("(Z/2)²-bundles with k = {k}"), || {
            for prof in realisable_profiles(k) {
                let t = example_triplet(prof).ok_or("unrealisable")?;
                let m = z22_from_triplet(&t).map_err(err)?;
                let lat = m.lattice();
                for i in 1..=3 {
                    let s = m.sigma(i);
                    ensure(s.compose(s).map_err(err)?.matrix().is_identity(), || {
                        format!("{prof:?}: σ_{i}² ≠ 1")
                    })?;
                    let e0 = s.apply(&m.marking().section()).map_err(err)?;
                    ensure(lat.square(&e0).map_err(err)? == -1, || {
                        format!("{prof:?}: σ_{i}(E_0)² ≠ −1")
                    })?;
                    let c = fixed_curve_class(&m, i).map_err(err)?;
                    let a = t.a()[i - 1] as i64;
                    let want = lat.canonical().neg().add(&m.marking().fiber().scale(a - 2));
                    ensure(c.class == want && c.genus == a - 1, || {
                        format!("{prof:?}: fixed curve of σ_{i}")
                    })?;
                }
                let s12 = m.sigma(1).compose(m.sigma(2)).map_err(err)?;
                ensure(s12.matrix() == m.sigma(3).matrix(), || {
                    format!("{prof:?}: σ1σ2 ≠ σ3")
                })?;
                let inv = m.action().invariant_sublattice().map_err(err)?;
                ensure(
                    inv.rank == 2 && inv.is_spanned_by(&[lat.canonical(), m.marking().fiber()]),
                    || format!("{prof:?}: invariant lattice is not ZK ⊕ Zf"),
                )?;
            }
            Ok(())
        });
    }
    r.check("del Pezzo thresholds", || {
        for k in 3..=12 {
            for a1 in 1..=k {
                for a2 in a1..=k {
                    if a1 + a2 >= k {
                        continue;
                    }
                    let a3 = k - a1 - a2;
                    if a3 < a2 {
                        continue;
                    }
                    let v = del_pezzo_verdict_for_profile([a1, a2, a3], false);
                    let ok = match (k, a1) {
                        (0..=5, _) => v == DelPezzoVerdict::Yes,
                        (8.., _) | (6 | 7, 1) => matches!(v, DelPezzoVerdict::No(_)),
                        _ => matches!(v, DelPezzoVerdict::Indeterminate(_)),
                    };
                    ensure(ok, || format!("({a1},{a2},{a3}): {v:?}"))?;
                }
            }
        }
        Ok(())
    });
    r.check("minimality obstructions", || {
        for k in 1..=12 {
            let obstructed = !minimality_obstruction_solver(k, &[1, 2, 4]).is_empty();
            ensure(obstructed == [2, 3, 5].contains(&k), || format!("k = {k}"))?;
        }
        Ok(())
    });
    r.check("second fibrations", || {
        let sol = |a, b| SecondFibration::Solution { a, b };
        let want = [(4, sol(1, -1)), (2, sol(2, -1)), (1, sol(4, -1))];
        for (k2, w) in want {
            ensure(second_fibration_solver(k2) == w, || format!("K² = {k2}"))?;
        }
        for k2 in [3, 5, 6, 7] {
            ensure(second_fibration_solver(k2) == SecondFibration::None, || {
                format!("K² = {k2}")
            })?;
        }
        Ok(())
    });
    r.check("exceptional bundles", || {
        for n in 1..=6 {
            let d: Vec<P1Point> = (0..2 * n as i64).map(P1Point::finite).collect();
            let m = exceptional_from_delta(&d).map_err(err)?;
            ensure(m.eigen_multiplicities().map_err(err)? == (2, 2 * n), || {
                format!("n = {n}")
            })?;
            let rank = m.action().invariant_sublattice().map_err(err)?.rank;
            ensure(rank == 2, || format!("n = {n}: invariant rank {rank}"))?;
        }
        Ok(())
    });
    r.check("Halphen bundle", || {
        let p = |xs: &[i64]| xs.iter().map(|&x| P1Point::finite(x)).collect::<Vec<_>>();
        let t = validate_triplet(
            &p(&[0, 1, 2, 3]),
            &p(&[4, 5, 6, 7]),
            &p(&[0, 1, 2, 3, 4, 5, 6, 7]),
        )
        .map_err(err)?;
        let h = halphen_check(&t).ok_or("not recognised")?;
        ensure(
            h.k2 == 0 && h.c1 == h.minus_k && h.c2 == h.minus_k && h.genus == 1,
            || format!("{h:?}"),
        )
    });
    r.finish()
}

fn family_11_invariant(t: &RamificationTriplet) -> Result<Invariant, String> {
    let m = z22_from_triplet(t).map_err(err)?;
    let v = classify(&GSurfaceDescriptor::Z22(m)).map_err(err)?;
    ensure(v.family() == Some(Family::new(11)), || format!("{v}"))?;
    conjugacy_invariant(&v).map_err(err)
}

fn classifier() -> SuiteReport {
    let mut r = Recorder::new("classifier");
    r.check("del Pezzo degrees", || {
        for (d, f) in [(9, 1), (7, 2), (6, 3), (5, 6), (4, 7), (1, 10)] {
            let v = classify(&GSurfaceDescriptor::DelPezzo(
                DelPezzoDescriptor::of_degree(d),
            ))
            .map_err(err)?;
            ensure(v.terminal_family() == Some(Family::new(f)), || {
                format!("degree {d}: {v}")
            })?;
        }
        Ok(())
    });
    r.check("family 11 invariant is Möbius invariant", || {
        let t = example_triplet([1, 2, 3]).ok_or("unrealisable")?;
        let base = family_11_invariant(&t)?;
        for m in sample_maps() {
            let moved = t.map(&m);
            ensure(family_11_invariant(&moved)? == base, || format!("{m:?}"))?;
        }
        Ok(())
    });
    r.check("uncertified (2,2,2) is indeterminate", || {
        let m =
            z22_from_triplet(&example_triplet([2, 2, 2]).ok_or("unrealisable")?).map_err(err)?;
        let v = classify(&GSurfaceDescriptor::Z22(m)).map_err(err)?;
        ensure(matches!(v, Verdict::Indeterminate { .. }), || {
            format!("{v}")
        })
    });
    r.check("|Δ| = 2 reduces to family 3", || {
        let m = exceptional_from_delta(&[P1Point::finite(0), P1Point::infinity()]).map_err(err)?;
        let v = classify(&GSurfaceDescriptor::Exceptional(m)).map_err(err)?;
        ensure(
            matches!(v, Verdict::NotMaximal { .. }) && v.terminal_family() == Some(Family::new(3)),
            || format!("{v}"),
        )
    });
    r.finish()
}
