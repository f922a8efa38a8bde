//! `(Z/2)²`-conic bundles realised in the plane: the blowup of a centre `q`
//! and of singular points of four lines, or of three lines and a conic,
//! fibered by the pencil of lines through `q`.

use std::collections::BTreeMap;

use super::z22::{z22_from_triplet, Certificate, CertificateKind, Z22BundleModel};
use super::BundleError;
use crate::geometry::{intersect_line_conic, project_from, Conic, Line, P1Point, P2Point};
use crate::picard::DivisorClass;
use crate::square_class::validate_triplet;

fn degenerate(msg: impl Into<String>) -> BundleError {
    BundleError::DegenerateConfiguration(msg.into())
}

/// Projections from `q` of the named points, checked to be pairwise
/// distinct.
fn project_all(
    q: &P2Point,
    named: &[(&str, &P2Point)],
    collision: impl Fn(String) -> BundleError,
) -> Result<BTreeMap<String, P1Point>, BundleError> {
    let mut out: BTreeMap<String, P1Point> = BTreeMap::new();
    for (name, p) in named {
        let t = project_from(q, p)?;
        if let Some((other, _)) = out.iter().find(|(_, u)| **u == t) {
            return Err(collision(format!("q is collinear with {other} and {name}")));
        }
        out.insert(name.to_string(), t);
    }
    Ok(out)
}

/// Builds the model and the section classes `L·mult_L − Σ E` given by the
/// blown-up points each section passes through.
fn assemble(
    q: &P2Point,
    points: &[(&str, &P2Point)],
    proj: &BTreeMap<String, P1Point>,
    sets: [&[&str]; 3],
    sections: [(i64, bool, &[&str]); 4],
    kind: CertificateKind,
) -> Result<Z22BundleModel, BundleError> {
    let pick = |names: &[&str]| names.iter().map(|n| proj[*n].clone()).collect::<Vec<_>>();
    let t = validate_triplet(&pick(sets[0]), &pick(sets[1]), &pick(sets[2]))?;
    let model = z22_from_triplet(&t)?;
    let fiber_index = |name: &str| {
        model
            .fibers()
            .iter()
            .position(|p| *p == proj[name])
            .expect("every blown-up point lies on a singular fiber")
            + 1
    };
    let n = model.lattice().rank();
    let classes: Vec<DivisorClass> = sections
        .iter()
        .map(|(deg, through_q, names)| {
            let mut v = vec![0i64; n];
            v[0] = *deg;
            if *through_q {
                v[1] = -1;
            }
            for name in names.iter() {
                v[fiber_index(name) + 1] -= 1;
            }
            DivisorClass::new(v)
        })
        .collect();
    let mut ordered: Vec<(usize, P2Point)> = points
        .iter()
        .map(|(name, p)| (fiber_index(name), (*p).clone()))
        .collect();
    ordered.sort_by_key(|(j, _)| *j);
    let cert = Certificate {
        kind,
        sections: classes.try_into().expect("four sections"),
        q: q.clone(),
        points: ordered.into_iter().map(|(_, p)| p).collect(),
    };
    model.with_certificate(cert)
}

/// Blows up `q` and the six pairwise intersections of four lines.
///
/// The six points form three pairs `{p12, p34}`, `{p13, p24}`, `{p14, p23}`;
/// the involution `σ_i` exchanges the components of the fibers through the
/// two pairs other than the `i`-th one. The strict transforms of the lines
/// are four disjoint (−2)-sections.
pub fn build_from_four_lines(
    lines: &[Line; 4],
    q: &P2Point,
) -> Result<Z22BundleModel, BundleError> {
    for i in 0..4 {
        for j in i + 1..4 {
            if lines[i] == lines[j] {
                return Err(degenerate(format!(
                    "lines {} and {} coincide",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let mut p = BTreeMap::new();
    for i in 0..4 {
        for j in i + 1..4 {
            let x = lines[i].meet(&lines[j])?;
            for (m, l) in lines.iter().enumerate() {
                if m != i && m != j && l.contains(&x) {
                    return Err(degenerate(format!(
                        "lines {}, {} and {} are concurrent",
                        i + 1,
                        j + 1,
                        m + 1
                    )));
                }
            }
            p.insert(format!("p{}{}", i + 1, j + 1), x);
        }
    }
    if lines.iter().any(|l| l.contains(q)) {
        return Err(BundleError::QOnConfiguration);
    }
    let named: Vec<(&str, &P2Point)> = p.iter().map(|(k, v)| (k.as_str(), v)).collect();
    let proj = project_all(q, &named, BundleError::DegenerateConfiguration)?;
    let (pair1, pair2, pair3) = (["p12", "p34"], ["p13", "p24"], ["p14", "p23"]);
    let a1 = [pair2, pair3].concat();
    let a2 = [pair1, pair3].concat();
    let a3 = [pair1, pair2].concat();
    assemble(
        q,
        &named,
        &proj,
        [&a1, &a2, &a3],
        [
            (1, false, &["p12", "p13", "p14"]),
            (1, false, &["p12", "p23", "p24"]),
            (1, false, &["p13", "p23", "p34"]),
            (1, false, &["p14", "p24", "p34"]),
        ],
        CertificateKind::FourLines,
    )
}

/// Two distinct transverse intersection points of a line and the conic.
fn transverse(l: &Line, c: &Conic, name: &str) -> Result<[P2Point; 2], BundleError> {
    let pts = intersect_line_conic(l, c)?;
    match pts.as_slice() {
        [(x, 1), (y, 1)] => Ok([x.clone(), y.clone()]),
        _ => Err(degenerate(format!("line {name} is tangent to the conic"))),
    }
}

/// Blows up the point `q` of the conic aligned with `d1` and `d2`, and the
/// seven singular points of `lines ∪ conic` other than `d1` and `d2`.
///
/// `d1` must lie on exactly two of the lines (called `L_a`, `L_b` in input
/// order) and `d2` on the third line `L_c` and on the conic. The blown-up
/// points are `a1, a2 = L_a ∩ C`, `b1, b2 = L_b ∩ C`, `a3 = L_a ∩ L_c`,
/// `b3 = L_b ∩ L_c` and `c`, the second point of `L_c ∩ C`.
///
/// The certificate lists `(L_a, L_b, L_c, C)`; since `d1` and `d2` are not
/// blown up, `L_a` meets `L_b` and `L_c` meets `C` on the surface.
pub fn build_from_three_lines_conic(
    lines: &[Line; 3],
    conic: &Conic,
    d1: &P2Point,
    d2: &P2Point,
) -> Result<Z22BundleModel, BundleError> {
    if !conic.is_smooth() {
        return Err(degenerate("the conic is singular"));
    }
    for i in 0..3 {
        for j in i + 1..3 {
            if lines[i] == lines[j] {
                return Err(degenerate(format!(
                    "lines {} and {} coincide",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let through_d1: Vec<usize> = (0..3).filter(|&i| lines[i].contains(d1)).collect();
    let [ia, ib] = through_d1[..] else {
        return Err(degenerate("d1 must lie on exactly two of the lines"));
    };
    let ic = 3 - ia - ib;
    let (la, lb, lc) = (&lines[ia], &lines[ib], &lines[ic]);
    if !lc.contains(d2) || !conic.contains(d2) {
        return Err(degenerate("d2 must lie on the third line and on the conic"));
    }
    let [a1, a2] = transverse(la, conic, "L_a")?;
    let [b1, b2] = transverse(lb, conic, "L_b")?;
    let [c0, c1] = transverse(lc, conic, "L_c")?;
    let c = if c0 == *d2 { c1 } else { c0 };
    let a3 = la.meet(lc)?;
    let b3 = lb.meet(lc)?;
    let singular = [d1, d2, &a1, &a2, &a3, &b1, &b2, &b3, &c];
    for i in 0..singular.len() {
        for j in i + 1..singular.len() {
            if singular[i] == singular[j] {
                return Err(degenerate(format!(
                    "three of the four curves meet at {}",
                    singular[i]
                )));
            }
        }
    }
    let join = Line::through(d1, d2)?;
    let q = match intersect_line_conic(&join, conic)?.as_slice() {
        [(x, 1), (y, 1)] => {
            if x == d2 {
                y.clone()
            } else {
                x.clone()
            }
        }
        _ => {
            return Err(degenerate(
                "the line d1 d2 is tangent to the conic, so q = d2",
            ))
        }
    };
    if lines.iter().any(|l| l.contains(&q)) {
        return Err(BundleError::QOnConfiguration);
    }
    let named: Vec<(&str, &P2Point)> = vec![
        ("a1", &a1),
        ("a2", &a2),
        ("a3", &a3),
        ("b1", &b1),
        ("b2", &b2),
        ("b3", &b3),
        ("c", &c),
    ];
    let mut with_d = named.clone();
    with_d.push(("d1", d1));
    let proj = project_all(&q, &with_d, BundleError::AlignmentViolation)?;
    assemble(
        &q,
        &named,
        &proj,
        [
            &["a1", "a2", "b3", "c"],
            &["b1", "b2", "a3", "c"],
            &["a1", "a2", "a3", "b1", "b2", "b3"],
        ],
        [
            (1, false, &["a1", "a2", "a3"]),
            (1, false, &["b1", "b2", "b3"]),
            (1, false, &["a3", "b3", "c"]),
            (2, true, &["a1", "a2", "b1", "b2", "c"]),
        ],
        CertificateKind::ThreeLinesConic,
    )
}
