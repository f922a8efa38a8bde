//! The projective plane: points, lines, conics and the incidence tests used
//! by the constructions.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::Value;

use super::{cross, dot, normalize, GeometryError, P1Point};
use crate::json::{self, DecodeError};
use crate::linalg;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct P2Point {
    c: [BigInt; 3],
}

impl P2Point {
    pub fn new(
        x: impl Into<BigInt>,
        y: impl Into<BigInt>,
        z: impl Into<BigInt>,
    ) -> Result<Self, GeometryError> {
        Self::from_coords([x.into(), y.into(), z.into()])
    }

    pub fn from_coords(mut c: [BigInt; 3]) -> Result<Self, GeometryError> {
        normalize(&mut c)?;
        Ok(P2Point { c })
    }

    pub fn coords(&self) -> &[BigInt; 3] {
        &self.c
    }

    pub fn to_json(&self) -> Value {
        json::ints(&self.c)
    }

    pub fn from_json(v: &Value) -> Result<Self, GeometryError> {
        let c = json::parse_int_array(v, Some(3))?;
        let c: [BigInt; 3] = c.try_into().expect("length checked");
        P2Point::from_coords(c)
            .map_err(|_| DecodeError::new("", "point (0 : 0 : 0) is not allowed").into())
    }
}

impl fmt::Debug for P2Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{}:{})", self.c[0], self.c[1], self.c[2])
    }
}

impl fmt::Display for P2Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The line `u·x + v·y + w·z = 0`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    c: [BigInt; 3],
}

impl Line {
    pub fn new(
        u: impl Into<BigInt>,
        v: impl Into<BigInt>,
        w: impl Into<BigInt>,
    ) -> Result<Self, GeometryError> {
        Self::from_coeffs([u.into(), v.into(), w.into()])
    }

    pub fn from_coeffs(mut c: [BigInt; 3]) -> Result<Self, GeometryError> {
        normalize(&mut c)?;
        Ok(Line { c })
    }

    pub fn coeffs(&self) -> &[BigInt; 3] {
        &self.c
    }

    pub fn through(p: &P2Point, q: &P2Point) -> Result<Self, GeometryError> {
        Line::from_coeffs(cross(&p.c, &q.c)).map_err(|_| GeometryError::SamePoint)
    }

    pub fn contains(&self, p: &P2Point) -> bool {
        dot(&self.c, &p.c).is_zero()
    }

    pub fn meet(&self, other: &Line) -> Result<P2Point, GeometryError> {
        P2Point::from_coords(cross(&self.c, &other.c)).map_err(|_| GeometryError::SameLine)
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({ "line": json::ints(&self.c) })
    }

    pub fn from_json(v: &Value) -> Result<Self, GeometryError> {
        let c = json::parse_int_array(json::field(v, "line")?, Some(3))
            .map_err(|e| e.within("line"))?;
        let c: [BigInt; 3] = c.try_into().expect("length checked");
        Line::from_coeffs(c)
            .map_err(|_| DecodeError::new("line", "all coefficients are zero").into())
    }
}

impl fmt::Debug for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}x+{}y+{}z]", self.c[0], self.c[1], self.c[2])
    }
}

/// A conic with coefficients of `x², xy, xz, y², yz, z²` in that order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Conic {
    c: [BigInt; 6],
}

impl Conic {
    pub fn new(coeffs: [i64; 6]) -> Result<Self, GeometryError> {
        Self::from_coeffs(coeffs.map(BigInt::from))
    }

    pub fn from_coeffs(mut c: [BigInt; 6]) -> Result<Self, GeometryError> {
        normalize(&mut c)?;
        Ok(Conic { c })
    }

    pub fn coeffs(&self) -> &[BigInt; 6] {
        &self.c
    }

    pub fn eval(&self, p: &[BigInt; 3]) -> BigInt {
        let [x, y, z] = p;
        let [a, b, c, d, e, f] = &self.c;
        a * x * x + b * x * y + c * x * z + d * y * y + e * y * z + f * z * z
    }

    pub fn contains(&self, p: &P2Point) -> bool {
        self.eval(&p.c).is_zero()
    }

    /// Twice the symmetric matrix of the form.
    pub fn doubled_matrix(&self) -> linalg::Matrix {
        let [a, b, c, d, e, f] = self.c.clone();
        vec![
            vec![BigInt::from(2) * a, b.clone(), c.clone()],
            vec![b, BigInt::from(2) * d, e.clone()],
            vec![c, e, BigInt::from(2) * f],
        ]
    }

    pub fn is_smooth(&self) -> bool {
        !linalg::det(&self.doubled_matrix()).is_zero()
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({ "conic": json::ints(&self.c) })
    }

    pub fn from_json(v: &Value) -> Result<Self, GeometryError> {
        let c = json::parse_int_array(json::field(v, "conic")?, Some(6))
            .map_err(|e| e.within("conic"))?;
        let c: [BigInt; 6] = c.try_into().expect("length checked");
        Conic::from_coeffs(c)
            .map_err(|_| DecodeError::new("conic", "all coefficients are zero").into())
    }
}

impl fmt::Debug for Conic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "conic{:?}",
            self.c.iter().map(|x| x.to_string()).collect::<Vec<_>>()
        )
    }
}

fn det3(p: &[BigInt; 3], q: &[BigInt; 3], r: &[BigInt; 3]) -> BigInt {
    dot(p, &cross(q, r))
}

pub fn are_collinear(p: &P2Point, q: &P2Point, r: &P2Point) -> bool {
    det3(&p.c, &q.c, &r.c).is_zero()
}

/// Coordinate of the line `qp` in the pencil of lines through `q`.
///
/// With `m` the last index where `q` is nonzero and `i < j` the two other
/// indices, the line `qp` gets the coordinates
/// `(q_m·p_i − p_m·q_i : q_m·p_j − p_m·q_j)`, i.e. the point where it meets
/// the coordinate line `x_m = 0`. For `q = (0:0:1)` this is `(x : y)`.
pub fn project_from(q: &P2Point, p: &P2Point) -> Result<P1Point, GeometryError> {
    let m = (0..3)
        .rev()
        .find(|&i| !q.c[i].is_zero())
        .expect("nonzero point");
    let mut others = (0..3).filter(|&i| i != m);
    let (i, j) = (others.next().unwrap(), others.next().unwrap());
    let u = &q.c[m] * &p.c[i] - &p.c[m] * &q.c[i];
    let v = &q.c[m] * &p.c[j] - &p.c[m] * &q.c[j];
    P1Point::new(u, v).map_err(|_| GeometryError::SamePoint)
}

/// Intersection of a line and a conic, as points with multiplicity.
///
/// Returns two points of multiplicity 1 or one point of multiplicity 2.
pub fn intersect_line_conic(l: &Line, c: &Conic) -> Result<Vec<(P2Point, u32)>, GeometryError> {
    let basis = linalg::integer_kernel(&vec![l.c.to_vec()], 3);
    let p: [BigInt; 3] = basis[0].clone().try_into().expect("length 3");
    let q: [BigInt; 3] = basis[1].clone().try_into().expect("length 3");
    let sum: [BigInt; 3] = [&p[0] + &q[0], &p[1] + &q[1], &p[2] + &q[2]];
    let a = c.eval(&p);
    let cc = c.eval(&q);
    let b = c.eval(&sum) - &a - &cc;
    if a.is_zero() && b.is_zero() && cc.is_zero() {
        return Err(GeometryError::LineInConic);
    }
    let disc = &b * &b - BigInt::from(4) * &a * &cc;
    if disc.is_negative() {
        return Err(GeometryError::NonRationalIntersection);
    }
    let root = disc.sqrt();
    if &root * &root != disc {
        return Err(GeometryError::NonRationalIntersection);
    }
    // Roots (s : t) of a·s² + b·s·t + cc·t².
    let roots: Vec<(BigInt, BigInt)> = if !a.is_zero() {
        let two_a = BigInt::from(2) * &a;
        vec![(-&b + &root, two_a.clone()), (-&b - &root, two_a)]
    } else {
        vec![(BigInt::from(1), BigInt::zero()), (-&cc, b.clone())]
    };
    let point = |(s, t): &(BigInt, BigInt)| {
        P2Point::from_coords([
            s * &p[0] + t * &q[0],
            s * &p[1] + t * &q[1],
            s * &p[2] + t * &q[2],
        ])
    };
    let x = point(&roots[0]);
    let y = point(&roots[1]);
    match (x, y) {
        (Ok(x), Ok(y)) if x != y => {
            let mut v = vec![(x, 1), (y, 1)];
            v.sort();
            Ok(v)
        }
        (Ok(x), _) | (_, Ok(x)) => Ok(vec![(x, 2)]),
        _ => unreachable!("a nonzero binary quadratic has a root"),
    }
}

fn conic_row(p: &[BigInt; 3]) -> Vec<BigInt> {
    let [x, y, z] = p;
    vec![x * x, x * y, x * z, y * y, y * z, z * z]
}

/// Monomials of degree 3 in the order
/// `x³, x²y, x²z, xy², xyz, xz², y³, y²z, yz², z³`.
fn cubic_row(p: &[BigInt; 3]) -> Vec<BigInt> {
    let [x, y, z] = p;
    vec![
        x * x * x,
        x * x * y,
        x * x * z,
        x * y * y,
        x * y * z,
        x * z * z,
        y * y * y,
        y * y * z,
        y * z * z,
        z * z * z,
    ]
}

/// Rows of `∂/∂x`, `∂/∂y`, `∂/∂z` of the cubic monomials at `p`.
fn cubic_gradient_rows(p: &[BigInt; 3]) -> [Vec<BigInt>; 3] {
    let [x, y, z] = p;
    let n = |k: i64| BigInt::from(k);
    let o = BigInt::zero;
    [
        vec![
            n(3) * x * x,
            n(2) * x * y,
            n(2) * x * z,
            y * y,
            y * z,
            z * z,
            o(),
            o(),
            o(),
            o(),
        ],
        vec![
            o(),
            x * x,
            o(),
            n(2) * x * y,
            x * z,
            o(),
            n(3) * y * y,
            n(2) * y * z,
            z * z,
            o(),
        ],
        vec![
            o(),
            o(),
            x * x,
            o(),
            x * y,
            n(2) * x * z,
            o(),
            y * y,
            n(2) * y * z,
            n(3) * z * z,
        ],
    ]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// General position in the sense needed for blowups to be del Pezzo: no
/// three points on a line, no six on a conic, and no eight on a cubic that
/// is singular at one of them.
pub fn is_general_position(points: &[P2Point]) -> Result<bool, GeometryError> {
    if points.len() > 8 {
        return Err(GeometryError::TooManyPoints(points.len()));
    }
    for (i, p) in points.iter().enumerate() {
        if points[..i].contains(p) {
            return Err(GeometryError::DuplicatePoint(p.to_string()));
        }
    }
    let n = points.len();
    for s in subsets(n, 3) {
        if are_collinear(&points[s[0]], &points[s[1]], &points[s[2]]) {
            return Ok(false);
        }
    }
    for s in subsets(n, 6) {
        let rows: linalg::Matrix = s.iter().map(|&i| conic_row(&points[i].c)).collect();
        if linalg::rank(&rows) < 6 {
            return Ok(false);
        }
    }
    if n == 8 {
        for i in 0..8 {
            let mut rows: linalg::Matrix = (0..8)
                .filter(|&j| j != i)
                .map(|j| cubic_row(&points[j].c))
                .collect();
            rows.extend(cubic_gradient_rows(&points[i].c));
            if linalg::rank(&rows) < 10 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(x: i64, y: i64, z: i64) -> P2Point {
        P2Point::new(x, y, z).unwrap()
    }

    fn line(u: i64, v: i64, w: i64) -> Line {
        Line::new(u, v, w).unwrap()
    }

    #[test]
    fn collinearity_examples() {
        assert!(are_collinear(&p(1, 0, 0), &p(0, 1, 0), &p(1, 1, 0)));
        assert!(!are_collinear(&p(1, 0, 0), &p(0, 1, 0), &p(0, 0, 1)));
        assert!(are_collinear(&p(1, 1, 1), &p(1, 2, 3), &p(1, 3, 5)));
    }

    #[test]
    fn projection_examples() {
        let q = p(0, 0, 1);
        assert_eq!(
            project_from(&q, &p(1, 0, 1)).unwrap(),
            P1Point::new(1, 0).unwrap()
        );
        assert_eq!(
            project_from(&q, &p(0, 1, 1)).unwrap(),
            P1Point::new(0, 1).unwrap()
        );
        assert_eq!(
            project_from(&q, &p(1, 1, 1)).unwrap(),
            P1Point::new(1, 1).unwrap()
        );
        assert_eq!(project_from(&q, &p(0, 0, 5)), Err(GeometryError::SamePoint));
    }

    #[test]
    fn projection_is_constant_along_lines_through_q() {
        let q = p(1, 2, 0);
        let a = p(3, -1, 2);
        let b = P2Point::from_coords([
            BigInt::from(3 * 5 + 7),
            BigInt::from(-5 + 2 * 7),
            BigInt::from(2 * 5),
        ])
        .unwrap();
        assert_eq!(project_from(&q, &a).unwrap(), project_from(&q, &b).unwrap());
    }

    #[test]
    fn line_conic_examples() {
        let c = Conic::new([0, 0, 1, -1, 0, 0]).unwrap();
        let got = intersect_line_conic(&line(0, 1, 0), &c).unwrap();
        assert_eq!(got, vec![(p(0, 0, 1), 1), (p(1, 0, 0), 1)]);
        let got = intersect_line_conic(&line(1, 0, -1), &c).unwrap();
        assert_eq!(got, vec![(p(1, -1, 1), 1), (p(1, 1, 1), 1)]);
        let circle = Conic::new([1, 0, 0, 1, 0, -1]).unwrap();
        assert_eq!(
            intersect_line_conic(&line(1, 0, -2), &circle),
            Err(GeometryError::NonRationalIntersection)
        );
        // y² = 2x² on the line z = x... x²+y²-3z² on y = x gives 2x² = 3z².
        let c2 = Conic::new([1, 0, 0, 1, 0, -3]).unwrap();
        assert_eq!(
            intersect_line_conic(&line(1, -1, 0), &c2),
            Err(GeometryError::NonRationalIntersection)
        );
    }

    #[test]
    fn tangent_and_contained_lines() {
        let c = Conic::new([0, 0, 1, -1, 0, 0]).unwrap();
        // x = 0 is tangent to xz = y² at (0:0:1).
        let got = intersect_line_conic(&line(1, 0, 0), &c).unwrap();
        assert_eq!(got, vec![(p(0, 0, 1), 2)]);
        let pair = Conic::new([0, 1, 0, 0, 0, 0]).unwrap();
        assert_eq!(
            intersect_line_conic(&line(1, 0, 0), &pair),
            Err(GeometryError::LineInConic)
        );
    }

    #[test]
    fn smoothness() {
        assert!(Conic::new([0, 0, 1, -1, 0, 0]).unwrap().is_smooth());
        assert!(!Conic::new([0, 1, 0, 0, 0, 0]).unwrap().is_smooth());
    }

    #[test]
    fn general_position_examples() {
        let quad = [p(1, 0, 0), p(0, 1, 0), p(0, 0, 1), p(1, 1, 1)];
        assert!(is_general_position(&quad).unwrap());
        let with_line = [p(1, 0, 0), p(0, 1, 0), p(1, 1, 0), p(0, 0, 1)];
        assert!(!is_general_position(&with_line).unwrap());
        let on_conic: Vec<P2Point> = (0..6).map(|t: i64| p(t * t, t, 1)).collect();
        assert!(!is_general_position(&on_conic).unwrap());
        let dup = [p(1, 0, 0), p(2, 0, 0)];
        assert!(matches!(
            is_general_position(&dup),
            Err(GeometryError::DuplicatePoint(_))
        ));
        let many: Vec<P2Point> = (0..9).map(|t| p(1, t, t * t * t + 2)).collect();
        assert_eq!(
            is_general_position(&many),
            Err(GeometryError::TooManyPoints(9))
        );
    }

    #[test]
    fn conic_system_rank_oracle() {
        let on_conic: Vec<P2Point> = (0..6).map(|t: i64| p(t * t, t, 1)).collect();
        let rows: linalg::Matrix = on_conic.iter().map(|q| conic_row(&q.c)).collect();
        assert_eq!(linalg::rank(&rows), 5);
    }

    #[test]
    fn eight_points_on_nodal_cubic() {
        // y²z = x²(x + z), nodal at (0:0:1); rational parametrisation
        // (t² − 1, t(t² − 1), 1) for the affine chart.
        let node = p(0, 0, 1);
        let mut pts = vec![node.clone()];
        for t in [2i64, 3, -3, 4, -4, 5, 7] {
            pts.push(p(t * t - 1, t * (t * t - 1), 1));
        }
        for q in &pts {
            let [x, y, z] = q.coords();
            assert_eq!(y * y * z, x * x * (x + z));
        }
        assert!(!is_general_position(&pts).unwrap());
    }

    #[test]
    fn generic_eight_points() {
        let pts = [
            p(1, 0, 0),
            p(0, 1, 0),
            p(0, 0, 1),
            p(1, 1, 1),
            p(1, 2, 3),
            p(2, -1, 5),
            p(3, 7, -2),
            p(-4, 1, 9),
        ];
        assert!(is_general_position(&pts).unwrap());
    }

    #[test]
    fn line_through_and_meet() {
        let l = Line::through(&p(1, 0, 0), &p(0, 1, 0)).unwrap();
        assert_eq!(l, line(0, 0, 1));
        assert_eq!(l.meet(&line(1, -1, 0)).unwrap(), p(1, 1, 0));
        assert_eq!(
            Line::through(&p(1, 1, 1), &p(2, 2, 2)),
            Err(GeometryError::SamePoint)
        );
    }

    #[test]
    fn json_accepts_unreduced() {
        let l = Line::from_json(&serde_json::json!({"line": [-2, 4, 0]})).unwrap();
        assert_eq!(l.to_json(), serde_json::json!({"line": [1, -2, 0]}));
        let c = Conic::from_json(&serde_json::json!({"conic": [0, 0, 2, -2, 0, 0]})).unwrap();
        assert_eq!(
            c.to_json(),
            serde_json::json!({"conic": [0, 0, 1, -1, 0, 0]})
        );
        assert!(P2Point::from_json(&serde_json::json!([0, 0, 0])).is_err());
    }

    type M3 = [[i64; 3]; 3];

    fn unimodular() -> impl Strategy<Value = M3> {
        // Products of elementary matrices.
        prop::collection::vec((0usize..3, 0usize..3, -3i64..4), 1..6).prop_map(|ops| {
            let mut m = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
            for (i, j, k) in ops {
                if i != j {
                    for c in 0..3 {
                        m[i][c] += k * m[j][c];
                    }
                }
            }
            m
        })
    }

    fn apply(m: &M3, q: &P2Point) -> P2Point {
        let c = q.coords();
        let row = |r: usize| -> BigInt { (0..3).map(|k| BigInt::from(m[r][k]) * &c[k]).sum() };
        P2Point::from_coords([row(0), row(1), row(2)]).unwrap()
    }

    fn arb_p2() -> impl Strategy<Value = P2Point> {
        (-6i64..7, -6i64..7, -6i64..7)
            .prop_filter("nonzero", |&(a, b, c)| (a, b, c) != (0, 0, 0))
            .prop_map(|(a, b, c)| p(a, b, c))
    }

    proptest! {
        #[test]
        fn collinearity_invariance(a in arb_p2(), b in arb_p2(), c in arb_p2(), m in unimodular()) {
            let base = are_collinear(&a, &b, &c);
            prop_assert_eq!(are_collinear(&b, &a, &c), base);
            prop_assert_eq!(are_collinear(&c, &b, &a), base);
            prop_assert_eq!(are_collinear(&apply(&m, &a), &apply(&m, &b), &apply(&m, &c)), base);
        }

        #[test]
        fn general_position_invariance(
            pts in prop::collection::btree_set(arb_p2(), 4..7),
            m in unimodular(),
        ) {
            let pts: Vec<P2Point> = pts.into_iter().collect();
            let moved: Vec<P2Point> = pts.iter().map(|q| apply(&m, q)).collect();
            prop_assert_eq!(is_general_position(&pts).unwrap(), is_general_position(&moved).unwrap());
        }

        #[test]
        fn intersection_points_lie_on_both(a in arb_p2(), b in arb_p2(), u in -4i64..5, v in -4i64..5, w in -4i64..5) {
            prop_assume!(a != b);
            prop_assume!((u, v, w) != (0, 0, 0));
            // Conic through a and b: product of the line ab and another line.
            let l = Line::through(&a, &b).unwrap();
            let other = line(u, v, w);
            prop_assume!(l != other);
            let [l0, l1, l2] = l.coeffs().clone();
            let [m0, m1, m2] = other.coeffs().clone();
            let c = Conic::from_coeffs([
                &l0 * &m0, &l0 * &m1 + &l1 * &m0, &l0 * &m2 + &l2 * &m0,
                &l1 * &m1, &l1 * &m2 + &l2 * &m1, &l2 * &m2,
            ]).unwrap();
            prop_assert_eq!(intersect_line_conic(&l, &c), Err(GeometryError::LineInConic));
            let cross_line = line(1, 2, 3);
            if let Ok(pts) = intersect_line_conic(&cross_line, &c) {
                let total: u32 = pts.iter().map(|x| x.1).sum();
                prop_assert_eq!(total, 2);
                for (q, _) in pts {
                    prop_assert!(cross_line.contains(&q));
                    prop_assert!(c.contains(&q));
                }
            }
        }
    }
}
