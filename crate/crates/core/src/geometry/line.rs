//! The projective line: points and Möbius maps.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::Value;

use super::{normalize, GeometryError};
use crate::json::{self, DecodeError};

/// A point `(a : b)` of P¹ with affine coordinate `a/b`; `(1 : 0)` is ∞.
///
/// Points order by affine value with ∞ last.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct P1Point {
    a: BigInt,
    b: BigInt,
}

impl P1Point {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Result<Self, GeometryError> {
        let mut v = [a.into(), b.into()];
        normalize(&mut v)?;
        let [a, b] = v;
        Ok(P1Point { a, b })
    }

    /// The finite point with affine coordinate `n`.
    pub fn finite(n: impl Into<BigInt>) -> Self {
        P1Point {
            a: n.into(),
            b: BigInt::one(),
        }
        .renormalized()
    }

    pub fn rational(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, GeometryError> {
        let den = den.into();
        if den.is_zero() {
            return Err(GeometryError::ZeroVector);
        }
        P1Point::new(num, den)
    }

    pub fn infinity() -> Self {
        P1Point {
            a: BigInt::one(),
            b: BigInt::zero(),
        }
    }

    fn renormalized(self) -> Self {
        P1Point::new(self.a, self.b).expect("nonzero by construction")
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn is_infinity(&self) -> bool {
        self.b.is_zero()
    }

    /// Affine coordinate, `None` at ∞.
    pub fn value(&self) -> Option<BigRational> {
        (!self.b.is_zero()).then(|| BigRational::new(self.a.clone(), self.b.clone()))
    }

    /// Value at `(x : y)` of the linear form `b·x − a·y` vanishing here.
    pub fn linear_form_at(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.b * x - &self.a * y
    }

    pub fn to_json(&self) -> Value {
        Value::Array(vec![json::int(&self.a), json::int(&self.b)])
    }

    /// Accepts `[a, b]` in any scaling.
    pub fn from_json(v: &Value) -> Result<Self, GeometryError> {
        let c = json::parse_int_array(v, Some(2))?;
        let [a, b]: [BigInt; 2] = c.try_into().expect("length checked");
        P1Point::new(a, b).map_err(|_| {
            GeometryError::Decode(DecodeError::new("", "point (0 : 0) is not allowed"))
        })
    }
}

impl Ord for P1Point {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.value(), other.value()) {
            (Some(x), Some(y)) => x.cmp(&y),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        }
    }
}

impl PartialOrd for P1Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            None => write!(f, "∞"),
            Some(v) => write!(f, "{v}"),
        }
    }
}

impl fmt::Debug for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{})", self.a, self.b)
    }
}

impl From<i64> for P1Point {
    fn from(n: i64) -> Self {
        P1Point::finite(n)
    }
}

/// An element of PGL(2, Q): `(x : y) ↦ (p·x + q·y : r·x + s·y)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mobius {
    m: [BigInt; 4],
}

impl Mobius {
    pub fn new(
        p: impl Into<BigInt>,
        q: impl Into<BigInt>,
        r: impl Into<BigInt>,
        s: impl Into<BigInt>,
    ) -> Result<Self, GeometryError> {
        let mut m = [p.into(), q.into(), r.into(), s.into()];
        if (&m[0] * &m[3] - &m[1] * &m[2]).is_zero() {
            return Err(GeometryError::SingularMobius);
        }
        normalize(&mut m)?;
        Ok(Mobius { m })
    }

    pub fn identity() -> Self {
        Mobius::new(1, 0, 0, 1).expect("invertible")
    }

    pub fn entries(&self) -> &[BigInt; 4] {
        &self.m
    }

    pub fn det(&self) -> BigInt {
        &self.m[0] * &self.m[3] - &self.m[1] * &self.m[2]
    }

    pub fn apply(&self, x: &P1Point) -> P1Point {
        let [p, q, r, s] = &self.m;
        P1Point::new(p * &x.a + q * &x.b, r * &x.a + s * &x.b).expect("invertible map")
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Mobius) -> Mobius {
        let [a, b, c, d] = &self.m;
        let [e, f, g, h] = &other.m;
        Mobius::new(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
            .expect("product of invertible maps")
    }

    pub fn inverse(&self) -> Mobius {
        let [p, q, r, s] = &self.m;
        Mobius::new(s.clone(), -q, -r, p.clone()).expect("invertible")
    }

    pub fn is_identity(&self) -> bool {
        *self == Mobius::identity()
    }

    pub fn to_json(&self) -> Value {
        let [p, q, r, s] = &self.m;
        Value::Array(vec![
            Value::Array(vec![json::int(p), json::int(q)]),
            Value::Array(vec![json::int(r), json::int(s)]),
        ])
    }
}

impl fmt::Debug for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [p, q, r, s] = &self.m;
        write!(f, "[[{p},{q}],[{r},{s}]]")
    }
}

/// Map sending `(z1, z2, z3)` to `(0, 1, ∞)` in coordinates.
fn to_standard(z: [&P1Point; 3]) -> [BigInt; 4] {
    let [z1, z2, z3] = z;
    let l3 = z3.linear_form_at(&z2.a, &z2.b);
    let l1 = z1.linear_form_at(&z2.a, &z2.b);
    [&l3 * &z1.b, -(&l3 * &z1.a), &l1 * &z3.b, -(&l1 * &z3.a)]
}

fn distinct(t: [&P1Point; 3]) -> bool {
    t[0] != t[1] && t[1] != t[2] && t[0] != t[2]
}

/// The unique Möbius map sending `src[i]` to `dst[i]`.
pub fn mobius_from_triples(
    src: [&P1Point; 3],
    dst: [&P1Point; 3],
) -> Result<Mobius, GeometryError> {
    if !distinct(src) || !distinct(dst) {
        return Err(GeometryError::DegenerateTriple);
    }
    let [a, b, c, d] = to_standard(src);
    let [p, q, r, s] = to_standard(dst);
    let (p, q, r, s) = (s, -q, -r, p);
    Mobius::new(
        &p * &a + &q * &c,
        &p * &b + &q * &d,
        &r * &a + &s * &c,
        &r * &b + &s * &d,
    )
}
