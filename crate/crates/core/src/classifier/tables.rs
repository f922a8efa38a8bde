//! Closed vocabularies: the degree-2 automorphism table and the maximal
//! cubic normal forms.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// One row of the table of degree-2 del Pezzo surfaces whose automorphism
/// group has all its fixed points on exceptional curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuarticTableRow {
    pub row: u8,
    pub order: u32,
    pub structure: &'static str,
    /// Double cover equation `W² = F(X, Y, Z)`.
    pub equation: &'static str,
    pub params: &'static [&'static str],
    pub restrictions: &'static str,
}

pub const QUARTIC_TABLE: [QuarticTableRow; 8] = [
    QuarticTableRow {
        row: 1,
        order: 336,
        structure: "2×L2(7)",
        equation: "W^2=X^3Y+Y^3Z+Z^3X",
        params: &[],
        restrictions: "",
    },
    QuarticTableRow {
        row: 2,
        order: 192,
        structure: "2×(4²:S3)",
        equation: "W^2=X^4+Y^4+Z^4",
        params: &[],
        restrictions: "",
    },
    QuarticTableRow {
        row: 3,
        order: 96,
        structure: "2×4A4",
        equation: "W^2=X^4+aX^2Y^2+Y^4+Z^4",
        params: &["a"],
        restrictions: "a^2=-12",
    },
    QuarticTableRow {
        row: 4,
        order: 48,
        structure: "2×S4",
        equation: "W^2=X^4+Y^4+Z^4+a(X^2Y^2+X^2Z^2+Y^2Z^2)",
        params: &["a"],
        restrictions: "a≠(-1±√-7)/2",
    },
    QuarticTableRow {
        row: 5,
        order: 32,
        structure: "2×AS16",
        equation: "W^2=X^4+aX^2Y^2+Y^4+Z^4",
        params: &["a"],
        restrictions: "a^2≠0,-12,4,36",
    },
    QuarticTableRow {
        row: 6,
        order: 16,
        structure: "2×D8",
        equation: "W^2=X^4+Y^4+Z^4+aX^2Y^2+bZ^2XY",
        params: &["a", "b"],
        restrictions: "a,b≠0",
    },
    QuarticTableRow {
        row: 7,
        order: 12,
        structure: "2×S3",
        equation: "W^2=Z^4+aZ^2XY+Z(X^3+Y^3)+bX^2Y^2",
        params: &["a", "b"],
        restrictions: "",
    },
    QuarticTableRow {
        row: 8,
        order: 8,
        structure: "2³",
        equation: "W^2=X^4+Y^4+Z^4+aX^2Y^2+bX^2Z^2+cY^2Z^2",
        params: &["a", "b", "c"],
        restrictions: "a,b,c≠0 distinct",
    },
];

pub(crate) fn find_row(order: u32, structure: &str) -> Option<&'static QuarticTableRow> {
    QUARTIC_TABLE
        .iter()
        .find(|r| r.order == order && r.structure == structure)
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact check of the row restrictions on the supplied rational parameters.
/// Parameters that are not supplied are not constrained.
pub(crate) fn row_restrictions_hold(
    row: &QuarticTableRow,
    params: &BTreeMap<String, BigRational>,
) -> bool {
    let get = |name: &str| params.get(name);
    match row.row {
        // a² = −12 has no rational solution.
        3 => get("a").is_none(),
        // (−1 ± √−7)/2 is not rational.
        4 => true,
        5 => get("a").is_none_or(|a| {
            let a2 = a * a;
            ![0, -12, 4, 36].iter().any(|&v| a2 == q(v))
        }),
        6 => ["a", "b"]
            .iter()
            .all(|n| get(n).is_none_or(|x| !x.is_zero())),
        8 => {
            let vals: Vec<&BigRational> = ["a", "b", "c"].iter().filter_map(|n| get(n)).collect();
            vals.iter().all(|x| !x.is_zero())
                && vals
                    .iter()
                    .enumerate()
                    .all(|(i, x)| vals[i + 1..].iter().all(|y| x != y))
        }
        _ => true,
    }
}

/// j-invariant of the plane cubic `X³ + Y³ + Z³ + αXYZ`, or `None` when the
/// cubic is singular (`α³ = −27`).
pub fn cubic_j_invariant(alpha: &BigRational) -> Option<BigRational> {
    let a3 = alpha * alpha * alpha;
    let den = &a3 + q(27);
    if den.is_zero() {
        return None;
    }
    let t = q(216) - &a3;
    Some(&a3 * &t * &t * &t / (&den * &den * &den))
}

/// Whether `W³ + W(X² + Y² + Z²) + βXYZ` is smooth with automorphism group
/// `S_4`: `β ≠ 0`, `9β³ ≠ 8β` and `8β³ ≠ −1`.
pub(crate) fn s4_cubic_admissible(beta: &BigRational) -> bool {
    let b3 = beta * beta * beta;
    !beta.is_zero() && q(9) * &b3 != q(8) * beta && q(8) * &b3 != -BigRational::one()
}
