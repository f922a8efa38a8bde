//! Diophantine obstructions for conic bundles with invariant rank 2.

use serde_json::{json, Value};

/// A solution `(l, a, b, K²)` of `a(l + 2b) = l` with `a < 0` and
/// `K² = (2b − l)/a`.
///
/// If an orbit of `l` disjoint (−1)-curves with sum `D` exists, then `D` is
/// invariant, so `D = aK + bf`, and `D² = D·K = −l` forces these equations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Obstruction {
    pub l: i64,
    pub a: i64,
    pub b: i64,
    pub k2: i64,
}

impl Obstruction {
    pub fn to_json(&self) -> Value {
        json!({ "l": self.l, "a": self.a, "b": self.b, "K2": self.k2 })
    }
}

/// Every solution for orbit sizes `l` in `orbit_sizes`, sorted.
pub fn obstruction_table(orbit_sizes: &[i64]) -> Vec<Obstruction> {
    let mut out = Vec::new();
    for &l in orbit_sizes {
        if l <= 0 {
            continue;
        }
        // l + 2b = l/a forces a to divide l.
        for a in (-l..0).filter(|a| l % a == 0) {
            let twice_b = l / a - l;
            if twice_b % 2 != 0 {
                continue;
            }
            let b = twice_b / 2;
            if (2 * b - l) % a == 0 {
                out.push(Obstruction {
                    l,
                    a,
                    b,
                    k2: (2 * b - l) / a,
                });
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Solutions compatible with `k` singular fibers, i.e. `K² = 8 − k`.
///
/// An empty result certifies that a group of order 2 or 4 with invariant
/// rank 2 gives a minimal pair.
pub fn minimality_obstruction_solver(k: i64, orbit_sizes: &[i64]) -> Vec<Obstruction> {
    obstruction_table(orbit_sizes)
        .into_iter()
        .filter(|o| o.k2 == 8 - k)
        .collect()
}

/// Another conic-bundle structure `C = −aK + bf` with `C² = 0`,
/// `−K·C = 2` and `C ≠ f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SecondFibration {
    Solution {
        a: i64,
        b: i64,
    },
    /// `K² = 8`: the surface is `P¹ × P¹` and the second ruling is not in
    /// `ZK ⊕ Zf`.
    P1xP1,
    None,
}

impl SecondFibration {
    pub fn to_json(&self) -> Value {
        match self {
            SecondFibration::Solution { a, b } => json!({ "kind": "solution", "a": a, "b": b }),
            SecondFibration::P1xP1 => json!({ "kind": "p1xp1" }),
            SecondFibration::None => json!({ "kind": "none" }),
        }
    }
}

/// From `C² = a(aK² + 4b) = 0` with `a ≠ 0` and `−K·C = aK² + 2b = 2`:
/// `b = −1` and `a·K² = 4`.
pub fn second_fibration_solver(k2: i64) -> SecondFibration {
    if k2 == 8 {
        return SecondFibration::P1xP1;
    }
    if k2 > 0 && 4 % k2 == 0 {
        SecondFibration::Solution { a: 4 / k2, b: -1 }
    } else {
        SecondFibration::None
    }
}
