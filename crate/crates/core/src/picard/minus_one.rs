//! Enumeration of (−1)-classes.
//!
//! A class `dL − Σ m_i E_i` satisfies `D² = D·K = −1` exactly when
//!
//! ```text
//! Σ m_i = 3d − 1,    Σ m_i² = d² + 1.
//! ```
//!
//! Padding with zeros embeds the solutions for `r` points into those for
//! eight points, so it suffices to bound `d` for `r = 8`. Cauchy–Schwarz
//! gives `(3d − 1)² ≤ 8(d² + 1)`, i.e. `(d − 7)(d + 1) ≤ 0`. Equality at
//! `d = 7` or `d = −1` would force all eight `m_i` to equal `20/8` or `−1/2`,
//! which are not integers, hence `0 ≤ d ≤ 6` ([`MAX_DEGREE`]).
//!
//! The search enumerates non-increasing multiplicity tuples with the same
//! Cauchy–Schwarz pruning on every suffix, then expands each tuple into its
//! distinct permutations.

use std::collections::BTreeSet;

use super::{BlowupLattice, DivisorClass, LatticeError};
use crate::Exec;

/// Largest coefficient of `L` in a (−1)-class when `r ≤ 8`.
pub const MAX_DEGREE: i64 = 6;

/// Largest `r` for which the search is supported.
const MAX_SEARCH_R: usize = 8;

pub fn enumerate_minus_one_classes(
    lattice: &BlowupLattice,
) -> Result<Vec<DivisorClass>, LatticeError> {
    enumerate_minus_one_classes_with(lattice, Exec::default())
}

/// All (−1)-classes of `lattice`, in the natural class order.
pub fn enumerate_minus_one_classes_with(
    lattice: &BlowupLattice,
    exec: Exec,
) -> Result<Vec<DivisorClass>, LatticeError> {
    let r = lattice.r();
    if r > MAX_SEARCH_R {
        return Err(LatticeError::UnsupportedRank(r));
    }
    if r == 0 {
        return Ok(Vec::new());
    }
    let seeds: Vec<(i64, i64)> = (0..=MAX_DEGREE)
        .flat_map(|d| {
            let q = d * d + 1;
            let top = isqrt(q);
            (-top..=top).map(move |v| (d, v))
        })
        .collect();
    let found = exec.flat_map(&seeds, |&(d, first)| {
        let (sum, sq) = (3 * d - 1, d * d + 1);
        let mut tuples = Vec::new();
        if feasible(r - 1, sum - first, sq - first * first) {
            let mut cur = vec![first];
            sorted_tuples(
                r - 1,
                sum - first,
                sq - first * first,
                first,
                &mut cur,
                &mut tuples,
            );
        }
        tuples
            .into_iter()
            .flat_map(|t| permutations(&t))
            .map(|m| {
                let mut v = Vec::with_capacity(r + 1);
                v.push(d);
                v.extend(m.into_iter().map(|x| -x));
                DivisorClass::new(v)
            })
            .collect::<Vec<_>>()
    });
    let set: BTreeSet<DivisorClass> = found.into_iter().collect();
    Ok(set.into_iter().collect())
}

fn isqrt(n: i64) -> i64 {
    let mut s = (n as f64).sqrt() as i64;
    while s * s > n {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= n {
        s += 1;
    }
    s
}

/// Whether `n` integers can have sum `sum` and sum of squares `sq`, as far
/// as Cauchy–Schwarz can tell.
fn feasible(n: usize, sum: i64, sq: i64) -> bool {
    if sq < 0 {
        return false;
    }
    if n == 0 {
        return sum == 0 && sq == 0;
    }
    sum * sum <= n as i64 * sq
}

fn sorted_tuples(
    n: usize,
    sum: i64,
    sq: i64,
    max: i64,
    cur: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) {
    if n == 0 {
        if sum == 0 && sq == 0 {
            out.push(cur.clone());
        }
        return;
    }
    let top = isqrt(sq).min(max);
    for v in (-isqrt(sq)..=top).rev() {
        if sum - v > (n as i64 - 1) * v {
            // Remaining entries are at most v.
            break;
        }
        if feasible(n - 1, sum - v, sq - v * v) {
            cur.push(v);
            sorted_tuples(n - 1, sum - v, sq - v * v, v, cur, out);
            cur.pop();
        }
    }
}

/// Distinct permutations of a multiset.
fn permutations(t: &[i64]) -> Vec<Vec<i64>> {
    let mut cur = t.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (0..cur.len().saturating_sub(1))
            .rev()
            .find(|&i| cur[i] < cur[i + 1])
        else {
            return out;
        };
        let j = (i + 1..cur.len()).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
}
