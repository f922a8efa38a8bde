//! Exact integer linear algebra: rank, saturated kernels and Hermite normal
//! form, all by unimodular row operations over `BigInt`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub type Matrix = Vec<Vec<BigInt>>;

pub fn from_i64(rows: &[Vec<i64>]) -> Matrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

/// Brings the first `width` columns of `rows` to row echelon form using only
/// unimodular row operations (the remaining columns ride along). Returns the
/// pivot columns. With `reduce_above`, pivots are made positive and entries
/// above each pivot are reduced into `[0, pivot)`, which yields the Hermite
/// normal form.
fn echelon(rows: &mut Matrix, width: usize, reduce_above: bool) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..width {
        if top == rows.len() {
            break;
        }
        loop {
            let best = (top..rows.len())
                .filter(|&i| !rows[i][col].is_zero())
                .min_by(|&i, &j| rows[i][col].abs().cmp(&rows[j][col].abs()));
            let Some(best) = best else { break };
            rows.swap(top, best);
            let mut done = true;
            for i in top + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].div_floor(&rows[top][col]);
                let pivot_row = rows[top].clone();
                for (x, p) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * p;
                }
                if !rows[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows[top][col].is_zero() {
            continue;
        }
        if reduce_above {
            if rows[top][col].is_negative() {
                for x in rows[top].iter_mut() {
                    *x = -&*x;
                }
            }
            let pivot_row = rows[top].clone();
            for i in 0..top {
                let q = rows[i][col].div_floor(&pivot_row[col]);
                if !q.is_zero() {
                    for (x, p) in rows[i].iter_mut().zip(&pivot_row) {
                        *x -= &q * p;
                    }
                }
            }
        }
        pivots.push(col);
        top += 1;
    }
    pivots
}

/// Rank over Q.
pub fn rank(rows: &Matrix) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let width = rows[0].len();
    let mut m = rows.clone();
    echelon(&mut m, width, false).len()
}

/// Z-basis of `{v in Z^ncols : A v = 0}`.
///
/// The result is saturated: any integer vector in the rational kernel is an
/// integer combination of the returned vectors.
pub fn integer_kernel(rows: &Matrix, ncols: usize) -> Matrix {
    let m = rows.len();
    let mut aug: Matrix = (0..ncols)
        .map(|j| {
            let mut r: Vec<BigInt> = rows.iter().map(|row| row[j].clone()).collect();
            r.extend((0..ncols).map(|k| BigInt::from(u8::from(k == j))));
            r
        })
        .collect();
    let pivots = echelon(&mut aug, m, false);
    let mut kernel: Matrix = aug
        .into_iter()
        .skip(pivots.len())
        .map(|r| r[m..].to_vec())
        .collect();
    let width = ncols;
    echelon(&mut kernel, width, true);
    kernel.retain(|r| r.iter().any(|x| !x.is_zero()));
    kernel
}

/// Row Hermite normal form of the lattice spanned by `vectors`, zero rows
/// removed. Two families span the same lattice iff their forms are equal.
pub fn hermite(vectors: &Matrix) -> Matrix {
    if vectors.is_empty() {
        return Vec::new();
    }
    let width = vectors[0].len();
    let mut m = vectors.clone();
    echelon(&mut m, width, true);
    m.retain(|r| r.iter().any(|x| !x.is_zero()));
    m
}

/// True iff the lattice spanned by `vectors` equals its rational span
/// intersected with `Z^n`.
pub fn is_saturated(vectors: &Matrix) -> bool {
    let h = hermite(vectors);
    if h.is_empty() {
        return true;
    }
    let n = h[0].len();
    let orth = integer_kernel(&h, n);
    let sat = integer_kernel(&orth, n);
    hermite(&sat) == h
}

/// Determinant of a square matrix (fraction-free Bareiss elimination).
pub fn det(rows: &Matrix) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut m = rows.clone();
    let mut sign = 1i8;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}
