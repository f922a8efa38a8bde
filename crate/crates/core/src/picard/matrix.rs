use std::fmt;

use serde_json::Value;

use super::{DivisorClass, LatticeError};
use crate::json::{self, DecodeError};

/// Square integer matrix acting on column vectors.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    n: usize,
    rows: Vec<Vec<i64>>,
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        IntMatrix { n, rows }
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        let n = rows.len();
        for r in &rows {
            if r.len() != n {
                return Err(LatticeError::DimensionMismatch {
                    expected: n,
                    found: r.len(),
                });
            }
        }
        Ok(IntMatrix { n, rows })
    }

    /// Matrix whose `j`-th column is `images[j]`.
    pub fn from_columns(images: &[DivisorClass]) -> Result<Self, LatticeError> {
        let n = images.len();
        let mut rows = vec![vec![0; n]; n];
        for (j, c) in images.iter().enumerate() {
            if c.len() != n {
                return Err(LatticeError::DimensionMismatch {
                    expected: n,
                    found: c.len(),
                });
            }
            for i in 0..n {
                rows[i][j] = c[i];
            }
        }
        Ok(IntMatrix { n, rows })
    }

    /// Permutation matrix sending basis vector `j` to `perm[j]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut rows = vec![vec![0; n]; n];
        for (j, &i) in perm.iter().enumerate() {
            rows[i][j] = 1;
        }
        IntMatrix { n, rows }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> DivisorClass {
        DivisorClass::new(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn is_identity(&self) -> bool {
        *self == IntMatrix::identity(self.n)
    }

    pub fn transpose(&self) -> IntMatrix {
        let rows = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.rows[j][i]).collect())
            .collect();
        IntMatrix { n: self.n, rows }
    }

    pub fn apply(&self, v: &DivisorClass) -> Result<DivisorClass, LatticeError> {
        if v.len() != self.n {
            return Err(LatticeError::DimensionMismatch {
                expected: self.n,
                found: v.len(),
            });
        }
        let mut out = Vec::with_capacity(self.n);
        for r in &self.rows {
            let mut s: i64 = 0;
            for (a, b) in r.iter().zip(v.coeffs()) {
                s = a
                    .checked_mul(*b)
                    .and_then(|p| s.checked_add(p))
                    .ok_or(LatticeError::Overflow)?;
            }
            out.push(s);
        }
        Ok(DivisorClass::new(out))
    }

    /// `self · other`.
    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, LatticeError> {
        if other.n != self.n {
            return Err(LatticeError::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let mut rows = vec![vec![0i64; self.n]; self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                let mut s: i64 = 0;
                for k in 0..self.n {
                    s = self.rows[i][k]
                        .checked_mul(other.rows[k][j])
                        .and_then(|p| s.checked_add(p))
                        .ok_or(LatticeError::Overflow)?;
                }
                rows[i][j] = s;
            }
        }
        Ok(IntMatrix { n: self.n, rows })
    }

    /// `self − I`.
    pub fn minus_identity(&self) -> IntMatrix {
        let mut m = self.clone();
        for i in 0..self.n {
            m.rows[i][i] -= 1;
        }
        m
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| Value::Array(r.iter().map(|&x| Value::from(x)).collect()))
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self, DecodeError> {
        let rows = json::array(v)?
            .iter()
            .enumerate()
            .map(|(i, r)| json::parse_i64_array(r).map_err(|e| e.within(&format!("[{i}]"))))
            .collect::<Result<Vec<_>, _>>()?;
        IntMatrix::from_rows(rows).map_err(|e| DecodeError::new("", e.to_string()))
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_are_images() {
        let m = IntMatrix::from_rows(vec![vec![1, 2], vec![3, 4]]).unwrap();
        let e0 = DivisorClass::basis(2, 0);
        assert_eq!(m.apply(&e0).unwrap(), DivisorClass::new(vec![1, 3]));
        assert_eq!(m.column(1), DivisorClass::new(vec![2, 4]));
        assert_eq!(
            IntMatrix::from_columns(&[m.column(0), m.column(1)]).unwrap(),
            m
        );
    }

    #[test]
    fn permutation_and_products() {
        let p = IntMatrix::permutation(&[1, 2, 0]);
        assert_eq!(
            p.apply(&DivisorClass::basis(3, 0)).unwrap(),
            DivisorClass::basis(3, 1)
        );
        let p3 = p.mul(&p).unwrap().mul(&p).unwrap();
        assert!(p3.is_identity());
        assert_eq!(p.transpose().mul(&p).unwrap(), IntMatrix::identity(3));
    }

    #[test]
    fn overflow_is_reported() {
        let m = IntMatrix::from_rows(vec![vec![i64::MAX, 1], vec![0, 1]]).unwrap();
        assert_eq!(m.mul(&m), Err(LatticeError::Overflow));
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(IntMatrix::from_rows(vec![vec![1, 2], vec![3]]).is_err());
        assert!(IntMatrix::from_json(&serde_json::json!([[1, 0], [0]])).is_err());
    }
}
