//! The de Jonquières involution of the plane blown up at a centre `q` and
//! four further points, exchanging the components of the four singular
//! fibers of the pencil through `q`.

use super::BundleError;
use crate::picard::{validate_action, FiberedMarking, IntMatrix, Isometry};

/// The involution in the basis `(E_q, E_1, E_2, E_3, E_4, L)`.
pub fn jonquieres_involution_matrix() -> IntMatrix {
    IntMatrix::from_rows(vec![
        vec![-1, -1, -1, -1, -1, -2],
        vec![-1, -1, 0, 0, 0, -1],
        vec![-1, 0, -1, 0, 0, -1],
        vec![-1, 0, 0, -1, 0, -1],
        vec![-1, 0, 0, 0, -1, -1],
        vec![2, 1, 1, 1, 1, 3],
    ])
    .expect("square")
}

/// Position in `(L, E_q, E_1..E_4)` of the `i`-th vector of
/// `(E_q, E_1..E_4, L)`.
fn to_marking_index(i: usize) -> usize {
    if i == 5 {
        0
    } else {
        i + 1
    }
}

/// The same involution on a marking with four singular fibers, validated
/// as an isometry fixing `K` and `f`.
pub fn jonquieres_involution(marking: &FiberedMarking) -> Result<Isometry, BundleError> {
    if marking.k() != 4 {
        return Err(BundleError::InvariantViolation(format!(
            "the involution needs 4 singular fibers, the marking has {}",
            marking.k()
        )));
    }
    let src = jonquieres_involution_matrix();
    let mut rows = vec![vec![0; 6]; 6];
    for (i, row) in src.rows().iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            rows[to_marking_index(i)][to_marking_index(j)] = x;
        }
    }
    let sigma = validate_action(marking.lattice(), IntMatrix::from_rows(rows)?)?;
    let f = marking.fiber();
    if sigma.apply(&f)? != f {
        return Err(BundleError::InvariantViolation(
            "σ moves the fiber class".to_string(),
        ));
    }
    Ok(sigma)
}
