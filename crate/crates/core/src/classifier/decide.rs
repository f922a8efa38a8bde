//! The decision tree.

use log::debug;
use num_traits::Signed;

use super::descriptor::{CubicFamily, DelPezzoDescriptor, FixedPointReport, GSurfaceDescriptor};
use super::tables::{cubic_j_invariant, s4_cubic_admissible};
use super::verdict::{Family, Invariant, Stage, Step, StepKind, Verdict};
use super::{invalid, ClassifyError};
use crate::bundles::{
    is_del_pezzo_bundle, DelPezzoVerdict, ExceptionalBundleModel, Z22BundleModel,
};
use crate::linalg;
use crate::picard::{DivisorClass, LatticeAction, MoriVerdict};
use crate::square_class::{delta_canonical_form, triplet_canonical_form};

/// Longest reduction chain the decision tree can produce.
pub const MAX_CHAIN: usize = 8;

pub fn classify(d: &GSurfaceDescriptor) -> Result<Verdict, ClassifyError> {
    let v = match d {
        GSurfaceDescriptor::DelPezzo(dp) => del_pezzo(dp)?,
        GSurfaceDescriptor::Hirzebruch(h) => match h.n {
            0 => Verdict::maximal(Family::new(2), Invariant::Point),
            1 => Verdict::maximal(Family::new(1), Invariant::Point).after(Step {
                kind: StepKind::Contract,
                from: f1(),
                to: Stage::del_pezzo(9),
                reason: "contract the invariant (−1)-section of F1".to_string(),
            }),
            n => Verdict::maximal(Family::new(4), Invariant::HirzebruchIndex(n)),
        },
        GSurfaceDescriptor::Exceptional(m) => exceptional(m)?,
        GSurfaceDescriptor::Z22(m) => z22(m)?,
    };
    check_chain(&v)?;
    debug!("classified as {v}");
    Ok(v)
}

/// The canonical datum of a maximal family.
pub fn conjugacy_invariant(v: &Verdict) -> Result<Invariant, ClassifyError> {
    match v {
        Verdict::Maximal { invariant, .. } => Ok(invariant.clone()),
        _ => Err(ClassifyError::NotApplicable),
    }
}

fn f1() -> Stage {
    Stage::new("F1", 8, 2)
}

fn contract(from: Stage, to: Stage, reason: impl Into<String>) -> Step {
    Step {
        kind: StepKind::Contract,
        from,
        to,
        reason: reason.into(),
    }
}

fn blow_up(from: u8, reason: impl Into<String>) -> Step {
    Step {
        kind: StepKind::BlowUp,
        from: Stage::del_pezzo(from),
        to: Stage::del_pezzo(from - 1),
        reason: reason.into(),
    }
}

fn del_pezzo(d: &DelPezzoDescriptor) -> Result<Verdict, ClassifyError> {
    let tag = || Invariant::IsoTag(d.iso_tag.clone());
    Ok(match d.degree {
        9 => Verdict::maximal(Family::new(1), Invariant::Point),
        8 if d.p1xp1 => Verdict::maximal(Family::new(2), Invariant::Point),
        8 => Verdict::maximal(Family::new(1), Invariant::Point).after(contract(
            f1(),
            Stage::del_pezzo(9),
            "contract the invariant exceptional curve of F1",
        )),
        7 => Verdict::maximal(Family::new(2), Invariant::Point).after(contract(
            Stage::del_pezzo(7),
            Stage::p1xp1(),
            "the pair is not minimal: the line through the two blown-up points is an invariant (−1)-curve",
        )),
        6 => Verdict::maximal(Family::new(3), Invariant::Point),
        5 => Verdict::maximal(Family::new(6), Invariant::Point),
        4 => Verdict::maximal(Family::new(7), tag()),
        3 => cubic(d)?,
        2 => quartic(d)?,
        _ => Verdict::maximal(Family::new(10), tag()),
    })
}

fn cubic(d: &DelPezzoDescriptor) -> Result<Verdict, ClassifyError> {
    let action = d
        .action
        .as_ref()
        .ok_or_else(|| invalid("a cubic surface descriptor needs its action on Pic(S)"))?;
    let m = action.is_pair_minimal()?;
    if let Some(witness) = m.witness {
        if let Some(f) = &d.cubic_family {
            return Err(invalid(format!(
                "cubic family {} gives a minimal pair but the action is not minimal",
                f.index()
            )));
        }
        return contract_cubic(action, &witness);
    }
    let inv = action.invariant_sublattice()?;
    if inv.rank != 1 {
        return Err(invalid(format!(
            "minimal action on a cubic with invariant rank {}",
            inv.rank
        )));
    }
    let off = d.fixed_points == Some(FixedPointReport::OffExceptionalCurves);
    match &d.cubic_family {
        Some(CubicFamily::FixedPoint { .. }) => {
            if d.fixed_points == Some(FixedPointReport::OnExceptionalCurves) {
                return Err(invalid(
                    "cubic family 4 fixes a point lying on no exceptional curve",
                ));
            }
            fixed_point_blowup(d)
        }
        Some(_) if off => Err(invalid(
            "cubic families 1 to 3 have no fixed point off the exceptional curves",
        )),
        Some(CubicFamily::Fermat { alpha }) => {
            let j = cubic_j_invariant(alpha)
                .ok_or_else(|| invalid("α³ = −27: the cubic is singular"))?;
            Ok(Verdict::maximal(Family::cubic('a'), Invariant::CubicJ(j)))
        }
        Some(CubicFamily::Clebsch) => Ok(Verdict::maximal(Family::cubic('b'), Invariant::Point)),
        Some(CubicFamily::Symmetric { beta }) => {
            if !s4_cubic_admissible(beta) {
                return Err(invalid(format!(
                    "β = {beta} violates β ≠ 0, 9β³ ≠ 8β, 8β³ ≠ −1"
                )));
            }
            Ok(Verdict::maximal(
                Family::cubic('c'),
                Invariant::Lambda(beta.abs()),
            ))
        }
        None if off => fixed_point_blowup(d),
        None if d.fixed_points.is_some() => Err(invalid(
            "a minimal cubic with all fixed points on exceptional curves needs its cubic_family",
        )),
        None => Err(invalid(
            "a minimal cubic needs cubic_family or fixed_points",
        )),
    }
}

fn fixed_point_blowup(d: &DelPezzoDescriptor) -> Result<Verdict, ClassifyError> {
    let step = blow_up(3, "Aut(S) fixes a point lying on no exceptional curve");
    let next = match &d.blowup_target {
        Some(t) => classify(t)?,
        None => Verdict::indeterminate(
            "the automorphism group of the blown-up degree-2 surface is not given (blowup_target)",
        ),
    };
    Ok(next.after(step))
}

/// Contracts the witness orbit of a non-minimal action on a cubic surface.
fn contract_cubic(
    action: &LatticeAction,
    witness: &[DivisorClass],
) -> Result<Verdict, ClassifyError> {
    let l = witness.len();
    let target = 3 + l as u8;
    let reason = format!("contract an invariant orbit of {l} disjoint (−1)-curves");
    if target == 8 {
        let (to, next) = if complement_is_even(action, witness)? {
            (
                Stage::p1xp1(),
                Verdict::maximal(Family::new(2), Invariant::Point),
            )
        } else {
            (f1(), del_pezzo(&DelPezzoDescriptor::of_degree(8))?)
        };
        return Ok(next.after(contract(Stage::del_pezzo(3), to, reason)));
    }
    let next = del_pezzo(&DelPezzoDescriptor::of_degree(target))?;
    Ok(next.after(contract(
        Stage::del_pezzo(3),
        Stage::del_pezzo(target),
        reason,
    )))
}

/// Whether the orthogonal complement of `classes` is an even lattice.
fn complement_is_even(
    action: &LatticeAction,
    classes: &[DivisorClass],
) -> Result<bool, ClassifyError> {
    let lat = action.lattice();
    let g = lat.gram_diagonal();
    let rows: Vec<Vec<i64>> = classes
        .iter()
        .map(|c| c.coeffs().iter().zip(&g).map(|(x, y)| x * y).collect())
        .collect();
    let kernel = linalg::integer_kernel(&linalg::from_i64(&rows), lat.rank());
    let mut even = true;
    for v in kernel {
        let v: Vec<i64> = v
            .iter()
            .map(|x| i64::try_from(x).map_err(|_| crate::picard::LatticeError::Overflow))
            .collect::<Result<_, _>>()?;
        even &= lat.square(&DivisorClass::new(v))? % 2 == 0;
    }
    Ok(even)
}

fn quartic(d: &DelPezzoDescriptor) -> Result<Verdict, ClassifyError> {
    let on = d.fixed_points == Some(FixedPointReport::OnExceptionalCurves);
    let off = d.fixed_points == Some(FixedPointReport::OffExceptionalCurves);
    let reason = match &d.table_row {
        Some(row) if row.in_table() => {
            if off {
                return Err(invalid(format!(
                    "row {} has no fixed point off the exceptional curves",
                    row.row.row
                )));
            }
            return Ok(Verdict::maximal(
                Family::new(9),
                Invariant::QuarticRow {
                    row: row.row.row,
                    order: row.row.order,
                    structure: row.row.structure,
                    params: row.params.clone(),
                },
            ));
        }
        Some(row) => format!(
            "restrictions of row {} ({}) fail, so Aut(S) fixes a point lying on no exceptional curve",
            row.row.row, row.row.restrictions
        ),
        None if on => {
            return Err(invalid(
                "fixed points on exceptional curves force a row of the degree-2 table",
            ))
        }
        None => "no row of the degree-2 table, so Aut(S) fixes a point lying on no exceptional curve"
            .to_string(),
    };
    Ok(del_pezzo(&DelPezzoDescriptor::of_degree(1))?.after(blow_up(2, reason)))
}

fn check_conic_bundle(
    action: LatticeAction,
    m: &crate::picard::FiberedMarking,
) -> Result<(), ClassifyError> {
    match action.verify_mori_fibration(Some(m))? {
        MoriVerdict::ConicBundleOverP1 => Ok(()),
        other => Err(ClassifyError::InvariantViolation(format!(
            "conic bundle model is not a Mori fibration: {other:?}"
        ))),
    }
}

fn exceptional(m: &ExceptionalBundleModel) -> Result<Verdict, ClassifyError> {
    check_conic_bundle(m.action(), m.marking())?;
    if m.n() >= 2 {
        let canon = delta_canonical_form(m.delta())?;
        return Ok(Verdict::maximal(Family::new(5), Invariant::Delta(canon)));
    }
    Ok(
        Verdict::maximal(Family::new(3), Invariant::Point).after(Step {
            kind: StepKind::Reinterpret,
            from: Stage::new("exceptional conic bundle with 2 singular fibers", 6, 4),
            to: Stage::del_pezzo(6),
            reason:
                "S is the del Pezzo surface of degree 6 and Aut(S,π) is a proper subgroup of Aut(S)"
                    .to_string(),
        }),
    )
}

fn z22(m: &Z22BundleModel) -> Result<Verdict, ClassifyError> {
    check_conic_bundle(m.action(), m.marking())?;
    match is_del_pezzo_bundle(m) {
        DelPezzoVerdict::No(_) => {
            let canon = triplet_canonical_form(m.triplet())?;
            Ok(Verdict::maximal(Family::new(11), Invariant::Triplet(canon)))
        }
        DelPezzoVerdict::Indeterminate(reason) => Ok(Verdict::indeterminate(reason)),
        DelPezzoVerdict::Yes => {
            let k = m.k();
            let degree = 8 - k as u8;
            let step = Step {
                kind: StepKind::Reinterpret,
                from: Stage::new(
                    format!("(Z/2)²-conic bundle with {k} singular fibers"),
                    degree as i64,
                    k + 2,
                ),
                to: Stage::del_pezzo(degree),
                reason: format!("S is a del Pezzo surface of degree {degree}"),
            };
            let next = if degree == 3 {
                Verdict::indeterminate(
                    "cubic surface without fixed-point data for its automorphism group",
                )
            } else {
                del_pezzo(&DelPezzoDescriptor::of_degree(degree))?
            };
            Ok(next.after(step))
        }
    }
}

fn check_chain(v: &Verdict) -> Result<(), ClassifyError> {
    let Verdict::NotMaximal { chain, result } = v else {
        return Ok(());
    };
    let fail = |msg: String| Err(ClassifyError::InvariantViolation(msg));
    if chain.is_empty() || chain.len() > MAX_CHAIN {
        return fail(format!("reduction chain of length {}", chain.len()));
    }
    if matches!(**result, Verdict::NotMaximal { .. }) {
        return fail("nested reduction chain".to_string());
    }
    if let Some(s) = chain.iter().find(|s| !s.is_consistent()) {
        return fail(format!("inconsistent {} step {:?}", s.kind.name(), s));
    }
    if chain.windows(2).any(|w| w[0].to != w[1].from) {
        return fail("disconnected reduction chain".to_string());
    }
    let moves: Vec<StepKind> = chain
        .iter()
        .map(|s| s.kind)
        .filter(|k| *k != StepKind::Reinterpret)
        .collect();
    if moves.windows(2).any(|w| w[0] != w[1]) {
        return fail("reduction chain changes direction".to_string());
    }
    Ok(())
}
