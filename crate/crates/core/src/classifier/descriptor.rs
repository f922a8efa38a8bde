//! Surface-with-group descriptors and their JSON form.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde_json::Value;

use super::tables::{find_row, row_restrictions_hold, QuarticTableRow};
use super::{invalid, ClassifyError};
use crate::bundles::{
    build_from_four_lines, build_from_three_lines_conic, exceptional_from_delta, z22_from_triplet,
    ExceptionalBundleModel, HirzebruchModel, Z22BundleModel,
};
use crate::geometry::{Conic, Line, P2Point};
use crate::json::{self as js, DecodeError};
use crate::picard::LatticeAction;
use crate::square_class::{points_from_json, RamificationTriplet};

/// Where the fixed points of the automorphism group lie.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixedPointReport {
    OnExceptionalCurves,
    OffExceptionalCurves,
}

impl FixedPointReport {
    pub fn name(self) -> &'static str {
        match self {
            FixedPointReport::OnExceptionalCurves => "on_exceptional_curves",
            FixedPointReport::OffExceptionalCurves => "off_exceptional_curves",
        }
    }
}

/// The four normal forms of cubic surfaces whose full automorphism group
/// gives a minimal pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CubicFamily {
    /// `W³ + X³ + Y³ + Z³ + αXYZ`.
    Fermat { alpha: BigRational },
    /// `W²X + X²Y + Y²Z + Z²W`.
    Clebsch,
    /// `W³ + W(X² + Y² + Z²) + βXYZ`.
    Symmetric { beta: BigRational },
    /// `W³ + X³ + γWX(Y + δZ) + Y³ + Z³`.
    FixedPoint {
        gamma: Option<BigRational>,
        delta: Option<BigRational>,
    },
}

impl CubicFamily {
    pub fn index(&self) -> u8 {
        match self {
            CubicFamily::Fermat { .. } => 1,
            CubicFamily::Clebsch => 2,
            CubicFamily::Symmetric { .. } => 3,
            CubicFamily::FixedPoint { .. } => 4,
        }
    }
}

/// A row of the degree-2 table together with the parameters supplied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuarticRow {
    pub row: &'static QuarticTableRow,
    pub params: BTreeMap<String, BigRational>,
    /// Caller's assertion that the row restrictions hold.
    pub restrictions_hold: bool,
}

impl QuarticRow {
    /// The asserted flag, checked exactly against the supplied parameters.
    pub fn in_table(&self) -> bool {
        self.restrictions_hold && row_restrictions_hold(self.row, &self.params)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DelPezzoDescriptor {
    pub degree: u8,
    pub p1xp1: bool,
    pub action: Option<LatticeAction>,
    pub fixed_points: Option<FixedPointReport>,
    pub cubic_family: Option<CubicFamily>,
    pub table_row: Option<QuarticRow>,
    pub iso_tag: Option<String>,
    /// Degree-2 surface obtained by blowing up a fixed point of a cubic.
    pub blowup_target: Option<Box<GSurfaceDescriptor>>,
}

impl DelPezzoDescriptor {
    /// A bare descriptor carrying only the degree.
    pub fn of_degree(degree: u8) -> Self {
        DelPezzoDescriptor {
            degree,
            p1xp1: false,
            action: None,
            fixed_points: None,
            cubic_family: None,
            table_row: None,
            iso_tag: None,
            blowup_target: None,
        }
    }
}

#[derive(Clone, Debug)]
pub enum GSurfaceDescriptor {
    DelPezzo(DelPezzoDescriptor),
    Hirzebruch(HirzebruchModel),
    Exceptional(ExceptionalBundleModel),
    Z22(Z22BundleModel),
}

impl PartialEq for GSurfaceDescriptor {
    fn eq(&self, other: &Self) -> bool {
        use GSurfaceDescriptor::*;
        match (self, other) {
            (DelPezzo(a), DelPezzo(b)) => a == b,
            (Hirzebruch(a), Hirzebruch(b)) => a == b,
            (Exceptional(a), Exceptional(b)) => a.delta() == b.delta(),
            (Z22(a), Z22(b)) => {
                a.triplet() == b.triplet() && a.certificate().is_some() == b.certificate().is_some()
            }
            _ => false,
        }
    }
}

fn check_keys(v: &Value, allowed: &[&str]) -> Result<(), ClassifyError> {
    let obj = v
        .as_object()
        .ok_or_else(|| ClassifyError::Decode(DecodeError::new("", "expected an object")))?;
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(ClassifyError::Decode(DecodeError::new(
                key.as_str(),
                "unknown field",
            )));
        }
    }
    Ok(())
}

fn within<T, E: Into<ClassifyError>>(r: Result<T, E>, path: &str) -> Result<T, ClassifyError> {
    r.map_err(|e| match e.into() {
        ClassifyError::Decode(d) => ClassifyError::Decode(d.within(path)),
        ClassifyError::Geometry(crate::geometry::GeometryError::Decode(d)) => {
            ClassifyError::Decode(d.within(path))
        }
        ClassifyError::SquareClass(crate::square_class::SquareClassError::Decode(d)) => {
            ClassifyError::Decode(d.within(path))
        }
        other => other,
    })
}

fn rational_field(v: &Value, name: &str) -> Result<Option<BigRational>, ClassifyError> {
    js::opt_field(v, name)
        .map(|x| within(js::parse_rational(x), name))
        .transpose()
}

impl GSurfaceDescriptor {
    pub fn from_json(v: &Value) -> Result<Self, ClassifyError> {
        let kind = within(js::field(v, "kind").and_then(js::parse_str), "kind")?;
        match kind {
            "del_pezzo" => Ok(GSurfaceDescriptor::DelPezzo(parse_del_pezzo(v)?)),
            "hirzebruch" => {
                check_keys(v, &["kind", "n"])?;
                let n = within(js::field(v, "n").and_then(js::parse_i64), "n")?;
                let n = u64::try_from(n).map_err(|_| invalid("n must be nonnegative"))?;
                Ok(GSurfaceDescriptor::Hirzebruch(HirzebruchModel::new(n)))
            }
            "exceptional" => {
                check_keys(v, &["kind", "delta"])?;
                let delta = within(
                    js::field(v, "delta")
                        .map_err(ClassifyError::from)
                        .and_then(|d| points_from_json(d).map_err(ClassifyError::from)),
                    "delta",
                )?;
                Ok(GSurfaceDescriptor::Exceptional(exceptional_from_delta(
                    &delta,
                )?))
            }
            "z22" => Ok(GSurfaceDescriptor::Z22(parse_z22(v)?)),
            other => Err(ClassifyError::Decode(DecodeError::new(
                "kind",
                format!("unknown descriptor kind {other:?}"),
            ))),
        }
    }
}

fn parse_del_pezzo(v: &Value) -> Result<DelPezzoDescriptor, ClassifyError> {
    check_keys(
        v,
        &[
            "kind",
            "degree",
            "p1xp1",
            "action",
            "fixed_points",
            "cubic_family",
            "table_row",
            "iso_tag",
            "blowup_target",
        ],
    )?;
    let degree = within(js::field(v, "degree").and_then(js::parse_i64), "degree")?;
    let degree = match u8::try_from(degree) {
        Ok(d @ 1..=9) => d,
        _ => return Err(invalid(format!("degree must be 1..9, got {degree}"))),
    };
    let p1xp1 = js::opt_field(v, "p1xp1")
        .map(|x| within(js::parse_bool(x), "p1xp1"))
        .transpose()?
        .unwrap_or(false);
    if p1xp1 && degree != 8 {
        return Err(invalid("p1xp1 is only meaningful in degree 8"));
    }
    let action = js::opt_field(v, "action")
        .map(|a| within(LatticeAction::from_json(a), "action"))
        .transpose()?;
    if let Some(a) = &action {
        if p1xp1 {
            return Err(invalid(
                "P1 × P1 is not a blowup of the plane; omit the action",
            ));
        }
        let r = a.lattice().r();
        if r + degree as usize != 9 {
            return Err(invalid(format!(
                "action on {r} blown-up points does not match degree {degree}"
            )));
        }
    }
    let fixed_points = js::opt_field(v, "fixed_points")
        .map(|x| match within(js::parse_str(x), "fixed_points")? {
            "on_exceptional_curves" => Ok(FixedPointReport::OnExceptionalCurves),
            "off_exceptional_curves" => Ok(FixedPointReport::OffExceptionalCurves),
            other => Err(ClassifyError::Decode(DecodeError::new(
                "fixed_points",
                format!("unknown report {other:?}"),
            ))),
        })
        .transpose()?;
    if fixed_points.is_some() && !matches!(degree, 2 | 3) {
        return Err(invalid("fixed-point reports apply to degrees 2 and 3 only"));
    }
    let cubic_family = js::opt_field(v, "cubic_family")
        .map(|c| within(parse_cubic(c), "cubic_family"))
        .transpose()?;
    if cubic_family.is_some() && degree != 3 {
        return Err(invalid("cubic_family requires degree 3"));
    }
    let table_row = js::opt_field(v, "table_row")
        .map(|t| within(parse_row(t), "table_row"))
        .transpose()?;
    if table_row.is_some() && degree != 2 {
        return Err(invalid("table_row requires degree 2"));
    }
    let iso_tag = js::opt_field(v, "iso_tag")
        .map(|x| within(js::parse_str(x), "iso_tag").map(str::to_string))
        .transpose()?;
    let blowup_target = js::opt_field(v, "blowup_target")
        .map(|t| within(GSurfaceDescriptor::from_json(t), "blowup_target"))
        .transpose()?;
    if let Some(t) = &blowup_target {
        if degree != 3 {
            return Err(invalid("blowup_target requires degree 3"));
        }
        if !matches!(t, GSurfaceDescriptor::DelPezzo(d) if d.degree == 2) {
            return Err(invalid(
                "blowup_target must be a del Pezzo surface of degree 2",
            ));
        }
    }
    Ok(DelPezzoDescriptor {
        degree,
        p1xp1,
        action,
        fixed_points,
        cubic_family,
        table_row,
        iso_tag,
        blowup_target: blowup_target.map(Box::new),
    })
}

fn parse_cubic(v: &Value) -> Result<CubicFamily, ClassifyError> {
    let family = within(js::field(v, "family").and_then(js::parse_i64), "family")?;
    let (family, allowed): (_, &[&str]) = match family {
        1 => (1, &["family", "alpha"]),
        2 => (2, &["family"]),
        3 => (3, &["family", "beta"]),
        4 => (4, &["family", "gamma", "delta"]),
        _ => return Err(invalid(format!("cubic family must be 1..4, got {family}"))),
    };
    check_keys(v, allowed)?;
    let need = |name: &str| {
        rational_field(v, name)?
            .ok_or_else(|| ClassifyError::Decode(DecodeError::new(name, "missing field")))
    };
    Ok(match family {
        1 => CubicFamily::Fermat {
            alpha: need("alpha")?,
        },
        2 => CubicFamily::Clebsch,
        3 => CubicFamily::Symmetric {
            beta: need("beta")?,
        },
        _ => CubicFamily::FixedPoint {
            gamma: rational_field(v, "gamma")?,
            delta: rational_field(v, "delta")?,
        },
    })
}

fn parse_row(v: &Value) -> Result<QuarticRow, ClassifyError> {
    check_keys(v, &["order", "structure", "params", "restrictions_hold"])?;
    let order = within(js::field(v, "order").and_then(js::parse_i64), "order")?;
    let structure = within(
        js::field(v, "structure").and_then(js::parse_str),
        "structure",
    )?;
    let row = u32::try_from(order)
        .ok()
        .and_then(|o| find_row(o, structure))
        .ok_or_else(|| {
            invalid(format!(
                "no row of order {order} with structure {structure:?} in the degree-2 table"
            ))
        })?;
    let mut params = BTreeMap::new();
    if let Some(p) = js::opt_field(v, "params") {
        let obj = p.as_object().ok_or_else(|| {
            ClassifyError::Decode(DecodeError::new("params", "expected an object"))
        })?;
        for (name, x) in obj {
            if !row.params.contains(&name.as_str()) {
                return Err(invalid(format!(
                    "row {} has no parameter {name:?}",
                    row.row
                )));
            }
            let q = within(js::parse_rational(x), &format!("params.{name}"))?;
            params.insert(name.clone(), q);
        }
    }
    let restrictions_hold = within(
        js::field(v, "restrictions_hold").and_then(js::parse_bool),
        "restrictions_hold",
    )?;
    let out = QuarticRow {
        row,
        params,
        restrictions_hold,
    };
    if restrictions_hold && !out.in_table() {
        return Err(invalid(format!(
            "parameters violate the restrictions of row {} ({})",
            row.row, row.restrictions
        )));
    }
    Ok(out)
}

fn parse_point2(v: &Value, path: &str) -> Result<P2Point, ClassifyError> {
    within(
        js::field(v, path)
            .map_err(ClassifyError::from)
            .and_then(|p| P2Point::from_json(p).map_err(ClassifyError::from)),
        path,
    )
}

fn parse_lines<const N: usize>(v: &Value) -> Result<[Line; N], ClassifyError> {
    let items = within(js::field(v, "lines").and_then(js::array), "lines")?;
    if items.len() != N {
        return Err(ClassifyError::Decode(DecodeError::new(
            "lines",
            format!("expected {N} lines, found {}", items.len()),
        )));
    }
    let lines = items
        .iter()
        .enumerate()
        .map(|(i, l)| {
            within(
                js::parse_int_array(l, Some(3))
                    .map_err(ClassifyError::from)
                    .and_then(|c| {
                        let c: [_; 3] = c.try_into().expect("length checked");
                        Line::from_coeffs(c).map_err(|_| {
                            ClassifyError::Decode(DecodeError::new("", "all coefficients are zero"))
                        })
                    }),
                &format!("lines[{i}]"),
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(lines.try_into().expect("length checked"))
}

fn parse_z22(v: &Value) -> Result<Z22BundleModel, ClassifyError> {
    check_keys(v, &["kind", "triplet", "construction"])?;
    match (
        js::opt_field(v, "triplet"),
        js::opt_field(v, "construction"),
    ) {
        (Some(t), None) => {
            let t = within(RamificationTriplet::from_json(t), "triplet")?;
            Ok(z22_from_triplet(&t)?)
        }
        (None, Some(c)) => within(parse_construction(c), "construction"),
        _ => Err(invalid(
            "a z22 descriptor needs exactly one of triplet, construction",
        )),
    }
}

fn parse_construction(v: &Value) -> Result<Z22BundleModel, ClassifyError> {
    let kind = within(js::field(v, "kind").and_then(js::parse_str), "kind")?;
    match kind {
        "four_lines" => {
            check_keys(v, &["kind", "lines", "q"])?;
            let lines = parse_lines::<4>(v)?;
            let q = parse_point2(v, "q")?;
            Ok(build_from_four_lines(&lines, &q)?)
        }
        "three_lines_conic" => {
            check_keys(v, &["kind", "lines", "conic", "d1", "d2"])?;
            let lines = parse_lines::<3>(v)?;
            let coeffs = within(
                js::field(v, "conic").and_then(|c| js::parse_int_array(c, Some(6))),
                "conic",
            )?;
            let conic =
                Conic::from_coeffs(coeffs.try_into().expect("length checked")).map_err(|_| {
                    ClassifyError::Decode(DecodeError::new("conic", "all coefficients are zero"))
                })?;
            let d1 = parse_point2(v, "d1")?;
            let d2 = parse_point2(v, "d2")?;
            Ok(build_from_three_lines_conic(&lines, &conic, &d1, &d2)?)
        }
        other => Err(ClassifyError::Decode(DecodeError::new(
            "kind",
            format!("unknown construction {other:?}"),
        ))),
    }
}
