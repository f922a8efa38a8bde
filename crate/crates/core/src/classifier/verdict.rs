//! Verdicts, reduction chains and conjugacy invariants.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use serde_json::{json, Value};

use crate::geometry::P1Point;
use crate::json as js;
use crate::square_class::RamificationTriplet;

/// One of the eleven families, with the sub-tag `a`, `b` or `c` of family 8.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Family {
    pub index: u8,
    pub sub: Option<char>,
}

impl Family {
    pub const fn new(index: u8) -> Self {
        Family { index, sub: None }
    }

    pub const fn cubic(sub: char) -> Self {
        Family {
            index: 8,
            sub: Some(sub),
        }
    }

    /// Symbolic description of the automorphism group.
    pub fn structure(&self) -> &'static str {
        match (self.index, self.sub) {
            (1, _) => "PGL(3,C)",
            (2, _) => "PGL(2,C)² ⋊ Z/2",
            (3, _) => "(C*)² ⋊ (S3 × Z/2)",
            (4, _) => "C^(n+1) ⋊ GL(2,C)/μ_n",
            (5, _) => "1 → C* ⋊ Z/2 → G → H_Δ → 1",
            (6, _) => "S5",
            (7, _) => "(Z/2)⁴ ⋊ H_S",
            (8, Some('a')) => "1 → Z/3 → G → H_Γ → 1",
            (8, Some('b')) => "S5",
            (8, _) => "S4",
            (9, _) => "Z/2 × H_S",
            (10, _) => "1 → Z/2 → G → H_S → 1",
            _ => "1 → V → G → H_V → 1",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index)?;
        if let Some(c) = self.sub {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Canonical datum of a maximal group: equal data iff conjugate groups,
/// for data defined over Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Invariant {
    Point,
    HirzebruchIndex(u64),
    Delta(Vec<P1Point>),
    IsoTag(Option<String>),
    /// j-invariant of the branch cubic of a triple cover.
    CubicJ(BigRational),
    /// `|λ|` for `W³ + W(X² + Y² + Z²) + λXYZ`.
    Lambda(BigRational),
    QuarticRow {
        row: u8,
        order: u32,
        structure: &'static str,
        params: BTreeMap<String, BigRational>,
    },
    Triplet(RamificationTriplet),
}

impl Invariant {
    pub fn to_json(&self) -> Value {
        match self {
            Invariant::Point => json!({ "kind": "point" }),
            Invariant::HirzebruchIndex(n) => json!({ "kind": "n", "n": n }),
            Invariant::Delta(d) => json!({
                "kind": "delta",
                "delta": d.iter().map(P1Point::to_json).collect::<Vec<_>>(),
            }),
            Invariant::IsoTag(t) => json!({ "kind": "iso_tag", "iso_tag": t }),
            Invariant::CubicJ(j) => json!({ "kind": "j", "j": js::rational(j) }),
            Invariant::Lambda(l) => json!({ "kind": "lambda", "lambda": js::rational(l) }),
            Invariant::QuarticRow {
                row,
                order,
                structure,
                params,
            } => json!({
                "kind": "table_row",
                "row": row,
                "order": order,
                "structure": structure,
                "params": params
                    .iter()
                    .map(|(k, v)| (k.clone(), js::rational(v)))
                    .collect::<serde_json::Map<_, _>>(),
            }),
            Invariant::Triplet(t) => json!({ "kind": "triplet", "triplet": t.to_json() }),
        }
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts = |d: &[P1Point]| {
            d.iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            Invariant::Point => write!(f, "point"),
            Invariant::HirzebruchIndex(n) => write!(f, "n={n}"),
            Invariant::Delta(d) => write!(f, "Δ={{{}}}", pts(d)),
            Invariant::IsoTag(Some(t)) => write!(f, "iso={t}"),
            Invariant::IsoTag(None) => write!(f, "iso=unspecified"),
            Invariant::CubicJ(j) => write!(f, "j={j}"),
            Invariant::Lambda(l) => write!(f, "λ=±{l}"),
            Invariant::QuarticRow { row, params, .. } => {
                write!(f, "row={row}")?;
                for (k, v) in params {
                    write!(f, ",{k}={v}")?;
                }
                Ok(())
            }
            Invariant::Triplet(t) => write!(f, "triplet={t:?}"),
        }
    }
}

/// A surface along a reduction chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage {
    pub surface: String,
    /// `K²`.
    pub degree: i64,
    pub picard_rank: usize,
}

impl Stage {
    pub fn new(surface: impl Into<String>, degree: i64, picard_rank: usize) -> Self {
        Stage {
            surface: surface.into(),
            degree,
            picard_rank,
        }
    }

    pub fn del_pezzo(degree: u8) -> Self {
        let name = match degree {
            9 => "P2".to_string(),
            d => format!("del Pezzo surface of degree {d}"),
        };
        Stage::new(name, degree as i64, 10 - degree as usize)
    }

    pub fn p1xp1() -> Self {
        Stage::new("P1 × P1", 8, 2)
    }

    fn to_json(&self) -> Value {
        json!({ "surface": self.surface, "degree": self.degree, "picard_rank": self.picard_rank })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    /// Contract an invariant set of disjoint (−1)-curves.
    Contract,
    /// Blow up a fixed point.
    BlowUp,
    /// Same surface, viewed with its full automorphism group.
    Reinterpret,
}

impl StepKind {
    pub fn name(self) -> &'static str {
        match self {
            StepKind::Contract => "contract",
            StepKind::BlowUp => "blow_up",
            StepKind::Reinterpret => "reinterpret",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub kind: StepKind,
    pub from: Stage,
    pub to: Stage,
    pub reason: String,
}

impl Step {
    /// Whether the step moves the way its kind says: contractions raise the
    /// degree and lower the rank, blowups do the opposite, reinterpretations
    /// keep both.
    pub fn is_consistent(&self) -> bool {
        let (d0, d1) = (self.from.degree, self.to.degree);
        let (r0, r1) = (self.from.picard_rank, self.to.picard_rank);
        match self.kind {
            StepKind::Contract => d1 > d0 && r1 < r0,
            StepKind::BlowUp => d1 < d0 && r1 > r0,
            StepKind::Reinterpret => d1 == d0 && r1 == r0,
        }
    }

    fn to_json(&self) -> Value {
        json!({
            "step": self.kind.name(),
            "from": self.from.to_json(),
            "to": self.to.to_json(),
            "reason": self.reason,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Maximal {
        family: Family,
        invariant: Invariant,
    },
    /// The group lies in the group of `result`, reached through `chain`.
    /// `result` is never itself `NotMaximal`.
    NotMaximal {
        chain: Vec<Step>,
        result: Box<Verdict>,
    },
    Indeterminate {
        reason: String,
    },
}

impl Verdict {
    pub fn maximal(family: Family, invariant: Invariant) -> Self {
        Verdict::Maximal { family, invariant }
    }

    pub fn indeterminate(reason: impl Into<String>) -> Self {
        Verdict::Indeterminate {
            reason: reason.into(),
        }
    }

    /// Prepends `step` to the chain leading to `self`.
    pub fn after(self, step: Step) -> Self {
        match self {
            Verdict::NotMaximal { mut chain, result } => {
                chain.insert(0, step);
                Verdict::NotMaximal { chain, result }
            }
            other => Verdict::NotMaximal {
                chain: vec![step],
                result: Box::new(other),
            },
        }
    }

    /// The maximal family, if the verdict is `Maximal`.
    pub fn family(&self) -> Option<Family> {
        match self {
            Verdict::Maximal { family, .. } => Some(*family),
            _ => None,
        }
    }

    /// The family at the end of the chain, for `Maximal` and `NotMaximal`.
    pub fn terminal_family(&self) -> Option<Family> {
        match self {
            Verdict::Maximal { family, .. } => Some(*family),
            Verdict::NotMaximal { result, .. } => result.terminal_family(),
            Verdict::Indeterminate { .. } => None,
        }
    }

    pub fn is_indeterminate(&self) -> bool {
        match self {
            Verdict::Indeterminate { .. } => true,
            Verdict::NotMaximal { result, .. } => result.is_indeterminate(),
            Verdict::Maximal { .. } => false,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Verdict::Maximal { family, invariant } => {
                let mut v = json!({
                    "outcome": "maximal",
                    "family": family.index,
                    "structure": family.structure(),
                    "invariant": invariant.to_json(),
                });
                if let Some(c) = family.sub {
                    v["subfamily"] = json!(c.to_string());
                }
                v
            }
            Verdict::NotMaximal { chain, result } => json!({
                "outcome": "not_maximal",
                "chain": chain.iter().map(Step::to_json).collect::<Vec<_>>(),
                "result": result.to_json(),
            }),
            Verdict::Indeterminate { reason } => {
                json!({ "outcome": "indeterminate", "reason": reason })
            }
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Maximal { family, invariant } => {
                write!(f, "maximal: family {family} ({invariant})")
            }
            Verdict::NotMaximal { chain, result } => {
                write!(f, "not maximal:")?;
                for s in chain {
                    write!(
                        f,
                        " {} {} → {};",
                        s.kind.name(),
                        s.from.surface,
                        s.to.surface
                    )?;
                }
                write!(f, " {result}")
            }
            Verdict::Indeterminate { reason } => write!(f, "indeterminate: {reason}"),
        }
    }
}
