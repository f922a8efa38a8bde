use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use serde_json::{json, Value};

use super::{
    enumerate_minus_one_classes_with, BlowupLattice, DivisorClass, FiberedMarking, IntMatrix,
    LatticeError,
};
use crate::json::{self as js, DecodeError};
use crate::linalg;
use crate::Exec;

/// Default bound on the size of a generated group.
pub const DEFAULT_CLOSURE_CAP: usize = 100_000;

/// A matrix checked to preserve the intersection form and fix `K`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Isometry {
    lattice: BlowupLattice,
    m: IntMatrix,
}

impl Isometry {
    pub fn lattice(&self) -> &BlowupLattice {
        &self.lattice
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.m
    }

    pub fn apply(&self, v: &DivisorClass) -> Result<DivisorClass, LatticeError> {
        self.m.apply(v)
    }

    /// `self ∘ other`, re-validated.
    pub fn compose(&self, other: &Isometry) -> Result<Isometry, LatticeError> {
        validate_action(&self.lattice, self.m.mul(&other.m)?)
    }

    /// `M⁻¹ = G Mᵀ G` for an isometry `M` of the diagonal form `G`.
    pub fn inverse(&self) -> Isometry {
        let g = self.lattice.gram_diagonal();
        let t = self.m.transpose();
        let rows = t
            .rows()
            .iter()
            .enumerate()
            .map(|(i, r)| {
                r.iter()
                    .enumerate()
                    .map(|(j, &x)| g[i] * x * g[j])
                    .collect()
            })
            .collect();
        Isometry {
            lattice: self.lattice,
            m: IntMatrix::from_rows(rows).expect("square"),
        }
    }
}

impl fmt::Debug for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.m, f)
    }
}

/// Accepts `m` iff `MᵀGM = G` and `M·K = K`.
pub fn validate_action(lattice: &BlowupLattice, m: IntMatrix) -> Result<Isometry, LatticeError> {
    let n = lattice.rank();
    if m.dim() != n {
        return Err(LatticeError::DimensionMismatch {
            expected: n,
            found: m.dim(),
        });
    }
    let cols: Vec<DivisorClass> = (0..n).map(|j| m.column(j)).collect();
    let g = lattice.gram_diagonal();
    for i in 0..n {
        for j in i..n {
            let want = if i == j { g[i] } else { 0 };
            if checked_dot(lattice, &cols[i], &cols[j])? != want {
                return Err(LatticeError::NotIsometry);
            }
        }
    }
    let k = lattice.canonical();
    if m.apply(&k)? != k {
        return Err(LatticeError::MovesCanonicalClass);
    }
    Ok(Isometry {
        lattice: *lattice,
        m,
    })
}

fn checked_dot(
    lattice: &BlowupLattice,
    a: &DivisorClass,
    b: &DivisorClass,
) -> Result<i64, LatticeError> {
    let g = lattice.gram_diagonal();
    let mut s: i64 = 0;
    for i in 0..a.len() {
        s = a[i]
            .checked_mul(b[i])
            .and_then(|p| p.checked_mul(g[i]))
            .and_then(|p| s.checked_add(p))
            .ok_or(LatticeError::Overflow)?;
    }
    Ok(s)
}

/// The saturated sublattice of classes fixed by a group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantLattice {
    pub rank: usize,
    /// Basis in Hermite normal form.
    pub basis: Vec<DivisorClass>,
}

impl InvariantLattice {
    /// Whether `classes` span exactly this lattice over Z.
    pub fn is_spanned_by(&self, classes: &[DivisorClass]) -> bool {
        let rows: Vec<Vec<i64>> = classes.iter().map(|c| c.coeffs().to_vec()).collect();
        let mine: Vec<Vec<i64>> = self.basis.iter().map(|c| c.coeffs().to_vec()).collect();
        linalg::hermite(&linalg::from_i64(&rows)) == linalg::hermite(&linalg::from_i64(&mine))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rank": self.rank,
            "basis": self.basis.iter().map(DivisorClass::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Outcome of the lattice-level minimality test.
///
/// Effectivity of (−1)-classes is assumed: on a del Pezzo surface every
/// (−1)-class is the class of a (−1)-curve, and the test is only meaningful
/// in that setting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Minimality {
    pub minimal: bool,
    /// An orbit of pairwise disjoint (−1)-classes when not minimal.
    pub witness: Option<Vec<DivisorClass>>,
}

impl Minimality {
    pub fn to_json(&self) -> Value {
        match &self.witness {
            None => json!({ "kind": "minimal" }),
            Some(w) => json!({
                "kind": "not_minimal",
                "witness": w.iter().map(DivisorClass::to_json).collect::<Vec<_>>(),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MoriVerdict {
    DelPezzoPoint,
    ConicBundleOverP1,
    NotMori(String),
}

impl MoriVerdict {
    pub fn to_json(&self) -> Value {
        match self {
            MoriVerdict::DelPezzoPoint => json!({ "kind": "del_pezzo_point" }),
            MoriVerdict::ConicBundleOverP1 => json!({ "kind": "conic_bundle_over_p1" }),
            MoriVerdict::NotMori(reason) => json!({ "kind": "not_mori", "reason": reason }),
        }
    }
}

/// A finite group of isometries given by generators.
///
/// The full group is generated lazily, once, and bounded by a cap.
#[derive(Clone)]
pub struct LatticeAction {
    lattice: BlowupLattice,
    generators: Vec<Isometry>,
    cap: usize,
    closure: OnceLock<Result<Vec<IntMatrix>, LatticeError>>,
}

impl fmt::Debug for LatticeAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LatticeAction")
            .field("r", &self.lattice.r())
            .field("generators", &self.generators)
            .finish()
    }
}

impl PartialEq for LatticeAction {
    fn eq(&self, other: &Self) -> bool {
        self.lattice == other.lattice && self.generators == other.generators
    }
}

impl LatticeAction {
    pub fn new(lattice: BlowupLattice, generators: Vec<IntMatrix>) -> Result<Self, LatticeError> {
        let generators = generators
            .into_iter()
            .map(|m| validate_action(&lattice, m))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_isometries(lattice, generators))
    }

    pub fn from_isometries(lattice: BlowupLattice, generators: Vec<Isometry>) -> Self {
        LatticeAction {
            lattice,
            generators,
            cap: DEFAULT_CLOSURE_CAP,
            closure: OnceLock::new(),
        }
    }

    pub fn trivial(lattice: BlowupLattice) -> Self {
        Self::from_isometries(lattice, Vec::new())
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self.closure = OnceLock::new();
        self
    }

    pub fn lattice(&self) -> &BlowupLattice {
        &self.lattice
    }

    pub fn generators(&self) -> &[Isometry] {
        &self.generators
    }

    /// Every element of the generated group, identity first.
    pub fn elements(&self) -> Result<&[IntMatrix], LatticeError> {
        self.closure
            .get_or_init(|| self.close())
            .as_deref()
            .map_err(Clone::clone)
    }

    pub fn order(&self) -> Result<usize, LatticeError> {
        Ok(self.elements()?.len())
    }

    fn close(&self) -> Result<Vec<IntMatrix>, LatticeError> {
        let id = IntMatrix::identity(self.lattice.rank());
        let mut seen: HashSet<IntMatrix> = HashSet::from([id.clone()]);
        let mut out = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y = g.m.mul(&x)?;
                if seen.contains(&y) {
                    continue;
                }
                validate_action(&self.lattice, y.clone()).map_err(|e| {
                    LatticeError::InvariantViolation(format!(
                        "group product failed validation: {e}"
                    ))
                })?;
                if out.len() >= self.cap {
                    return Err(LatticeError::GroupClosureCapExceeded(self.cap));
                }
                seen.insert(y.clone());
                out.push(y.clone());
                queue.push_back(y);
            }
        }
        Ok(out)
    }

    /// The action conjugated by `h`: generators `g ↦ h g h⁻¹`.
    pub fn conjugate(&self, h: &Isometry) -> Result<LatticeAction, LatticeError> {
        let hinv = h.inverse();
        let gens = self
            .generators
            .iter()
            .map(|g| h.compose(g)?.compose(&hinv))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_isometries(self.lattice, gens).with_cap(self.cap))
    }

    pub fn invariant_sublattice(&self) -> Result<InvariantLattice, LatticeError> {
        self.elements()?;
        let n = self.lattice.rank();
        let rows: Vec<Vec<i64>> = self
            .generators
            .iter()
            .flat_map(|g| g.m.minus_identity().rows().to_vec())
            .collect();
        let kernel = linalg::integer_kernel(&linalg::from_i64(&rows), n);
        let basis = kernel
            .iter()
            .map(|v| {
                v.iter()
                    .map(|x| i64::try_from(x).map_err(|_| LatticeError::Overflow))
                    .collect::<Result<Vec<_>, _>>()
                    .map(DivisorClass::new)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(InvariantLattice {
            rank: basis.len(),
            basis,
        })
    }

    /// Orbit partition of `classes`, each orbit sorted, orbits sorted by
    /// size and then by least element.
    pub fn orbits(&self, classes: &[DivisorClass]) -> Result<Vec<Vec<DivisorClass>>, LatticeError> {
        let set: BTreeSet<DivisorClass> = classes.iter().cloned().collect();
        for c in &set {
            for g in &self.generators {
                if !set.contains(&g.apply(c)?) {
                    return Err(LatticeError::NotClosedUnderAction(c.to_string()));
                }
            }
        }
        let mut assigned: HashSet<DivisorClass> = HashSet::new();
        let mut out = Vec::new();
        for c in &set {
            if assigned.contains(c) {
                continue;
            }
            let mut orbit = BTreeSet::from([c.clone()]);
            let mut queue = vec![c.clone()];
            while let Some(x) = queue.pop() {
                for g in &self.generators {
                    let y = g.apply(&x)?;
                    if orbit.insert(y.clone()) {
                        queue.push(y);
                    }
                }
            }
            assigned.extend(orbit.iter().cloned());
            out.push(orbit.into_iter().collect::<Vec<_>>());
        }
        out.sort_by(|a: &Vec<DivisorClass>, b| a.len().cmp(&b.len()).then_with(|| a[0].cmp(&b[0])));
        Ok(out)
    }

    pub fn is_pair_minimal(&self) -> Result<Minimality, LatticeError> {
        self.is_pair_minimal_with(Exec::default())
    }

    /// Not minimal iff some orbit of (−1)-classes is pairwise disjoint; the
    /// first such orbit in orbit order is the witness.
    pub fn is_pair_minimal_with(&self, exec: Exec) -> Result<Minimality, LatticeError> {
        let classes = enumerate_minus_one_classes_with(&self.lattice, exec)?;
        let orbits = self.orbits(&classes)?;
        let lat = self.lattice;
        let disjoint = exec.map(&orbits, |o| {
            o.iter()
                .enumerate()
                .all(|(i, a)| o[i + 1..].iter().all(|b| lat.dot(a, b) == 0))
        });
        let witness = orbits
            .into_iter()
            .zip(disjoint)
            .find(|(_, d)| *d)
            .map(|(o, _)| o);
        Ok(Minimality {
            minimal: witness.is_none(),
            witness,
        })
    }

    pub fn verify_mori_fibration(
        &self,
        marking: Option<&FiberedMarking>,
    ) -> Result<MoriVerdict, LatticeError> {
        let inv = self.invariant_sublattice()?;
        if inv.rank == 1 {
            return Ok(if self.lattice.degree() >= 1 {
                MoriVerdict::DelPezzoPoint
            } else {
                MoriVerdict::NotMori(format!(
                    "invariant rank 1 but K² = {}",
                    self.lattice.degree()
                ))
            });
        }
        let Some(marking) = marking else {
            return Ok(MoriVerdict::NotMori(format!(
                "invariant rank {} and no conic bundle marking",
                inv.rank
            )));
        };
        if marking.lattice() != &self.lattice {
            return Err(LatticeError::DimensionMismatch {
                expected: self.lattice.rank(),
                found: marking.lattice().rank(),
            });
        }
        if inv.rank != 2 {
            return Ok(MoriVerdict::NotMori(format!(
                "invariant rank {}, a conic bundle needs rank 2",
                inv.rank
            )));
        }
        if inv.is_spanned_by(&[self.lattice.canonical(), marking.fiber()]) {
            Ok(MoriVerdict::ConicBundleOverP1)
        } else {
            Ok(MoriVerdict::NotMori(
                "invariant lattice is not ZK ⊕ Zf".to_string(),
            ))
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "r": self.lattice.r(),
            "generators": self.generators.iter().map(|g| g.m.to_json()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, LatticeError> {
        let r = js::parse_i64(js::field(v, "r")?).map_err(|e| e.within("r"))?;
        let r = usize::try_from(r).map_err(|_| DecodeError::new("r", "must be nonnegative"))?;
        let lattice = BlowupLattice::new(r)?;
        let gens = js::array(js::field(v, "generators")?).map_err(|e| e.within("generators"))?;
        let mats = gens
            .iter()
            .enumerate()
            .map(|(i, g)| {
                IntMatrix::from_json(g).map_err(|e| e.within(&format!("generators[{i}]")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        LatticeAction::new(lattice, mats)
    }
}

pub fn invariant_sublattice(action: &LatticeAction) -> Result<InvariantLattice, LatticeError> {
    action.invariant_sublattice()
}

pub fn orbits(
    action: &LatticeAction,
    classes: &[DivisorClass],
) -> Result<Vec<Vec<DivisorClass>>, LatticeError> {
    action.orbits(classes)
}

pub fn is_pair_minimal(action: &LatticeAction) -> Result<Minimality, LatticeError> {
    action.is_pair_minimal()
}

pub fn verify_mori_fibration(
    action: &LatticeAction,
    marking: Option<&FiberedMarking>,
) -> Result<MoriVerdict, LatticeError> {
    action.verify_mori_fibration(marking)
}
