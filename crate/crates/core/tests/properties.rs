use std::fs;
use std::path::Path;

use cremona::bundles::{
    example_triplet, exceptional_from_delta, realisable_profiles, z22_from_triplet,
};
use cremona::classifier::{classify, conjugacy_invariant, GSurfaceDescriptor};
use cremona::geometry::{Mobius, P1Point};
use cremona::picard::{validate_action, BlowupLattice, IntMatrix, Isometry};
use proptest::prelude::*;

fn load(name: &str) -> GSurfaceDescriptor {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join(format!("tests/data/corpus/{name}.json"));
    let text = fs::read_to_string(path).unwrap();
    GSurfaceDescriptor::from_json(&serde_json::from_str(&text).unwrap()).unwrap()
}

/// Simple roots of E6 in the basis (L, E1..E6).
fn simple_roots() -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for i in 1..6 {
        let mut v = vec![0; 7];
        v[i] = 1;
        v[i + 1] = -1;
        out.push(v);
    }
    out.push(vec![1, -1, -1, -1, 0, 0, 0]);
    out
}

fn dot(u: &[i64], v: &[i64]) -> i64 {
    u[0] * v[0] - u[1..].iter().zip(&v[1..]).map(|(a, b)| a * b).sum::<i64>()
}

/// `s(v) = v + (v·α)α`, as a matrix acting on columns.
fn reflection(a: &[i64]) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut m = vec![vec![0; n]; n];
    for j in 0..n {
        let mut e = vec![0; n];
        e[j] = 1;
        let d = dot(&e, a);
        for i in 0..n {
            m[i][j] = e[i] + d * a[i];
        }
    }
    m
}

fn weyl_element(word: &[usize]) -> Isometry {
    let roots = simple_roots();
    let lat = BlowupLattice::new(6).unwrap();
    let mut acc = validate_action(&lat, IntMatrix::identity(7)).unwrap();
    for &i in word {
        let s =
            validate_action(&lat, IntMatrix::from_rows(reflection(&roots[i])).unwrap()).unwrap();
        acc = acc.compose(&s).unwrap();
    }
    acc
}

fn conjugated(d: &GSurfaceDescriptor, h: &Isometry) -> GSurfaceDescriptor {
    let mut d = d.clone();
    if let GSurfaceDescriptor::DelPezzo(dp) = &mut d {
        let a = dp.action.as_ref().unwrap();
        dp.action = Some(a.conjugate(h).unwrap());
    }
    d
}

fn non_minimal_cubic() -> GSurfaceDescriptor {
    let mut v: serde_json::Value =
        serde_json::from_str(r#"{"kind": "del_pezzo", "degree": 3}"#).unwrap();
    let perm = [0, 2, 1, 4, 3, 5, 6];
    let rows: Vec<Vec<i64>> = perm
        .iter()
        .map(|&j| (0..7).map(|i| i64::from(i == j)).collect())
        .collect();
    v["action"] = serde_json::json!({ "r": 6, "generators": [rows] });
    GSurfaceDescriptor::from_json(&v).unwrap()
}

fn mobius() -> impl Strategy<Value = Mobius> {
    (-9i64..=9, -9i64..=9, -9i64..=9, -9i64..=9)
        .prop_filter("invertible", |(p, q, r, s)| p * s != q * r)
        .prop_map(|(p, q, r, s)| Mobius::new(p, q, r, s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn classify_is_conjugation_invariant(word in prop::collection::vec(0usize..6, 0..12)) {
        let h = weyl_element(&word);
        for d in [
            load("family08_cubic_triple_cover"),
            load("reduction_cubic_fixed_point"),
            non_minimal_cubic(),
        ] {
            let v = classify(&d).unwrap();
            prop_assert_eq!(classify(&conjugated(&d, &h)).unwrap(), v);
        }
    }

    #[test]
    fn family_11_invariant_is_mobius_invariant(k in 6usize..=9, pick in 0usize..16, m in mobius()) {
        let profiles: Vec<_> = realisable_profiles(k)
            .into_iter()
            .filter(|p| k >= 8 || p[0] == 1)
            .collect();
        prop_assume!(!profiles.is_empty());
        let t = example_triplet(profiles[pick % profiles.len()]).unwrap();
        let inv = |t| {
            let v = classify(&GSurfaceDescriptor::Z22(z22_from_triplet(t).unwrap())).unwrap();
            conjugacy_invariant(&v).unwrap()
        };
        let moved = t.map(&m);
        prop_assert_eq!(inv(&t), inv(&moved));
    }

    #[test]
    fn family_5_invariant_is_mobius_invariant(
        pts in prop::collection::btree_set(-20i64..=20, 4..=10),
        m in mobius(),
    ) {
        let mut pts: Vec<P1Point> = pts.into_iter().map(P1Point::finite).collect();
        if pts.len() % 2 == 1 {
            pts.pop();
        }
        let moved: Vec<P1Point> = pts.iter().map(|p| m.apply(p)).collect();
        let inv = |d: &[P1Point]| {
            let v = classify(&GSurfaceDescriptor::Exceptional(exceptional_from_delta(d).unwrap())).unwrap();
            conjugacy_invariant(&v).unwrap()
        };
        prop_assert_eq!(inv(&pts), inv(&moved));
    }
}
