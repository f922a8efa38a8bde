use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cremona::bundles::{
    example_triplet, exceptional_from_delta, fixed_curve_class, halphen_check, is_del_pezzo_bundle,
    jonquieres_involution, jonquieres_involution_matrix, minimality_obstruction_solver,
    obstruction_table, realisable_profiles, second_fibration_solver, z22_from_triplet,
    DelPezzoVerdict, Obstruction, SecondFibration,
};
use cremona::classifier::{classify, Family, GSurfaceDescriptor, Verdict};
use cremona::geometry::{Mobius, P1Point};
use cremona::picard::{enumerate_minus_one_classes, BlowupLattice, FiberedMarking};
use cremona::square_class::{
    stabilizer, triplet_canonical_form, validate_triplet, RamificationTriplet,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

fn load(name: &str) -> Result<GSurfaceDescriptor, String> {
    let text = fs::read_to_string(data_dir().join(format!("corpus/{name}.json"))).map_err(err)?;
    let v = serde_json::from_str(&text).map_err(err)?;
    GSurfaceDescriptor::from_json(&v).map_err(err)
}

/// Counts `dL − Σ m_i E_i` with `d² − Σ m_i² = −1` and `3d − Σ m_i = 1` by
/// direct search over `0 ≤ d ≤ 12`, `−2 ≤ m_i ≤ d + 1`.
fn oracle_minus_one_count(r: usize) -> usize {
    fn go(left: usize, sum: i64, sq: i64, lo: i64, hi: i64) -> usize {
        if left == 0 {
            return usize::from(sum == 0 && sq == 0);
        }
        if sq < 0 || sum * sum > left as i64 * sq {
            return 0;
        }
        (lo..=hi)
            .map(|m| go(left - 1, sum - m, sq - m * m, lo, hi))
            .sum()
    }
    (0..=12)
        .map(|d| go(r, 3 * d - 1, d * d + 1, -2, d + 1))
        .sum()
}

fn criterion_1() -> Outcome {
    let printed = [(3, 6), (4, 10), (6, 27)];
    for r in 1..=8 {
        let lat = BlowupLattice::new(r).map_err(err)?;
        let start = Instant::now();
        let got = enumerate_minus_one_classes(&lat).map_err(err)?.len();
        let elapsed = start.elapsed();
        if let Some(&(_, want)) = printed.iter().find(|(s, _)| *s == r) {
            ensure(got == want, || format!("r = {r}: {got} ≠ {want}"))?;
        }
        let oracle = oracle_minus_one_count(r);
        ensure(got == oracle, || {
            format!("r = {r}: {got} ≠ oracle {oracle}")
        })?;
        if r == 8 {
            ensure(elapsed < Duration::from_secs(10), || {
                format!("r = 8 took {elapsed:?}")
            })?;
        }
    }
    Ok(())
}

fn criterion_2() -> Outcome {
    let m = FiberedMarking::new(4).map_err(err)?;
    let lat = m.lattice();
    let s = jonquieres_involution(&m).map_err(err)?;
    // Printed basis (E_q, E_1..E_4, L) against the marking basis (L, E_q, E_1..E_4).
    let printed = jonquieres_involution_matrix();
    let pos = |i: usize| (i + 1) % 6;
    for i in 0..6 {
        for j in 0..6 {
            ensure(
                s.matrix().rows()[pos(i)][pos(j)] == printed.rows()[i][j],
                || format!("entry ({i}, {j}) differs from the printed matrix"),
            )?;
        }
    }
    let k = lat.canonical();
    ensure(s.apply(&k).map_err(err)? == k, || "K is moved".into())?;
    ensure(s.compose(&s).map_err(err)?.matrix().is_identity(), || {
        "σ² ≠ 1".into()
    })?;
    let l = lat.line();
    let eq = m.section();
    for i in 1..=4 {
        let e = m.component(i);
        ensure(s.apply(&e).map_err(err)? == l.sub(&eq).sub(&e), || {
            format!("E_{i}")
        })?;
    }
    let f = l.sub(&eq);
    ensure(s.apply(&f).map_err(err)? == f, || "L − E_q is moved".into())?;
    let l12 = l.sub(&m.component(1)).sub(&m.component(2));
    let l34 = l.sub(&m.component(3)).sub(&m.component(4));
    ensure(s.apply(&l12).map_err(err)? == l34, || {
        "L − E_1 − E_2".into()
    })
}

fn all_profiles(max_k: usize) -> Vec<[usize; 3]> {
    (3..=max_k).flat_map(realisable_profiles).collect()
}

fn criterion_3() -> Outcome {
    for prof in all_profiles(10) {
        let m = z22_from_triplet(&example_triplet(prof).ok_or("unrealisable")?).map_err(err)?;
        let lat = m.lattice();
        for i in 1..=3 {
            let s = m.sigma(i);
            ensure(s.compose(s).map_err(err)?.matrix().is_identity(), || {
                format!("{prof:?}: σ_{i} is not an involution")
            })?;
            let e0 = s.apply(&m.marking().section()).map_err(err)?;
            ensure(lat.square(&e0).map_err(err)? == -1, || {
                format!("{prof:?}: σ_{i}(E_0)²")
            })?;
        }
        let s12 = m.sigma(1).compose(m.sigma(2)).map_err(err)?;
        ensure(s12.matrix() == m.sigma(3).matrix(), || {
            format!("{prof:?}: σ_1σ_2 ≠ σ_3")
        })?;
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    for prof in all_profiles(10) {
        let t = example_triplet(prof).ok_or("unrealisable")?;
        let m = z22_from_triplet(&t).map_err(err)?;
        let lat = m.lattice();
        let k = lat.canonical();
        let f = m.marking().fiber();
        let inv = m.action().invariant_sublattice().map_err(err)?;
        ensure(
            inv.rank == 2 && inv.is_spanned_by(&[k.clone(), f.clone()]),
            || format!("{prof:?}: invariant lattice ≠ ZK ⊕ Zf"),
        )?;
        let kk = m.k() as i64;
        for i in 1..=3 {
            let a = t.a()[i - 1] as i64;
            let c = fixed_curve_class(&m, i).map_err(err)?;
            ensure(c.class == k.neg().add(&f.scale(a - 2)), || {
                format!("{prof:?}: C_{i}")
            })?;
            let sq = lat.square(&c.class).map_err(err)?;
            let ck = lat.intersect(&c.class, &k).map_err(err)?;
            ensure(sq == 4 * a - kk, || format!("{prof:?}: C_{i}² = {sq}"))?;
            let genus = (sq + ck) / 2 + 1;
            ensure(genus == a - 1 && c.genus == a - 1, || {
                format!("{prof:?}: g(C_{i}) = {genus}")
            })?;
        }
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    for prof in all_profiles(12) {
        let k: usize = prof.iter().sum();
        let m = z22_from_triplet(&example_triplet(prof).ok_or("unrealisable")?).map_err(err)?;
        let v = is_del_pezzo_bundle(&m);
        let ok = match k {
            0..=5 => v == DelPezzoVerdict::Yes,
            8.. => matches!(v, DelPezzoVerdict::No(_)),
            _ if prof[0] == 1 => matches!(v, DelPezzoVerdict::No(_)),
            _ => matches!(v, DelPezzoVerdict::Indeterminate(_)),
        };
        ensure(ok, || format!("{prof:?}: {v:?}"))?;
    }
    Ok(())
}

fn criterion_6() -> Outcome {
    for (name, profile, meeting) in [
        ("construction_four_lines", [2, 2, 2], &[][..]),
        (
            "construction_three_lines_conic",
            [2, 2, 3],
            &[(0, 1), (2, 3)][..],
        ),
    ] {
        let d = load(name)?;
        let GSurfaceDescriptor::Z22(m) = &d else {
            return Err(format!("{name} is not a (Z/2)²-bundle"));
        };
        ensure(m.triplet().profile() == profile, || {
            format!("{name}: profile")
        })?;
        let cert = m.certificate().ok_or("no certificate")?;
        m.check_certificate().map_err(err)?;
        let lat = m.lattice();
        for (i, a) in cert.sections.iter().enumerate() {
            ensure(lat.square(a).map_err(err)? == -2, || {
                format!("{name}: section {i}")
            })?;
            for (j, b) in cert.sections.iter().enumerate().skip(i + 1) {
                let want = i64::from(meeting.contains(&(i, j)));
                ensure(lat.intersect(a, b).map_err(err)? == want, || {
                    format!("{name}: sections {i}, {j}")
                })?;
            }
        }
        let orbits = m.action().orbits(&cert.sections).map_err(err)?;
        ensure(orbits.len() == 1, || format!("{name}: not transitive"))?;
        let v = classify(&d).map_err(err)?;
        ensure(v.family() == Some(Family::new(11)), || {
            format!("{name}: {v}")
        })?;
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let o = |l, a, b, k2| Obstruction { l, a, b, k2 };
    let want: BTreeSet<_> = [
        o(1, -1, -1, 3),
        o(2, -1, -2, 6),
        o(4, -1, -4, 12),
        o(4, -2, -3, 5),
    ]
    .into_iter()
    .collect();
    let got: BTreeSet<_> = obstruction_table(&[1, 2, 4]).into_iter().collect();
    ensure(got == want, || format!("{got:?}"))?;
    for k in 0..=12 {
        let free = minimality_obstruction_solver(k, &[1, 2, 4]).is_empty();
        ensure(free == ![2, 3, 5].contains(&k), || format!("k = {k}"))?;
    }
    for k in [4, 6, 7] {
        for prof in realisable_profiles(k) {
            let m = z22_from_triplet(&example_triplet(prof).ok_or("unrealisable")?).map_err(err)?;
            let min = m.action().is_pair_minimal().map_err(err)?;
            ensure(min.minimal, || {
                format!("{prof:?}: orbit witness {:?}", min.witness)
            })?;
        }
    }
    Ok(())
}

fn criterion_8() -> Outcome {
    let sol = |a, b| SecondFibration::Solution { a, b };
    for (k2, w) in [(4, sol(1, -1)), (2, sol(2, -1)), (1, sol(4, -1))] {
        let got = second_fibration_solver(k2);
        ensure(got == w, || format!("K² = {k2}: {got:?}"))?;
    }
    for k2 in [3, 5, 6, 7] {
        let got = second_fibration_solver(k2);
        ensure(got == SecondFibration::None, || {
            format!("K² = {k2}: {got:?}")
        })?;
    }
    Ok(())
}

fn criterion_9() -> Outcome {
    for n in 1..=6usize {
        let delta: Vec<P1Point> = (0..2 * n as i64)
            .map(|x| P1Point::finite(x * x + 1))
            .collect();
        let m = exceptional_from_delta(&delta).map_err(err)?;
        let mult = m.eigen_multiplicities().map_err(err)?;
        ensure(mult == (2, 2 * n), || format!("n = {n}: {mult:?}"))?;
        let rank = m.action().invariant_sublattice().map_err(err)?.rank;
        ensure(rank == 2, || format!("n = {n}: invariant rank {rank}"))?;
    }
    let v = classify(&load("reduction_exceptional_two")?).map_err(err)?;
    ensure(
        matches!(v, Verdict::NotMaximal { .. }) && v.terminal_family() == Some(Family::new(3)),
        || format!("{v}"),
    )
}

fn criterion_10() -> Outcome {
    let p = |xs: &[i64]| xs.iter().map(|&x| P1Point::finite(x)).collect::<Vec<_>>();
    let t = validate_triplet(
        &p(&[0, 1, 2, 3]),
        &p(&[4, 5, 6, 7]),
        &p(&[0, 1, 2, 3, 4, 5, 6, 7]),
    )
    .map_err(err)?;
    let h = halphen_check(&t).ok_or("not recognised")?;
    ensure(h.k2 == 0, || format!("K² = {}", h.k2))?;
    ensure(h.c1 == h.minus_k && h.c2 == h.minus_k, || "C_i ≠ −K".into())?;
    ensure(h.genus == 1, || format!("genus {}", h.genus))?;
    ensure(
        h.flag.contains("Aut(S) not algebraic") && h.flag.contains("Aut(S,π) maximal"),
        || h.flag.clone(),
    )
}

const GOLDEN: [(&str, u8); 17] = [
    ("family01_plane", 1),
    ("family02_quadric", 2),
    ("family03_degree6", 3),
    ("family04_hirzebruch3", 4),
    ("family05_exceptional", 5),
    ("family06_degree5", 6),
    ("family07_degree4", 7),
    ("family08_cubic_triple_cover", 8),
    ("family09_quartic_row7", 9),
    ("family10_degree1", 10),
    ("family11_z22", 11),
    ("reduction_f1", 1),
    ("reduction_degree7", 2),
    ("reduction_degree8_blowup", 1),
    ("reduction_cubic_fixed_point", 9),
    ("reduction_quartic_off_table", 10),
    ("reduction_exceptional_two", 3),
];

fn criterion_11() -> Outcome {
    for (i, (name, f)) in GOLDEN.iter().enumerate() {
        let v = classify(&load(name)?).map_err(err)?;
        let reduction = i >= 11;
        match &v {
            Verdict::Maximal { family, .. } if !reduction => {
                ensure(family.index == *f, || format!("{name}: {v}"))?
            }
            Verdict::NotMaximal { chain, .. } if reduction => {
                ensure(
                    chain.len() <= 8 && chain.iter().all(|s| s.is_consistent()),
                    || format!("{name}: chain"),
                )?;
                ensure(v.terminal_family() == Some(Family::new(*f)), || {
                    format!("{name}: {v}")
                })?
            }
            _ => return Err(format!("{name}: {v}")),
        }
        let got = serde_json::to_string_pretty(&v.to_json()).map_err(err)? + "\n";
        let want = fs::read_to_string(data_dir().join(format!("golden/{name}.expected.json")))
            .map_err(err)?;
        ensure(got == want, || {
            format!("{name}: report differs from golden file")
        })?;
    }
    Ok(())
}

fn corpus_triplets() -> Result<Vec<RamificationTriplet>, String> {
    let mut out = Vec::new();
    for name in [
        "family11_z22",
        "construction_four_lines",
        "construction_three_lines_conic",
    ] {
        match load(name)? {
            GSurfaceDescriptor::Z22(m) => out.push(m.triplet().clone()),
            _ => return Err(format!("{name} is not a (Z/2)²-bundle")),
        }
    }
    Ok(out)
}

fn criterion_12() -> Outcome {
    let pts = [P1Point::finite(0), P1Point::finite(1), P1Point::infinity()];
    let n = stabilizer(&pts).map_err(err)?.len();
    ensure(n == 6, || format!("|stabilizer| = {n}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for t in corpus_triplets()? {
        let base = triplet_canonical_form(&t).map_err(err)?;
        let mut tried = 0;
        while tried < 100 {
            let [p, q, r, s]: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-50..=50));
            let Ok(m) = Mobius::new(p, q, r, s) else {
                continue;
            };
            tried += 1;
            let c = triplet_canonical_form(&t.map(&m)).map_err(err)?;
            ensure(c == base, || format!("{t:?} under {m:?}"))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("(−1)-class counts", criterion_1),
        ("de Jonquières involution matrix", criterion_2),
        ("σ formula for k ≤ 10", criterion_3),
        ("invariant lattice and fixed curves", criterion_4),
        ("del Pezzo thresholds for k ≤ 12", criterion_5),
        ("plane constructions", criterion_6),
        ("minimality solver", criterion_7),
        ("second fibration", criterion_8),
        ("exceptional bundles", criterion_9),
        ("Halphen case", criterion_10),
        ("classifier golden corpus", criterion_11),
        ("Möbius stabilizer and canonical forms", criterion_12),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match f() {
            Ok(()) => println!("PASS {:>2}. {title} ({:.2?})", i + 1, start.elapsed()),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2}. {title}: {e}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
