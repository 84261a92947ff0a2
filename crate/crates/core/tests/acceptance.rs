//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.
//!
//! All checks are exact; the only pinned quantities are sample sizes and seeds.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use gbent::arith;
use gbent::classify::{
    component_bent_criterion, component_spectra, is_gbent_spectrum, weak_regularity_criterion, Unit,
};
use gbent::construct::{
    build_maiorana, enumerate_pary_bent, permute_digits, random_function, random_tuple,
    restrict_digits, worked_example_q21, worked_example_q27, Affine, MaioranaSpec,
};
use gbent::tables::{self, Relabel, Table};
use gbent::{
    gamma_product, gamma_sum, gauss_sqrt, inverse_wht, wht_composed, wht_naive, BigInt,
    BigSpectrum, ComponentTuple, Cyc, GBFunction, PAryFunction,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Exact arithmetic throughout: every comparison is equality in `Z[ζ_M]`.
const TOLERANCE: u64 = 0;
const SEED: u64 = 20_240_417;
const RANDOM_EQ7_P3: usize = 200;
const RANDOM_EQ7_P5: usize = 50;
const RANDOM_CRITERION_TUPLES: usize = 1000;
const MIN_CONSTRUCTION_INSTANCES: usize = 50;
const CONSTRUCTION_DRAWS: usize = 50;
const RANDOM_ROUND_TRIP: usize = 100;

static SPECTRA: AtomicUsize = AtomicUsize::new(0);
static PARSEVAL_FAILURES: AtomicUsize = AtomicUsize::new(0);

fn audit(s: &BigSpectrum) {
    SPECTRA.fetch_add(1, Ordering::Relaxed);
    if !s.parseval_holds() {
        PARSEVAL_FAILURES.fetch_add(1, Ordering::Relaxed);
    }
}

/// Direct spectrum, with Parseval recorded.
fn spectrum(f: &GBFunction) -> BigSpectrum {
    let s = wht_naive::<BigInt>(f);
    audit(&s);
    s
}

fn gbent(f: &GBFunction) -> bool {
    is_gbent_spectrum(&spectrum(f)).is_gbent()
}

/// Component criterion with every component spectrum passed through Parseval.
fn criterion(t: &ComponentTuple) -> bool {
    component_spectra::<BigInt>(t).iter().for_each(audit);
    component_bent_criterion::<BigInt>(t)
        .expect("criterion parameters")
        .holds()
}

type Check = Result<String, String>;
type Criterion = Box<dyn FnOnce(&mut ChaCha8Rng) -> Check>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn table_rows_check(
    table: &Table,
    golden_text: &str,
    spec: &MaioranaSpec,
    anchors: &[(&[u64], u64, usize)],
) -> Result<(Relabel, usize), String> {
    let golden = tables::parse_golden(golden_text).map_err(|e| e.to_string())?;
    ensure(table.rows.len() == 81, || {
        format!("{} rows computed", table.rows.len())
    })?;
    let relabel = tables::find_relabel(table, &golden)
        .map_err(|e| e.to_string())?
        .ok_or_else(|| {
            let m = tables::compare(table, &golden, Relabel::DigitReversal).unwrap_or_default();
            format!(
                "{} of {} reference rows disagree under every relabeling, e.g. {:?}",
                m.len(),
                golden.len(),
                m.first()
            )
        })?;
    ensure(relabel == Relabel::DigitReversal, || {
        format!("unexpected relabeling {relabel:?}")
    })?;
    let off = tables::closed_form_mismatches(table, spec);
    ensure(off.is_empty(), || {
        format!("closed-form prediction differs at {off:?}")
    })?;
    for &(u, j, r) in anchors {
        let row = table
            .rows
            .iter()
            .find(|row| row.u == u)
            .ok_or("missing anchor row")?;
        let got = (row.alpha, row.j, relabel.apply(row, 3));
        ensure(got == (Unit::One, j, r), || {
            format!("anchor {u:?}: got {got:?}, want (+1, {j}, {r})")
        })?;
    }
    Ok((relabel, golden.len()))
}

fn c1_table_q27() -> Check {
    let table = tables::table_q27().map_err(|e| e.to_string())?;
    let anchors: [(&[u64], u64, usize); 3] = [
        (&[0, 0, 0, 0], 0, 0),
        (&[0, 2, 2, 2], 2, 1),
        (&[2, 2, 2, 2], 0, 1),
    ];
    let (relabel, n) =
        table_rows_check(&table, tables::TABLE_Q27, &worked_example_q27(), &anchors)?;
    Ok(format!(
        "{n} transcribed rows exact under {}; all 81 rows equal the closed-form prediction (reference listing has only {n} rows)",
        relabel.name()
    ))
}

fn c2_table_q21() -> Check {
    let table = tables::table_q21().map_err(|e| e.to_string())?;
    let anchors: [(&[u64], u64, usize); 3] = [
        (&[0, 0, 0, 0], 0, 1),
        (&[1, 0, 1, 0], 2, 7),
        (&[2, 2, 2, 2], 0, 7),
    ];
    let (relabel, n) =
        table_rows_check(&table, tables::TABLE_Q21, &worked_example_q21(), &anchors)?;
    Ok(format!(
        "{n}/81 reference rows exact under {}",
        relabel.name()
    ))
}

fn c3_verdicts() -> Check {
    let f = build_maiorana(&worked_example_q27())
        .map_err(|e| e.to_string())?
        .compose();
    let s = spectrum(&f);
    let target = Cyc::from_int(s.modulus(), BigInt::from(81));
    let bad = s.values().iter().filter(|v| v.norm_sq() != target).count();
    ensure(bad == 0, || {
        format!("q = 27: |S(u)|^2 != 81 at {bad} points")
    })?;

    let t = build_maiorana(&worked_example_q21()).map_err(|e| e.to_string())?;
    let w = weak_regularity_criterion::<BigInt>(&t)
        .map_err(|e| e.to_string())?
        .ok_or("q = 21: no global-prefactor decomposition")?;
    let s = spectrum(&t.compose());
    let m = s.modulus();
    let base = Cyc::from_int(m, BigInt::from(9)) * w.alpha.to_cyc(m);
    let bad = s
        .values()
        .iter()
        .zip(&w.dual)
        .filter(|(v, &d)| **v != base.mul_root((d * (m / 21)) as i64))
        .count();
    ensure(bad == 0, || {
        format!("q = 21: dual reconstruction fails at {bad} points")
    })?;
    Ok(format!(
        "q = 27: 81/81 norms equal 81; q = 21: weakly regular, alpha = {}, 81/81 duals exact",
        w.alpha
    ))
}

fn c4_composition(rng: &mut ChaCha8Rng) -> Check {
    let check = |t: &ComponentTuple| -> Result<bool, String> {
        let composed = wht_composed::<BigInt>(t).map_err(|e| e.to_string())?;
        audit(&composed);
        Ok(composed == spectrum(&t.compose()))
    };
    let worked = build_maiorana(&worked_example_q27()).map_err(|e| e.to_string())?;
    ensure(check(&worked)?, || "q = 27 worked example differs".into())?;
    for (p, q, count) in [(3u64, 9u64, RANDOM_EQ7_P3), (5, 25, RANDOM_EQ7_P5)] {
        for i in 0..count {
            let t = random_tuple(rng, p, 2, q).map_err(|e| e.to_string())?;
            ensure(check(&t)?, || format!("random tuple {i} (p = {p}) differs"))?;
        }
    }
    Ok(format!("worked example + {RANDOM_EQ7_P3} tuples (p=3) + {RANDOM_EQ7_P5} tuples (p=5) entrywise equal"))
}

fn c5_gamma() -> Check {
    let mut count = 0;
    for (p, k) in [(3u64, 2u32), (3, 3), (5, 2), (5, 3)] {
        let size = arith::pow(p, k - 1) as usize;
        let len = (k - 1) as usize;
        let gammas: Vec<Cyc> = (0..size)
            .map(|i| gamma_sum(&arith::digits_le(i, p, len), p, k))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        for (i, g) in gammas.iter().enumerate() {
            let a = arith::digits_le(i, p, len);
            let prod: Cyc = gamma_product(&a, p, k).map_err(|e| e.to_string())?;
            ensure(*g == prod, || {
                format!("sum != product at p = {p}, k = {k}, a = {a:?}")
            })?;
            count += 1;
        }
        let pk = arith::pow(p, k);
        let step = (pk / p) as i64;
        for e in 0..size {
            // e = Σ u_j p^{k-1-j}: u_1 most significant.
            let mut u = arith::digits_le(e, p, len);
            u.reverse();
            let mut acc = Cyc::zero(pk);
            for (i, g) in gammas.iter().enumerate() {
                let a = arith::digits_le(i, p, len);
                let dot: u64 = a.iter().zip(&u).map(|(x, y)| x * y).sum();
                acc = acc + g.mul_root(step * dot as i64);
            }
            let want = Cyc::root(pk, e as i64).scalar_mul(&BigInt::from(size));
            ensure(acc == want, || {
                format!("gamma reconstruction fails at p = {p}, k = {k}, e = {e}")
            })?;
        }
    }
    let mut digit = 0;
    for p in [3u64, 5, 7] {
        for k in 1..=3u32 {
            let pk = arith::pow(p, k);
            let step = (pk / p) as i64;
            for a in 0..p {
                let mut acc = Cyc::zero(pk);
                for i in 0..p {
                    let inner = (0..p).fold(Cyc::zero(pk), |s, j| {
                        s + Cyc::root(pk, step * (((a + p - i) % p) * j) as i64)
                    });
                    acc = acc + inner * Cyc::root(pk, i as i64);
                }
                let lhs = acc.div_exact(&BigInt::from(p)).map_err(|e| e.to_string())?;
                ensure(lhs == Cyc::root(pk, a as i64), || {
                    format!("digit identity fails at p = {p}, k = {k}, a = {a}")
                })?;
                digit += 1;
            }
        }
    }
    Ok(format!(
        "{count} sum/product pairs, reconstruction for all e, {digit} digit identities"
    ))
}

fn c6_gauss() -> Check {
    for p in [3u64, 5, 7, 11, 13, 19, 23] {
        let m = 4 * p;
        let g: Cyc = gauss_sqrt(p, m).map_err(|e| e.to_string())?;
        ensure(&g * &g == Cyc::from_int(m, BigInt::from(p)), || {
            format!("square of root of {p} is wrong")
        })?;
    }
    Ok("gauss_sqrt(p)^2 = p for p in {3,5,7,11,13,19,23}".into())
}

fn maiorana_instances(rng: &mut ChaCha8Rng) -> Vec<MaioranaSpec> {
    let mut out = Vec::new();
    for beta in 1..3 {
        for c in 0..3 {
            for w in 0..3 {
                out.push(MaioranaSpec {
                    p: 3,
                    m: 1,
                    q: 9,
                    beta: vec![beta],
                    affines: vec![Affine { c, w: vec![w] }],
                });
            }
        }
    }
    out.extend((0..24).map(|_| MaioranaSpec::random(rng, 3, 2, 9)));
    out.extend((0..8).map(|_| MaioranaSpec::random(rng, 5, 1, 25)));
    out.extend((0..8).map(|_| MaioranaSpec::random(rng, 3, 1, 27)));
    out
}

fn c7_criterion(rng: &mut ChaCha8Rng) -> Check {
    let mut positives = 0;
    for i in 0..RANDOM_CRITERION_TUPLES {
        let t = random_tuple(rng, 3, 2, 9).map_err(|e| e.to_string())?;
        let (by_rows, direct) = (criterion(&t), gbent(&t.compose()));
        ensure(by_rows == direct, || {
            format!("random tuple {i}: criterion {by_rows}, direct {direct}")
        })?;
        positives += direct as usize;
    }
    // Digits drawn from quadratic polynomials in two variables: a mix of gbent
    // and non-gbent tuples that are not produced by the construction.
    let mut quad_positives = 0;
    for i in 0..RANDOM_CRITERION_TUPLES {
        let comps = (0..2)
            .map(|_| {
                let c: Vec<u64> = (0..6).map(|_| rng.gen_range(0..3)).collect();
                PAryFunction::from_fn(3, 2, |x| {
                    c[0] * x[0] * x[0]
                        + c[1] * x[0] * x[1]
                        + c[2] * x[1] * x[1]
                        + c[3] * x[0]
                        + c[4] * x[1]
                        + c[5]
                })
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        let t = ComponentTuple::new(9, comps).map_err(|e| e.to_string())?;
        let (by_rows, direct) = (criterion(&t), gbent(&t.compose()));
        ensure(by_rows == direct, || {
            format!("quadratic tuple {i}: criterion {by_rows}, direct {direct}")
        })?;
        quad_positives += direct as usize;
    }
    ensure(
        quad_positives > 0 && quad_positives < RANDOM_CRITERION_TUPLES,
        || format!("quadratic sweep did not exercise both verdicts ({quad_positives} gbent)"),
    )?;
    let instances = maiorana_instances(rng);
    for spec in &instances {
        let t = build_maiorana(spec).map_err(|e| e.to_string())?;
        let (by_rows, direct) = (criterion(&t), gbent(&t.compose()));
        ensure(by_rows && direct, || {
            format!("{spec:?}: criterion {by_rows}, direct {direct}")
        })?;
    }
    ensure(instances.len() >= MIN_CONSTRUCTION_INSTANCES, || {
        "too few constructed instances".into()
    })?;
    Ok(format!(
        "{RANDOM_CRITERION_TUPLES} random tuples agree ({positives} gbent); {RANDOM_CRITERION_TUPLES} quadratic tuples agree ({quad_positives} gbent); {} constructed instances agree (all gbent)",
        instances.len()
    ))
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, x);
            out.push(tail);
        }
    }
    out
}

fn c8_construction(rng: &mut ChaCha8Rng) -> Check {
    let (mut built, mut derived) = (0, 0);
    let mut cases: Vec<(u64, u32, u64)> = Vec::new();
    for p in [3u64, 5] {
        for m in [1u32, 2] {
            for k in [2u32, 3] {
                cases.push((p, m, arith::pow(p, k)));
            }
        }
    }
    for m in [1u32, 2] {
        cases.push((3, m, 15));
        cases.push((3, m, 21));
    }
    for &(p, m, q) in &cases {
        let mut specs: Vec<MaioranaSpec> = (0..CONSTRUCTION_DRAWS)
            .map(|_| MaioranaSpec::random(rng, p, m, q))
            .collect();
        let k = arith::ceil_log(p, q);
        specs.push(MaioranaSpec {
            p,
            m,
            q,
            beta: vec![1; m as usize],
            affines: (1..k).map(|i| Affine::constant(i as u64 % p, m)).collect(),
        });
        for spec in specs {
            let t = build_maiorana(&spec).map_err(|e| e.to_string())?;
            ensure(gbent(&t.compose()), || format!("not gbent: {spec:?}"))?;
            built += 1;
            let nonleading: Vec<usize> = (1..k as usize).collect();
            for pi in permutations(&nonleading) {
                let g = permute_digits(&t, &pi).map_err(|e| e.to_string())?;
                ensure(gbent(&g.compose()), || {
                    format!("permutation {pi:?} not gbent: {spec:?}")
                })?;
                if !t.is_prime_power() {
                    let w = weak_regularity_criterion::<BigInt>(&g).map_err(|e| e.to_string())?;
                    ensure(w.is_some(), || {
                        format!("permutation {pi:?} loses weak regularity: {spec:?}")
                    })?;
                }
                derived += 1;
            }
            if t.is_prime_power() {
                for mask in 0..(1usize << nonleading.len()) {
                    let subset: Vec<usize> = nonleading
                        .iter()
                        .enumerate()
                        .filter(|(b, _)| mask >> b & 1 == 1)
                        .map(|(_, &i)| i)
                        .collect();
                    let g = restrict_digits(&t, &subset).map_err(|e| e.to_string())?;
                    ensure(gbent(&g.compose()), || {
                        format!("restriction {subset:?} not gbent: {spec:?}")
                    })?;
                    derived += 1;
                }
            }
        }
    }
    Ok(format!("{built} constructions over {} parameter sets gbent; {derived} permuted/restricted tuples gbent", cases.len()))
}

fn c9_census() -> Check {
    let found: BTreeSet<Vec<u64>> = enumerate_pary_bent(3, 1)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|f| f.table().to_vec())
        .collect();
    let mut quadratics = BTreeSet::new();
    for a in 1..3u64 {
        for b in 0..3 {
            for c in 0..3 {
                quadratics.insert(
                    (0..3)
                        .map(|x| (a * x * x + b * x + c) % 3)
                        .collect::<Vec<u64>>(),
                );
            }
        }
    }
    ensure(found.len() == 18, || {
        format!("{} bent functions found", found.len())
    })?;
    ensure(found == quadratics, || {
        "bent set is not the set of quadratics".into()
    })?;
    Ok("18 bent / 27 truth tables, exactly ax^2+bx+c with a != 0".into())
}

fn round_trip_ok(f: &GBFunction) -> Result<bool, String> {
    let s = spectrum(f);
    let m = s.modulus();
    let back = inverse_wht(&s).map_err(|e| e.to_string())?;
    Ok(back
        .iter()
        .zip(f.table())
        .all(|(z, &v)| *z == Cyc::root(m, (v * (m / f.q())) as i64)))
}

fn c10_round_trip(rng: &mut ChaCha8Rng) -> Check {
    let f = build_maiorana(&worked_example_q27())
        .map_err(|e| e.to_string())?
        .compose();
    ensure(round_trip_ok(&f)?, || "q = 27 worked example".into())?;
    for i in 0..RANDOM_ROUND_TRIP {
        let q = if i % 2 == 0 { 9 } else { 21 };
        let f = random_function(rng, 3, 2, q).map_err(|e| e.to_string())?;
        ensure(round_trip_ok(&f)?, || {
            format!("random function {i} (q = {q})")
        })?;
    }
    let fails = PARSEVAL_FAILURES.load(Ordering::Relaxed);
    let total = SPECTRA.load(Ordering::Relaxed);
    ensure(fails == 0, || {
        format!("Parseval fails on {fails} of {total} spectra")
    })?;
    Ok(format!(
        "worked example + {RANDOM_ROUND_TRIP} random functions recovered; Parseval exact on all {total} spectra in this run"
    ))
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let criteria: Vec<(&str, Criterion)> = vec![
        ("C1 table reproduction q=27", Box::new(|_| c1_table_q27())),
        ("C2 table reproduction q=21", Box::new(|_| c2_table_q21())),
        ("C3 gbent verdicts", Box::new(|_| c3_verdicts())),
        ("C4 composed spectrum identity", Box::new(c4_composition)),
        ("C5 gamma identities", Box::new(|_| c5_gamma())),
        ("C6 Gauss sums", Box::new(|_| c6_gauss())),
        ("C7 component criterion iff", Box::new(c7_criterion)),
        ("C8 construction soundness", Box::new(c8_construction)),
        ("C9 census Z_3 -> Z_3", Box::new(|_| c9_census())),
        ("C10 round trip and Parseval", Box::new(c10_round_trip)),
    ];
    println!("acceptance (exact arithmetic, tolerance {TOLERANCE}, seed {SEED})");
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check(&mut rng);
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
