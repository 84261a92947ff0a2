//! Quick invariant suites behind `gbent selftest`.

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith;
use crate::classify::{
    component_bent_criterion, is_gbent, is_gbent_spectrum, weak_regularity_criterion,
};
use crate::construct::{
    build_maiorana, enumerate_pary_bent, permute_digits, random_function, random_tuple,
    restrict_digits, worked_example_q21, worked_example_q27, MaioranaSpec,
};
use crate::cyclotomic::{gauss_sqrt, CycInt};
use crate::error::Result;
use crate::tables;
use crate::transform::{gamma_product, gamma_sum, inverse_wht, wht_composed, wht_naive};

type Z = CycInt<BigInt>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn suite(name: &'static str, outcome: Result<String>) -> SuiteResult {
    match outcome {
        Ok(detail) if detail.is_empty() => SuiteResult {
            name,
            passed: true,
            detail: "ok".into(),
        },
        Ok(detail) => SuiteResult {
            name,
            passed: false,
            detail,
        },
        Err(e) => SuiteResult {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn gauss_sums() -> Result<String> {
    for p in [3u64, 5, 7, 11, 13] {
        let m = 4 * p;
        let g: Z = gauss_sqrt(p, m)?;
        if &g * &g != Z::from_int(m, BigInt::from(p)) {
            return Ok(format!("gauss_sqrt({p})^2 != {p}"));
        }
    }
    Ok(String::new())
}

fn gamma_forms() -> Result<String> {
    for (p, k) in [(3u64, 2u32), (3, 3), (5, 2)] {
        for idx in 0..arith::pow(p, k - 1) as usize {
            let a = arith::digits_le(idx, p, (k - 1) as usize);
            if gamma_sum::<BigInt>(&a, p, k)? != gamma_product::<BigInt>(&a, p, k)? {
                return Ok(format!(
                    "sum and product forms differ at p = {p}, k = {k}, a = {a:?}"
                ));
            }
        }
    }
    Ok(String::new())
}

fn composition(rng: &mut ChaCha8Rng) -> Result<String> {
    for q in [9u64, 27, 15, 21] {
        for _ in 0..10 {
            let t = random_tuple(rng, 3, 2, q)?;
            if wht_composed::<BigInt>(&t)? != wht_naive::<BigInt>(&t.compose()) {
                return Ok(format!(
                    "composed spectrum differs from direct spectrum at q = {q}"
                ));
            }
        }
    }
    Ok(String::new())
}

fn round_trip(rng: &mut ChaCha8Rng) -> Result<String> {
    for q in [3u64, 9, 21, 12] {
        for _ in 0..10 {
            let f = random_function(rng, 3, 2, q)?;
            let s = wht_naive::<BigInt>(&f);
            if !s.parseval_holds() {
                return Ok(format!("Parseval fails at q = {q}"));
            }
            let m = s.modulus();
            let back = inverse_wht(&s)?;
            if back
                .iter()
                .zip(f.table())
                .any(|(z, &v)| *z != Z::root(m, (v * (m / q)) as i64))
            {
                return Ok(format!("inverse transform does not recover f at q = {q}"));
            }
        }
    }
    Ok(String::new())
}

fn component_criterion(rng: &mut ChaCha8Rng) -> Result<String> {
    for _ in 0..100 {
        let t = random_tuple(rng, 3, 2, 9)?;
        let by_rows = component_bent_criterion::<BigInt>(&t)?.holds();
        let direct = is_gbent::<BigInt>(&t.compose()).is_gbent();
        if by_rows != direct {
            return Ok(format!(
                "criterion says {by_rows}, direct check says {direct}"
            ));
        }
    }
    Ok(String::new())
}

fn constructions(rng: &mut ChaCha8Rng) -> Result<String> {
    for (p, m, q) in [
        (3u64, 1u32, 9u64),
        (3, 2, 27),
        (5, 1, 25),
        (3, 2, 21),
        (3, 1, 15),
    ] {
        for _ in 0..3 {
            let spec = MaioranaSpec::random(rng, p, m, q);
            let t = build_maiorana(&spec)?;
            if !is_gbent::<BigInt>(&t.compose()).is_gbent() {
                return Ok(format!("construction not gbent: {spec:?}"));
            }
            if t.is_prime_power() {
                if !component_bent_criterion::<BigInt>(&t)?.holds() {
                    return Ok(format!("component criterion fails: {spec:?}"));
                }
                let k = t.k() as usize;
                let reversed: Vec<usize> = (1..k).rev().collect();
                let derived = [
                    permute_digits(&t, &reversed)?,
                    restrict_digits(&t, &[k - 1])?,
                ];
                if derived
                    .iter()
                    .any(|d| !is_gbent::<BigInt>(&d.compose()).is_gbent())
                {
                    return Ok(format!("permuted or restricted digits not gbent: {spec:?}"));
                }
            } else if weak_regularity_criterion::<BigInt>(&t)?.is_none() {
                return Ok(format!("global-prefactor criterion fails: {spec:?}"));
            }
        }
    }
    Ok(String::new())
}

fn census() -> Result<String> {
    let bent = enumerate_pary_bent(3, 1)?;
    let mut expected = Vec::new();
    for a in 1..3u64 {
        for b in 0..3 {
            for c in 0..3 {
                expected.push(
                    (0..3)
                        .map(|x| (a * x * x + b * x + c) % 3)
                        .collect::<Vec<u64>>(),
                );
            }
        }
    }
    let mut found: Vec<Vec<u64>> = bent.iter().map(|f| f.table().to_vec()).collect();
    expected.sort();
    found.sort();
    Ok(if found == expected {
        String::new()
    } else {
        format!(
            "{} bent functions found, expected the 18 quadratics",
            found.len()
        )
    })
}

fn reference_tables() -> Result<String> {
    for (name, spec, golden) in [
        ("q = 27", worked_example_q27(), tables::TABLE_Q27),
        ("q = 21", worked_example_q21(), tables::TABLE_Q21),
    ] {
        let table = tables::compute_table(&spec)?;
        let golden = tables::parse_golden(golden)?;
        if tables::find_relabel(&table, &golden)?.is_none() {
            return Ok(format!(
                "{name} table disagrees with the reference under every relabeling"
            ));
        }
        let t = build_maiorana(&spec)?;
        if !is_gbent_spectrum(&wht_naive::<BigInt>(&t.compose())).is_gbent() {
            return Ok(format!("{name} worked example is not gbent"));
        }
    }
    Ok(String::new())
}

/// Run every suite. Randomized suites draw from one ChaCha stream seeded by `seed`.
pub fn run_all(seed: u64) -> Vec<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vec![
        suite("gauss sums", gauss_sums()),
        suite("gamma sum and product forms", gamma_forms()),
        suite("composed vs direct spectrum", composition(&mut rng)),
        suite("inverse transform and Parseval", round_trip(&mut rng)),
        suite(
            "component criterion vs direct check",
            component_criterion(&mut rng),
        ),
        suite("constructions", constructions(&mut rng)),
        suite("census Z_3 -> Z_3", census()),
        suite("reference tables", reference_tables()),
    ]
}
