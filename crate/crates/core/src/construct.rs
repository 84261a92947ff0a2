//! Generators of gbent functions and small exhaustive oracles.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::classify::is_gbent;
use crate::error::{GbentError, Result};
use crate::gbfunc::{ComponentTuple, GBFunction, PAryFunction};

/// Affine function `c + Σ w_i x_i` of the first `m` variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Affine {
    pub c: u64,
    pub w: Vec<u64>,
}

impl Affine {
    pub fn constant(c: u64, m: u32) -> Self {
        Affine {
            c,
            w: vec![0; m as usize],
        }
    }
}

/// `f_0 = Σ β_i x_i x_{i+m}` on `Z_p^{2m}` with affine digits `f_1 … f_{k-1}`
/// in `x_1 … x_m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaioranaSpec {
    pub p: u64,
    pub m: u32,
    pub q: u64,
    pub beta: Vec<u64>,
    pub affines: Vec<Affine>,
}

impl MaioranaSpec {
    pub fn k(&self) -> u32 {
        arith::ceil_log(self.p, self.q)
    }

    pub fn validate(&self) -> Result<()> {
        let (p, m) = (self.p, self.m);
        if !arith::is_odd_prime(p) {
            return Err(GbentError::NotOddPrime(p));
        }
        if m == 0 {
            return Err(GbentError::InvalidParameters("m must be at least 1".into()));
        }
        if self.q == 0 || !self.q.is_multiple_of(p) {
            return Err(GbentError::InvalidParameters(format!(
                "p = {p} must divide q = {}",
                self.q
            )));
        }
        if self.beta.len() != m as usize {
            return Err(GbentError::LengthMismatch {
                expected: m as usize,
                actual: self.beta.len(),
                what: "beta".into(),
            });
        }
        if let Some((i, &b)) = self
            .beta
            .iter()
            .enumerate()
            .find(|(_, &b)| b == 0 || b >= p)
        {
            return Err(GbentError::InvalidParameters(format!(
                "beta[{i}] = {b} must be a nonzero element of Z_{p}"
            )));
        }
        let k = self.k();
        if self.affines.len() + 1 != k as usize {
            return Err(GbentError::LengthMismatch {
                expected: k as usize - 1,
                actual: self.affines.len(),
                what: format!("affine digits for q = {}", self.q),
            });
        }
        for (t, a) in self.affines.iter().enumerate() {
            if a.w.len() != m as usize {
                return Err(GbentError::LengthMismatch {
                    expected: m as usize,
                    actual: a.w.len(),
                    what: format!("coefficients of affine {}", t + 1),
                });
            }
            if let Some(&bad) = std::iter::once(&a.c).chain(&a.w).find(|&&v| v >= p) {
                return Err(GbentError::OutOfRange {
                    value: bad,
                    bound: p,
                    location: format!("affine {}", t + 1),
                });
            }
        }
        Ok(())
    }

    /// Random instance with nonzero `beta` and uniform affine digits.
    pub fn random<R: Rng>(rng: &mut R, p: u64, m: u32, q: u64) -> Self {
        let k = arith::ceil_log(p, q);
        MaioranaSpec {
            p,
            m,
            q,
            beta: (0..m).map(|_| rng.gen_range(1..p)).collect(),
            affines: (1..k)
                .map(|_| Affine {
                    c: rng.gen_range(0..p),
                    w: (0..m).map(|_| rng.gen_range(0..p)).collect(),
                })
                .collect(),
        }
    }

    /// The pair `(j, v)` with `S_{f_0 + Σ a_t f_t}(u) = p^m ζ_p^{j + v·a}`, from
    /// the closed form `Σ_i u_{i+m} β_i^{-1} (l^{(i)}(a) - u_i) + Σ_t a_t c_t`.
    pub fn predicted_row(&self, u: &[u64]) -> (u64, Vec<u64>) {
        let p = self.p;
        let m = self.m as usize;
        let coef: Vec<u64> = (0..m)
            .map(|i| u[i + m] * arith::inv_mod_prime(self.beta[i], p) % p)
            .collect();
        let j = (0..m).map(|i| coef[i] * ((p - u[i]) % p)).sum::<u64>() % p;
        let v = self
            .affines
            .iter()
            .map(|a| (a.c + (0..m).map(|i| coef[i] * a.w[i]).sum::<u64>()) % p)
            .collect();
        (j, v)
    }
}

pub fn build_maiorana(spec: &MaioranaSpec) -> Result<ComponentTuple> {
    spec.validate()?;
    let (p, m) = (spec.p, spec.m as usize);
    let n = 2 * spec.m;
    let mut components = vec![PAryFunction::from_fn(p, n, |x| {
        (0..m).map(|i| spec.beta[i] * x[i] * x[i + m]).sum::<u64>() % p
    })?];
    for a in &spec.affines {
        components.push(PAryFunction::from_fn(p, n, |x| {
            (a.c + (0..m).map(|i| a.w[i] * x[i]).sum::<u64>()) % p
        })?);
    }
    ComponentTuple::new(spec.q, components)
}

/// `p = 3, m = 2, q = 27`: `f = 9(2x_1x_3 + x_2x_4) + 3(x_1 + x_2) + x_1`.
pub fn worked_example_q27() -> MaioranaSpec {
    MaioranaSpec {
        p: 3,
        m: 2,
        q: 27,
        beta: vec![2, 1],
        affines: vec![
            Affine {
                c: 0,
                w: vec![1, 1],
            },
            Affine {
                c: 0,
                w: vec![1, 0],
            },
        ],
    }
}

/// `p = 3, m = 2, q = 21`: `f = 7(x_1x_3 + 2x_2x_4) + 3(2x_1 + x_2) + 1`.
pub fn worked_example_q21() -> MaioranaSpec {
    MaioranaSpec {
        p: 3,
        m: 2,
        q: 21,
        beta: vec![1, 2],
        affines: vec![
            Affine {
                c: 0,
                w: vec![2, 1],
            },
            Affine::constant(1, 2),
        ],
    }
}

/// Reorder the non-leading digits: component `i ≥ 1` of the result is
/// component `pi[i-1]` of `t`. `pi` is a permutation of `{1, …, k-1}`.
pub fn permute_digits(t: &ComponentTuple, pi: &[usize]) -> Result<ComponentTuple> {
    let k = t.k() as usize;
    let mut seen = vec![false; k];
    if pi.len() + 1 != k {
        return Err(GbentError::LengthMismatch {
            expected: k - 1,
            actual: pi.len(),
            what: "digit permutation".into(),
        });
    }
    for &i in pi {
        if i == 0 || i >= k || seen[i] {
            return Err(GbentError::InvalidParameters(format!(
                "{pi:?} is not a permutation of 1..={}",
                k - 1
            )));
        }
        seen[i] = true;
    }
    let comps = t.components();
    let mut out = vec![comps[0].clone()];
    out.extend(pi.iter().map(|&i| comps[i].clone()));
    ComponentTuple::new(t.q(), out)
}

/// Keep `f_0` and the digits listed in `subset` (ascending), giving a
/// function into `Z_{p^l}` with `l = |subset| + 1`. Needs `q = p^k`.
pub fn restrict_digits(t: &ComponentTuple, subset: &[usize]) -> Result<ComponentTuple> {
    if !t.is_prime_power() {
        return Err(GbentError::InvalidParameters(format!(
            "digit restriction needs q a power of p, got q = {}",
            t.q()
        )));
    }
    let k = t.k() as usize;
    let mut idx = subset.to_vec();
    idx.sort_unstable();
    idx.dedup();
    if idx.len() != subset.len() || idx.iter().any(|&i| i == 0 || i >= k) {
        return Err(GbentError::InvalidParameters(format!(
            "{subset:?} is not a subset of 1..={}",
            k - 1
        )));
    }
    let comps = t.components();
    let mut out = vec![comps[0].clone()];
    out.extend(idx.iter().map(|&i| comps[i].clone()));
    ComponentTuple::new(arith::pow(t.p(), out.len() as u32), out)
}

/// Largest number of truth tables the exhaustive census will visit (`3^9`).
pub const ENUMERATION_LIMIT: u64 = 19_683;

/// Every bent function `Z_p^n → Z_p`, by exhaustive search with the direct transform.
pub fn enumerate_pary_bent(p: u64, n: u32) -> Result<Vec<PAryFunction>> {
    let (total, len) = census_size(p, n)?;
    let bent: Vec<Option<PAryFunction>> = (0..total)
        .into_par_iter()
        .map(|code| {
            let table = arith::digits_le(code as usize, p, len);
            let f = GBFunction::new(p, n, p, table).expect("valid table");
            is_gbent::<i64>(&f)
                .is_gbent()
                .then(|| PAryFunction::new(p, n, f.table().to_vec()).expect("valid table"))
        })
        .collect();
    Ok(bent.into_iter().flatten().collect())
}

/// `(number of truth tables, points per table)`, rejecting anything too large.
pub fn census_size(p: u64, n: u32) -> Result<(u64, usize)> {
    if !arith::is_odd_prime(p) {
        return Err(GbentError::NotOddPrime(p));
    }
    let len = p.checked_pow(n).filter(|_| n >= 1);
    let total = len
        .and_then(|l| u32::try_from(l).ok())
        .and_then(|l| p.checked_pow(l));
    match (len, total) {
        (Some(len), Some(total)) if total <= ENUMERATION_LIMIT => Ok((total, len as usize)),
        _ => Err(GbentError::InvalidParameters(format!(
            "exhaustive census of Z_{p}^{n} -> Z_{p} exceeds {ENUMERATION_LIMIT} truth tables"
        ))),
    }
}

/// Uniformly random digit tuple `Z_p^n → Z_q`.
pub fn random_tuple<R: Rng>(rng: &mut R, p: u64, n: u32, q: u64) -> Result<ComponentTuple> {
    let len = arith::pow(p, n) as usize;
    let comps = (0..arith::ceil_log(p, q))
        .map(|_| PAryFunction::new(p, n, (0..len).map(|_| rng.gen_range(0..p)).collect()))
        .collect::<Result<Vec<_>>>()?;
    ComponentTuple::new(q, comps)
}

/// Uniformly random truth table `Z_p^n → Z_q`.
pub fn random_function<R: Rng>(rng: &mut R, p: u64, n: u32, q: u64) -> Result<GBFunction> {
    let len = arith::pow(p, n) as usize;
    GBFunction::new(p, n, q, (0..len).map(|_| rng.gen_range(0..q)).collect())
}

/// `β x_1 x_2 + b_1 x_1 + b_2 x_2 + c` on `Z_p^2` for all `β ≠ 0` and all affine parts.
pub fn quadratic_family(p: u64) -> Result<Vec<PAryFunction>> {
    let mut out = Vec::new();
    for beta in 1..p {
        for b1 in 0..p {
            for b2 in 0..p {
                for c in 0..p {
                    out.push(PAryFunction::from_fn(p, 2, |x| {
                        beta * x[0] * x[1] + b1 * x[0] + b2 * x[1] + c
                    })?);
                }
            }
        }
    }
    Ok(out)
}
