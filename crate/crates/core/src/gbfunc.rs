//! Truth-table representation of generalized Boolean functions and their
//! base-`p` component functions.
//!
//! Points of `Z_p^n` are indexed big-endian: `x_1` is the most significant
//! digit, so `index = Σ x_i p^{n-i}`.

use crate::arith;
use crate::error::{GbentError, Result};

fn check_prime(p: u64) -> Result<()> {
    if arith::is_odd_prime(p) {
        Ok(())
    } else {
        Err(GbentError::NotOddPrime(p))
    }
}

fn table_len(p: u64, n: u32) -> Result<usize> {
    if n == 0 {
        return Err(GbentError::InvalidParameters("n must be at least 1".into()));
    }
    p.checked_pow(n)
        .and_then(|v| usize::try_from(v).ok())
        .ok_or_else(|| GbentError::InvalidParameters(format!("{p}^{n} points is too many")))
}

fn check_table(table: &[u64], len: usize, bound: u64, what: &str) -> Result<()> {
    if table.len() != len {
        return Err(GbentError::LengthMismatch {
            expected: len,
            actual: table.len(),
            what: format!("{what} table"),
        });
    }
    if let Some((i, &v)) = table.iter().enumerate().find(|(_, &v)| v >= bound) {
        return Err(GbentError::OutOfRange {
            value: v,
            bound,
            location: format!("{what} table index {i}"),
        });
    }
    Ok(())
}

pub fn point_index(p: u64, x: &[u64]) -> Result<usize> {
    let mut idx = 0usize;
    for (i, &xi) in x.iter().enumerate() {
        if xi >= p {
            return Err(GbentError::OutOfRange {
                value: xi,
                bound: p,
                location: format!("coordinate {}", i + 1),
            });
        }
        idx = idx * p as usize + xi as usize;
    }
    Ok(idx)
}

pub fn index_point(p: u64, n: u32, mut index: usize) -> Vec<u64> {
    let mut x = vec![0; n as usize];
    for slot in x.iter_mut().rev() {
        *slot = index as u64 % p;
        index /= p as usize;
    }
    x
}

/// `u·x mod p` for two point indices.
pub fn dot_indices(p: u64, n: u32, mut u: usize, mut x: usize) -> u64 {
    let pu = p as usize;
    let mut acc = 0;
    for _ in 0..n {
        acc += (u % pu) * (x % pu);
        u /= pu;
        x /= pu;
    }
    (acc % pu) as u64
}

/// A function `Z_p^n → Z_q` with `p | q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GBFunction {
    p: u64,
    n: u32,
    q: u64,
    k: u32,
    table: Vec<u64>,
}

impl GBFunction {
    pub fn new(p: u64, n: u32, q: u64, table: Vec<u64>) -> Result<Self> {
        check_prime(p)?;
        if q == 0 || !q.is_multiple_of(p) {
            return Err(GbentError::InvalidParameters(format!(
                "p = {p} must divide q = {q}"
            )));
        }
        let len = table_len(p, n)?;
        check_table(&table, len, q, "function")?;
        Ok(GBFunction {
            p,
            n,
            q,
            k: arith::ceil_log(p, q),
            table,
        })
    }

    pub fn from_fn(p: u64, n: u32, q: u64, f: impl Fn(&[u64]) -> u64) -> Result<Self> {
        let len = table_len(p, n)?;
        let table = (0..len).map(|i| f(&index_point(p, n, i))).collect();
        Self::new(p, n, q, table)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Smallest `k` with `q <= p^k`.
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn table(&self) -> &[u64] {
        &self.table
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn eval(&self, x: &[u64]) -> Result<u64> {
        Ok(self.table[point_index(self.p, x)?])
    }

    /// Base-`p` digit functions, most significant first. Needs `q = p^k`.
    pub fn digits(&self) -> Result<ComponentTuple> {
        if arith::exact_log(self.p, self.q) != Some(self.k) {
            return Err(GbentError::InvalidParameters(format!(
                "digit decomposition needs q a power of p, got p = {}, q = {}",
                self.p, self.q
            )));
        }
        let p = self.p;
        let components = (0..self.k)
            .map(|i| {
                let w = arith::pow(p, self.k - 1 - i);
                PAryFunction {
                    p,
                    n: self.n,
                    table: self.table.iter().map(|&v| (v / w) % p).collect(),
                }
            })
            .collect();
        Ok(ComponentTuple {
            p,
            n: self.n,
            q: self.q,
            k: self.k,
            components,
        })
    }
}

/// A function `Z_p^n → Z_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAryFunction {
    p: u64,
    n: u32,
    table: Vec<u64>,
}

impl PAryFunction {
    pub fn new(p: u64, n: u32, table: Vec<u64>) -> Result<Self> {
        check_prime(p)?;
        let len = table_len(p, n)?;
        check_table(&table, len, p, "component")?;
        Ok(PAryFunction { p, n, table })
    }

    pub fn from_fn(p: u64, n: u32, f: impl Fn(&[u64]) -> u64) -> Result<Self> {
        let len = table_len(p, n)?;
        let table = (0..len).map(|i| f(&index_point(p, n, i)) % p).collect();
        Self::new(p, n, table)
    }

    pub fn zero(p: u64, n: u32) -> Result<Self> {
        Self::new(p, n, vec![0; table_len(p, n)?])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn table(&self) -> &[u64] {
        &self.table
    }

    /// The same function viewed as an element of `GB_n^p`.
    pub fn to_gb(&self) -> GBFunction {
        GBFunction {
            p: self.p,
            n: self.n,
            q: self.p,
            k: 1,
            table: self.table.clone(),
        }
    }
}

/// Components `(f_0, …, f_{k-1})` of `f = (q/p) f_0 + Σ_{i≥1} f_i p^{k-1-i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentTuple {
    p: u64,
    n: u32,
    q: u64,
    k: u32,
    components: Vec<PAryFunction>,
}

impl ComponentTuple {
    pub fn new(q: u64, components: Vec<PAryFunction>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| GbentError::InvalidParameters("no components".into()))?;
        let (p, n) = (first.p, first.n);
        if q == 0 || !q.is_multiple_of(p) {
            return Err(GbentError::InvalidParameters(format!(
                "p = {p} must divide q = {q}"
            )));
        }
        let k = arith::ceil_log(p, q);
        if components.len() != k as usize {
            return Err(GbentError::LengthMismatch {
                expected: k as usize,
                actual: components.len(),
                what: format!("components for q = {q}"),
            });
        }
        if components.iter().any(|c| c.p != p || c.n != n) {
            return Err(GbentError::InvalidParameters(
                "components disagree on (p, n)".into(),
            ));
        }
        Ok(ComponentTuple {
            p,
            n,
            q,
            k,
            components,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn components(&self) -> &[PAryFunction] {
        &self.components
    }

    pub fn is_prime_power(&self) -> bool {
        arith::pow(self.p, self.k) == self.q
    }

    /// Weight of component `i` in the composed function.
    pub fn weight(&self, i: usize) -> u64 {
        if i == 0 {
            self.q / self.p
        } else {
            arith::pow(self.p, self.k - 1 - i as u32)
        }
    }

    pub fn compose(&self) -> GBFunction {
        let len = self.components[0].table.len();
        let weights: Vec<u64> = (0..self.components.len()).map(|i| self.weight(i)).collect();
        let table = (0..len)
            .map(|x| {
                self.components
                    .iter()
                    .zip(&weights)
                    .map(|(c, w)| c.table[x] * w)
                    .sum::<u64>()
                    % self.q
            })
            .collect();
        GBFunction {
            p: self.p,
            n: self.n,
            q: self.q,
            k: self.k,
            table,
        }
    }

    /// `f_0 + Σ a_i f_i (mod p)` for `a ∈ Z_p^{k-1}`.
    pub fn combine(&self, a: &[u64]) -> Result<PAryFunction> {
        if a.len() + 1 != self.components.len() {
            return Err(GbentError::LengthMismatch {
                expected: self.components.len() - 1,
                actual: a.len(),
                what: "combination coefficients".into(),
            });
        }
        let p = self.p;
        let mut table = self.components[0].table.clone();
        for (ai, comp) in a.iter().zip(&self.components[1..]) {
            let ai = ai % p;
            if ai == 0 {
                continue;
            }
            for (t, &v) in table.iter_mut().zip(&comp.table) {
                *t = (*t + ai * v) % p;
            }
        }
        Ok(PAryFunction {
            p,
            n: self.n,
            table,
        })
    }

    /// All `p^{k-1}` combinations, indexed little-endian by `a` (`a_1` least significant).
    pub fn all_combinations(&self) -> Vec<PAryFunction> {
        let len = self.k as usize - 1;
        let count = arith::pow(self.p, len as u32) as usize;
        (0..count)
            .map(|i| {
                self.combine(&arith::digits_le(i, self.p, len))
                    .expect("length checked")
            })
            .collect()
    }
}
