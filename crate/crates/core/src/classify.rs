//! Bentness, spectral normal forms, duals and generalized-Hadamard row
//! decompositions.
//!
//! Everything here works on unnormalized spectra: a value `S(u)` is matched
//! against finite candidate sets of the form `p^{n/2} · α · ζ^e` with
//! `α ∈ {±1, ±√-1}`, where `p^{n/2}` is an integer or an integer multiple of
//! the Gauss-sum square root.

use std::fmt;

use rayon::prelude::*;

use crate::arith;
use crate::cyclotomic::{match_candidate, sqrt_prime_power, CandidateSet, CycInt};
use crate::error::{GbentError, Result};
use crate::gbfunc::{ComponentTuple, GBFunction};
use crate::scalar::Coeff;
use crate::transform::{spectral_modulus, wht_naive, wht_pary_fast, Spectrum};

/// Unit prefactor `α ∈ {+1, -1, +i, -i}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Unit {
    One,
    MinusOne,
    I,
    MinusI,
}

impl Unit {
    pub const ALL: [Unit; 4] = [Unit::One, Unit::MinusOne, Unit::I, Unit::MinusI];

    /// Exponent of `ζ_4`.
    pub fn quarter_turns(self) -> u64 {
        match self {
            Unit::One => 0,
            Unit::I => 1,
            Unit::MinusOne => 2,
            Unit::MinusI => 3,
        }
    }

    pub fn is_real(self) -> bool {
        matches!(self, Unit::One | Unit::MinusOne)
    }

    /// The unit in `Z[ζ_m]`; requires `4 | m`.
    pub fn to_cyc<T: Coeff>(self, m: u64) -> CycInt<T> {
        debug_assert_eq!(m % 4, 0);
        CycInt::root(m, (self.quarter_turns() * (m / 4)) as i64)
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Unit::One => "+1",
            Unit::MinusOne => "-1",
            Unit::I => "+i",
            Unit::MinusI => "-i",
        })
    }
}

/// Whether `α` may be real for these parameters: the prefactor is `±1` when
/// `n` is even or `p ≡ 1 (mod 4)`, and `±√-1` otherwise.
pub fn real_prefactor_expected(p: u64, n: u32) -> bool {
    n.is_multiple_of(2) || p % 4 == 1
}

/// `S(u) = p^{n/2} · alpha · ζ_q^{dual}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpectralForm {
    pub alpha: Unit,
    pub dual: u64,
}

/// Per-`u` outcome of the bentness test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GbentReport {
    /// Points where `|S(u)|^2 != p^n`.
    pub failing: Vec<usize>,
}

impl GbentReport {
    pub fn is_gbent(&self) -> bool {
        self.failing.is_empty()
    }
}

pub fn is_gbent_spectrum<T: Coeff>(s: &Spectrum<T>) -> GbentReport {
    let m = s.modulus();
    let target = CycInt::from_int(
        m,
        num_traits::pow(T::from_int(s.p() as i64), s.n() as usize),
    );
    let failing = s
        .values()
        .par_iter()
        .enumerate()
        .filter(|(_, v)| v.norm_sq() != target)
        .map(|(u, _)| u)
        .collect();
    GbentReport { failing }
}

pub fn is_gbent<T: Coeff>(f: &GBFunction) -> GbentReport {
    is_gbent_spectrum(&wht_naive::<T>(f))
}

/// Match every `S(u)` against `p^{n/2} α ζ_q^j`. `None` marks a point with no match.
pub fn spectral_form_of<T: Coeff>(s: &Spectrum<T>) -> Result<Vec<Option<SpectralForm>>> {
    let (p, n, q) = (s.p(), s.n(), s.q());
    let m = s.modulus();
    let scale = sqrt_prime_power::<T>(p, n, m)?;
    // For even q some (α, j) pairs coincide; the first listed wins so duals stay unique.
    let candidates = CandidateSet::first_wins(Unit::ALL.iter().flat_map(|&alpha| {
        let base = &scale * &alpha.to_cyc::<T>(m);
        (0..q).map(move |j| {
            (
                SpectralForm { alpha, dual: j },
                base.mul_root((j * (m / q)) as i64),
            )
        })
    }));
    Ok(s.values().iter().map(|v| candidates.lookup(v)).collect())
}

pub fn spectral_form<T: Coeff>(f: &GBFunction) -> Result<Vec<Option<SpectralForm>>> {
    spectral_form_of(&wht_naive::<T>(f))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Regularity {
    /// `α = +1` everywhere.
    Regular,
    /// One constant `α ≠ +1`.
    WeaklyRegular(Unit),
    /// Gbent, every point matched, but `α` varies with `u`.
    NotWeaklyRegular,
    /// Gbent, but some `S(u)` is not `p^{n/2}` times `±1`/`±i` times a power of
    /// `ζ_q`. Only possible when `q` is not a power of `p`.
    Undetermined {
        unmatched: Vec<usize>,
    },
    NotGbent {
        failing: Vec<usize>,
    },
}

pub fn regularity_of<T: Coeff>(s: &Spectrum<T>) -> Result<Regularity> {
    let report = is_gbent_spectrum(s);
    if !report.is_gbent() {
        return Ok(Regularity::NotGbent {
            failing: report.failing,
        });
    }
    let forms = spectral_form_of(s)?;
    let unmatched: Vec<usize> = forms
        .iter()
        .enumerate()
        .filter(|(_, f)| f.is_none())
        .map(|(u, _)| u)
        .collect();
    if !unmatched.is_empty() {
        return Ok(Regularity::Undetermined { unmatched });
    }
    let alphas: Vec<Unit> = forms.iter().map(|f| f.unwrap().alpha).collect();
    Ok(match alphas.iter().all(|&a| a == alphas[0]) {
        true if alphas[0] == Unit::One => Regularity::Regular,
        true => Regularity::WeaklyRegular(alphas[0]),
        false => Regularity::NotWeaklyRegular,
    })
}

pub fn regularity<T: Coeff>(f: &GBFunction) -> Result<Regularity> {
    regularity_of(&wht_naive::<T>(f))
}

/// `vec = p^{n/2} α ζ_p^j · (row r of H_p^{⊗(k-1)})`.
///
/// Columns are indexed by `i = Σ a_j p^{j-1}` and rows by `r = Σ v_j p^{j-1}`
/// (first coordinate least significant); the row entry at column `a` is
/// `ζ_p^{v·a}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RowDecomp {
    pub alpha: Unit,
    pub j: u64,
    pub v: Vec<u64>,
    pub r: usize,
}

impl RowDecomp {
    /// The unnormalized vector this decomposition describes, in `Z[ζ_m]`.
    pub fn reconstruct<T: Coeff>(&self, p: u64, n: u32, m: u64) -> Result<Vec<CycInt<T>>> {
        let base = &sqrt_prime_power::<T>(p, n, m)? * &self.alpha.to_cyc(m);
        let step = (m / p) as i64;
        Ok(hadamard_row(p, self.v.len() as u32, self.r)
            .into_iter()
            .map(|e| base.mul_root(step * (self.j + e) as i64))
            .collect())
    }

    /// Row index with the first coordinate most significant.
    pub fn r_big_endian(&self, p: u64) -> usize {
        self.v
            .iter()
            .fold(0usize, |acc, &d| acc * p as usize + d as usize)
    }
}

/// Exponent matrix of `H_p^{⊗levels}` (entries are powers of `ζ_p`), built by
/// repeated Kronecker products of `H_p = (ζ_p^{ij})`.
pub fn hadamard_kron(p: u64, levels: u32) -> Vec<Vec<u64>> {
    let base: Vec<Vec<u64>> = (0..p)
        .map(|i| (0..p).map(|j| i * j % p).collect())
        .collect();
    let mut acc = vec![vec![0u64]];
    for _ in 0..levels {
        // Kronecker with the new factor as the slow (outer) index.
        let size = acc.len();
        let mut next = vec![vec![0u64; size * p as usize]; size * p as usize];
        for (bi, brow) in base.iter().enumerate() {
            for (bj, &be) in brow.iter().enumerate() {
                for (ai, arow) in acc.iter().enumerate() {
                    for (aj, &ae) in arow.iter().enumerate() {
                        next[bi * size + ai][bj * size + aj] = (be + ae) % p;
                    }
                }
            }
        }
        acc = next;
    }
    acc
}

/// Row `r` of `H_p^{⊗levels}` as exponents: entry `a` is `v(r)·a(c) mod p`.
pub fn hadamard_row(p: u64, levels: u32, r: usize) -> Vec<u64> {
    let v = arith::digits_le(r, p, levels as usize);
    (0..arith::pow(p, levels) as usize)
        .map(|c| {
            let a = arith::digits_le(c, p, levels as usize);
            v.iter().zip(&a).map(|(x, y)| x * y).sum::<u64>() % p
        })
        .collect()
}

/// Decompose a vector of unnormalized component spectra at one `u`.
pub fn row_decomp<T: Coeff>(vec: &[CycInt<T>], p: u64, n: u32) -> Result<Option<RowDecomp>> {
    if !arith::is_odd_prime(p) {
        return Err(GbentError::NotOddPrime(p));
    }
    let levels = arith::exact_log(p, vec.len() as u64).ok_or_else(|| {
        GbentError::InvalidParameters(format!("vector length {} is not a power of {p}", vec.len()))
    })?;
    let m = vec.iter().map(CycInt::modulus).fold(4 * p, arith::lcm);
    let vec: Vec<CycInt<T>> = vec.iter().map(|z| z.promote(m)).collect::<Result<_>>()?;
    let scale = sqrt_prime_power::<T>(p, n, m)?;
    let step = (m / p) as i64;

    let heads = CandidateSet::strict(Unit::ALL.iter().flat_map(|&alpha| {
        let base = &scale * &alpha.to_cyc::<T>(m);
        (0..p).map(move |j| ((alpha, j), base.mul_root(step * j as i64)))
    }))?;
    let Some((alpha, j)) = heads.lookup(&vec[0]) else {
        return Ok(None);
    };
    let head = vec[0].clone();
    let shifts: Vec<CycInt<T>> = (0..p).map(|t| head.mul_root(step * t as i64)).collect();

    let mut v = Vec::with_capacity(levels as usize);
    for i in 0..levels {
        match match_candidate(&vec[arith::pow(p, i) as usize], &shifts)? {
            Some(t) => v.push(t as u64),
            None => return Ok(None),
        }
    }
    let r = arith::from_digits_le(&v, p);
    let row = hadamard_row(p, levels, r);
    let matches = vec.iter().zip(&row).all(|(z, &e)| *z == shifts[e as usize]);
    Ok(matches.then_some(RowDecomp { alpha, j, v, r }))
}

/// `p`-ary spectra of every combination `f_0 + Σ a_i f_i`, little-endian in `a`.
pub fn component_spectra<T: Coeff>(t: &ComponentTuple) -> Vec<Spectrum<T>> {
    t.all_combinations().par_iter().map(wht_pary_fast).collect()
}

/// Row decompositions of the component-spectrum vector at every `u`.
pub fn row_decomps<T: Coeff>(t: &ComponentTuple) -> Result<Vec<Option<RowDecomp>>> {
    let parts = component_spectra::<T>(t);
    let len = arith::pow(t.p(), t.n()) as usize;
    (0..len)
        .into_par_iter()
        .map(|u| {
            let column: Vec<CycInt<T>> = parts.iter().map(|s| s.values()[u].clone()).collect();
            row_decomp(&column, t.p(), t.n())
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentCriterionReport {
    pub p: u64,
    pub n: u32,
    /// Decomposition per `u`; `None` where none exists.
    pub rows: Vec<Option<RowDecomp>>,
}

impl ComponentCriterionReport {
    pub fn holds(&self) -> bool {
        let real = real_prefactor_expected(self.p, self.n);
        self.rows
            .iter()
            .all(|r| matches!(r, Some(d) if d.alpha.is_real() == real))
    }

    pub fn failing(&self) -> Vec<usize> {
        let real = real_prefactor_expected(self.p, self.n);
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| !matches!(r, Some(d) if d.alpha.is_real() == real))
            .map(|(u, _)| u)
            .collect()
    }
}

/// Gbent criterion for `q = p^k`, `k ≥ 2`: every `u` must admit one
/// `(±α, j, v)` with `S_{f_0 + Σ a_i f_i}(u) = p^{n/2} α ζ_p^{v·a + j}` for all `a`.
pub fn component_bent_criterion<T: Coeff>(t: &ComponentTuple) -> Result<ComponentCriterionReport> {
    if !t.is_prime_power() || t.k() < 2 {
        return Err(GbentError::InvalidParameters(format!(
            "criterion needs q = p^k with k >= 2, got p = {}, q = {}",
            t.p(),
            t.q()
        )));
    }
    Ok(ComponentCriterionReport {
        p: t.p(),
        n: t.n(),
        rows: row_decomps::<T>(t)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakRegularityWitness {
    pub alpha: Unit,
    /// `f*(u) = (q/p) j(u) + Σ v_i(u) p^{k-1-i} mod q`.
    pub dual: Vec<u64>,
    pub rows: Vec<RowDecomp>,
}

/// Sufficient condition for weak regularity with a single global `α`.
///
/// Returns `None` when some `u` has no decomposition or the prefactors
/// differ; that says nothing about bentness. On success the dual is checked
/// against the directly computed spectrum of `compose(t)`.
pub fn weak_regularity_criterion<T: Coeff>(
    t: &ComponentTuple,
) -> Result<Option<WeakRegularityWitness>> {
    let rows = row_decomps::<T>(t)?;
    let Some(rows) = rows.into_iter().collect::<Option<Vec<_>>>() else {
        return Ok(None);
    };
    let alpha = rows[0].alpha;
    if rows.iter().any(|r| r.alpha != alpha) {
        return Ok(None);
    }
    let (p, n, q, k) = (t.p(), t.n(), t.q(), t.k());
    let dual: Vec<u64> = rows
        .iter()
        .map(|r| {
            let tail: u64 =
                r.v.iter()
                    .enumerate()
                    .map(|(i, &vi)| vi * arith::pow(p, k - 2 - i as u32))
                    .sum();
            ((q / p) * r.j + tail) % q
        })
        .collect();

    let m = spectral_modulus(q);
    let spectrum = wht_naive::<T>(&t.compose());
    let base = &sqrt_prime_power::<T>(p, n, m)? * &alpha.to_cyc(m);
    for (u, (s, &d)) in spectrum.values().iter().zip(&dual).enumerate() {
        if *s != base.mul_root((d * (m / q)) as i64) {
            return Err(GbentError::Inconsistent(format!(
                "dual reconstruction failed at u = {u}: S = {s}, dual = {d}"
            )));
        }
    }
    Ok(Some(WeakRegularityWitness { alpha, dual, rows }))
}
