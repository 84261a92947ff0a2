//! Generalized Walsh–Hadamard spectra.
//!
//! A [`Spectrum`] holds the unnormalized values
//! `S_f(u) = Σ_x ζ_p^{-u·x} ζ_q^{f(x)}`, which are always cyclotomic integers
//! in `Z[ζ_M]`, `M = lcm(4, q)`. The normalized transform is `p^{-n/2} S_f`.

use rayon::prelude::*;

use crate::arith;
use crate::cyclotomic::{CycInt, RootSum};
use crate::error::{GbentError, Result};
use crate::gbfunc::{dot_indices, ComponentTuple, GBFunction, PAryFunction};
use crate::scalar::Coeff;

/// Ring modulus used for spectra of `Z_q`-valued functions.
pub fn spectral_modulus(q: u64) -> u64 {
    arith::lcm(4, q)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum<T: Coeff> {
    p: u64,
    n: u32,
    q: u64,
    values: Vec<CycInt<T>>,
}

impl<T: Coeff> Spectrum<T> {
    pub fn new(p: u64, n: u32, q: u64, values: Vec<CycInt<T>>) -> Result<Self> {
        let m = spectral_modulus(q);
        let len = arith::pow(p, n) as usize;
        if values.len() != len {
            return Err(GbentError::LengthMismatch {
                expected: len,
                actual: values.len(),
                what: "spectrum values".into(),
            });
        }
        let values = values
            .into_iter()
            .map(|v| v.promote(m))
            .collect::<Result<_>>()?;
        Ok(Spectrum { p, n, q, values })
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

    pub fn modulus(&self) -> u64 {
        spectral_modulus(self.q)
    }

    pub fn values(&self) -> &[CycInt<T>] {
        &self.values
    }

    /// `Σ_u |S(u)|^2`, which equals `p^{2n}` for every genuine spectrum.
    pub fn energy(&self) -> CycInt<T> {
        self.values
            .iter()
            .map(CycInt::norm_sq)
            .fold(CycInt::zero(self.modulus()), |a, b| &a + &b)
    }

    pub fn parseval_holds(&self) -> bool {
        let expect = num_traits::pow(T::from_int(self.p as i64), 2 * self.n as usize);
        self.energy() == CycInt::from_int(self.modulus(), expect)
    }
}

/// Direct evaluation of every `S_f(u)` by the double sum.
pub fn wht_naive<T: Coeff>(f: &GBFunction) -> Spectrum<T> {
    let (p, n, q) = (f.p(), f.n(), f.q());
    let m = spectral_modulus(q);
    let (step_q, step_p) = (m / q, m / p);
    let exps: Vec<u64> = f.table().iter().map(|&v| v * step_q).collect();
    let len = f.len();
    let values = (0..len)
        .into_par_iter()
        .map(|u| {
            let mut counts = vec![0i64; m as usize];
            for (x, &e) in exps.iter().enumerate() {
                let shift = step_p * dot_indices(p, n, u, x);
                counts[((e + m - shift) % m) as usize] += 1;
            }
            CycInt::from_root_counts(m, &counts)
        })
        .collect();
    Spectrum { p, n, q, values }
}

/// Radix-`p` transform of a `p`-ary function.
///
/// Works in the group ring `Z[C_p]` (length-`p` exponent vectors), where
/// multiplying by a power of `ζ_p` is a rotation, and maps to `Z[ζ_{4p}]` at
/// the end. One pass per coordinate, big-endian like the point index.
pub fn wht_pary_fast<T: Coeff>(g: &PAryFunction) -> Spectrum<T> {
    let (p, n) = (g.p(), g.n());
    let pu = p as usize;
    let len = g.table().len();
    let mut data = vec![T::zero(); len * pu];
    for (x, &v) in g.table().iter().enumerate() {
        data[x * pu + v as usize] = T::one();
    }

    let mut scratch = vec![T::zero(); pu * pu];
    for axis in 0..n {
        let stride = arith::pow(p, n - 1 - axis) as usize;
        for base in 0..len {
            if !(base / stride).is_multiple_of(pu) {
                continue;
            }
            scratch.iter_mut().for_each(|s| *s = T::zero());
            for w in 0..pu {
                let out = &mut scratch[w * pu..(w + 1) * pu];
                for t in 0..pu {
                    let src = (base + t * stride) * pu;
                    let rot = (pu - (w * t) % pu) % pu;
                    for e in 0..pu {
                        let c = &data[src + e];
                        if !c.is_zero() {
                            out[(e + rot) % pu] += c;
                        }
                    }
                }
            }
            for w in 0..pu {
                let dst = (base + w * stride) * pu;
                data[dst..dst + pu].clone_from_slice(&scratch[w * pu..(w + 1) * pu]);
            }
        }
    }

    let m = spectral_modulus(p);
    let values = data
        .par_chunks(pu)
        .map(|chunk| {
            let mut poly = vec![T::zero(); m as usize];
            for (e, c) in chunk.iter().enumerate() {
                poly[e * (m / p) as usize] = c.clone();
            }
            CycInt::from_poly(m, poly)
        })
        .collect();
    Spectrum { p, n, q: p, values }
}

/// `t[x] = p^{-n} Σ_u ζ_p^{u·x} S(u)`; for a spectrum of `f` this is `ζ_q^{f(x)}`.
pub fn inverse_wht<T: Coeff>(s: &Spectrum<T>) -> Result<Vec<CycInt<T>>> {
    let (p, n) = (s.p, s.n);
    let m = s.modulus();
    let step_p = (m / p) as i64;
    let scale = num_traits::pow(T::from_int(p as i64), n as usize);
    let len = s.values.len();
    (0..len)
        .into_par_iter()
        .map(|x| {
            let mut acc = RootSum::new(m);
            for (u, su) in s.values.iter().enumerate() {
                acc.add_shifted(su, step_p * dot_indices(p, n, u, x) as i64);
            }
            acc.finish().div_exact(&scale).map_err(|e| match e {
                GbentError::NotDivisible { context, .. } => GbentError::NotDivisible {
                    divisor: scale.to_string(),
                    context: format!("inverse transform at x = {x} ({context}); not a spectrum of a Z_q-valued function"),
                },
                other => other,
            })
        })
        .collect()
}

fn check_coeff_len(a: &[u64], k: u32) -> Result<()> {
    if k == 0 || a.len() + 1 != k as usize {
        return Err(GbentError::LengthMismatch {
            expected: (k as usize).saturating_sub(1),
            actual: a.len(),
            what: "gamma index a".into(),
        });
    }
    Ok(())
}

/// `γ_a = Σ_{v ∈ Z_p^{k-1}} ζ_p^{-a·v} ζ_{p^k}^{Σ v_j p^{k-1-j}}`, in `Z[ζ_{p^k}]`.
pub fn gamma_sum<T: Coeff>(a: &[u64], p: u64, k: u32) -> Result<CycInt<T>> {
    gamma_sum_mod(a, p, k, arith::pow(p, k))
}

/// The `ζ_q` analogue `γ̃_a`; requires `p | q` and `p^{k-1} < q <= p^k`.
pub fn gamma_general_q<T: Coeff>(a: &[u64], p: u64, k: u32, q: u64) -> Result<CycInt<T>> {
    check_coeff_len(a, k)?;
    if k == 1 {
        return Ok(CycInt::one(q));
    }
    if !q.is_multiple_of(p) || q <= arith::pow(p, k - 1) || q > arith::pow(p, k) {
        return Err(GbentError::InvalidParameters(format!(
            "need p | q and p^(k-1) < q <= p^k, got p = {p}, k = {k}, q = {q}"
        )));
    }
    gamma_sum_mod(a, p, k, q)
}

fn gamma_sum_mod<T: Coeff>(a: &[u64], p: u64, k: u32, q: u64) -> Result<CycInt<T>> {
    check_coeff_len(a, k)?;
    let len = a.len();
    let step_p = (q / p) as i64;
    let mut acc = RootSum::new(q);
    let one = T::one();
    for vi in 0..arith::pow(p, len as u32) as usize {
        let v = arith::digits_le(vi, p, len);
        let dot: u64 = a.iter().zip(&v).map(|(x, y)| x * y).sum::<u64>() % p;
        let e: u64 = v
            .iter()
            .enumerate()
            .map(|(j, &vj)| vj * arith::pow(p, (len - 1 - j) as u32))
            .sum();
        acc.add_root(e as i64 - step_p * dot as i64, &one);
    }
    Ok(acc.finish())
}

/// Product form of `γ_a`: `Π_{i=1}^{k-1} Σ_{l ∈ Z_p} ζ_p^{l a_i} ζ_{p^{i+1}}^{(p-l) mod p}`.
pub fn gamma_product<T: Coeff>(a: &[u64], p: u64, k: u32) -> Result<CycInt<T>> {
    check_coeff_len(a, k)?;
    let m = arith::pow(p, k);
    let one = T::one();
    let step_p = (m / p) as i64;
    let mut acc = CycInt::one(m);
    for (idx, &ai) in a.iter().enumerate() {
        let i = idx as u32 + 1;
        let step_i = arith::pow(p, k - 1 - i) as i64;
        let mut factor = RootSum::new(m);
        for l in 0..p {
            let e = step_p * ((l * ai) % p) as i64 + step_i * ((p - l) % p) as i64;
            factor.add_root(e, &one);
        }
        acc = &acc * &factor.finish();
    }
    Ok(acc)
}

/// `γ_a` (or `γ̃_a`) for every `a ∈ Z_p^{k-1}`, indexed little-endian.
#[derive(Clone, Debug)]
pub struct GammaTable<T: Coeff> {
    p: u64,
    k: u32,
    q: u64,
    entries: Vec<CycInt<T>>,
}

impl<T: Coeff> GammaTable<T> {
    pub fn new(p: u64, k: u32, q: u64) -> Result<Self> {
        let len = k
            .checked_sub(1)
            .ok_or_else(|| GbentError::InvalidParameters("k must be >= 1".into()))?;
        let prime_power = arith::pow(p, k) == q;
        let entries = (0..arith::pow(p, len) as usize)
            .map(|i| {
                let a = arith::digits_le(i, p, len as usize);
                if prime_power {
                    gamma_product(&a, p, k)
                } else {
                    gamma_general_q(&a, p, k, q)
                }
            })
            .collect::<Result<_>>()?;
        Ok(GammaTable { p, k, q, entries })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn entries(&self) -> &[CycInt<T>] {
        &self.entries
    }

    pub fn get(&self, a: &[u64]) -> &CycInt<T> {
        &self.entries[arith::from_digits_le(a, self.p)]
    }
}

/// Spectrum of `compose(t)` assembled from the `p`-ary spectra of the
/// combinations `f_0 + Σ a_i f_i`, weighted by `γ_a` and divided by `p^{k-1}`.
pub fn wht_composed<T: Coeff>(t: &ComponentTuple) -> Result<Spectrum<T>> {
    let (p, n, q, k) = (t.p(), t.n(), t.q(), t.k());
    let m = spectral_modulus(q);
    let gammas: Vec<CycInt<T>> = GammaTable::new(p, k, q)?
        .entries
        .iter()
        .map(|g| g.promote(m))
        .collect::<Result<_>>()?;
    let parts: Vec<Spectrum<T>> = t.all_combinations().iter().map(wht_pary_fast).collect();
    let divisor = num_traits::pow(T::from_int(p as i64), k as usize - 1);
    let len = arith::pow(p, n) as usize;
    let values = (0..len)
        .into_par_iter()
        .map(|u| {
            let mut acc = CycInt::zero(m);
            for (part, gamma) in parts.iter().zip(&gammas) {
                acc = &acc + &(&part.values[u].promote(m)? * gamma);
            }
            acc.div_exact(&divisor).map_err(|e| {
                GbentError::Inconsistent(format!("composed spectrum at u = {u} not divisible: {e}"))
            })
        })
        .collect::<Result<_>>()?;
    Ok(Spectrum { p, n, q, values })
}
