//! Exact arithmetic in the cyclotomic integers `Z[ζ_M]`.
//!
//! Elements are stored in the power basis `1, ζ, …, ζ^{φ(M)-1}` after
//! reduction modulo the cyclotomic polynomial `Φ_M`, so equality is a plain
//! coefficient comparison. The per-modulus data (`Φ_M` and its degree) is
//! computed once and shared through a process-wide cache.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith;
use crate::error::{GbentError, Result};
use crate::scalar::Coeff;

/// Reduction data for one modulus.
#[derive(Debug)]
pub struct CycRing {
    modulus: u64,
    degree: usize,
    /// Nonzero coefficients of `Φ_M` below the leading term.
    tail: Vec<(usize, i64)>,
}

impl CycRing {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Full coefficient vector of `Φ_M`, constant term first.
    pub fn cyclotomic_polynomial(&self) -> Vec<i64> {
        let mut out = vec![0; self.degree + 1];
        out[self.degree] = 1;
        for &(j, c) in &self.tail {
            out[j] = c;
        }
        out
    }

    /// Shared ring data for `Z[ζ_m]`.
    pub fn get(m: u64) -> Arc<CycRing> {
        assert!(m >= 1, "cyclotomic modulus must be positive");
        static CACHE: OnceLock<RwLock<HashMap<u64, Arc<CycRing>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(r) = cache.read().unwrap().get(&m) {
            return r.clone();
        }
        let ring = Arc::new(CycRing::build(m));
        cache.write().unwrap().entry(m).or_insert(ring).clone()
    }

    fn build(m: u64) -> CycRing {
        let phi = cyclotomic_polynomial(m);
        let degree = phi.len() - 1;
        let tail = phi[..degree]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| (j, c.to_i64().expect("cyclotomic coefficient exceeds i64")))
            .collect();
        CycRing {
            modulus: m,
            degree,
            tail,
        }
    }

    /// Canonical form of an arbitrary polynomial in `ζ_M`.
    fn reduce<T: Coeff>(&self, mut buf: Vec<T>) -> Vec<T> {
        let m = self.modulus as usize;
        if buf.len() > m {
            for i in m..buf.len() {
                let c = std::mem::replace(&mut buf[i], T::zero());
                if !c.is_zero() {
                    buf[i % m] += &c;
                }
            }
            buf.truncate(m);
        }
        if buf.len() > self.degree {
            let tail: Vec<(usize, T)> = self
                .tail
                .iter()
                .map(|&(j, c)| (j, T::from_int(c)))
                .collect();
            for i in (self.degree..buf.len()).rev() {
                if buf[i].is_zero() {
                    continue;
                }
                let c = std::mem::replace(&mut buf[i], T::zero());
                let base = i - self.degree;
                for (j, cj) in &tail {
                    buf[base + j].sub_mul(&c, cj);
                }
            }
        }
        buf.resize(self.degree, T::zero());
        buf
    }
}

/// `Φ_m` via the Möbius product `Π_{d | m} (x^d - 1)^{μ(m/d)}`.
pub fn cyclotomic_polynomial(m: u64) -> Vec<BigInt> {
    let mut num = vec![BigInt::one()];
    let mut den = vec![BigInt::one()];
    for d in arith::divisors(m) {
        let mu = arith::mobius(m / d);
        if mu == 0 {
            continue;
        }
        let mut factor = vec![BigInt::zero(); d as usize + 1];
        factor[0] = BigInt::from(-1);
        factor[d as usize] = BigInt::one();
        if mu == 1 {
            num = poly_mul(&num, &factor);
        } else {
            den = poly_mul(&den, &factor);
        }
    }
    poly_div_exact(num, &den)
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Division by a monic polynomial that is known to divide `num`.
fn poly_div_exact(mut num: Vec<BigInt>, den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    assert!(den[dd].is_one());
    let qlen = num.len() - dd;
    let mut quot = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = num[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            num[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    assert!(
        num.iter().all(Zero::is_zero),
        "Möbius product left a remainder"
    );
    quot
}

/// An element of `Z[ζ_M]` in canonical power-basis form.
#[derive(Clone)]
pub struct CycInt<T> {
    ring: Arc<CycRing>,
    coeffs: Vec<T>,
}

impl<T: Coeff> CycInt<T> {
    /// Canonical element from any polynomial in `ζ_m` (reduced here).
    pub fn from_poly(m: u64, poly: Vec<T>) -> Self {
        let ring = CycRing::get(m);
        let coeffs = ring.reduce(poly);
        CycInt { ring, coeffs }
    }

    fn with_ring(ring: &Arc<CycRing>, poly: Vec<T>) -> Self {
        let coeffs = ring.reduce(poly);
        CycInt {
            ring: ring.clone(),
            coeffs,
        }
    }

    pub fn zero(m: u64) -> Self {
        Self::from_poly(m, Vec::new())
    }

    pub fn one(m: u64) -> Self {
        Self::from_int(m, T::one())
    }

    pub fn from_int(m: u64, c: T) -> Self {
        Self::from_poly(m, vec![c])
    }

    /// `ζ_m^t`, for any integer `t`.
    pub fn root(m: u64, t: i64) -> Self {
        let e = t.rem_euclid(m as i64) as usize;
        let mut poly = vec![T::zero(); e + 1];
        poly[e] = T::one();
        Self::from_poly(m, poly)
    }

    /// `Σ_e counts[e] ζ_m^e` with `counts` indexed by exponent modulo `m`.
    pub fn from_root_counts(m: u64, counts: &[i64]) -> Self {
        let poly = counts.iter().map(|&c| T::from_int(c)).collect();
        Self::from_poly(m, poly)
    }

    pub fn modulus(&self) -> u64 {
        self.ring.modulus
    }

    pub fn ring(&self) -> &Arc<CycRing> {
        &self.ring
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational integer this element equals, if it is one.
    pub fn as_integer(&self) -> Option<T> {
        if self.coeffs.iter().skip(1).all(Zero::is_zero) {
            Some(self.coeffs.first().cloned().unwrap_or_else(T::zero))
        } else {
            None
        }
    }

    /// Lift into `Z[ζ_to]` via `ζ_M ↦ ζ_to^{to/M}`.
    pub fn promote(&self, to: u64) -> Result<Self> {
        let from = self.modulus();
        if to == from {
            return Ok(self.clone());
        }
        if !to.is_multiple_of(from) {
            return Err(GbentError::InvalidPromotion { from, to });
        }
        let step = (to / from) as usize;
        let mut poly = vec![T::zero(); (self.coeffs.len().max(1) - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        Ok(Self::from_poly(to, poly))
    }

    fn common_modulus(&self, other: &Self) -> Result<u64> {
        let (a, b) = (self.modulus(), other.modulus());
        if a == b || a % b == 0 {
            Ok(a)
        } else if b % a == 0 {
            Ok(b)
        } else {
            Err(GbentError::IncompatibleModuli(a, b))
        }
    }

    fn aligned(&self, other: &Self) -> Result<(Self, Self)> {
        let m = self.common_modulus(other)?;
        Ok((self.promote(m)?, other.promote(m)?))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.modulus() == other.modulus() {
            return Ok(self.add_same(other));
        }
        let (a, b) = self.aligned(other)?;
        Ok(a.add_same(&b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.modulus() == other.modulus() {
            return Ok(self.mul_same(other));
        }
        let (a, b) = self.aligned(other)?;
        Ok(a.mul_same(&b))
    }

    fn add_same(&self, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        CycInt {
            ring: self.ring.clone(),
            coeffs,
        }
    }

    fn mul_same(&self, other: &Self) -> Self {
        let d = self.ring.degree;
        let mut buf = vec![T::zero(); (2 * d).saturating_sub(1).max(1)];
        let rhs: Vec<(usize, &T)> = other
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for &(j, b) in &rhs {
                buf[i + j].add_mul(a, b);
            }
        }
        Self::with_ring(&self.ring, buf)
    }

    fn neg_ref(&self) -> Self {
        CycInt {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn scalar_mul(&self, c: &T) -> Self {
        CycInt {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    /// Multiply by `ζ_M^t`.
    pub fn mul_root(&self, t: i64) -> Self {
        let m = self.modulus() as usize;
        let shift = t.rem_euclid(m as i64) as usize;
        let mut buf = vec![T::zero(); m];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                buf[(i + shift) % m] += c;
            }
        }
        Self::with_ring(&self.ring, buf)
    }

    /// Complex conjugation `ζ_M ↦ ζ_M^{-1}`.
    pub fn conj(&self) -> Self {
        let m = self.modulus() as usize;
        let mut buf = vec![T::zero(); m];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                buf[(m - i) % m] += c;
            }
        }
        Self::with_ring(&self.ring, buf)
    }

    /// `z · conj(z)`, i.e. `|z|^2` as an element of the ring.
    pub fn norm_sq(&self) -> Self {
        self.mul_same(&self.conj())
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.modulus());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_same(&base);
            }
            base = base.mul_same(&base);
            exp >>= 1;
        }
        acc
    }

    /// Divide every coefficient by `d`, failing if any is not a multiple.
    pub fn div_exact(&self, d: &T) -> Result<Self> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return Err(GbentError::NotDivisible {
                    divisor: d.to_string(),
                    context: format!("coefficient {c} of {self}"),
                });
            }
            coeffs.push(q);
        }
        Ok(CycInt {
            ring: self.ring.clone(),
            coeffs,
        })
    }

    /// Convert the coefficient type.
    pub fn cast<U: Coeff>(&self) -> CycInt<U> {
        CycInt {
            ring: self.ring.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|c| {
                    let v = c.to_i128().expect("coefficient exceeds i128");
                    U::from_i128(v).expect("coefficient does not fit")
                })
                .collect(),
        }
    }

    /// Floating-point value, for diagnostics only.
    pub fn to_complex(&self) -> (f64, f64) {
        let m = self.modulus() as f64;
        self.coeffs
            .iter()
            .enumerate()
            .fold((0.0, 0.0), |(re, im), (i, c)| {
                let c = c.to_f64().unwrap_or(f64::NAN);
                let angle = std::f64::consts::TAU * i as f64 / m;
                (re + c * angle.cos(), im + c * angle.sin())
            })
    }
}

/// Accumulates `Σ c_e ζ_M^e` without reducing until [`RootSum::finish`].
pub struct RootSum<T> {
    ring: Arc<CycRing>,
    buf: Vec<T>,
}

impl<T: Coeff> RootSum<T> {
    pub fn new(m: u64) -> Self {
        RootSum {
            ring: CycRing::get(m),
            buf: vec![T::zero(); m as usize],
        }
    }

    pub fn add_root(&mut self, e: i64, c: &T) {
        let m = self.buf.len() as i64;
        self.buf[e.rem_euclid(m) as usize] += c;
    }

    /// Add `ζ_M^shift · z`, `z` already in this modulus.
    pub fn add_shifted(&mut self, z: &CycInt<T>, shift: i64) {
        debug_assert_eq!(z.modulus() as usize, self.buf.len());
        let m = self.buf.len();
        let s = shift.rem_euclid(m as i64) as usize;
        for (i, c) in z.coeffs.iter().enumerate() {
            if !c.is_zero() {
                self.buf[(i + s) % m] += c;
            }
        }
    }

    pub fn finish(self) -> CycInt<T> {
        CycInt::with_ring(&self.ring, self.buf)
    }
}

impl<T: Coeff> PartialEq for CycInt<T> {
    fn eq(&self, other: &Self) -> bool {
        self.modulus() == other.modulus() && self.coeffs == other.coeffs
    }
}

impl<T: Coeff> Eq for CycInt<T> {}

impl<T: Coeff> Hash for CycInt<T> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.modulus().hash(state);
        self.coeffs.hash(state);
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl<T: Coeff> $tr<&CycInt<T>> for &CycInt<T> {
            type Output = CycInt<T>;

            /// Panics if the moduli are incompatible; see the `try_` variant.
            fn $method(self, rhs: &CycInt<T>) -> CycInt<T> {
                self.$try(rhs).unwrap()
            }
        }

        impl<T: Coeff> $tr for CycInt<T> {
            type Output = CycInt<T>;

            fn $method(self, rhs: CycInt<T>) -> CycInt<T> {
                self.$try(&rhs).unwrap()
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl<T: Coeff> Neg for &CycInt<T> {
    type Output = CycInt<T>;

    fn neg(self) -> CycInt<T> {
        self.neg_ref()
    }
}

impl<T: Coeff> Neg for CycInt<T> {
    type Output = CycInt<T>;

    fn neg(self) -> CycInt<T> {
        self.neg_ref()
    }
}

/// Textual form `(mod M) c0 + c1*z + … `, lowest degree first.
impl<T: Coeff> fmt::Display for CycInt<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(mod {})", self.modulus())?;
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                write!(f, " {}", if neg { "-" } else { "" })?;
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => {}
                (_, false) => write!(f, "{mag}*")?,
            }
            match i {
                0 => {}
                1 => write!(f, "z")?,
                _ => write!(f, "z^{i}")?,
            }
        }
        if first {
            write!(f, " 0")?;
        }
        Ok(())
    }
}

impl<T: Coeff> fmt::Debug for CycInt<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<T: Coeff> FromStr for CycInt<T> {
    type Err = GbentError;

    fn from_str(s: &str) -> Result<Self> {
        let err = |msg: &str| GbentError::Parse(format!("{msg} in cyclotomic integer {s:?}"));
        let rest = s
            .trim()
            .strip_prefix("(mod")
            .ok_or_else(|| err("missing '(mod'"))?;
        let close = rest.find(')').ok_or_else(|| err("missing ')'"))?;
        let m: u64 = rest[..close]
            .trim()
            .parse()
            .map_err(|_| err("bad modulus"))?;
        if m == 0 {
            return Err(err("zero modulus"));
        }
        let body: String = rest[close + 1..]
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect();
        if body.is_empty() {
            return Err(err("empty body"));
        }

        let mut poly: Vec<T> = Vec::new();
        let bytes = body.as_bytes();
        let mut pos = 0;
        while pos < bytes.len() {
            let mut negative = false;
            if bytes[pos] == b'+' || bytes[pos] == b'-' {
                negative = bytes[pos] == b'-';
                pos += 1;
            } else if pos != 0 {
                return Err(err("expected '+' or '-'"));
            }
            let end = body[pos..]
                .find(['+', '-'])
                .map(|o| pos + o)
                .unwrap_or(bytes.len());
            let term = &body[pos..end];
            pos = end;
            let (coef, exp) = parse_term::<T>(term).ok_or_else(|| err("bad term"))?;
            if poly.len() <= exp {
                poly.resize(exp + 1, T::zero());
            }
            if negative {
                poly[exp] -= coef;
            } else {
                poly[exp] += coef;
            }
        }
        Ok(CycInt::from_poly(m, poly))
    }
}

fn parse_term<T: Coeff>(term: &str) -> Option<(T, usize)> {
    let parse_coef = |t: &str| -> Option<T> {
        let v: BigInt = t.parse().ok()?;
        T::from_i128(v.to_i128()?)
    };
    match term.find('z') {
        None => Some((parse_coef(term)?, 0)),
        Some(zpos) => {
            let coef = match &term[..zpos] {
                "" => T::one(),
                c => parse_coef(c.strip_suffix('*')?)?,
            };
            let exp = match &term[zpos + 1..] {
                "" => 1,
                e => e.strip_prefix('^')?.parse().ok()?,
            };
            Some((coef, exp))
        }
    }
}

/// `√p` as an element of `Z[ζ_m]`, built from the quadratic Gauss sum.
///
/// `g = Σ_{t=1}^{p-1} (t/p) ζ_p^t` equals `√p` when `p ≡ 1 (mod 4)` and
/// `√-1·√p` when `p ≡ 3 (mod 4)`, so the second case is multiplied by `-√-1`.
/// Requires `4p | m`.
pub fn gauss_sqrt<T: Coeff>(p: u64, m: u64) -> Result<CycInt<T>> {
    if !arith::is_odd_prime(p) {
        return Err(GbentError::NotOddPrime(p));
    }
    if !m.is_multiple_of(4 * p) {
        return Err(GbentError::InvalidParameters(format!(
            "Gauss sum for p = {p} needs 4p | M, got M = {m}"
        )));
    }
    let step = (m / p) as i64;
    let mut acc = RootSum::<T>::new(m);
    for t in 1..p {
        acc.add_root(t as i64 * step, &T::from_int(arith::legendre(t, p)));
    }
    let g = acc.finish();
    if p % 4 == 1 {
        Ok(g)
    } else {
        Ok(g.mul_root(3 * (m / 4) as i64))
    }
}

/// `p^{n/2}` in `Z[ζ_m]`: an integer for even `n`, `p^{(n-1)/2}·√p` for odd `n`.
pub fn sqrt_prime_power<T: Coeff>(p: u64, n: u32, m: u64) -> Result<CycInt<T>> {
    let int_part = num_traits::pow(T::from_int(p as i64), (n / 2) as usize);
    if n.is_multiple_of(2) {
        Ok(CycInt::from_int(m, int_part))
    } else {
        Ok(gauss_sqrt::<T>(p, m)?.scalar_mul(&int_part))
    }
}

/// Index of the unique candidate equal to `z`.
pub fn match_candidate<T: Coeff>(z: &CycInt<T>, candidates: &[CycInt<T>]) -> Result<Option<usize>> {
    let mut found = None;
    for (i, c) in candidates.iter().enumerate() {
        if c == z {
            if let Some(prev) = found {
                return Err(GbentError::Inconsistent(format!(
                    "candidates {prev} and {i} both equal {z}"
                )));
            }
            found = Some(i);
        }
    }
    Ok(found)
}

/// Hashed lookup over a fixed, pairwise-distinct candidate list.
#[derive(Clone, Debug)]
pub struct CandidateSet<T: Coeff, K> {
    index: HashMap<CycInt<T>, K>,
}

impl<T: Coeff, K: Clone> CandidateSet<T, K> {
    /// Every value must be distinct.
    pub fn strict(items: impl IntoIterator<Item = (K, CycInt<T>)>) -> Result<Self> {
        let mut index = HashMap::new();
        for (key, value) in items {
            if index.contains_key(&value) {
                return Err(GbentError::Inconsistent(format!(
                    "duplicate candidate {value}"
                )));
            }
            index.insert(value, key);
        }
        Ok(CandidateSet { index })
    }

    /// Repeated values keep the key of their first occurrence.
    pub fn first_wins(items: impl IntoIterator<Item = (K, CycInt<T>)>) -> Self {
        let mut index = HashMap::new();
        for (key, value) in items {
            index.entry(value).or_insert(key);
        }
        CandidateSet { index }
    }

    pub fn lookup(&self, z: &CycInt<T>) -> Option<K> {
        self.index.get(z).cloned()
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }
}
