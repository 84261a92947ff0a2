//! Small number-theoretic helpers on machine integers.

use num_integer::Integer;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn is_odd_prime(n: u64) -> bool {
    n % 2 == 1 && is_prime(n)
}

pub fn pow(base: u64, exp: u32) -> u64 {
    base.checked_pow(exp).expect("integer power overflows u64")
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Legendre symbol (a/p) for an odd prime p, via Euler's criterion.
pub fn legendre(a: u64, p: u64) -> i64 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if mod_pow(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Inverse of `a` modulo the prime `p`.
pub fn inv_mod_prime(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    mod_pow(a, p - 2, p)
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Möbius function.
pub fn mobius(mut n: u64) -> i32 {
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

pub fn euler_phi(n: u64) -> u64 {
    (1..=n).filter(|&t| t.gcd(&n) == 1).count() as u64
}

/// Smallest `k` with `q <= p^k`.
pub fn ceil_log(p: u64, q: u64) -> u32 {
    let mut k = 0;
    let mut pk = 1u64;
    while pk < q {
        pk *= p;
        k += 1;
    }
    k
}

/// Exact `log_p(q)` when `q` is a power of `p`.
pub fn exact_log(p: u64, q: u64) -> Option<u32> {
    let k = ceil_log(p, q);
    (pow(p, k) == q).then_some(k)
}

/// Little-endian base-`p` digits of `index`, `len` of them.
pub fn digits_le(mut index: usize, p: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(index as u64 % p);
        index /= p as usize;
    }
    out
}

pub fn from_digits_le(digits: &[u64], p: u64) -> usize {
    digits
        .iter()
        .rev()
        .fold(0usize, |acc, &d| acc * p as usize + d as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(!is_odd_prime(2));
    }

    #[test]
    fn legendre_matches_squares() {
        for p in [3u64, 5, 7, 11, 13] {
            for a in 1..p {
                let is_square = (1..p).any(|x| x * x % p == a);
                assert_eq!(legendre(a, p), if is_square { 1 } else { -1 });
            }
        }
    }

    #[test]
    fn mobius_and_phi() {
        assert_eq!(
            (1..=10).map(mobius).collect::<Vec<_>>(),
            vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1]
        );
        assert_eq!(euler_phi(108), 36);
        assert_eq!(euler_phi(84), 24);
    }

    #[test]
    fn logs() {
        assert_eq!(ceil_log(3, 21), 3);
        assert_eq!(ceil_log(3, 3), 1);
        assert_eq!(exact_log(3, 27), Some(3));
        assert_eq!(exact_log(3, 21), None);
        assert_eq!(from_digits_le(&digits_le(47, 3, 4), 3), 47);
    }
}
