//! Elementary number theory on 64-bit integers.
//!
//! Everything here is deterministic and pure. Primality uses Miller-Rabin with
//! the first twelve prime bases, which is exact for every `u64`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A residue class `representative mod modulus` with `representative < modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ResidueClass {
    pub modulus: u64,
    pub representative: u64,
}

impl ResidueClass {
    /// Builds the class of `value` modulo `modulus`, reducing negative values.
    pub fn new(value: i64, modulus: u64) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        let representative = (value as i128).rem_euclid(modulus as i128) as u64;
        ResidueClass {
            modulus,
            representative,
        }
    }

    /// True when the representative is coprime to the modulus.
    pub fn is_primitive(&self) -> bool {
        gcd(self.representative, self.modulus) == 1
    }

    pub fn contains(&self, n: u64) -> bool {
        n % self.modulus == self.representative
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic primality test for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &sp in &SMALL_PRIMES {
        if n == sp {
            return true;
        }
        if n % sp == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL_PRIMES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: u64) -> u64 {
    let mut c = n + 1;
    while !is_prime(c) {
        c += 1;
    }
    c
}

/// All primes in `[lo, hi]`, ascending.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

/// Inverse of `a` modulo `m`, in `[0, m)` (`[1, m)` whenever `m >= 2`).
pub fn mod_inverse(a: i64, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::NotCoprime { a, m });
    }
    let m_i = m as i128;
    let a_red = (a as i128).rem_euclid(m_i);
    let (mut old_r, mut r) = (a_red, m_i);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    if old_r != 1 && m != 1 {
        return Err(Error::NotCoprime { a, m });
    }
    Ok(old_s.rem_euclid(m_i) as u64)
}

/// Chinese remaindering over pairwise coprime moduli.
pub fn crt(pairs: &[(i64, u64)]) -> Result<ResidueClass> {
    let mut acc = ResidueClass {
        modulus: 1,
        representative: 0,
    };
    for &(residue, modulus) in pairs {
        let next = ResidueClass::new(residue, modulus);
        if gcd(acc.modulus, modulus) != 1 {
            return Err(Error::ModuliNotCoprime(acc.modulus, modulus));
        }
        let combined = acc
            .modulus
            .checked_mul(modulus)
            .ok_or_else(|| Error::Overflow(format!("crt modulus {} * {}", acc.modulus, modulus)))?;
        // x = a + M * t with M * t = b - a (mod m)
        let inv = mod_inverse(acc.modulus as i64, modulus)?;
        let diff = (next.representative as i128 - acc.representative as i128)
            .rem_euclid(modulus as i128) as u64;
        let t = mul_mod(diff, inv, modulus);
        let x = acc.representative as u128 + acc.modulus as u128 * t as u128;
        acc = ResidueClass {
            modulus: combined,
            representative: (x % combined as u128) as u64,
        };
    }
    Ok(acc)
}

/// Default ceiling for [`smallest_prime_in_class`]: `lower_bound + 50 * m * bits(m)^2`.
pub fn default_search_cap(modulus: u64, lower_bound: u64) -> u64 {
    let bits = 64 - modulus.leading_zeros() as u64;
    let span = 50u64
        .saturating_mul(modulus)
        .saturating_mul(bits.saturating_mul(bits));
    lower_bound.saturating_add(span)
}

/// Smallest prime `r > lower_bound` with `r` in `class`, searching no further than `search_cap`.
pub fn smallest_prime_in_class(class: ResidueClass, lower_bound: u64, search_cap: u64) -> Result<u64> {
    let exhausted = || Error::SearchCapExceeded {
        representative: class.representative,
        modulus: class.modulus,
        lower: lower_bound,
        cap: search_cap,
    };
    if !class.is_primitive() {
        // only a prime equal to the representative itself could lie in the class
        let r = class.representative;
        return if r > lower_bound && r <= search_cap && is_prime(r) {
            Ok(r)
        } else {
            Err(exhausted())
        };
    }
    let m = class.modulus;
    let start = lower_bound + 1;
    let offset = (class.representative + m - start % m) % m;
    let mut candidate = start.checked_add(offset).ok_or_else(exhausted)?;
    while candidate <= search_cap {
        if is_prime(candidate) {
            return Ok(candidate);
        }
        candidate = match candidate.checked_add(m) {
            Some(c) => c,
            None => break,
        };
    }
    Err(exhausted())
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs in ascending order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Product of the distinct odd primes dividing `n`.
pub fn odd_squarefree_kernel(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .filter(|&(p, _)| p > 2)
        .map(|(p, _)| p)
        .product()
}

/// Positive divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// If `n = p*q*r` with `2 < p < q < r` primes, returns `(p, q, r)`.
pub fn ternary_factors(n: u64) -> Option<(u64, u64, u64)> {
    match factorize(n).as_slice() {
        [(p, 1), (q, 1), (r, 1)] if *p > 2 => Some((*p, *q, *r)),
        _ => None,
    }
}

/// If `n = p*q` with `2 < p < q` primes, returns `(p, q)`.
pub fn binary_factors(n: u64) -> Option<(u64, u64)> {
    match factorize(n).as_slice() {
        [(p, 1), (q, 1)] if *p > 2 => Some((*p, *q)),
        _ => None,
    }
}
