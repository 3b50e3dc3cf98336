//! Elementary number theory over machine integers.
//!
//! Everything here works on `u64` and keeps intermediate products in `u128`,
//! so moduli well beyond the 2^31 construction limit are safe.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus `L = pq` accepted by the construction.
pub const MAX_MODULUS: u64 = 1 << 31;

/// A positive integer together with its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredInteger {
    pub value: u64,
    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(r, _)| r)
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Deterministic Miller-Rabin; the base set below is exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod_unchecked(a, d, n);
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

/// Trial-division factorization.
pub fn factorize(n: u64) -> Result<FactoredInteger> {
    if n < 2 {
        return Err(Error::TooSmall { value: n, min: 2 });
    }
    let mut factors = Vec::new();
    let mut rest = n;
    let mut r = 2u64;
    while r.saturating_mul(r) <= rest {
        if rest.is_multiple_of(r) {
            let mut k = 0;
            while rest.is_multiple_of(r) {
                rest /= r;
                k += 1;
            }
            factors.push((r, k));
        }
        r += if r == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(FactoredInteger { value: n, factors })
}

fn pow_mod_unchecked(a: u64, mut s: u64, m: u64) -> u64 {
    let mut base = a % m;
    let mut acc = 1 % m;
    while s > 0 {
        if s & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        s >>= 1;
    }
    acc
}

/// `a^s mod m` by square-and-multiply.
pub fn pow_mod(a: u64, s: u64, m: u64) -> Result<u64> {
    if m < 2 {
        return Err(Error::TooSmall { value: m, min: 2 });
    }
    Ok(pow_mod_unchecked(a, s, m))
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

/// True iff `g` has multiplicative order `prime - 1` modulo `prime`.
///
/// Checks `g^((prime-1)/r) != 1` for every prime `r | prime - 1`.
pub fn is_primitive_root(g: u64, prime: u64) -> Result<bool> {
    if !is_prime(prime) {
        return Err(Error::NotPrime(prime));
    }
    if g.is_multiple_of(prime) {
        return Err(Error::OutOfRange {
            value: g,
            modulus: prime,
        });
    }
    if prime == 2 {
        return Ok(true);
    }
    let order = factorize(prime - 1)?;
    Ok(is_primitive_root_with(g, prime, &order))
}

fn is_primitive_root_with(g: u64, prime: u64, order: &FactoredInteger) -> bool {
    !g.is_multiple_of(prime)
        && order
            .primes()
            .all(|r| pow_mod_unchecked(g, (prime - 1) / r, prime) != 1)
}

/// Smallest `g >= 2` that is a primitive root modulo both `p` and `q`.
pub fn find_common_primitive_root(p: u64, q: u64) -> Result<u64> {
    check_odd_prime_pair(p, q)?;
    let fp = factorize(p - 1)?;
    let fq = factorize(q - 1)?;
    (2..p.saturating_mul(q))
        .find(|&g| is_primitive_root_with(g, p, &fp) && is_primitive_root_with(g, q, &fq))
        .ok_or_else(|| Error::Inconsistent(format!("no common primitive root of {p} and {q}")))
}

/// The unique `x` in `[0, pq)` with `x = g (mod p)` and `x = 1 (mod q)`.
pub fn crt_solve_x(g: u64, p: u64, q: u64) -> Result<u64> {
    check_odd_prime_pair(p, q)?;
    let l = p * q;
    // x = 1 + q * t with q * t = g - 1 (mod p)
    let q_inv = pow_mod_unchecked(q % p, p - 2, p);
    let t = mul_mod((g + p - 1) % p, q_inv, p);
    Ok((1 + q * t) % l)
}

pub(crate) fn check_odd_prime_pair(p: u64, q: u64) -> Result<()> {
    for n in [p, q] {
        if !is_prime(n) {
            return Err(Error::NotPrime(n));
        }
        if n == 2 {
            return Err(Error::EvenPrime(n));
        }
    }
    if p == q {
        return Err(Error::EqualPrimes(p));
    }
    Ok(())
}
