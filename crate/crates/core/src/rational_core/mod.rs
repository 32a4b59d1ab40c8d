//! Arbitrary-precision naturals, exact nonnegative rationals and the
//! elementary number theory used by every other module.

mod factor;
mod rational;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use factor::{factorize, is_prime, Factorization};
pub use rational::Rational;

/// Unbounded nonnegative integer.
pub type Natural = BigUint;

/// Shorthand for building a [`Natural`] from a machine integer.
pub fn nat(n: u64) -> Natural {
    Natural::from(n)
}

/// Parses a plain decimal natural; signs, spaces and exponents are errors.
pub fn parse_natural(s: &str) -> Result<Natural> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("not a decimal natural: {s:?}")));
    }
    s.parse().map_err(|_| Error::Parse(format!("not a decimal natural: {s:?}")))
}

pub fn gcd(a: &Natural, b: &Natural) -> Natural {
    a.gcd(b)
}

pub fn lcm(a: &Natural, b: &Natural) -> Result<Natural> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::domain("lcm is defined for positive arguments only"));
    }
    Ok(a / gcd(a, b) * b)
}

/// `a^e mod m`, square-and-multiply, so `e` may have thousands of digits.
pub fn mod_pow(a: &Natural, e: &Natural, m: &Natural) -> Result<Natural> {
    if m.is_zero() {
        return Err(Error::ZeroModulus);
    }
    if let (Some(a), Some(e), Some(m)) = (a.to_u64(), e.to_u64(), m.to_u64()) {
        return Ok(nat(mod_pow_u64(a, e, m)));
    }
    Ok(a.modpow(e, m))
}

pub(crate) fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn mod_pow_u64(a: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut base = a % m;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        e >>= 1;
    }
    acc
}

/// Euler's totient via the product formula over the prime factorization.
pub fn euler_phi(n: &Natural) -> Result<Natural> {
    Ok(factorize(n)?.totient())
}

/// Largest `e` with `p^e | n`. `p` must be at least 2 and `n` nonzero.
pub fn valuation(n: &Natural, p: &Natural) -> u64 {
    debug_assert!(!n.is_zero() && *p > Natural::one());
    let mut n = n.clone();
    let mut e = 0;
    loop {
        let (quot, rem) = n.div_rem(p);
        if !rem.is_zero() {
            return e;
        }
        n = quot;
        e += 1;
    }
}

/// Splits `t = t_hat · u` where `t_hat` is coprime to `q` and `u | q^v` with
/// `v` minimal. Returns `(t_hat, u, v)`.
pub fn split_coprime_part(t: &Natural, q: &Natural) -> Result<(Natural, Natural, u64)> {
    if t.is_zero() {
        return Err(Error::domain("split_coprime_part requires t ≥ 1"));
    }
    if *q < nat(2) {
        return Err(Error::domain("split_coprime_part requires q ≥ 2"));
    }
    let mut t_hat = t.clone();
    loop {
        let g = gcd(&t_hat, q);
        if g.is_one() {
            break;
        }
        while (&t_hat % &g).is_zero() {
            t_hat /= &g;
        }
    }
    let u = t / &t_hat;
    let mut v = 0u64;
    let mut power = Natural::one() % &u;
    while !power.is_zero() {
        power = power * q % &u;
        v += 1;
    }
    Ok((t_hat, u, v))
}

/// Integer `n`-th root and whether it is exact.
pub(crate) fn exact_root(x: &Natural, n: u32) -> Option<Natural> {
    let r = x.nth_root(n);
    (r.pow(n) == *x).then_some(r)
}

/// Writes `x ≥ 2` as `base^e` with `e` maximal.
pub(crate) fn perfect_power(x: &Natural) -> (Natural, u32) {
    let bits = x.bits() as u32;
    for e in (2..=bits).rev() {
        if let Some(r) = exact_root(x, e) {
            if r > Natural::one() {
                return (r, e);
            }
        }
    }
    (x.clone(), 1)
}
