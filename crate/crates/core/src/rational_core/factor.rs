//! Prime factorization: trial division below one million, then Brent's
//! variant of Pollard rho on whatever survives. Survivors are certified prime
//! by Miller–Rabin over the first twelve prime bases (deterministic below
//! 3.3·10²⁴) combined with a strong Lucas test above that.
//!
//! Practical ceiling: cofactors whose two smallest prime factors both exceed
//! roughly 2⁶⁰ take rho too long to be useful. Desk-scale moduli never get
//! near that.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{mul_mod_u64, mod_pow_u64, nat, Natural};
use crate::error::{Error, Result};

const TRIAL_BOUND: u32 = 1_000_000;
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_BOUND as usize;
        let mut composite = vec![false; n];
        let mut primes = Vec::with_capacity(78_498);
        for i in 2..n {
            if !composite[i] {
                primes.push(i as u32);
                let mut j = i * i;
                while j < n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

/// Prime factorization with primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    factors: Vec<(Natural, u32)>,
}

impl Factorization {
    pub(crate) fn from_unsorted(mut factors: Vec<(Natural, u32)>) -> Self {
        factors.sort();
        let mut merged: Vec<(Natural, u32)> = Vec::with_capacity(factors.len());
        for (p, e) in factors {
            match merged.last_mut() {
                Some((last, acc)) if *last == p => *acc += e,
                _ => merged.push((p, e)),
            }
        }
        Factorization { factors: merged }
    }

    pub fn factors(&self) -> &[(Natural, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &Natural> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn product(&self) -> Natural {
        self.factors
            .iter()
            .fold(Natural::one(), |acc, (p, e)| acc * p.pow(*e))
    }

    /// Factorization of `φ(n) = ∏ p^(e−1)·(p − 1)`, built from the factors of
    /// each `p − 1` rather than by factoring `φ(n)` from scratch.
    pub fn totient_factorization(&self) -> Factorization {
        let mut parts = Vec::new();
        for (p, e) in &self.factors {
            if *e > 1 {
                parts.push((p.clone(), e - 1));
            }
            let pm1 = factorize(&(p - 1u32)).expect("p − 1 ≥ 1");
            parts.extend(pm1.factors);
        }
        Factorization::from_unsorted(parts)
    }

    pub fn totient(&self) -> Natural {
        self.factors.iter().fold(Natural::one(), |acc, (p, e)| {
            acc * p.pow(e - 1) * (p - 1u32)
        })
    }
}

pub fn factorize(n: &Natural) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::domain("cannot factorize 0"));
    }
    let mut out = Vec::new();
    if let Some(small) = n.to_u64() {
        factor_u64(small, &mut out);
        return Ok(Factorization::from_unsorted(out));
    }
    let mut rest = n.clone();
    for &p in small_primes() {
        let p_big = nat(p as u64);
        if &p_big * &p_big > rest {
            break;
        }
        let mut e = 0;
        loop {
            let (q, r) = rest.div_rem(&p_big);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            out.push((p_big, e));
        }
        if let Some(small) = rest.to_u64() {
            factor_u64(small, &mut out);
            return Ok(Factorization::from_unsorted(out));
        }
    }
    if !rest.is_one() {
        split_big(rest, &mut out);
    }
    Ok(Factorization::from_unsorted(out))
}

fn factor_u64(mut n: u64, out: &mut Vec<(Natural, u32)>) {
    for &p in small_primes() {
        let p = p as u64;
        if p * p > n {
            break;
        }
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((nat(p), e));
        }
    }
    if n > 1 {
        split_u64(n, out);
    }
}

fn split_u64(n: u64, out: &mut Vec<(Natural, u32)>) {
    if is_prime_u64(n) {
        out.push((nat(n), 1));
        return;
    }
    let d = (1..)
        .find_map(|c| rho_u64(n, c))
        .expect("rho always finds a divisor of a composite");
    split_u64(d, out);
    split_u64(n / d, out);
}

fn split_big(n: Natural, out: &mut Vec<(Natural, u32)>) {
    if let Some(small) = n.to_u64() {
        split_u64(small, out);
        return;
    }
    if is_prime(&n) {
        out.push((n, 1));
        return;
    }
    let d = (1..)
        .find_map(|c| rho_big(&n, c))
        .expect("rho always finds a divisor of a composite");
    let other = &n / &d;
    split_big(d, out);
    split_big(other, out);
}

// Brent's cycle detection with products of differences batched before each gcd.
fn rho_u64(n: u64, c: u64) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    let f = |x: u64| ((mul_mod_u64(x, x, n) as u128 + c as u128) % n as u128) as u64;
    let (mut y, mut x, mut ys) = (2u64, 2u64, 2u64);
    let mut g = 1u64;
    let mut q = 1u64;
    let mut r = 1u64;
    const BATCH: u64 = 128;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                q = mul_mod_u64(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += BATCH;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn rho_big(n: &Natural, c: u64) -> Option<Natural> {
    let c = nat(c);
    let f = |x: &Natural| (x * x + &c) % n;
    let diff = |a: &Natural, b: &Natural| if a > b { a - b } else { b - a };
    let mut y = nat(2);
    let mut x = nat(2);
    let mut ys = nat(2);
    let mut g = Natural::one();
    let mut q = Natural::one();
    let mut r = 1u64;
    const BATCH: u64 = 128;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..BATCH.min(r - k) {
                y = f(&y);
                q = q * diff(&x, &y) % n;
            }
            g = q.gcd(n);
            k += BATCH;
        }
        r *= 2;
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (&g != n).then_some(g)
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    MR_BASES.iter().all(|&a| {
        let mut x = mod_pow_u64(a, d, n);
        if x == 1 || x == n - 1 {
            return true;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                return true;
            }
        }
        false
    })
}

/// Primality test. Deterministic for `n < 3.3·10²⁴`; above that the
/// Miller–Rabin plus strong Lucas combination has no known counterexample.
pub fn is_prime(n: &Natural) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in &MR_BASES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = Natural::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mr = MR_BASES.iter().all(|&a| {
        let mut x = nat(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            return true;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus_1 {
                return true;
            }
        }
        false
    });
    mr && strong_lucas(n)
}

fn jacobi(a: &BigUint, n: &BigUint) -> i32 {
    let mut a = a % n;
    let mut n = n.clone();
    let mut result = 1;
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        a >>= tz;
        let n_mod_8 = (&n % 8u32).to_u32().unwrap_or(0);
        if tz % 2 == 1 && (n_mod_8 == 3 || n_mod_8 == 5) {
            result = -result;
        }
        if (&a % 4u32).to_u32() == Some(3) && n_mod_8 % 4 == 3 {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        a %= &n;
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

// Strong Lucas probable-prime test with Selfridge's parameter choice
// (P = 1, Q = (1 − D)/4). `n` is odd and larger than 37 here.
fn strong_lucas(n: &Natural) -> bool {
    let root = n.sqrt();
    if &root * &root == *n {
        return false;
    }
    let mut d_abs = 5u64;
    let mut negative = false;
    let d_mod = loop {
        let d_mod = if negative {
            n - (nat(d_abs) % n)
        } else {
            nat(d_abs) % n
        };
        match jacobi(&d_mod, n) {
            -1 => break d_mod,
            0 if nat(d_abs) != *n => return false,
            _ => {}
        }
        d_abs += 2;
        negative = !negative;
    };
    // Q = (1 − D)/4 mod n; 4 is invertible because n is odd.
    let half = |x: Natural| if x.is_odd() { (x + n) >> 1 } else { x >> 1 };
    let one_minus_d = (Natural::one() + n - &d_mod) % n;
    let q_mod = half(half(one_minus_d));
    let sub = |a: &Natural, b: &Natural| (a + n - b % n) % n;

    let n_plus_1 = n + 1u32;
    let s = n_plus_1.trailing_zeros().unwrap_or(0);
    let d = &n_plus_1 >> s;

    let mut u = Natural::one();
    let mut v = Natural::one();
    let mut qk = q_mod.clone();
    let bits = d.bits();
    for i in (0..bits - 1).rev() {
        u = &u * &v % n;
        v = sub(&(&v * &v), &(&qk * 2u32));
        qk = &qk * &qk % n;
        if d.bit(i) {
            let new_u = half((&u + &v) % n);
            let new_v = half((&d_mod * &u + &v) % n);
            u = new_u;
            v = new_v;
            qk = &qk * &q_mod % n;
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = sub(&(&v * &v), &(&qk * 2u32));
        if v.is_zero() {
            return true;
        }
        qk = &qk * &qk % n;
    }
    false
}
