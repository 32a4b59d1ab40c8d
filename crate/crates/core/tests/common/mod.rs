//! Reference implementations used as test oracles. They share no code
//! with the library beyond the big-integer type.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Digits of `num/den < 1` in base `q` by schoolbook long division, with
/// the cycle found by remembering every remainder: `(preperiod, period)`.
pub fn long_division(num: u64, den: u64, q: u64) -> (Vec<u64>, Vec<u64>) {
    let mut first_seen: HashMap<u64, usize> = HashMap::new();
    let mut digits = Vec::new();
    let mut r = num % den;
    loop {
        if let Some(&start) = first_seen.get(&r) {
            let period = digits.split_off(start);
            return (digits, period);
        }
        first_seen.insert(r, digits.len());
        let scaled = r as u128 * q as u128;
        digits.push((scaled / den as u128) as u64);
        r = (scaled % den as u128) as u64;
    }
}

/// Whether `num/den ∈ [0, 1]` has a base-`q` expansion with every digit in
/// `allowed`. Walks the greedy expansion until a remainder repeats, then
/// tries the trailing-`(q−1)` form of terminating values.
pub fn member(num: &BigUint, den: &BigUint, q: u32, allowed: &[u32]) -> bool {
    let ok = |d: u32| allowed.contains(&d);
    if num > den {
        return false;
    }
    if num.is_zero() {
        return ok(0);
    }
    if num == den {
        return ok(q - 1);
    }
    let mut seen = HashSet::new();
    let mut r = num.clone();
    let mut finite_digits = Vec::new();
    let mut all_allowed = true;
    while seen.insert(r.clone()) {
        let (d, rest) = (&r * q).div_rem(den);
        let d = d.to_u32().unwrap();
        finite_digits.push(d);
        if !ok(d) {
            all_allowed = false;
            break;
        }
        r = rest;
    }
    if all_allowed {
        return true;
    }
    // Terminating values have a second expansion ending in (q−1)^∞.
    if !ok(q - 1) {
        return false;
    }
    let mut r = num.clone();
    let mut digits = Vec::new();
    for _ in 0..10_000 {
        if r.is_zero() {
            break;
        }
        let (d, rest) = (&r * q).div_rem(den);
        digits.push(d.to_u32().unwrap());
        r = rest;
    }
    if !r.is_zero() {
        return false;
    }
    while digits.last() == Some(&0) {
        digits.pop();
    }
    let last = digits.pop().unwrap();
    digits.push(last - 1);
    digits.into_iter().all(ok)
}

pub fn member_u64(num: u64, den: u64, q: u32, allowed: &[u32]) -> bool {
    member(&BigUint::from(num), &BigUint::from(den), q, allowed)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * a as u128 % m as u128) as u64;
        }
        a = (a as u128 * a as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn totient(n: u64) -> u64 {
    prime_factors(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Order of `a` modulo `m` as the least divisor `d` of `φ(m)` with
/// `a^d ≡ 1`, scanning divisors in increasing order.
pub fn order(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    assert_eq!(gcd(a, m), 1);
    let phi = totient(m);
    let mut divisors = vec![1u64];
    for (p, e) in prime_factors(phi) {
        let current = divisors.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            divisors.extend(current.iter().map(|d| d * pk));
        }
    }
    divisors.sort_unstable();
    divisors
        .into_iter()
        .find(|&d| pow_mod(a, d, m) == 1)
        .unwrap()
}

/// Order by repeated multiplication; only for small moduli.
pub fn order_by_iteration(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let mut x = a % m;
    let mut n = 1;
    while x != 1 {
        x = (x as u128 * a as u128 % m as u128) as u64;
        n += 1;
    }
    n
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|p| p * p <= n).all(|p| !n.is_multiple_of(p))
}

pub fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

pub fn pow2(k: u32) -> BigUint {
    BigUint::one() << k
}
