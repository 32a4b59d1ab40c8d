//! Eventually periodic q-adic expansions of rationals in `[0, 1)`.
//!
//! Writing `x = s/t` in lowest terms and `t = t̂·u` with `gcd(t̂, q) = 1` and
//! `u | q^v` (v minimal), the greedy expansion has a preperiod of exactly `v`
//! digits followed by a period of `ord_t̂(q)` digits. Digits are produced by
//! long division; the period is closed when the remainder after the
//! preperiod recurs.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational_core::{mod_pow, nat, split_coprime_part, Natural, Rational};

/// Digit expansion `0.a₁…a_v (b₁…b_L)^∞` in base `q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExpansionQ {
    pub base: u32,
    pub preperiod: Vec<u32>,
    pub period: Vec<u32>,
}

impl ExpansionQ {
    /// Terminating expansions carry the period `[0]`.
    pub fn is_terminating(&self) -> bool {
        self.period == [0]
    }

    /// The infinite digit string, starting at `d₁`.
    pub fn digits(&self) -> impl Iterator<Item = u32> + '_ {
        self.preperiod
            .iter()
            .copied()
            .chain(self.period.iter().copied().cycle())
    }

    /// Exact value: preperiod part plus the geometric series of the period.
    pub fn value(&self) -> Rational {
        let q = nat(self.base as u64);
        let mut pre = Natural::zero();
        for &d in &self.preperiod {
            pre = pre * &q + d;
        }
        let mut per = Natural::zero();
        for &d in &self.period {
            per = per * &q + d;
        }
        let q_v = q.pow(self.preperiod.len() as u32);
        let q_l = q.pow(self.period.len() as u32);
        // x = pre/q^v + per/(q^v (q^L − 1))
        let den = &q_v * (&q_l - 1u32);
        Rational::new(pre * (q_l - 1u32) + per, den).expect("q ≥ 2 keeps the denominator positive")
    }
}

fn check_base(q: u32) -> Result<()> {
    if q < 2 {
        return Err(Error::domain(format!("base must be ≥ 2, got {q}")));
    }
    Ok(())
}

fn check_unit_interval(x: &Rational) -> Result<()> {
    if !x.in_unit_interval() {
        return Err(Error::domain(format!("{x} is outside [0, 1)")));
    }
    Ok(())
}

enum Remainder {
    Small { r: u64, den: u64 },
    Big { r: Natural, den: Natural },
}

/// Long division of a rational in `[0, 1)`, one digit per step.
pub struct DigitStream {
    q: u32,
    rem: Remainder,
}

impl DigitStream {
    pub fn new(x: &Rational, q: u32) -> Result<Self> {
        check_base(q)?;
        check_unit_interval(x)?;
        Ok(Self::unchecked(x.num().clone(), x.den().clone(), q))
    }

    fn unchecked(r: Natural, den: Natural, q: u32) -> Self {
        let rem = match (r.to_u64(), den.to_u64()) {
            (Some(r), Some(den)) => Remainder::Small { r, den },
            _ => Remainder::Big { r, den },
        };
        DigitStream { q, rem }
    }

    fn remainder(&self) -> Natural {
        match &self.rem {
            Remainder::Small { r, .. } => nat(*r),
            Remainder::Big { r, .. } => r.clone(),
        }
    }

    fn same_remainder(&self, other: &Natural) -> bool {
        match &self.rem {
            Remainder::Small { r, .. } => other.to_u64() == Some(*r),
            Remainder::Big { r, .. } => r == other,
        }
    }
}

impl Iterator for DigitStream {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        let q = self.q;
        let digit = match &mut self.rem {
            Remainder::Small { r, den } => {
                let scaled = *r as u128 * q as u128;
                let (d, m) = (scaled / *den as u128, scaled % *den as u128);
                *r = m as u64;
                d as u32
            }
            Remainder::Big { r, den } => {
                let (d, m) = (&*r * q).div_rem(den);
                *r = m;
                d.to_u32().expect("digit below base")
            }
        };
        Some(digit)
    }
}

/// Length `v` of the canonical preperiod.
pub fn preperiod_len(x: &Rational, q: u32) -> Result<u64> {
    check_base(q)?;
    Ok(split_coprime_part(x.den(), &nat(q as u64))?.2)
}

/// Walks the preperiod and then exactly one period of the canonical expansion,
/// handing each digit to `visit` together with a flag telling whether it lies
/// in the period. Stops as soon as `visit` returns `false`; the return value
/// says whether the walk completed.
pub fn walk_canonical<F>(x: &Rational, q: u32, mut visit: F) -> Result<bool>
where
    F: FnMut(u32, bool) -> bool,
{
    let v = preperiod_len(x, q)?;
    let mut stream = DigitStream::new(x, q)?;
    for _ in 0..v {
        if !visit(stream.next().expect("infinite"), false) {
            return Ok(false);
        }
    }
    let anchor = stream.remainder();
    loop {
        if !visit(stream.next().expect("infinite"), true) {
            return Ok(false);
        }
        if stream.same_remainder(&anchor) {
            return Ok(true);
        }
    }
}

/// Canonical (greedy) expansion of `x ∈ [0, 1)` in base `q`.
///
/// Cost is linear in `v + ord_t̂(q)`, which can be astronomically large for
/// denominators like `2^200` in base 3; use [`walk_canonical`] or
/// [`digit_at`] when only part of the expansion is needed.
pub fn expand(x: &Rational, q: u32) -> Result<ExpansionQ> {
    let mut preperiod = Vec::new();
    let mut period = Vec::new();
    walk_canonical(x, q, |d, in_period| {
        if in_period {
            period.push(d);
        } else {
            preperiod.push(d);
        }
        true
    })?;
    Ok(ExpansionQ {
        base: q,
        preperiod,
        period,
    })
}

/// `d_i = ⌊q·(s·q^{i−1} mod t)/t⌋`, using one modular exponentiation.
pub fn digit_at(x: &Rational, q: u32, i: &Natural) -> Result<u32> {
    check_base(q)?;
    check_unit_interval(x)?;
    if i.is_zero() {
        return Err(Error::domain("digit index starts at 1"));
    }
    let qn = nat(q as u64);
    let den = x.den();
    let r = x.num() * mod_pow(&qn, &(i - 1u32), den)? % den;
    Ok((r * q / den).to_u32().expect("digit below base"))
}

/// Whether `x` has a terminating `p`-adic expansion: every prime factor of
/// its denominator divides `p`. Both 0 and 1 qualify.
pub fn is_finite_expansion(x: &Rational, p: u32) -> Result<bool> {
    check_base(p)?;
    if *x > Rational::one() {
        return Err(Error::domain(format!("{x} is outside [0, 1]")));
    }
    Ok(split_coprime_part(x.den(), &nat(p as u64))?.0.is_one())
}

/// Digits occurring anywhere in the canonical expansion. Stops early once
/// every digit has been seen.
pub fn digit_set(x: &Rational, q: u32) -> Result<BTreeSet<u32>> {
    let mut seen = BTreeSet::new();
    walk_canonical(x, q, |d, _| {
        seen.insert(d);
        seen.len() < q as usize
    })?;
    Ok(seen)
}

/// Every length-`m` window of the infinite canonical digit string.
pub fn blocks_present(x: &Rational, q: u32, m: usize) -> Result<BTreeSet<Vec<u32>>> {
    if m == 0 {
        return Err(Error::domain("block length must be ≥ 1"));
    }
    let e = expand(x, q)?;
    let needed = e.preperiod.len() + e.period.len() + m - 1;
    let digits: Vec<u32> = e.digits().take(needed).collect();
    Ok(digits.windows(m).map(<[u32]>::to_vec).collect())
}

/// The trailing-`(q−1)` representation of a terminating `x ∈ (0, 1)`;
/// `None` for non-terminating expansions.
pub fn alternate_expansion(x: &Rational, q: u32) -> Result<Option<ExpansionQ>> {
    if x.is_zero() {
        return Err(Error::domain("alternate expansion needs x in (0, 1)"));
    }
    let mut e = expand(x, q)?;
    if !e.is_terminating() {
        return Ok(None);
    }
    let last = e.preperiod.last_mut().expect("nonzero terminating x has a preperiod");
    *last -= 1;
    e.period = vec![q - 1];
    Ok(Some(e))
}
