//! Restricted-digit Cantor sets `K(q, A)`: points of `[0, 1]` with some base-`q`
//! expansion whose digits all lie in `A`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::{alternate_expansion, is_finite_expansion, walk_canonical};
use crate::rational_core::{mod_pow, nat, Natural, Rational};

/// `K(q, A)` with `q ≥ 3` and `1 < #A < q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCantorSet")]
pub struct DigitCantorSet {
    q: u32,
    #[serde(rename = "A")]
    digits: Vec<u32>,
    #[serde(skip)]
    allowed: Vec<bool>,
}

#[derive(Deserialize)]
struct RawCantorSet {
    q: u32,
    #[serde(rename = "A")]
    digits: Vec<u32>,
}

impl TryFrom<RawCantorSet> for DigitCantorSet {
    type Error = Error;
    fn try_from(raw: RawCantorSet) -> Result<Self> {
        DigitCantorSet::new(raw.q, raw.digits)
    }
}

impl DigitCantorSet {
    pub fn new(q: u32, digits: impl IntoIterator<Item = u32>) -> Result<Self> {
        if q < 3 {
            return Err(Error::domain(format!("K(q, A) needs q ≥ 3, got {q}")));
        }
        let mut digits: Vec<u32> = digits.into_iter().collect();
        digits.sort_unstable();
        digits.dedup();
        if let Some(&d) = digits.iter().find(|&&d| d >= q) {
            return Err(Error::domain(format!("digit {d} out of range for base {q}")));
        }
        if digits.len() < 2 || digits.len() >= q as usize {
            return Err(Error::domain(format!(
                "K(q, A) needs 1 < #A < q, got #A = {} with q = {q}",
                digits.len()
            )));
        }
        let mut allowed = vec![false; q as usize];
        for &d in &digits {
            allowed[d as usize] = true;
        }
        Ok(DigitCantorSet { q, digits, allowed })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn allows(&self, d: u32) -> bool {
        self.allowed.get(d as usize).copied().unwrap_or(false)
    }

    fn a_min(&self) -> u32 {
        self.digits[0]
    }

    fn a_max(&self) -> u32 {
        *self.digits.last().expect("at least two digits")
    }

    /// Value of the constant string `(min A)^∞`.
    pub fn min_point(&self) -> Rational {
        Rational::new(self.a_min(), self.q - 1).expect("q ≥ 3")
    }

    /// Value of the constant string `(max A)^∞`.
    pub fn max_point(&self) -> Rational {
        Rational::new(self.a_max(), self.q - 1).expect("q ≥ 3")
    }

    /// Largest connected component of `(0, 1) \ K`, leftmost on ties.
    ///
    /// Components below the first level are copies of level-1 gaps scaled by
    /// powers of `1/q`, so only the boundary gaps and the gaps between
    /// consecutive first-digit cylinders are candidates.
    pub fn largest_gap(&self) -> Gap {
        let q = Rational::integer(self.q);
        let (lo, hi) = (self.min_point(), self.max_point());
        let mut candidates = Vec::new();
        if self.a_min() > 0 {
            candidates.push(Gap::new(Rational::zero(), lo.clone()));
        }
        for pair in self.digits.windows(2) {
            let left = (&Rational::integer(pair[0]) + &hi).checked_div(&q).expect("q ≠ 0");
            let right = (&Rational::integer(pair[1]) + &lo).checked_div(&q).expect("q ≠ 0");
            if left < right {
                candidates.push(Gap::new(left, right));
            }
        }
        if self.a_max() < self.q - 1 {
            candidates.push(Gap::new(hi.clone(), Rational::one()));
        }
        candidates.sort_by(|a, b| a.left.cmp(&b.left));
        let mut best: Option<Gap> = None;
        for gap in candidates {
            if best.as_ref().is_none_or(|b| gap.length() > b.length()) {
                best = Some(gap);
            }
        }
        best.expect("1 < #A < q guarantees a gap")
    }

    /// Exact membership: some digit string over `A` sums to `x`.
    pub fn contains(&self, x: &Rational) -> Result<bool> {
        if *x > Rational::one() {
            return Err(Error::domain(format!("{x} is outside [0, 1]")));
        }
        if x.is_zero() {
            return Ok(self.allows(0));
        }
        if *x == Rational::one() {
            return Ok(self.allows(self.q - 1));
        }
        if walk_canonical(x, self.q, |d, _| self.allows(d))? {
            return Ok(true);
        }
        if is_finite_expansion(x, self.q)? {
            if let Some(alt) = alternate_expansion(x, self.q)? {
                return Ok(alt.preperiod.iter().chain(&alt.period).all(|&d| self.allows(d)));
            }
        }
        Ok(false)
    }

    /// Whether `q^n·x mod 1` falls in the open largest gap, which proves
    /// `x ∉ K`.
    pub fn shift_into_gap_implies_exclusion(&self, x: &Rational, n: &Natural) -> Result<bool> {
        if !x.in_unit_interval() {
            return Err(Error::domain(format!("{x} is outside [0, 1)")));
        }
        let residue = shift_residue(x, self.q, n)?;
        Ok(self.largest_gap().contains_open(&residue))
    }

    /// The `q^depth` closed intervals of the level-`depth` approximation.
    pub fn level_intervals(&self, depth: u32) -> Vec<(Rational, Rational)> {
        let (lo, hi) = (self.min_point(), self.max_point());
        let mut words = vec![(Natural::from(0u32), 0u32)];
        for _ in 0..depth {
            words = words
                .into_iter()
                .flat_map(|(w, len)| {
                    self.digits
                        .iter()
                        .map(move |&d| (w.clone() * self.q + d, len + 1))
                })
                .collect();
        }
        words
            .into_iter()
            .map(|(w, len)| {
                let scale = Natural::from(self.q).pow(len);
                let base = Rational::new(w, scale.clone()).expect("positive scale");
                let left = &base + &lo.divide_by(&scale).expect("positive scale");
                let right = &base + &hi.divide_by(&scale).expect("positive scale");
                (left, right)
            })
            .collect()
    }
}

impl fmt::Display for DigitCantorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits: Vec<String> = self.digits.iter().map(u32::to_string).collect();
        write!(f, "K({}, {{{}}})", self.q, digits.join(","))
    }
}

/// `q^n·x mod 1`, exactly.
pub fn shift_residue(x: &Rational, q: u32, n: &Natural) -> Result<Rational> {
    let den = x.den();
    let top = x.num() * mod_pow(&nat(q as u64), n, den)? % den;
    Rational::new(top, den.clone())
}

/// Open interval `(left, right)` disjoint from a Cantor set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gap {
    pub left: Rational,
    pub right: Rational,
}

impl Gap {
    pub fn new(left: Rational, right: Rational) -> Self {
        Gap { left, right }
    }

    pub fn length(&self) -> Rational {
        self.right
            .checked_sub(&self.left)
            .expect("gap endpoints are ordered")
    }

    pub fn contains_open(&self, x: &Rational) -> bool {
        self.left < *x && *x < self.right
    }
}
