use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Natural;
use crate::error::{Error, Result};

/// Exact nonnegative fraction, always stored in lowest terms.
///
/// Serializes as the string `"num/den"`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rational {
    num: Natural,
    den: Natural,
}

impl Rational {
    pub fn new(num: impl Into<Natural>, den: impl Into<Natural>) -> Result<Self> {
        let (num, den) = (num.into(), den.into());
        if den.is_zero() {
            return Err(Error::domain("denominator must be nonzero"));
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: Natural, den: Natural) -> Self {
        let g = num.gcd(&den);
        if g.is_one() {
            Rational { num, den }
        } else {
            Rational {
                num: num / &g,
                den: den / g,
            }
        }
    }

    pub fn zero() -> Self {
        Rational {
            num: Natural::zero(),
            den: Natural::one(),
        }
    }

    pub fn one() -> Self {
        Self::integer(Natural::one())
    }

    pub fn integer(n: impl Into<Natural>) -> Self {
        Rational {
            num: n.into(),
            den: Natural::one(),
        }
    }

    pub fn num(&self) -> &Natural {
        &self.num
    }

    pub fn den(&self) -> &Natural {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    pub fn floor(&self) -> Natural {
        &self.num / &self.den
    }

    /// Fractional part, `x mod 1`.
    pub fn fract(&self) -> Rational {
        Rational {
            num: &self.num % &self.den,
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> Rational {
        Rational {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    pub fn checked_sub(&self, rhs: &Rational) -> Option<Rational> {
        let left = &self.num * &rhs.den;
        let right = &rhs.num * &self.den;
        (left >= right).then(|| Self::reduced(left - right, &self.den * &rhs.den))
    }

    pub fn checked_div(&self, rhs: &Rational) -> Option<Rational> {
        (!rhs.is_zero()).then(|| Self::reduced(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn scale(&self, factor: &Natural) -> Rational {
        Self::reduced(&self.num * factor, self.den.clone())
    }

    pub fn divide_by(&self, divisor: &Natural) -> Result<Rational> {
        if divisor.is_zero() {
            return Err(Error::domain("division by zero"));
        }
        Ok(Self::reduced(self.num.clone(), &self.den * divisor))
    }

    /// `0 ≤ self < 1`.
    pub fn in_unit_interval(&self) -> bool {
        self.num < self.den
    }
}

impl Default for Rational {
    fn default() -> Self {
        Self::zero()
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        Rational::reduced(
            &self.num * &rhs.den + &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        &self + &rhs
    }
}

impl Mul for &Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        Rational::reduced(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        &self * &rhs
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `"s/t"` or a bare natural `"n"`. Signs, decimals and
    /// exponents are rejected.
    fn from_str(s: &str) -> Result<Self> {
        let parse_nat = |part: &str| -> Result<Natural> {
            let part = part.trim();
            if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::Parse(format!("not an exact nonnegative rational: {s:?}")));
            }
            Natural::from_str(part).map_err(|e| Error::Parse(e.to_string()))
        };
        match s.split_once('/') {
            Some((n, d)) => Rational::new(parse_nat(n)?, parse_nat(d)?)
                .map_err(|_| Error::Parse(format!("zero denominator in {s:?}"))),
            None => Ok(Rational::integer(parse_nat(s)?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
