//! Extended rationals `p/q` with a single point at infinity, the Conway
//! fraction of a rational tangle.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::gcd;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FractionError {
    #[error("0/0 is not an extended rational")]
    Indeterminate,
    #[error("cannot parse {0:?} as a fraction (expected \"p/q\", \"n\" or \"inf\")")]
    Parse(String),
}

/// A reduced fraction `num/den` with `den >= 0`.
///
/// Zero is `0/1` and the only value with `den == 0` is infinity, `1/0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Fraction {
    num: i64,
    den: i64,
}

impl Fraction {
    pub const ZERO: Fraction = Fraction { num: 0, den: 1 };
    pub const ONE: Fraction = Fraction { num: 1, den: 1 };
    pub const INFINITY: Fraction = Fraction { num: 1, den: 0 };

    pub fn new(num: i64, den: i64) -> Result<Self, FractionError> {
        if num == 0 && den == 0 {
            return Err(FractionError::Indeterminate);
        }
        if den == 0 {
            return Ok(Self::INFINITY);
        }
        let g = gcd(num, den);
        let sign = den.signum();
        Ok(Fraction {
            num: sign * num / g,
            den: sign * den / g,
        })
    }

    /// Build from a pair that is known not to be `0/0`.
    pub(crate) fn from_pair(num: i64, den: i64) -> Self {
        Self::new(num, den).expect("pair is not 0/0")
    }

    pub(crate) fn from_wide(num: i128, den: i128) -> Self {
        assert!(num != 0 || den != 0, "0/0 in fraction arithmetic");
        if den == 0 {
            return Self::INFINITY;
        }
        let (mut a, mut b) = (num.unsigned_abs(), den.unsigned_abs());
        while b != 0 {
            (a, b) = (b, a % b);
        }
        let g = a as i128;
        let sign = den.signum();
        let num = i64::try_from(sign * num / g).expect("fraction numerator overflow");
        let den = i64::try_from(sign * den / g).expect("fraction denominator overflow");
        Fraction { num, den }
    }

    pub const fn integer(n: i64) -> Self {
        Fraction { num: n, den: 1 }
    }

    pub const fn num(&self) -> i64 {
        self.num
    }

    pub const fn den(&self) -> i64 {
        self.den
    }

    pub const fn is_infinite(&self) -> bool {
        self.den == 0
    }

    pub const fn is_integral(&self) -> bool {
        self.den == 1
    }

    /// Neither integral nor infinite (`den >= 2`); vertical tangles included.
    pub const fn is_strictly_rational(&self) -> bool {
        self.den >= 2
    }

    /// `±1/n` with `n >= 2`.
    pub const fn is_vertical(&self) -> bool {
        self.den >= 2 && (self.num == 1 || self.num == -1)
    }

    /// `|num| + den`, the size measure used by every bounded search.
    pub const fn complexity(&self) -> u64 {
        self.num.unsigned_abs() + self.den as u64
    }

    /// `1/f`, with `1/0 = inf` and `1/inf = 0`.
    pub fn recip(&self) -> Self {
        if self.num == 0 {
            Self::INFINITY
        } else if self.den == 0 {
            Self::ZERO
        } else {
            Self::from_pair(self.den, self.num)
        }
    }

    /// Ordering by `complexity()` first and numeric value second.
    pub fn cmp_by_complexity(&self, other: &Self) -> Ordering {
        self.complexity()
            .cmp(&other.complexity())
            .then_with(|| self.cmp(other))
    }
}

/// Numeric order with infinity above every finite value.
impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_infinite(), other.is_infinite()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => {
                let lhs = self.num as i128 * other.den as i128;
                let rhs = other.num as i128 * self.den as i128;
                lhs.cmp(&rhs)
            }
        }
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<i64> for Fraction {
    fn from(n: i64) -> Self {
        Fraction::integer(n)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Fraction {
    type Err = FractionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text = s.trim();
        let bad = || FractionError::Parse(s.to_string());
        let unsigned = text.trim_start_matches(['+', '-']);
        if matches!(unsigned, "inf" | "infinity" | "∞") && text.len() - unsigned.len() <= 1 {
            return Ok(Fraction::INFINITY);
        }
        match text.split_once('/') {
            Some((num, den)) => {
                let num: i64 = num.trim().parse().map_err(|_| bad())?;
                let den = den.trim();
                if den.starts_with(['+', '-']) {
                    return Err(bad());
                }
                let den: i64 = den.parse().map_err(|_| bad())?;
                Fraction::new(num, den)
            }
            None => text.parse::<i64>().map(Fraction::integer).map_err(|_| bad()),
        }
    }
}

impl TryFrom<String> for Fraction {
    type Error = FractionError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl From<Fraction> for String {
    fn from(value: Fraction) -> Self {
        value.to_string()
    }
}

/// Every fraction (infinity included) with `complexity() <= bound`, ordered by
/// complexity and then by value.
pub fn fractions_up_to(bound: u64) -> Vec<Fraction> {
    let mut out = vec![Fraction::ZERO, Fraction::INFINITY];
    for size in 2..=bound as i64 {
        for den in 1..size {
            let num = size - den;
            if gcd(num, den) == 1 {
                out.push(Fraction { num, den });
                out.push(Fraction { num: -num, den });
            }
        }
    }
    out.sort_by(Fraction::cmp_by_complexity);
    out
}
