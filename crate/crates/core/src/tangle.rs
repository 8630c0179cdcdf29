//! Rational tangles through their fractions: twist vectors, twisting,
//! mirroring and the class labels used throughout the solver.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fraction::{Fraction, FractionError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TangleError {
    #[error("the infinity tangle has no canonical twist vector")]
    InfinityHasNoCanonicalVector,
    #[error("{0} is not strictly rational")]
    NotStrictlyRational(Fraction),
}

/// Alternating horizontal/vertical twist counts `(a1, ..., an)`.
///
/// The tangle evaluates to `an + 1/(a(n-1) + 1/(... + 1/a1))`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwistVector(pub Vec<i64>);

impl TwistVector {
    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn crossings(&self) -> u64 {
        self.0.iter().map(|a| a.unsigned_abs()).sum()
    }

    /// All nonzero entries share one sign.
    pub fn is_canonical(&self) -> bool {
        let mut signs = self.0.iter().filter(|a| **a != 0).map(|a| a.signum());
        match signs.next() {
            Some(first) => signs.all(|s| s == first),
            None => true,
        }
    }
}

impl fmt::Display for TwistVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for TwistVector {
    type Err = FractionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        if inner.trim().is_empty() {
            return Ok(TwistVector(Vec::new()));
        }
        inner
            .split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|_| FractionError::Parse(s.to_string())))
            .collect::<Result<Vec<_>, _>>()
            .map(TwistVector)
    }
}

/// Continued-fraction evaluation of a twist vector; the empty vector is `0`.
pub fn fraction_of(tv: &TwistVector) -> Fraction {
    let mut entries = tv.0.iter();
    let Some(&first) = entries.next() else {
        return Fraction::ZERO;
    };
    entries.fold(Fraction::integer(first), |acc, &a| add_horizontal(acc.recip(), a))
}

/// Same-sign twist vector of a finite fraction.
pub fn twist_vector_of(f: Fraction) -> Result<TwistVector, TangleError> {
    if f.is_infinite() {
        return Err(TangleError::InfinityHasNoCanonicalVector);
    }
    let sign = if f.num() < 0 { -1 } else { 1 };
    let (mut a, mut b) = (f.num().abs(), f.den());
    let mut quotients = Vec::new();
    while b != 0 {
        quotients.push(a / b);
        (a, b) = (b, a % b);
    }
    quotients.reverse();
    Ok(TwistVector(quotients.into_iter().map(|c| sign * c).collect()))
}

/// `f + (n)`: `p/q -> (p + nq)/q`, with infinity absorbing integers.
pub fn add_horizontal(f: Fraction, n: i64) -> Fraction {
    if f.is_infinite() {
        return f;
    }
    Fraction::from_wide(f.num() as i128 + n as i128 * f.den() as i128, f.den() as i128)
}

/// `n` vertical twists: `f -> 1/(n + 1/f)`.
pub fn add_vertical(f: Fraction, n: i64) -> Fraction {
    add_horizontal(f.recip(), n).recip()
}

pub fn mirror(f: Fraction) -> Fraction {
    if f.is_infinite() {
        f
    } else {
        Fraction::from_pair(-f.num(), f.den())
    }
}

/// How a rational tangle's fraction is read and written.
///
/// Internally all arithmetic uses the standard continued-fraction signs; the
/// biological convention is its mirror image and is applied only at I/O.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignConvention {
    #[default]
    Conway,
    Biological,
}

impl SignConvention {
    pub fn to_internal(self, f: Fraction) -> Fraction {
        match self {
            SignConvention::Conway => f,
            SignConvention::Biological => mirror(f),
        }
    }

    pub fn to_external(self, f: Fraction) -> Fraction {
        // mirror is an involution
        self.to_internal(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TangleClass {
    Infinity,
    Integral,
    Vertical,
    StrictRational,
    PrimeSymbolic,
    LocallyKnottedSymbolic,
}

impl TangleClass {
    /// True for `Vertical` and `StrictRational`, the labels making up the
    /// strictly rational class.
    pub fn is_strictly_rational(self) -> bool {
        matches!(self, TangleClass::Vertical | TangleClass::StrictRational)
    }
}

pub fn classify(f: Fraction) -> TangleClass {
    if f.is_infinite() {
        TangleClass::Infinity
    } else if f.is_integral() {
        TangleClass::Integral
    } else if f.is_vertical() {
        TangleClass::Vertical
    } else {
        TangleClass::StrictRational
    }
}

/// A tangle as the model sees it: either a rational tangle carrying its
/// fraction or a symbolic non-rational class with no arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tangle {
    Rational(Fraction),
    Prime,
    LocallyKnotted,
}

impl Tangle {
    pub fn fraction(&self) -> Option<Fraction> {
        match self {
            Tangle::Rational(f) => Some(*f),
            _ => None,
        }
    }

    pub fn class(&self) -> TangleClass {
        match self {
            Tangle::Rational(f) => classify(*f),
            Tangle::Prime => TangleClass::PrimeSymbolic,
            Tangle::LocallyKnotted => TangleClass::LocallyKnottedSymbolic,
        }
    }
}

impl From<Fraction> for Tangle {
    fn from(f: Fraction) -> Self {
        Tangle::Rational(f)
    }
}

impl fmt::Display for Tangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tangle::Rational(x) => x.fmt(f),
            Tangle::Prime => f.write_str("prime"),
            Tangle::LocallyKnotted => f.write_str("locally-knotted"),
        }
    }
}

impl FromStr for Tangle {
    type Err = FractionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "prime" => Ok(Tangle::Prime),
            "locally-knotted" => Ok(Tangle::LocallyKnotted),
            other => other.parse().map(Tangle::Rational),
        }
    }
}

impl Serialize for Tangle {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Tangle {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `f = horizontal + 1/vertical` with `|vertical| >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerticalHorizontal {
    pub vertical: i64,
    pub horizontal: i64,
    /// The other decomposition when both exist (only for denominator 2).
    pub alternative: Option<(i64, i64)>,
}

impl VerticalHorizontal {
    /// Every `(vertical, horizontal)` pair, preferred one first.
    pub fn candidates(&self) -> impl Iterator<Item = (i64, i64)> {
        std::iter::once((self.vertical, self.horizontal)).chain(self.alternative)
    }
}

/// Splits a strictly rational `p/q` into one set of vertical twists followed
/// by one set of horizontal twists, which exists iff `p ≡ ±1 (mod q)`.
pub fn decompose_vertical_horizontal(
    f: Fraction,
) -> Result<Option<VerticalHorizontal>, TangleError> {
    if !f.is_strictly_rational() {
        return Err(TangleError::NotStrictlyRational(f));
    }
    let (num, den) = (f.num(), f.den());
    // f = h + 1/den when num ≡ 1, f = h - 1/den when num ≡ -1
    let plus = (num.rem_euclid(den) == 1).then(|| (den, (num - 1) / den));
    let minus = (num.rem_euclid(den) == den - 1).then(|| (-den, (num + 1) / den));
    let found = match (plus, minus) {
        (Some(a), Some(b)) => {
            let (first, second) = if b.1.abs() < a.1.abs() { (b, a) } else { (a, b) };
            Some(VerticalHorizontal {
                vertical: first.0,
                horizontal: first.1,
                alternative: Some(second),
            })
        }
        (Some((v, h)), None) | (None, Some((v, h))) => Some(VerticalHorizontal {
            vertical: v,
            horizontal: h,
            alternative: None,
        }),
        (None, None) => None,
    };
    Ok(found)
}
