//! Four-plats `b(p,q)`, their lens-space double covers, Schubert equivalence,
//! and the numerator/denominator closures of sums of rational tangles.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{gcd, mod_inverse};
use crate::fraction::Fraction;
use crate::tangle::{add_horizontal, twist_vector_of};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FourPlatError {
    #[error("b({p},{q}) needs coprime parameters")]
    NotCoprime { p: i64, q: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosureError {
    #[error("empty tangle sum")]
    Empty,
    #[error("{strictly_rational} strictly rational summands: the closure is not a four-plat")]
    NotFourPlat { strictly_rational: usize },
    #[error("closure is a connected sum of {} four-plats", factors.len())]
    CompositeNotFourPlat { factors: Vec<FourPlat> },
    #[error("closure is a split link with {components} components")]
    SplitLink { components: u32 },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EquivalenceMode {
    /// `b(p,q) ~ b(p,q')` iff `q' ≡ ±q^{±1} (mod p)`.
    #[default]
    #[serde(rename = "mirror")]
    UpToMirror,
    /// `b(p,q) ~ b(p,q')` iff `q' ≡ q^{±1} (mod p)`.
    Chiral,
}

impl std::str::FromStr for EquivalenceMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mirror" => Ok(EquivalenceMode::UpToMirror),
            "chiral" => Ok(EquivalenceMode::Chiral),
            other => Err(format!("unknown equivalence mode {other:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Handedness {
    /// `b(p,q)` is isotopic to its mirror image.
    Amphichiral,
    /// The chiral class contains the mirror-canonical `q`.
    Standard,
    /// The chiral class contains `-q` for the mirror-canonical `q`.
    Mirrored,
}

/// A two-bridge knot or link, stored in Schubert normal form.
///
/// `q` is the least element of the full orbit `{±q^{±1} mod p}`; the chiral
/// class is kept separately so both equivalence modes stay available.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FourPlat {
    p: i64,
    q: i64,
    chiral_q: i64,
    handedness: Handedness,
}

fn chiral_min(p: i64, q: i64) -> i64 {
    let r = q.rem_euclid(p);
    let inv = mod_inverse(r, p).expect("q is a unit mod p");
    r.min(inv)
}

impl FourPlat {
    pub const UNKNOT: FourPlat = FourPlat {
        p: 1,
        q: 1,
        chiral_q: 1,
        handedness: Handedness::Amphichiral,
    };
    pub const UNLINK: FourPlat = FourPlat {
        p: 0,
        q: 1,
        chiral_q: 1,
        handedness: Handedness::Amphichiral,
    };

    pub fn new(p: i64, q: i64) -> Result<Self, FourPlatError> {
        if gcd(p, q) != 1 {
            return Err(FourPlatError::NotCoprime { p, q });
        }
        let (p, q) = if p < 0 { (-p, -q) } else { (p, q) };
        if p <= 1 {
            return Ok(if p == 0 { Self::UNLINK } else { Self::UNKNOT });
        }
        let plus = chiral_min(p, q);
        let minus = chiral_min(p, -q);
        let mirror_q = plus.min(minus);
        let handedness = if plus == minus {
            Handedness::Amphichiral
        } else if plus == mirror_q {
            Handedness::Standard
        } else {
            Handedness::Mirrored
        };
        Ok(FourPlat {
            p,
            q: mirror_q,
            chiral_q: plus,
            handedness,
        })
    }

    /// `b(p,1)`, the `(2,p)` torus knot or link.
    pub fn torus(p: i64) -> Self {
        Self::new(p, 1).expect("gcd(p, 1) = 1")
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    /// Canonical `q` for the mirror-insensitive equivalence.
    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn q_in(&self, mode: EquivalenceMode) -> i64 {
        match mode {
            EquivalenceMode::UpToMirror => self.q,
            EquivalenceMode::Chiral => self.chiral_q,
        }
    }

    pub fn canonical(&self, mode: EquivalenceMode) -> (i64, i64) {
        (self.p, self.q_in(mode))
    }

    pub fn handedness(&self) -> Handedness {
        self.handedness
    }

    pub fn mirror(&self) -> Self {
        Self::new(self.p, -self.chiral_q).expect("mirror of a valid four-plat")
    }

    /// Two components for even `p` (including the unlink), one for odd `p`.
    pub fn components(&self) -> u32 {
        if self.p % 2 == 0 {
            2
        } else {
            1
        }
    }

    pub fn is_unknot(&self) -> bool {
        self.p == 1
    }

    pub fn display_in(&self, mode: EquivalenceMode) -> String {
        format!("b({},{})", self.p, self.q_in(mode))
    }
}

impl fmt::Display for FourPlat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b({},{})", self.p, self.q)
    }
}

#[derive(Serialize)]
struct FourPlatJson {
    p: i64,
    q: i64,
    chiral_q: i64,
    components: u32,
    chirality: Handedness,
}

impl Serialize for FourPlat {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        FourPlatJson {
            p: self.p,
            q: self.q,
            chiral_q: self.chiral_q,
            components: self.components(),
            chirality: self.handedness,
        }
        .serialize(serializer)
    }
}

/// Pure-function form of Schubert normalization: the canonical `(p, q)`.
pub fn canonicalize(p: i64, q: i64, mode: EquivalenceMode) -> Result<(i64, i64), FourPlatError> {
    FourPlat::new(p, q).map(|b| b.canonical(mode))
}

pub fn equivalent(a: &FourPlat, b: &FourPlat, mode: EquivalenceMode) -> bool {
    a.canonical(mode) == b.canonical(mode)
}

/// The lens space `L(p,q)`, double branched cover of `b(p,q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LensSpace(FourPlat);

impl LensSpace {
    pub fn p(&self) -> i64 {
        self.0.p()
    }

    pub fn q(&self) -> i64 {
        self.0.q()
    }

    pub fn is_three_sphere(&self) -> bool {
        self.0.p() == 1
    }

    /// `L(0,1) = S^2 x S^1`.
    pub fn is_s2_x_s1(&self) -> bool {
        self.0.p() == 0
    }
}

impl fmt::Display for LensSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({},{})", self.0.p(), self.0.q())
    }
}

pub fn lens_space_of(b: &FourPlat) -> LensSpace {
    LensSpace(*b)
}

/// How many times the lifted summing-disc boundary winds longitudinally
/// around the solid-torus cover of a rational tangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct WrapNumber(pub u64);

impl WrapNumber {
    pub fn is_meridional(&self) -> bool {
        self.0 == 0
    }

    pub fn is_one_longitudinal(&self) -> bool {
        self.0 == 1
    }
}

pub fn wrap_number(f: Fraction) -> WrapNumber {
    WrapNumber(f.den() as u64)
}

/// `N(p/q) = b(p,q)`; `N(inf) = b(1,1)`.
pub fn numerator_closure(f: Fraction) -> FourPlat {
    FourPlat::new(f.num(), f.den()).expect("reduced fraction")
}

/// `D(p/q) = N(-q/p) = b(q,-p)`, which is `b(q,p)` up to mirror image;
/// `D(inf) = b(0,1)`.
pub fn denominator_closure(f: Fraction) -> FourPlat {
    FourPlat::new(f.den(), -f.num()).expect("reduced fraction")
}

/// Integer 2x2 matrices acting on the boundary torus of a tangle's double
/// branched cover, in the basis where the zero tangle's meridian is `(1,0)`
/// and the infinity tangle's is `(0,1)`. A rational tangle `a/b` has meridian
/// `±(b, a)`.
pub mod twist_matrix {
    use super::*;

    #[derive(Clone, Copy, Debug, PartialEq, Eq)]
    pub struct Mat2(pub [[i128; 2]; 2]);

    impl Mat2 {
        pub const IDENTITY: Mat2 = Mat2([[1, 0], [0, 1]]);
        /// Base matrix of the infinity tangle.
        pub const INFINITY: Mat2 = Mat2([[0, -1], [1, 0]]);
        /// Reflection swapping the inside and outside of the summing disc.
        pub const REFLECT: Mat2 = Mat2([[1, 0], [0, -1]]);

        /// `n` horizontal half-twists: `a/b -> (a + n b)/b`.
        pub fn horizontal(n: i64) -> Mat2 {
            Mat2([[1, 0], [n as i128, 1]])
        }

        /// `n` vertical half-twists: `a/b -> a/(b + n a)`.
        pub fn vertical(n: i64) -> Mat2 {
            Mat2([[1, n as i128], [0, 1]])
        }

        pub fn mul(&self, rhs: &Mat2) -> Mat2 {
            let (a, b) = (&self.0, &rhs.0);
            Mat2([
                [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
                [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
            ])
        }

        pub fn det(&self) -> i128 {
            self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
        }

        /// Inverse of a unimodular matrix.
        pub fn unimodular_inverse(&self) -> Mat2 {
            let d = self.det();
            debug_assert!(d == 1 || d == -1);
            let m = &self.0;
            Mat2([[d * m[1][1], -d * m[0][1]], [-d * m[1][0], d * m[0][0]]])
        }

        /// The meridian column `(den, num)` up to sign.
        pub fn meridian(&self) -> (i128, i128) {
            (self.0[0][0], self.0[1][0])
        }
    }

    /// Word in the twist generators building the tangle from its canonical
    /// twist vector, applied to the zero tangle (odd length) or the infinity
    /// tangle (even length).
    pub fn tangle_matrix(f: Fraction) -> Mat2 {
        let Ok(tv) = twist_vector_of(f) else {
            return Mat2::INFINITY;
        };
        let entries = tv.entries();
        let odd = entries.len() % 2 == 1;
        let mut m = if odd { Mat2::IDENTITY } else { Mat2::INFINITY };
        for (i, &a) in entries.iter().enumerate() {
            let horizontal = (i % 2 == 0) == odd;
            let step = if horizontal {
                Mat2::horizontal(a)
            } else {
                Mat2::vertical(a)
            };
            m = step.mul(&m);
        }
        m
    }

    /// `N(A + B)` read off the composite `(R T_B R)^{-1} T_A`: the first
    /// column of the composite holds `(q, p)`.
    pub fn sum_closure(a: Fraction, b: Fraction) -> FourPlat {
        let outer = Mat2::REFLECT.mul(&tangle_matrix(b)).mul(&Mat2::REFLECT);
        let composite = outer.unimodular_inverse().mul(&tangle_matrix(a));
        let q = i64::try_from(composite.0[0][0]).expect("q overflow");
        let p = i64::try_from(composite.0[1][0]).expect("p overflow");
        FourPlat::new(p, q).expect("composite matrix is unimodular")
    }
}

/// Numerator closure of a sum of rational tangles.
///
/// Integral summands are folded into a strictly rational one; an infinity
/// summand turns the numerator closure of the rest into its denominator
/// closure, which splits as a connected sum over the remaining strictly
/// rational summands.
pub fn closure_of_sum(summands: &[Fraction]) -> Result<FourPlat, ClosureError> {
    if summands.is_empty() {
        return Err(ClosureError::Empty);
    }
    let infinities = summands.iter().filter(|f| f.is_infinite()).count();
    let finite: Vec<Fraction> = summands.iter().copied().filter(|f| !f.is_infinite()).collect();
    match infinities {
        0 => numerator_of_finite(&finite),
        1 => denominator_of_finite(&finite),
        2 => {
            // inf + inf is inf with a disjoint circle
            let rest = denominator_of_finite(&finite)?;
            if rest.is_unknot() {
                Ok(FourPlat::UNLINK)
            } else {
                Err(ClosureError::SplitLink {
                    components: rest.components() + 1,
                })
            }
        }
        n => Err(ClosureError::SplitLink {
            components: n as u32,
        }),
    }
}

fn split_integral(finite: &[Fraction]) -> (i64, Vec<Fraction>) {
    let twists = finite.iter().filter(|f| f.is_integral()).map(|f| f.num()).sum();
    let strict = finite.iter().copied().filter(|f| f.is_strictly_rational()).collect();
    (twists, strict)
}

fn numerator_of_finite(finite: &[Fraction]) -> Result<FourPlat, ClosureError> {
    let (twists, strict) = split_integral(finite);
    match strict.as_slice() {
        [] => Ok(numerator_closure(Fraction::integer(twists))),
        [a] => Ok(numerator_closure(add_horizontal(*a, twists))),
        [a, b] => Ok(twist_matrix::sum_closure(add_horizontal(*a, twists), *b)),
        many => Err(ClosureError::NotFourPlat {
            strictly_rational: many.len(),
        }),
    }
}

fn denominator_of_finite(finite: &[Fraction]) -> Result<FourPlat, ClosureError> {
    let (_, strict) = split_integral(finite);
    match strict.as_slice() {
        [] => Ok(FourPlat::UNKNOT),
        [a] => Ok(denominator_closure(*a)),
        many => Err(ClosureError::CompositeNotFourPlat {
            factors: many.iter().map(|f| denominator_closure(*f)).collect(),
        }),
    }
}
