//! The Flp tangle-equation systems for direct and inverted repeats.
//!
//! For each `k` in `0..=4`:
//!
//! ```text
//! N(O_f^k + O_c + P) = b(1,1)                       substrate
//! N(O_f^k + O_c + R) = b(2k,1)  or  b(2k+1,1)       product (direct / inverted)
//! ```

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fourplat::{closure_of_sum, equivalent, EquivalenceMode, FourPlat};
use crate::fraction::Fraction;
use crate::tangle::{add_horizontal, Tangle};

/// Number of product rows in a system.
pub const K_VALUES: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("k = {0} is outside 0..=4")]
    BadK(u8),
    #[error("{entry} is locally knotted")]
    LocallyKnotted { entry: String },
    #[error("direct repeats need O^{k} = O_f^{k} + O_c rational, got {of} + {oc}")]
    DirectSumNotRational { k: u8, of: Tangle, oc: Tangle },
    #[error("direct repeats need a rational O_c, got {0}")]
    DirectSymbolic(Tangle),
    #[error("{0} must be rational for this operation")]
    Symbolic(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemCase {
    /// Head-to-tail sites; products are the torus links `b(2k,1)`.
    Direct,
    /// Head-to-head sites; products are the torus knots `b(2k+1,1)`.
    Inverted,
}

impl SystemCase {
    pub const ALL: [SystemCase; 2] = [SystemCase::Direct, SystemCase::Inverted];
}

impl fmt::Display for SystemCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SystemCase::Direct => "direct",
            SystemCase::Inverted => "inverted",
        })
    }
}

impl std::str::FromStr for SystemCase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "direct" => Ok(SystemCase::Direct),
            "inverted" => Ok(SystemCase::Inverted),
            other => Err(format!("unknown case {other:?} (expected direct or inverted)")),
        }
    }
}

pub fn target_product(case: SystemCase, k: u8) -> Result<FourPlat, SystemError> {
    if k as usize >= K_VALUES {
        return Err(SystemError::BadK(k));
    }
    let k = k as i64;
    Ok(match case {
        SystemCase::Direct => FourPlat::torus(2 * k),
        SystemCase::Inverted => FourPlat::torus(2 * k + 1),
    })
}

/// True when `a + b` is again a rational tangle, i.e. one of them is integral.
pub fn sum_is_rational(a: Fraction, b: Fraction) -> bool {
    a.is_integral() || b.is_integral()
}

/// One instance of the model. `of[k]` is `None` when row `k` is unobserved.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "SystemJson", into = "SystemJson")]
pub struct TangleSystem {
    case: SystemCase,
    p: Fraction,
    r: Fraction,
    oc: Tangle,
    of: [Option<Tangle>; K_VALUES],
}

impl TangleSystem {
    /// Validates local unknottedness and, for direct repeats, that every
    /// `O^k = O_f^k + O_c` is rational. Distinctness of the `O_f^k` is left to
    /// [`check_system`] so that violating inputs can still be reported on.
    pub fn new(
        case: SystemCase,
        p: Fraction,
        r: Fraction,
        oc: Tangle,
        of: [Option<Tangle>; K_VALUES],
    ) -> Result<Self, SystemError> {
        if oc == Tangle::LocallyKnotted {
            return Err(SystemError::LocallyKnotted { entry: "O_c".into() });
        }
        for (k, t) in of.iter().enumerate() {
            if *t == Some(Tangle::LocallyKnotted) {
                return Err(SystemError::LocallyKnotted {
                    entry: format!("O_f^{k}"),
                });
            }
        }
        if case == SystemCase::Direct {
            let Some(c) = oc.fraction() else {
                return Err(SystemError::DirectSymbolic(oc));
            };
            for (k, t) in of.iter().enumerate() {
                let Some(t) = t else { continue };
                match t.fraction() {
                    Some(x) if sum_is_rational(x, c) => {}
                    _ => {
                        return Err(SystemError::DirectSumNotRational {
                            k: k as u8,
                            of: *t,
                            oc,
                        })
                    }
                }
            }
        }
        Ok(TangleSystem { case, p, r, oc, of })
    }

    /// All-rational system with every row present.
    pub fn rational(
        case: SystemCase,
        p: Fraction,
        r: Fraction,
        oc: Fraction,
        of: [Fraction; K_VALUES],
    ) -> Result<Self, SystemError> {
        Self::new(case, p, r, oc.into(), of.map(|x| Some(x.into())))
    }

    pub fn case(&self) -> SystemCase {
        self.case
    }

    pub fn p(&self) -> Fraction {
        self.p
    }

    pub fn r(&self) -> Fraction {
        self.r
    }

    pub fn oc(&self) -> Tangle {
        self.oc
    }

    pub fn of(&self, k: usize) -> Option<Tangle> {
        self.of.get(k).copied().flatten()
    }

    pub fn of_entries(&self) -> &[Option<Tangle>; K_VALUES] {
        &self.of
    }

    /// `(k, O_f^k)` for every present row.
    pub fn present(&self) -> impl Iterator<Item = (usize, Tangle)> + '_ {
        self.of.iter().enumerate().filter_map(|(k, t)| t.map(|t| (k, t)))
    }

    pub fn oc_fraction(&self) -> Result<Fraction, SystemError> {
        self.oc.fraction().ok_or_else(|| SystemError::Symbolic("O_c".into()))
    }

    /// `O_f^k` as fractions for every present row.
    pub fn of_fractions(&self) -> Result<Vec<(usize, Fraction)>, SystemError> {
        self.present()
            .map(|(k, t)| {
                t.fraction()
                    .map(|x| (k, x))
                    .ok_or_else(|| SystemError::Symbolic(format!("O_f^{k}")))
            })
            .collect()
    }

    pub fn is_all_rational(&self) -> bool {
        self.oc.fraction().is_some() && self.present().all(|(_, t)| t.fraction().is_some())
    }

    /// Present `O_f^k` are pairwise distinct.
    pub fn is_distinct(&self) -> bool {
        let present: Vec<Tangle> = self.present().map(|(_, t)| t).collect();
        present
            .iter()
            .enumerate()
            .all(|(i, a)| present[i + 1..].iter().all(|b| a != b))
    }

    /// Applies `f` to every fraction-backed entry using its role.
    fn map_entries(
        &self,
        p: impl Fn(Fraction) -> Fraction,
        oc: impl Fn(Fraction) -> Fraction,
        of: impl Fn(Fraction) -> Fraction,
    ) -> TangleSystem {
        let lift = |t: Tangle, g: &dyn Fn(Fraction) -> Fraction| match t {
            Tangle::Rational(x) => Tangle::Rational(g(x)),
            other => other,
        };
        TangleSystem {
            case: self.case,
            p: p(self.p),
            r: p(self.r),
            oc: lift(self.oc, &oc),
            of: self.of.map(|t| t.map(|t| lift(t, &of))),
        }
    }
}

impl fmt::Display for TangleSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} P={} R={} O_c={} O_f=[", self.case, self.p, self.r, self.oc)?;
        for (k, t) in self.of.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            match t {
                Some(t) => write!(f, "{t}")?,
                None => f.write_str("-")?,
            }
        }
        f.write_str("]")
    }
}

#[derive(Clone, Serialize, Deserialize)]
struct SystemJson {
    case: SystemCase,
    #[serde(rename = "P")]
    p: Fraction,
    #[serde(rename = "R")]
    r: Fraction,
    #[serde(rename = "Oc")]
    oc: Tangle,
    #[serde(rename = "Of")]
    of: BTreeMap<String, Tangle>,
}

impl TryFrom<SystemJson> for TangleSystem {
    type Error = String;

    fn try_from(j: SystemJson) -> Result<Self, Self::Error> {
        let mut of = [None; K_VALUES];
        for (key, t) in j.of {
            let k: usize = key.parse().map_err(|_| format!("bad row key {key:?}"))?;
            let slot = of.get_mut(k).ok_or_else(|| SystemError::BadK(k as u8).to_string())?;
            *slot = Some(t);
        }
        TangleSystem::new(j.case, j.p, j.r, j.oc, of).map_err(|e| e.to_string())
    }
}

impl From<TangleSystem> for SystemJson {
    fn from(s: TangleSystem) -> Self {
        SystemJson {
            case: s.case,
            p: s.p,
            r: s.r,
            oc: s.oc,
            of: s.present().map(|(k, t)| (k.to_string(), t)).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Equation {
    Substrate,
    Product,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowCheck {
    pub k: u8,
    pub equation: Equation,
    pub target: FourPlat,
    /// `None` when the closure is not a four-plat; see `error`.
    pub computed: Option<FourPlat>,
    pub error: Option<String>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub mode: EquivalenceMode,
    pub rows: Vec<RowCheck>,
    pub absent: Vec<u8>,
    pub distinct: bool,
    pub gauge_reduced: TangleSystem,
    pub pass: bool,
}

/// Closure of `[O_f, O_c, X]` compared with `target`.
pub(crate) fn row(
    k: u8,
    equation: Equation,
    summands: [Fraction; 3],
    target: FourPlat,
    mode: EquivalenceMode,
) -> RowCheck {
    match closure_of_sum(&summands) {
        Ok(b) => RowCheck {
            k,
            equation,
            target,
            computed: Some(b),
            error: None,
            pass: equivalent(&b, &target, mode),
        },
        Err(e) => RowCheck {
            k,
            equation,
            target,
            computed: None,
            error: Some(e.to_string()),
            pass: false,
        },
    }
}

pub fn check_system(sys: &TangleSystem, mode: EquivalenceMode) -> Result<CheckReport, SystemError> {
    let oc = sys.oc_fraction()?;
    let of = sys.of_fractions()?;
    let mut rows = Vec::with_capacity(2 * of.len());
    for &(k, x) in &of {
        let k = k as u8;
        rows.push(row(k, Equation::Substrate, [x, oc, sys.p], FourPlat::UNKNOT, mode));
        rows.push(row(k, Equation::Product, [x, oc, sys.r], target_product(sys.case, k)?, mode));
    }
    let absent = (0..K_VALUES as u8).filter(|&k| sys.of[k as usize].is_none()).collect();
    let distinct = sys.is_distinct();
    let pass = distinct && rows.iter().all(|r| r.pass);
    Ok(CheckReport {
        mode,
        rows,
        absent,
        distinct,
        gauge_reduced: gauge_normalize(sys),
        pass,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GaugeMove {
    /// `O_c + n`, `P - n`, `R - n`.
    OcToP,
    /// `O_c + n`, `O_f^k - n` for every `k`.
    OcToOf,
}

impl std::str::FromStr for GaugeMove {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "oc-to-p" | "OcToP" => Ok(GaugeMove::OcToP),
            "oc-to-of" | "OcToOf" => Ok(GaugeMove::OcToOf),
            other => Err(format!("unknown gauge move {other:?} (expected oc-to-p or oc-to-of)")),
        }
    }
}

pub fn gauge_transform(
    sys: &TangleSystem,
    n: i64,
    which: GaugeMove,
) -> Result<TangleSystem, SystemError> {
    sys.oc_fraction()?;
    let id = |x| x;
    let plus = |x| add_horizontal(x, n);
    let minus = |x| add_horizontal(x, -n);
    Ok(match which {
        GaugeMove::OcToP => sys.map_entries(minus, plus, id),
        GaugeMove::OcToOf => {
            sys.of_fractions()?;
            sys.map_entries(id, plus, minus)
        }
    })
}

/// The integer `n` making `x + n` the least-|numerator| representative of its
/// integer-translation class (ties go to the positive numerator), or `None`
/// for infinity.
fn centering_shift(x: Fraction) -> Option<i64> {
    if x.is_infinite() {
        return None;
    }
    let (num, den) = (x.num(), x.den());
    let r = num.rem_euclid(den);
    let target = if 2 * r > den { r - den } else { r };
    Some((target - num) / den)
}

/// Canonical member of the gauge orbit.
///
/// The orbit is two-dimensional: `O_c + a + b`, `O_f - a`, `P - b`, `R - b`.
/// `b` centres `P` (or `R` when `P` is infinite) and `a` then centres `O_c`
/// (or the first finite `O_f^k` when `O_c` is infinite or symbolic).
pub fn gauge_normalize(sys: &TangleSystem) -> TangleSystem {
    let b = centering_shift(sys.p).or_else(|| centering_shift(sys.r)).unwrap_or(0);
    let mut out = sys.map_entries(
        |x| add_horizontal(x, b),
        |x| add_horizontal(x, -b),
        |x| x,
    );
    let a = out
        .oc
        .fraction()
        .and_then(centering_shift)
        .map(|a| -a)
        .or_else(|| {
            out.present()
                .find_map(|(_, t)| t.fraction().and_then(centering_shift))
        })
        .unwrap_or(0);
    // O_f - a, O_c + a
    out = out.map_entries(|x| x, |x| add_horizontal(x, -a), |x| add_horizontal(x, a));
    out
}
