//! Sorting verified systems into the three solution classes, and the
//! structural restrictions every solution must obey.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fourplat::wrap_number;
use crate::fraction::Fraction;
use crate::system::{SystemError, TangleSystem};
use crate::tangle::{decompose_vertical_horizontal, TangleClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("no solution class matches {0}")]
    UnclassifiedSolution(Box<TangleSystem>),
    #[error("O_f^{k} = {of} has no vertical-plus-horizontal form with horizontal part {expected}")]
    SecSolViolation { k: usize, of: Fraction, expected: i64 },
    #[error("{0}")]
    ThirdSolViolation(String),
    #[error("hypotheses not met: {0}")]
    NotApplicable(&'static str),
    #[error(transparent)]
    System(#[from] SystemError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SolutionClass {
    /// `P = inf`; `O_c` and every `O_f^k` integral.
    Class1,
    /// `P`, `O_c` integral; `O_f^k` infinite at most once, integral at most
    /// twice, otherwise vertical plus horizontal.
    Class2,
    /// `P` strictly rational, `O_c` integral, `O_f^k` integral at most once
    /// and strictly rational otherwise.
    Class3,
}

/// Label counts over the present `O_f^k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Profile {
    pub n_infinity: usize,
    pub n_integral: usize,
    pub n_strict: usize,
    pub labels: Vec<Option<TangleClass>>,
}

pub fn count_profile(sys: &TangleSystem) -> Profile {
    let labels: Vec<Option<TangleClass>> =
        sys.of_entries().iter().map(|t| t.map(|t| t.class())).collect();
    let count = |pred: fn(TangleClass) -> bool| labels.iter().flatten().filter(|&&c| pred(c)).count();
    Profile {
        n_infinity: count(|c| c == TangleClass::Infinity),
        n_integral: count(|c| c == TangleClass::Integral),
        n_strict: count(TangleClass::is_strictly_rational),
        labels,
    }
}

/// Class of a system that already passes `check_system`.
pub fn classify_solution(sys: &TangleSystem) -> Result<SolutionClass, ClassifyError> {
    let oc = sys.oc_fraction()?;
    let of = sys.of_fractions()?;
    let unclassified = || ClassifyError::UnclassifiedSolution(Box::new(sys.clone()));
    if !oc.is_integral() {
        return Err(unclassified());
    }
    let p = sys.p();
    let profile = count_profile(sys);
    if p.is_infinite() {
        if of.iter().all(|(_, x)| x.is_integral()) {
            return Ok(SolutionClass::Class1);
        }
    } else if p.is_integral() {
        let strict_ok = of.iter().filter(|(_, x)| x.is_strictly_rational()).all(|(_, x)| {
            decompose_vertical_horizontal(*x).is_ok_and(|d| d.is_some())
        });
        if profile.n_infinity <= 1 && profile.n_integral <= 2 && strict_ok {
            return Ok(SolutionClass::Class2);
        }
    } else if profile.n_integral <= 1 && profile.n_integral + profile.n_strict == of.len() {
        return Ok(SolutionClass::Class3);
    }
    Err(unclassified())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SecSolRow {
    pub k: usize,
    pub vertical: i64,
    pub horizontal: i64,
}

/// Every strictly rational `O_f^k` of a solution with `P`, `O_c` integral is
/// `h + 1/v` with `h = -(P + O_c)`.
pub fn check_secsol(sys: &TangleSystem) -> Result<Vec<SecSolRow>, ClassifyError> {
    let oc = sys.oc_fraction()?;
    let p = sys.p();
    if !(p.is_integral() && oc.is_integral()) {
        return Err(ClassifyError::NotApplicable("P and O_c integral"));
    }
    let expected = -(p.num() + oc.num());
    let mut rows = Vec::new();
    for (k, x) in sys.of_fractions()? {
        if !x.is_strictly_rational() {
            continue;
        }
        let found = decompose_vertical_horizontal(x)
            .ok()
            .flatten()
            .and_then(|d| d.candidates().find(|&(_, h)| h == expected));
        match found {
            Some((vertical, horizontal)) => rows.push(SecSolRow { k, vertical, horizontal }),
            None => return Err(ClassifyError::SecSolViolation { k, of: x, expected }),
        }
    }
    if rows.is_empty() {
        return Err(ClassifyError::NotApplicable("some O_f^k strictly rational"));
    }
    Ok(rows)
}

/// `R`'s possible horizontal parts `h` with `R = h + 1/r`, `|r| >= 1`.
fn horizontal_parts(r: Fraction) -> Vec<i64> {
    if r.is_integral() {
        vec![r.num() - 1, r.num() + 1]
    } else {
        decompose_vertical_horizontal(r)
            .ok()
            .flatten()
            .map(|d| d.candidates().map(|(_, h)| h).collect())
            .unwrap_or_default()
    }
}

/// Both the literal statements and their integer-twist corrections.
///
/// Literal (i): `R` is vertical or `±1`. Corrected (i): `D(R)` is a torus
/// four-plat, i.e. `R` is infinite, integral, or `h + 1/r`.
/// Literal (ii): `P ∈ {0, ±2}`. Corrected (ii): `P - h ∈ {0, ±2}` for a
/// horizontal part `h` of `R`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThirdSolReport {
    pub infinite_rows: Vec<usize>,
    pub r_literal: bool,
    pub r_up_to_twist: bool,
    /// `None` when the hypotheses of (ii) are not met.
    pub p_literal: Option<bool>,
    pub p_up_to_twist: Option<bool>,
}

pub fn check_thirdsol(sys: &TangleSystem) -> Result<ThirdSolReport, ClassifyError> {
    let oc = sys.oc_fraction()?;
    let of = sys.of_fractions()?;
    if !oc.is_integral() {
        return Err(ClassifyError::NotApplicable("O_c integral"));
    }
    let infinite_rows: Vec<usize> =
        of.iter().filter(|(_, x)| x.is_infinite()).map(|&(k, _)| k).collect();
    if infinite_rows.is_empty() {
        return Err(ClassifyError::NotApplicable("some O_f^k infinite"));
    }
    let (p, r) = (sys.p(), sys.r());
    let r_literal = r.is_vertical() || r.num().abs() == 1 && r.is_integral();
    let r_up_to_twist = r.is_infinite() || r.is_integral() || !horizontal_parts(r).is_empty();
    let integral_rows = of.iter().filter(|(_, x)| x.is_integral()).count();
    let (p_literal, p_up_to_twist) = if p.is_integral() && integral_rows > 0 {
        let allowed = |x: i64| matches!(x, 0 | 2 | -2);
        (
            Some(allowed(p.num())),
            Some(horizontal_parts(r).into_iter().any(|h| allowed(p.num() - h))),
        )
    } else {
        (None, None)
    };
    if !r_up_to_twist {
        return Err(ClassifyError::ThirdSolViolation(format!(
            "R = {r} is not a vertical tangle up to integer twists"
        )));
    }
    if p_up_to_twist == Some(false) {
        return Err(ClassifyError::ThirdSolViolation(format!(
            "P - h is outside {{0, ±2}} for every horizontal part h of R = {r} (P = {p})"
        )));
    }
    Ok(ThirdSolReport {
        infinite_rows,
        r_literal,
        r_up_to_twist,
        p_literal,
        p_up_to_twist,
    })
}

/// Moreint restrictions on integral `O_f^k` for a passing system:
/// at most one integral row when `P` is strictly rational and `O_c`
/// integral, at most two when both are integral. `None` outside the
/// hypotheses.
pub fn moreint_holds(sys: &TangleSystem) -> Option<bool> {
    let oc = sys.oc().fraction()?;
    if !oc.is_integral() {
        return None;
    }
    let n = count_profile(sys).n_integral;
    let p = sys.p();
    if p.is_strictly_rational() {
        Some(n <= 1)
    } else if p.is_integral() {
        Some(n <= 2)
    } else {
        None
    }
}

/// Wrap-number forcing rules for three rational tangles whose
/// sum closes to the unknot.
pub mod forcing {
    use super::*;

    /// Meridional gluing (wrap 0) exactly for the infinity tangle.
    pub fn meridional_iff_infinite(t: Fraction) -> bool {
        wrap_number(t).is_meridional() == t.is_infinite()
    }

    /// One-longitudinal gluing (wrap 1) exactly for integral tangles.
    pub fn one_longitudinal_iff_integral(t: Fraction) -> bool {
        wrap_number(t).is_one_longitudinal() == t.is_integral()
    }

    /// Two summands glue to a solid torus iff one of them is 1-longitudinal.
    pub fn glues_to_solid_torus(s: Fraction, t: Fraction) -> bool {
        wrap_number(s).is_one_longitudinal() || wrap_number(t).is_one_longitudinal()
    }

    /// Some summand is integral.
    pub fn one_integral(triple: [Fraction; 3]) -> bool {
        triple.iter().any(|x| x.is_integral())
    }

    /// An infinite summand forces the other two to be integral.
    pub fn infinity_forces_integral(triple: [Fraction; 3]) -> bool {
        match triple.iter().position(|x| x.is_infinite()) {
            None => true,
            Some(i) => triple
                .iter()
                .enumerate()
                .all(|(j, x)| j == i || x.is_integral()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::SystemCase;

    fn f(s: &str) -> Fraction {
        s.parse().unwrap()
    }

    fn sys(case: SystemCase, p: &str, r: &str, oc: &str, of: [&str; 5]) -> TangleSystem {
        TangleSystem::rational(case, f(p), f(r), f(oc), of.map(f)).unwrap()
    }

    #[test]
    fn classes_of_the_example_families() {
        let class1 = sys(SystemCase::Direct, "inf", "0", "0", ["0", "2", "-4", "6", "-8"]);
        assert_eq!(classify_solution(&class1).unwrap(), SolutionClass::Class1);
        let class2 = sys(SystemCase::Direct, "2", "1", "0", ["-1", "-5/3", "-9/5", "-13/7", "-17/9"]);
        assert_eq!(classify_solution(&class2).unwrap(), SolutionClass::Class2);
        let u = |n: i64| Fraction::new(1 + 2 * n, 3 + 5 * n).unwrap().to_string();
        let class3 = TangleSystem::rational(
            SystemCase::Direct,
            f("-2/5"),
            f("-1/2"),
            f("0"),
            [-1, -3, -5, -7, -9].map(|n| f(&u(n))),
        )
        .unwrap();
        assert_eq!(classify_solution(&class3).unwrap(), SolutionClass::Class3);
        let odd = sys(SystemCase::Inverted, "1/2", "1", "1/3", ["1", "2", "3", "4", "5"]);
        assert!(matches!(classify_solution(&odd), Err(ClassifyError::UnclassifiedSolution(_))));
    }

    #[test]
    fn profiles() {
        let direct = sys(SystemCase::Direct, "2", "1", "0", ["-1", "-5/3", "-9/5", "-13/7", "-17/9"]);
        let p = count_profile(&direct);
        assert_eq!((p.n_infinity, p.n_integral, p.n_strict), (0, 1, 4));
        let inverted = sys(SystemCase::Inverted, "2", "1", "0", ["inf", "-7/4", "-11/6", "-15/8", "-19/10"]);
        let p = count_profile(&inverted);
        assert_eq!((p.n_infinity, p.n_integral, p.n_strict), (1, 0, 4));
        let class1 = sys(SystemCase::Direct, "inf", "0", "0", ["0", "2", "-4", "6", "-8"]);
        let p = count_profile(&class1);
        assert_eq!((p.n_infinity, p.n_integral, p.n_strict), (0, 5, 0));
    }

    #[test]
    fn secsol_examples() {
        let direct = sys(SystemCase::Direct, "2", "1", "0", ["-1", "-5/3", "-9/5", "-13/7", "-17/9"]);
        let rows = check_secsol(&direct).unwrap();
        assert_eq!(rows[0], SecSolRow { k: 1, vertical: 3, horizontal: -2 });
        assert_eq!(rows[3], SecSolRow { k: 4, vertical: 9, horizontal: -2 });
        let vertical = sys(SystemCase::Inverted, "0", "inf", "0", ["1", "1/3", "1/5", "1/7", "1/9"]);
        let rows = check_secsol(&vertical).unwrap();
        assert!(rows.iter().all(|r| r.horizontal == 0 && r.vertical == 2 * r.k as i64 + 1));
    }

    #[test]
    fn thirdsol_examples() {
        let inverted = sys(SystemCase::Inverted, "2", "1", "0", ["inf", "-7/4", "-11/6", "-15/8", "-19/10"]);
        let report = check_thirdsol(&inverted).unwrap();
        assert!(report.r_literal && report.r_up_to_twist);
        assert_eq!(report.infinite_rows, vec![0]);
        let direct_zero = sys(SystemCase::Direct, "0", "inf", "0", ["inf", "1/2", "1/4", "1/6", "1/8"]);
        let report = check_thirdsol(&direct_zero).unwrap();
        assert!(!report.r_literal);
        assert!(report.r_up_to_twist);
        let three_fifths = TangleSystem::new(
            SystemCase::Inverted,
            f("2"),
            f("3/5"),
            f("0").into(),
            [Some(Fraction::INFINITY.into()), None, None, None, None],
        )
        .unwrap();
        assert!(matches!(check_thirdsol(&three_fifths), Err(ClassifyError::ThirdSolViolation(_))));
    }

    #[test]
    fn forcing_predicates() {
        use forcing::*;
        for x in crate::fraction::fractions_up_to(12) {
            assert!(meridional_iff_infinite(x));
            assert!(one_longitudinal_iff_integral(x));
        }
        assert!(glues_to_solid_torus(f("1/2"), f("3")));
        assert!(!glues_to_solid_torus(f("1/2"), f("2/3")));
        assert!(one_integral([f("1/2"), f("-1/2"), f("0")]));
        assert!(!infinity_forces_integral([f("inf"), f("1/2"), f("0")]));
    }
}
