//! The class-level elimination table: for every combination of tangle
//! classes of `P` and the unordered pair `{O_1, O_2} = {O_c, O_f^k}`, which
//! theorem eliminates or restricts it and which solution class survives.
//!
//! [`ROWS`] is a literal transcription. [`derive`] re-derives each verdict
//! from the individual theorem statements so the two can be cross-checked.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::system::SystemCase;
use crate::tangle::TangleClass;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Table1Error {
    #[error("P is rational; it cannot carry the label {0}")]
    PrimeP(Label),
    #[error("{0:?} has no table label")]
    Unlabelled(TangleClass),
    #[error("unknown label {0:?} (expected inf, Z, Q! or prime)")]
    Parse(String),
}

/// Table labels. Vertical tangles fall under `StrictRational`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    Infinity,
    Integral,
    StrictRational,
    Prime,
}

impl Label {
    pub const ALL: [Label; 4] = [Label::Infinity, Label::Integral, Label::StrictRational, Label::Prime];

    pub fn of_class(c: TangleClass) -> Result<Label, Table1Error> {
        match c {
            TangleClass::Infinity => Ok(Label::Infinity),
            TangleClass::Integral => Ok(Label::Integral),
            TangleClass::Vertical | TangleClass::StrictRational => Ok(Label::StrictRational),
            TangleClass::PrimeSymbolic => Ok(Label::Prime),
            TangleClass::LocallyKnottedSymbolic => Err(Table1Error::Unlabelled(c)),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Infinity => "inf",
            Label::Integral => "Z",
            Label::StrictRational => "Q!",
            Label::Prime => "prime",
        })
    }
}

impl FromStr for Label {
    type Err = Table1Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inf" | "infinity" => Ok(Label::Infinity),
            "Z" | "integral" => Ok(Label::Integral),
            "Q!" | "strict" | "vertical" => Ok(Label::StrictRational),
            "prime" => Ok(Label::Prime),
            other => Err(Table1Error::Parse(other.to_string())),
        }
    }
}

/// Which of `O_1`, `O_2` plays `O_f^k` (the other is `O_c`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Assignment {
    O1isOf,
    O1isOc,
    Unassigned,
}

impl Assignment {
    fn swapped(self) -> Assignment {
        match self {
            Assignment::O1isOf => Assignment::O1isOc,
            Assignment::O1isOc => Assignment::O1isOf,
            Assignment::Unassigned => Assignment::Unassigned,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassTriple {
    p: Label,
    o1: Label,
    o2: Label,
    assignment: Assignment,
}

impl ClassTriple {
    pub fn new(p: Label, o1: Label, o2: Label, assignment: Assignment) -> Result<Self, Table1Error> {
        if p == Label::Prime {
            return Err(Table1Error::PrimeP(p));
        }
        Ok(ClassTriple { p, o1, o2, assignment })
    }

    pub fn from_classes(
        p: TangleClass,
        o1: TangleClass,
        o2: TangleClass,
        assignment: Assignment,
    ) -> Result<Self, Table1Error> {
        Self::new(Label::of_class(p)?, Label::of_class(o1)?, Label::of_class(o2)?, assignment)
    }

    pub fn p(&self) -> Label {
        self.p
    }

    pub fn o1(&self) -> Label {
        self.o1
    }

    pub fn o2(&self) -> Label {
        self.o2
    }

    pub fn assignment(&self) -> Assignment {
        self.assignment
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Solution1,
    Solution2,
    Solution3,
    Eliminated,
    OpenInverted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub theorem_id: String,
    pub notes: String,
    pub assignment: Assignment,
}

/// How a row's citation turns into a verdict for each repeat orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    Eliminated,
    /// Eliminated for direct repeats, open for inverted unless the cover of
    /// `O^k` is a torus (`k != 2`) or satellite knot complement.
    DirectOnly,
    /// `O_c = inf` is eliminated; `O_c` prime with `O_f^k = inf` only for
    /// direct repeats.
    InfinityPrime,
    Solution(Outcome),
}

/// One transcribed row. `forced` is the assignment the citation forces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Row {
    pub p: Label,
    pub o1: Label,
    pub o2: Label,
    pub citation: &'static str,
    pub rule: Rule,
    pub forced: Assignment,
}

impl Row {
    pub fn solution_text(&self) -> &'static str {
        match self.rule {
            Rule::Solution(Outcome::Solution1) => "SOLUTION 1",
            Rule::Solution(Outcome::Solution2) => "SOLUTION 2",
            Rule::Solution(Outcome::Solution3) => "SOLUTION 3",
            _ => "",
        }
    }

    /// `P`, `O_1`, `O_2`, citation, solution; tab separated.
    pub fn tsv_line(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}",
            self.p,
            self.o1,
            self.o2,
            self.citation,
            self.solution_text()
        )
    }
}

const TORSAT_NOTE: &str = "torus (k≠2) or satellite complements excluded";
const DIRECT_ID: &str = "Theorem 10(1)(i) (manycases)";
const INVERTED_ID: &str = "Theorem 12 (torsat)";
const SPLIT: &str = "Theorem 10(1)(i) (manycases) for direct; Theorem 12 (torsat) for inverted, when O^k is a torus (k≠2) or satellite knot complement";
const TWO_INFINITIES: &str = "Theorem 6(i) (infty)";
const OPEN_NOTE: &str = "open inverted case: P rational, O_1 integral, O_2 prime; with P and O_c integral, O_f^k integral for at most 2 values of k and prime otherwise (also stated as: strictly rational or prime otherwise)";

use Label::{Infinity as INF, Integral as Z, Prime as PRIME, StrictRational as Q};

const fn row(p: Label, o1: Label, o2: Label, citation: &'static str, rule: Rule, forced: Assignment) -> Row {
    Row { p, o1, o2, citation, rule, forced }
}

const E: Rule = Rule::Eliminated;
const U: Assignment = Assignment::Unassigned;

pub const ROWS: [Row; 24] = [
    row(INF, PRIME, PRIME, "Theorem 7 (2primes)", E, U),
    row(INF, Q, PRIME, "Theorem 6(iii) (infty)", E, U),
    row(INF, Q, Z, "Theorem 6(iv) (infty)", E, U),
    row(INF, Q, Q, "Theorem 6(iv) (infty)", E, U),
    row(INF, Z, PRIME, SPLIT, Rule::DirectOnly, U),
    row(INF, Z, Z, "", Rule::Solution(Outcome::Solution1), U),
    row(Z, PRIME, PRIME, "Theorem 7 (2primes)", E, U),
    row(
        Z,
        INF,
        PRIME,
        "Theorem moreinfty(v) O_c=O_1; Theorem moreinfty(vi) O_c=O_2 for direct",
        Rule::InfinityPrime,
        Assignment::O1isOf,
    ),
    row(
        Z,
        INF,
        Z,
        "Theorem moreinfty(iv) O_c=O_1",
        Rule::Solution(Outcome::Solution2),
        Assignment::O1isOf,
    ),
    row(Z, INF, Q, "Theorem moreinfty(ii)", E, U),
    row(Z, Q, PRIME, "Theorem 8 (1int1prime)", E, U),
    row(Z, Q, Q, "Theorem 9 (2strat)", E, U),
    row(
        Z,
        Z,
        Z,
        "Theorem 11(ii) (moreint) for all but 2 values of k",
        Rule::Solution(Outcome::Solution2),
        U,
    ),
    row(Z, Z, PRIME, SPLIT, Rule::DirectOnly, U),
    row(
        Z,
        Z,
        Q,
        "O_c = O_1 by Theorem 2 (SecSol)",
        Rule::Solution(Outcome::Solution2),
        Assignment::O1isOc,
    ),
    row(Q, PRIME, PRIME, "Theorem 7 (2primes)", E, U),
    row(Q, INF, PRIME, "Theorem moreinfty(iii)", E, U),
    row(Q, INF, Z, "Theorem moreinfty(i)", E, U),
    row(Q, INF, Q, "Theorem 6(ii) (infty)", E, U),
    row(Q, Q, PRIME, "Theorem 6(iii) (infty)", E, U),
    row(
        Q,
        Q,
        Z,
        "O_2 = O_c by Theorem 4 (lastone)",
        Rule::Solution(Outcome::Solution3),
        Assignment::O1isOf,
    ),
    row(Q, Q, Q, "Theorem 6(ii) (infty)", E, U),
    row(
        Q,
        Z,
        Z,
        "Theorem 11(i) (moreint) for all but 1 value of k",
        Rule::Solution(Outcome::Solution3),
        U,
    ),
    row(Q, Z, PRIME, SPLIT, Rule::DirectOnly, U),
];

/// The whole table as tab-separated text with a header line.
pub fn to_tsv() -> String {
    let mut out = String::from("P\tO1\tO2\tcitation\tsolution\n");
    for r in &ROWS {
        out.push_str(&r.tsv_line());
        out.push('\n');
    }
    out
}

/// Finds the row for `t`, returning it with a flag telling whether `O_1`
/// and `O_2` had to be swapped to match.
pub fn lookup(t: &ClassTriple) -> Option<(&'static Row, bool)> {
    ROWS.iter().find_map(|r| {
        if r.p != t.p {
            None
        } else if (r.o1, r.o2) == (t.o1, t.o2) {
            Some((r, false))
        } else if (r.o2, r.o1) == (t.o1, t.o2) {
            Some((r, true))
        } else {
            None
        }
    })
}

fn verdict(outcome: Outcome, theorem_id: &str, notes: &str, assignment: Assignment) -> Verdict {
    Verdict {
        outcome,
        theorem_id: theorem_id.to_string(),
        notes: notes.to_string(),
        assignment,
    }
}

pub fn table1_verdict(case: SystemCase, t: &ClassTriple) -> Verdict {
    let infinities = [t.p, t.o1, t.o2].iter().filter(|&&l| l == Label::Infinity).count();
    if infinities >= 2 {
        return verdict(Outcome::Eliminated, TWO_INFINITIES, "at most one of P, O_1, O_2 is inf", t.assignment);
    }
    let (row, swapped) = lookup(t).expect("the table covers every triple with at most one inf");
    // work in the row's own O_1/O_2 order, translate back at the end
    let asked = if swapped { t.assignment.swapped() } else { t.assignment };
    let back = |a: Assignment| if swapped { a.swapped() } else { a };
    let conflicts = row.forced != Assignment::Unassigned
        && asked != Assignment::Unassigned
        && asked != row.forced;
    match row.rule {
        Rule::Eliminated => verdict(Outcome::Eliminated, row.citation, "", t.assignment),
        Rule::DirectOnly => match case {
            SystemCase::Direct => verdict(Outcome::Eliminated, DIRECT_ID, "", t.assignment),
            SystemCase::Inverted => verdict(
                Outcome::OpenInverted,
                INVERTED_ID,
                &format!("{TORSAT_NOTE}; {OPEN_NOTE}"),
                t.assignment,
            ),
        },
        Rule::InfinityPrime => {
            if conflicts {
                return verdict(
                    Outcome::Eliminated,
                    "Theorem moreinfty(v)",
                    "O_c = inf cannot occur",
                    t.assignment,
                );
            }
            match case {
                SystemCase::Direct => verdict(
                    Outcome::Eliminated,
                    if asked == row.forced { "Theorem moreinfty(vi)" } else { row.citation },
                    "",
                    t.assignment,
                ),
                SystemCase::Inverted => verdict(
                    Outcome::OpenInverted,
                    "Theorem moreinfty(v) O_c=O_1",
                    &format!(
                        "O_c prime and O_f^k = inf; the other O_f^k must be integral (moreinfty(viii)); {OPEN_NOTE}"
                    ),
                    back(row.forced),
                ),
            }
        }
        Rule::Solution(outcome) => {
            if conflicts {
                let id = row
                    .citation
                    .split_once("by ")
                    .map_or(row.citation, |(_, id)| id);
                verdict(Outcome::Eliminated, id, "assignment contradicts the forced one", t.assignment)
            } else {
                let assignment = if row.forced == Assignment::Unassigned {
                    t.assignment
                } else {
                    back(row.forced)
                };
                verdict(outcome, row.citation, restriction_note(row), assignment)
            }
        }
    }
}

fn restriction_note(row: &Row) -> &'static str {
    match (row.p, row.o1, row.o2) {
        (Label::Integral, Label::Integral, Label::Integral) => "O_f^k integral for at most 2 values of k",
        (Label::StrictRational, Label::Integral, Label::Integral) => "O_f^k integral for at most 1 value of k",
        (Label::Integral, Label::Infinity, Label::Integral) => "O_f^k = inf for at most 1 value of k",
        (Label::Integral, Label::Integral, Label::StrictRational) => {
            "O_f^k vertical, or vertical plus horizontal part -(P + O_c)"
        }
        _ => "",
    }
}

/// Status of one ordered assignment `(P, O_c, O_f)` under the theorem
/// statements taken one at a time.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Derived {
    Excluded(&'static str),
    Open,
    Allowed(Outcome),
    Unresolved,
}

/// Applies each elimination theorem to one ordered assignment.
pub fn derive_assignment(case: SystemCase, p: Label, oc: Label, of: Label) -> Derived {
    use Label::*;
    let pair = |a: Label, b: Label| (oc == a && of == b) || (oc == b && of == a);
    let infinities = [p, oc, of].iter().filter(|&&l| l == Infinity).count();
    let direct = case == SystemCase::Direct;
    let rational = |l: Label| l != Prime;
    if infinities >= 2 {
        return Derived::Excluded("infty");
    }
    if oc == Prime && of == Prime {
        return Derived::Excluded("2primes");
    }
    if p == StrictRational && (pair(StrictRational, StrictRational) || pair(StrictRational, Infinity)) {
        return Derived::Excluded("infty");
    }
    if matches!(p, Infinity | StrictRational) && pair(StrictRational, Prime) {
        return Derived::Excluded("infty");
    }
    if p == Infinity && rational(oc) && rational(of) && !(oc == Integral && of == Integral) {
        return Derived::Excluded("infty");
    }
    if p == Integral && pair(StrictRational, Prime) {
        return Derived::Excluded("1int1prime");
    }
    if p == Integral && pair(StrictRational, StrictRational) {
        return Derived::Excluded("2strat");
    }
    if direct && (pair(Integral, Prime) || pair(StrictRational, StrictRational) || pair(StrictRational, Infinity)) {
        return Derived::Excluded("manycases");
    }
    if p == StrictRational && (pair(Infinity, Integral) || pair(Infinity, Prime)) {
        return Derived::Excluded("moreinfty");
    }
    if p == Integral && pair(Infinity, StrictRational) {
        return Derived::Excluded("moreinfty");
    }
    if p == Integral && oc == Infinity && matches!(of, Integral | Prime) {
        return Derived::Excluded("moreinfty");
    }
    if direct && p == Integral && oc == Prime && of == Infinity {
        return Derived::Excluded("moreinfty");
    }
    if p == Integral && oc == StrictRational && of == Integral {
        return Derived::Excluded("SecSol");
    }
    if p == StrictRational && oc == StrictRational && of == Integral {
        return Derived::Excluded("lastone");
    }
    match (p, oc, of) {
        (Infinity, Integral, Integral) => Derived::Allowed(Outcome::Solution1),
        (Integral, Integral, Integral | Infinity | StrictRational) => Derived::Allowed(Outcome::Solution2),
        (StrictRational, Integral, Integral | StrictRational) => Derived::Allowed(Outcome::Solution3),
        _ if !direct && (pair(Integral, Prime) || (p == Integral && oc == Prime && of == Infinity)) => {
            Derived::Open
        }
        _ => Derived::Unresolved,
    }
}

/// Row-level verdict from [`derive_assignment`] over both assignments: a
/// surviving class wins, then an open inverted case, else elimination. The
/// assignment is forced when exactly one of two distinct ones survives.
pub fn derive(case: SystemCase, p: Label, o1: Label, o2: Label) -> (Outcome, Assignment, Vec<&'static str>) {
    let first = derive_assignment(case, p, o2, o1);
    let second = derive_assignment(case, p, o1, o2);
    let options: Vec<(Derived, Assignment)> = if o1 == o2 {
        vec![(first, Assignment::Unassigned)]
    } else {
        vec![(first, Assignment::O1isOf), (second, Assignment::O1isOc)]
    };
    let excluded: Vec<&'static str> = options
        .iter()
        .filter_map(|(d, _)| match d {
            Derived::Excluded(name) => Some(*name),
            _ => None,
        })
        .collect();
    let pick = |want: fn(&Derived) -> bool| -> Vec<(Derived, Assignment)> {
        options.iter().copied().filter(|(d, _)| want(d)).collect()
    };
    let forced = |v: &[(Derived, Assignment)]| {
        if v.len() == 1 && o1 != o2 {
            v[0].1
        } else {
            Assignment::Unassigned
        }
    };
    let allowed = pick(|d| matches!(d, Derived::Allowed(_)));
    if let Some((Derived::Allowed(outcome), _)) = allowed.first() {
        return (*outcome, forced(&allowed), excluded);
    }
    let open = pick(|d| matches!(d, Derived::Open));
    if !open.is_empty() {
        return (Outcome::OpenInverted, forced(&open), excluded);
    }
    assert!(
        options.iter().all(|(d, _)| *d != Derived::Unresolved),
        "unresolved assignment for P={p}, O1={o1}, O2={o2}"
    );
    (Outcome::Eliminated, Assignment::Unassigned, excluded)
}
