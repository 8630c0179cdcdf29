//! Bounded exhaustive solvers for the tangle-equation systems.
//!
//! Every result is complete relative to [`SearchBounds`] and nothing else.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Execution;
use crate::fourplat::{closure_of_sum, equivalent, EquivalenceMode, FourPlat};
use crate::fraction::{fractions_up_to, Fraction};
use crate::system::{gauge_normalize, sum_is_rational, target_product, SystemCase, TangleSystem, K_VALUES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search bound must be at least 2, got {0}")]
    BoundTooSmall(u64),
    #[error("solve-pr needs at least one O_f row")]
    NoRows,
}

/// Candidates are the fractions with `|num| + den <= max_complexity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    max_complexity: u64,
}

impl SearchBounds {
    /// Above this, enumeration over all systems takes minutes.
    pub const ENUMERATION_WARN: u64 = 25;

    pub fn new(max_complexity: u64) -> Result<Self, SearchError> {
        if max_complexity < 2 {
            return Err(SearchError::BoundTooSmall(max_complexity));
        }
        Ok(SearchBounds { max_complexity })
    }

    pub fn max_complexity(&self) -> u64 {
        self.max_complexity
    }

    pub fn candidates(&self) -> Vec<Fraction> {
        fractions_up_to(self.max_complexity)
    }
}

/// Solver configuration shared by every search.
#[derive(Clone, Copy, Debug)]
pub struct Search {
    pub bounds: SearchBounds,
    pub mode: EquivalenceMode,
    pub execution: Execution,
}

impl Search {
    pub fn new(bounds: SearchBounds) -> Self {
        Search {
            bounds,
            mode: EquivalenceMode::default(),
            execution: Execution::default(),
        }
    }

    pub fn mode(mut self, mode: EquivalenceMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    fn closes_to(&self, summands: &[Fraction], target: &FourPlat) -> bool {
        closure_of_sum(summands).is_ok_and(|b| equivalent(&b, target, self.mode))
    }

    /// Every `O_f` within the bound solving row `k` of both equations, per `k`.
    /// Direct repeats keep only `O_f` with `O_f + O_c` rational.
    pub fn solve_for_of(
        &self,
        case: SystemCase,
        p: Fraction,
        r: Fraction,
        oc: Fraction,
    ) -> [Vec<Fraction>; K_VALUES] {
        let substrate = self.substrate_solutions(case, p, oc, &self.bounds.candidates());
        std::array::from_fn(|k| {
            let target = target_product(case, k as u8).expect("k < 5");
            substrate
                .iter()
                .copied()
                .filter(|&x| self.closes_to(&[x, oc, r], &target))
                .collect()
        })
    }

    fn substrate_solutions(
        &self,
        case: SystemCase,
        p: Fraction,
        oc: Fraction,
        candidates: &[Fraction],
    ) -> Vec<Fraction> {
        candidates
            .iter()
            .copied()
            .filter(|&x| case == SystemCase::Inverted || sum_is_rational(x, oc))
            .filter(|&x| self.closes_to(&[x, oc, p], &FourPlat::UNKNOT))
            .collect()
    }

    /// Every `U` within the bound with `N(P + U) = b(1,1)`.
    pub fn unknot_partners(&self, p: Fraction) -> Vec<Fraction> {
        let candidates = self.bounds.candidates();
        self.execution
            .filter(&candidates, |&u| self.closes_to(&[p, u], &FourPlat::UNKNOT))
    }

    /// Every `(P, R)` within the bound making each present row hold, ordered
    /// by `P` then `R` in complexity order.
    pub fn solve_for_pr(
        &self,
        case: SystemCase,
        oc: Fraction,
        of: &[(usize, Fraction)],
    ) -> Result<Vec<(Fraction, Fraction)>, SearchError> {
        if of.is_empty() {
            return Err(SearchError::NoRows);
        }
        let candidates = self.bounds.candidates();
        let ps = self.execution.filter(&candidates, |&p| {
            of.iter().all(|&(_, x)| self.closes_to(&[x, oc, p], &FourPlat::UNKNOT))
        });
        let rs = self.execution.filter(&candidates, |&r| {
            of.iter().all(|&(k, x)| {
                let target = target_product(case, k as u8).expect("k < 5");
                self.closes_to(&[x, oc, r], &target)
            })
        });
        Ok(ps.iter().flat_map(|&p| rs.iter().map(move |&r| (p, r))).collect())
    }

    /// Every all-rational, fully observed system with entries inside the
    /// bound, reported once per gauge orbit by its normal form, sorted.
    pub fn enumerate_systems(&self, case: SystemCase) -> Vec<TangleSystem> {
        let candidates = self.bounds.candidates();
        let pairs: Vec<(Fraction, Fraction)> = candidates
            .iter()
            .flat_map(|&p| candidates.iter().map(move |&oc| (p, oc)))
            .collect();
        let found = self.execution.flat_map(&pairs, |&(p, oc)| {
            let substrate = self.substrate_solutions(case, p, oc, &candidates);
            if substrate.len() < K_VALUES {
                return Vec::new();
            }
            let mut out = Vec::new();
            for &r in &candidates {
                let rows: Vec<Vec<Fraction>> = (0..K_VALUES)
                    .map(|k| {
                        let target = target_product(case, k as u8).expect("k < 5");
                        substrate
                            .iter()
                            .copied()
                            .filter(|&x| self.closes_to(&[x, oc, r], &target))
                            .collect()
                    })
                    .collect();
                if rows.iter().any(Vec::is_empty) {
                    continue;
                }
                let mut chosen = Vec::with_capacity(K_VALUES);
                distinct_choices(&rows, &mut chosen, &mut |of| {
                    let of: [Fraction; K_VALUES] = of.try_into().expect("five rows");
                    if let Ok(sys) = TangleSystem::rational(case, p, r, oc, of) {
                        out.push(gauge_normalize(&sys));
                    }
                });
            }
            out
        });
        found.into_iter().collect::<BTreeSet<_>>().into_iter().collect()
    }
}

/// Calls `emit` with every choice of one entry per row, entries pairwise
/// distinct.
fn distinct_choices(
    rows: &[Vec<Fraction>],
    chosen: &mut Vec<Fraction>,
    emit: &mut dyn FnMut(&[Fraction]),
) {
    let depth = chosen.len();
    if depth == rows.len() {
        emit(chosen);
        return;
    }
    for &x in &rows[depth] {
        if !chosen.contains(&x) {
            chosen.push(x);
            distinct_choices(rows, chosen, emit);
            chosen.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Fraction {
        s.parse().unwrap()
    }

    fn search(bound: u64) -> Search {
        Search::new(SearchBounds::new(bound).unwrap())
    }

    #[test]
    fn bounds_validate() {
        assert_eq!(SearchBounds::new(1), Err(SearchError::BoundTooSmall(1)));
        assert!(SearchBounds::new(2).is_ok());
    }

    #[test]
    fn unknot_partner_examples() {
        let s = search(12);
        let of_inf = s.unknot_partners(Fraction::INFINITY);
        assert!(!of_inf.is_empty());
        assert!(of_inf.iter().all(|x| x.is_integral()));
        assert_eq!(of_inf.len(), 2 * 11 + 1);
        let of_zero = s.unknot_partners(Fraction::ZERO);
        assert!(of_zero.contains(&Fraction::INFINITY));
        assert!(of_zero.contains(&f("1")) && of_zero.contains(&f("-1")));
        assert!(of_zero.iter().all(|x| x.is_infinite() || x.num().abs() == 1));
        let partners = s.unknot_partners(f("-2/5"));
        for n in [-1i64, -2] {
            let u = Fraction::new(1 + 2 * n, 3 + 5 * n).unwrap();
            assert!(partners.contains(&u), "{u}");
        }
    }

    #[test]
    fn solve_pr_examples() {
        let s = search(10);
        let direct = s.solve_for_pr(SystemCase::Direct, f("0"), &[(1, f("-5/3"))]).unwrap();
        assert!(direct.contains(&(f("2"), f("1"))));
        let inverted = s
            .solve_for_pr(SystemCase::Inverted, f("0"), &[(0, Fraction::INFINITY)])
            .unwrap();
        assert!(inverted.contains(&(f("2"), f("1"))));
        assert!(inverted.iter().all(|(p, r)| p.is_integral() && r.is_integral()));
        let zero = search(5).solve_for_pr(SystemCase::Direct, f("0"), &[(0, f("0"))]).unwrap();
        assert!(zero.contains(&(Fraction::INFINITY, f("0"))));
        assert!(zero.contains(&(f("1"), f("0"))));
        assert_eq!(s.solve_for_pr(SystemCase::Direct, f("0"), &[]), Err(SearchError::NoRows));
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let s = search(7);
        let results: Vec<_> = Execution::available()
            .iter()
            .map(|&e| s.execution(e).enumerate_systems(SystemCase::Inverted))
            .collect();
        assert!(results.windows(2).all(|w| w[0] == w[1]));
        assert!(!results[0].is_empty());
    }
}
