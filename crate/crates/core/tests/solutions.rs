use flp_tangle::classifier::{check_thirdsol, moreint_holds};
use flp_tangle::{
    check_system, classify_solution, gauge_normalize, ClassifyError, EquivalenceMode, Execution,
    Fraction, Search, SearchBounds, SolutionClass, SystemCase, TangleSystem,
};

fn search(bound: u64) -> Search {
    Search::new(SearchBounds::new(bound).unwrap())
}

#[test]
fn enumerated_systems_pass_check() {
    for case in SystemCase::ALL {
        for sys in search(9).enumerate_systems(case) {
            let report = check_system(&sys, EquivalenceMode::UpToMirror).unwrap();
            assert!(report.pass, "{sys}");
            assert_eq!(report.gauge_reduced, sys);
        }
    }
}

#[test]
fn inverted_enumeration_classifies() {
    let systems = search(10).enumerate_systems(SystemCase::Inverted);
    assert!(!systems.is_empty());
    let mut seen = std::collections::BTreeSet::new();
    for sys in &systems {
        seen.insert(classify_solution(sys).unwrap_or_else(|e| panic!("{sys}: {e}")));
        assert_ne!(moreint_holds(sys), Some(false), "{sys}");
    }
    assert!(seen.contains(&SolutionClass::Class1));
    assert!(seen.contains(&SolutionClass::Class2));
}

#[test]
fn infinite_rows_obey_the_corrected_restriction() {
    let mut applied = 0;
    for case in SystemCase::ALL {
        for sys in search(10).enumerate_systems(case) {
            match check_thirdsol(&sys) {
                Ok(report) => {
                    assert!(report.r_up_to_twist, "{sys}");
                    applied += 1;
                }
                Err(ClassifyError::NotApplicable(_)) => {}
                Err(e) => panic!("{sys}: {e}"),
            }
        }
    }
    assert!(applied > 0);
}

#[test]
fn execution_strategies_agree() {
    for case in SystemCase::ALL {
        let runs: Vec<Vec<TangleSystem>> = Execution::available()
            .iter()
            .map(|&e| search(9).execution(e).enumerate_systems(case))
            .collect();
        assert!(runs.windows(2).all(|w| w[0] == w[1]), "{case}");
    }
}

#[test]
fn chiral_enumeration_is_a_subset() {
    let mirror = search(9).enumerate_systems(SystemCase::Direct);
    let chiral = search(9)
        .mode(EquivalenceMode::Chiral)
        .enumerate_systems(SystemCase::Direct);
    assert!(chiral.len() < mirror.len());
    assert!(chiral.iter().all(|s| mirror.contains(s)));
}

#[test]
fn system_json_round_trips() {
    for sys in search(8).enumerate_systems(SystemCase::Inverted) {
        let text = serde_json::to_string(&sys).unwrap();
        let back: TangleSystem = serde_json::from_str(&text).unwrap();
        assert_eq!(back, sys);
    }
}

#[test]
fn simplest_families_are_enumerated() {
    let f = |s: &str| s.parse::<Fraction>().unwrap();
    let direct = TangleSystem::rational(
        SystemCase::Direct,
        Fraction::INFINITY,
        f("0"),
        f("0"),
        ["0", "-2", "4", "-6", "8"].map(f),
    )
    .unwrap();
    let inverted = TangleSystem::rational(
        SystemCase::Inverted,
        f("0"),
        Fraction::INFINITY,
        f("0"),
        ["1", "-1/3", "1/5", "-1/7", "1/9"].map(f),
    )
    .unwrap();
    assert!(search(8).enumerate_systems(SystemCase::Direct).contains(&gauge_normalize(&direct)));
    // 1/9 has complexity 10
    assert!(!search(8).enumerate_systems(SystemCase::Inverted).contains(&gauge_normalize(&inverted)));
    assert!(search(10).enumerate_systems(SystemCase::Inverted).contains(&gauge_normalize(&inverted)));
}
