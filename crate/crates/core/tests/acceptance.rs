//! Acceptance harness. One line per criterion, non-zero exit on any failure.
//!
//! Run with `cargo test -p flp-tangle --test acceptance`.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use flp_tangle::classifier::{check_secsol, moreint_holds};
use flp_tangle::oracle::verify_closure;
use flp_tangle::table1::{self, derive, Row, Rule, ROWS};
use flp_tangle::{
    check_system, classify_solution, closure_of_sum, equivalent, gauge_normalize, gauge_transform,
    fourplat::Handedness, Assignment, ClassTriple, EquivalenceMode, FourPlat, Fraction, GaugeMove,
    Search, SearchBounds, SignConvention, SolutionClass, SystemCase, TangleSystem,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MIRROR: EquivalenceMode = EquivalenceMode::UpToMirror;
const CHIRAL: EquivalenceMode = EquivalenceMode::Chiral;
const CASES: usize = 500;
const SEED: u64 = 0x5eed_0f1b;

type Outcome = Result<String, String>;

fn f(s: &str) -> Fraction {
    s.parse().unwrap_or_else(|e| panic!("{s}: {e}"))
}

/// Fraction written in biological sign convention.
fn bio(s: &str) -> Fraction {
    SignConvention::Biological.to_internal(f(s))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

const DIRECT_ROWS: [&[&str]; 5] = [&["-1"], &["-3", "-5/3"], &["-9/5"], &["-13/7"], &["-17/9"]];
const INVERTED_ROWS: [&[&str]; 5] = [&["inf", "-3/2"], &["-7/4"], &["-11/6"], &["-15/8"], &["-19/10"]];

fn rows_of(case: SystemCase) -> [&'static [&'static str]; 5] {
    match case {
        SystemCase::Direct => DIRECT_ROWS,
        SystemCase::Inverted => INVERTED_ROWS,
    }
}

/// Every system built from the P=2, R=1 family lists, in biological signs.
fn family_systems() -> Vec<TangleSystem> {
    let mut out = Vec::new();
    for case in SystemCase::ALL {
        let rows = rows_of(case);
        let (multi, choices) = rows.iter().enumerate().find(|(_, r)| r.len() > 1).unwrap();
        for choice in choices.iter() {
            let of = std::array::from_fn(|k| bio(if k == multi { choice } else { rows[k][0] }));
            out.push(TangleSystem::rational(case, bio("2"), bio("1"), bio("0"), of).unwrap());
        }
    }
    out
}

fn criterion_1() -> Outcome {
    let systems = family_systems();
    for sys in &systems {
        for mode in [MIRROR, CHIRAL] {
            let report = check_system(sys, mode).map_err(|e| e.to_string())?;
            ensure(report.pass, || format!("{sys} fails in {mode:?} mode"))?;
        }
    }
    Ok(format!("{} systems pass in mirror and chiral mode", systems.len()))
}

fn criterion_2() -> Outcome {
    let search = Search::new(SearchBounds::new(30).unwrap()).mode(CHIRAL);
    let sign = SignConvention::Biological;
    for case in SystemCase::ALL {
        let got = search.solve_for_of(case, bio("2"), bio("1"), bio("0"));
        for (k, want) in rows_of(case).iter().enumerate() {
            let want: BTreeSet<Fraction> = want.iter().map(|s| f(s)).collect();
            let have: BTreeSet<Fraction> = got[k].iter().map(|&x| sign.to_external(x)).collect();
            ensure(want == have, || format!("{case} k={k}: expected {want:?}, got {have:?}"))?;
        }
    }
    Ok("exact per-k sets at bound 30, chiral mode, biological signs".into())
}

fn u(n: i64) -> Fraction {
    Fraction::new(1 + 2 * n, 3 + 5 * n).unwrap()
}

fn criterion_3() -> Outcome {
    for n in -6..=-1 {
        let sub = closure_of_sum(&[f("-2/5"), u(n)]).map_err(|e| e.to_string())?;
        ensure(sub.is_unknot(), || format!("n={n}: N(-2/5 + U_n) = {sub}"))?;
        let prod = closure_of_sum(&[f("-1/2"), u(n)]).map_err(|e| e.to_string())?;
        let want = ((n + 1).abs(), 1);
        ensure(prod.canonical(MIRROR) == want, || {
            format!("n={n}: N(-1/2 + U_n) = {prod}, expected b{want:?}")
        })?;
    }
    Ok("n = -1..-6".into())
}

/// Every choice of sign per row applied to `magnitudes`.
fn sign_patterns(magnitudes: [Fraction; 5]) -> Vec<[Fraction; 5]> {
    (0u32..32)
        .map(|bits| {
            std::array::from_fn(|k| {
                let m = magnitudes[k];
                if bits >> k & 1 == 1 && !m.is_infinite() {
                    Fraction::new(-m.num(), m.den()).unwrap()
                } else {
                    m
                }
            })
        })
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

fn simplest_families() -> Vec<(TangleSystem, SolutionClass)> {
    let int = |k: usize, a: i64, b: i64| Fraction::integer(a * k as i64 + b);
    let families: [(SystemCase, &str, &str, [Fraction; 5], SolutionClass); 4] = [
        (SystemCase::Direct, "inf", "0", std::array::from_fn(|k| int(k, 2, 0)), SolutionClass::Class1),
        (SystemCase::Inverted, "inf", "0", std::array::from_fn(|k| int(k, 2, 1)), SolutionClass::Class1),
        (
            SystemCase::Inverted,
            "0",
            "inf",
            std::array::from_fn(|k| Fraction::new(1, 2 * k as i64 + 1).unwrap()),
            SolutionClass::Class2,
        ),
        (
            SystemCase::Direct,
            "0",
            "inf",
            std::array::from_fn(|k| Fraction::new(1, 2 * k as i64).unwrap()),
            SolutionClass::Class2,
        ),
    ];
    let mut out = Vec::new();
    for (case, p, r, magnitudes, class) in families {
        for of in sign_patterns(magnitudes) {
            let sys = TangleSystem::rational(case, f(p), f(r), f("0"), of).unwrap();
            out.push((sys, class));
        }
    }
    out
}

fn criterion_4() -> Outcome {
    let families = simplest_families();
    for (sys, class) in &families {
        let report = check_system(sys, MIRROR).map_err(|e| e.to_string())?;
        ensure(report.pass, || format!("{sys} fails check"))?;
        let got = classify_solution(sys).map_err(|e| e.to_string())?;
        ensure(got == *class, || format!("{sys}: {got:?}, expected {class:?}"))?;
    }
    Ok(format!("{} sign patterns checked and classified", families.len()))
}

fn criterion_5() -> Outcome {
    let shipped = include_str!("../data/table1.tsv");
    ensure(table1::to_tsv() == shipped, || "engine table differs from data/table1.tsv".into())?;
    let mut verdicts = 0;
    for row in &ROWS {
        for case in SystemCase::ALL {
            let triple = ClassTriple::new(row.p, row.o1, row.o2, Assignment::Unassigned)
                .map_err(|e| e.to_string())?;
            let v = table1::table1_verdict(case, &triple);
            ensure(cites(row, &v.theorem_id), || {
                format!("{case} {}: cited {:?}, table says {:?}", row_name(row), v.theorem_id, row.citation)
            })?;
            let (outcome, _, _) = derive(case, row.p, row.o1, row.o2);
            ensure(outcome == v.outcome, || {
                format!("{case} {}: engine {:?}, derived {outcome:?}", row_name(row), v.outcome)
            })?;
            verdicts += 1;
        }
    }
    Ok(format!("{} rows, {verdicts} verdicts cite verbatim; transcription matches", ROWS.len()))
}

fn row_name(row: &Row) -> String {
    format!("({}, {}, {})", row.p, row.o1, row.o2)
}

/// The whole citation, or for rows that split by case or assignment, one
/// verbatim clause of it.
fn cites(row: &Row, id: &str) -> bool {
    match row.rule {
        Rule::DirectOnly | Rule::InfinityPrime => !id.is_empty() && row.citation.contains(id),
        _ => id == row.citation,
    }
}

fn random_fraction(rng: &mut ChaCha8Rng, max_complexity: i64) -> Fraction {
    if rng.gen_ratio(1, 12) {
        return Fraction::INFINITY;
    }
    let den = rng.gen_range(1..max_complexity);
    let num = rng.gen_range(-(max_complexity - den)..=max_complexity - den);
    Fraction::new(num, den).unwrap()
}

fn coprime_pair(rng: &mut ChaCha8Rng) -> (i64, i64) {
    loop {
        let p = rng.gen_range(2..400);
        let q = rng.gen_range(-3 * p..3 * p);
        if gcd(p, q) == 1 {
            return (p, q);
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn inverse_mod(q: i64, p: i64) -> i64 {
    (1..p).find(|&s| (s * q).rem_euclid(p) == 1).unwrap_or(0)
}

fn orbit_laws(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    for _ in 0..CASES {
        let (p, q) = coprime_pair(rng);
        let b = FourPlat::new(p, q).unwrap();
        let qinv = inverse_mod(q, p);
        let same = |q2: i64, mode| equivalent(&b, &FourPlat::new(p, q2).unwrap(), mode);
        let amphichiral = (q * q + 1).rem_euclid(p) == 0;
        ensure(same(q + p, CHIRAL) && same(q - 5 * p, CHIRAL), || format!("b({p},{q}) shift"))?;
        ensure(same(qinv, CHIRAL), || format!("b({p},{q}) inverse"))?;
        ensure(same(-q, MIRROR) && same(-qinv, MIRROR), || format!("b({p},{q}) mirror"))?;
        ensure(same(-q, CHIRAL) == amphichiral, || format!("b({p},{q}) chirality"))?;
        ensure((b.handedness() == Handedness::Amphichiral) == amphichiral, || {
            format!("b({p},{q}) handedness")
        })?;
        let other = loop {
            let x = rng.gen_range(1..p.max(2));
            if gcd(p, x) == 1 {
                break x;
            }
        };
        let in_orbit = [q, -q, qinv, -qinv].iter().any(|&y| (y - other).rem_euclid(p) == 0);
        ensure(same(other, MIRROR) == in_orbit, || format!("b({p},{q}) vs b({p},{other})"))?;
    }
    Ok(CASES)
}

fn permutations(v: [Fraction; 3]) -> [[Fraction; 3]; 6] {
    let [a, b, c] = v;
    [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]]
}

fn permutation_invariance(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let mut closed = 0;
    let mut tried = 0;
    while closed < CASES {
        tried += 1;
        ensure(tried < 100 * CASES, || "too few four-plat closures drawn".into())?;
        let mut triple = [(); 3].map(|_| random_fraction(rng, 12));
        // keep at most two strictly rational summands half of the time
        if rng.gen_bool(0.5) {
            triple[rng.gen_range(0..3)] = Fraction::integer(rng.gen_range(-6..=6));
        }
        let base = closure_of_sum(&triple);
        for perm in permutations(triple) {
            let other = closure_of_sum(&perm);
            let agree = match (&base, &other) {
                (Ok(a), Ok(b)) => equivalent(a, b, CHIRAL),
                (Err(_), Err(_)) => true,
                _ => false,
            };
            ensure(agree, || format!("{triple:?} vs {perm:?}: {base:?} / {other:?}"))?;
        }
        closed += usize::from(base.is_ok());
    }
    Ok(closed)
}

fn shift(x: Fraction, n: i64) -> Fraction {
    flp_tangle::add_horizontal(x, n)
}

fn gauge_invariance(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let mut closed = 0;
    while closed < CASES {
        let [x, oc, p] = [(); 3].map(|_| random_fraction(rng, 12));
        let n = rng.gen_range(-9..=9);
        let Ok(base) = closure_of_sum(&[x, oc, p]) else {
            continue;
        };
        for moved in [[shift(x, -n), shift(oc, n), p], [x, shift(oc, n), shift(p, -n)]] {
            let got = closure_of_sum(&moved).map_err(|e| format!("{moved:?}: {e}"))?;
            ensure(equivalent(&base, &got, CHIRAL), || format!("{x} {oc} {p} by {n}"))?;
        }
        closed += 1;
    }
    let systems: Vec<TangleSystem> = family_systems()
        .into_iter()
        .chain(simplest_families().into_iter().map(|(s, _)| s))
        .collect();
    for _ in 0..CASES {
        let sys = &systems[rng.gen_range(0..systems.len())];
        let mut moved = sys.clone();
        for _ in 0..rng.gen_range(1..4) {
            let which = if rng.gen_bool(0.5) { GaugeMove::OcToP } else { GaugeMove::OcToOf };
            moved = gauge_transform(&moved, rng.gen_range(-7..=7), which).map_err(|e| e.to_string())?;
        }
        let pass = check_system(&moved, MIRROR).map_err(|e| e.to_string())?.pass;
        ensure(pass, || format!("{moved} no longer passes"))?;
        ensure(gauge_normalize(&moved) == gauge_normalize(sys), || format!("normal form of {moved}"))?;
    }
    Ok(closed + CASES)
}

/// Unknot triples over complexity <= 20: some summand is integral, and an
/// infinite summand makes the other two integral.
fn forcing_exhaustive() -> Result<usize, String> {
    use flp_tangle::classifier::forcing::{infinity_forces_integral, one_integral};
    let candidates = flp_tangle::fractions_up_to(20);
    let found: Vec<Result<usize, String>> = std::thread::scope(|scope| {
        let handles: Vec<_> = candidates
            .chunks(candidates.len().div_ceil(8))
            .map(|chunk| {
                let candidates = &candidates;
                scope.spawn(move || {
                    let mut unknots = 0;
                    for &a in chunk {
                        for &b in candidates {
                            for &c in candidates {
                                let t = [a, b, c];
                                if !closure_of_sum(&t).is_ok_and(|x| x.is_unknot()) {
                                    continue;
                                }
                                unknots += 1;
                                if !(one_integral(t) && infinity_forces_integral(t)) {
                                    return Err(format!("{a}, {b}, {c}"));
                                }
                            }
                        }
                    }
                    Ok(unknots)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    found.into_iter().sum()
}

fn enumeration(bound: u64) -> Vec<TangleSystem> {
    let search = Search::new(SearchBounds::new(bound).unwrap());
    SystemCase::ALL.iter().flat_map(|&case| search.enumerate_systems(case)).collect()
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let orbits = orbit_laws(&mut rng)?;
    let perms = permutation_invariance(&mut rng)?;
    let gauge = gauge_invariance(&mut rng)?;
    let unknots = forcing_exhaustive()?;
    let systems = enumeration(15);
    let mut secsol = 0;
    for sys in &systems {
        if classify_solution(sys) == Ok(SolutionClass::Class2) && sys.p().is_integral() {
            match check_secsol(sys) {
                Ok(rows) => secsol += rows.len(),
                Err(flp_tangle::ClassifyError::NotApplicable(_)) => {}
                Err(e) => return Err(format!("{sys}: {e}")),
            }
        }
        ensure(moreint_holds(sys) != Some(false), || format!("moreint fails for {sys}"))?;
    }
    ensure(secsol > 0, || "no strictly rational Class 2 rows enumerated".into())?;
    Ok(format!(
        "orbit {orbits}, permutation {perms}, gauge {gauge}, unknot triples {unknots}, \
         SecSol rows {secsol}, moreint systems {}",
        systems.len()
    ))
}

fn criterion_7() -> Outcome {
    let mut instances: Vec<Vec<Fraction>> = Vec::new();
    for sys in family_systems().iter().chain(simplest_families().iter().map(|(s, _)| s)) {
        let oc = sys.oc_fraction().unwrap();
        for (_, x) in sys.of_fractions().unwrap() {
            instances.push(vec![x, oc, sys.p()]);
            instances.push(vec![x, oc, sys.r()]);
        }
    }
    for n in -6..=-1 {
        instances.push(vec![f("-2/5"), u(n)]);
        instances.push(vec![f("-1/2"), u(n)]);
    }
    let fixtures = instances.len();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let mut random = 0;
    while random < 200 {
        let len = rng.gen_range(1..=3);
        let summands: Vec<Fraction> = (0..len).map(|_| random_fraction(&mut rng, 14)).collect();
        if closure_of_sum(&summands).is_ok() {
            instances.push(summands);
            random += 1;
        }
    }
    let mismatches: Vec<String> = instances
        .iter()
        .filter_map(|s| match verify_closure(s) {
            Ok(check) if check.agrees() => None,
            Ok(check) => Some(format!("{s:?}: {check:?}")),
            Err(e) => Some(format!("{s:?}: {e}")),
        })
        .collect();
    ensure(mismatches.is_empty(), || format!("{} mismatches, first {}", mismatches.len(), mismatches[0]))?;
    Ok(format!("{fixtures} fixture closures and {random} random instances agree"))
}

fn criterion_8() -> Outcome {
    let search = Search::new(SearchBounds::new(10).unwrap());
    let systems = search.enumerate_systems(SystemCase::Direct);
    ensure(!systems.is_empty(), || "nothing enumerated".into())?;
    let mut counts = [0usize; 3];
    for sys in &systems {
        let class = classify_solution(sys).map_err(|e| e.to_string())?;
        counts[class as usize] += 1;
    }
    Ok(format!(
        "{} direct systems: {} Class 1, {} Class 2, {} Class 3",
        systems.len(),
        counts[0],
        counts[1],
        counts[2]
    ))
}

struct Criterion {
    id: u8,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "family regression P=2 R=1", limit: Duration::from_secs(1), run: criterion_1 },
        Criterion { id: 2, name: "solve-of at bound 30", limit: Duration::from_secs(10), run: criterion_2 },
        Criterion { id: 3, name: "U_n family", limit: Duration::from_secs(1), run: criterion_3 },
        Criterion { id: 4, name: "Class 1 / Class 2 families", limit: Duration::from_secs(60), run: criterion_4 },
        Criterion { id: 5, name: "Table 1 engine", limit: Duration::from_secs(60), run: criterion_5 },
        Criterion { id: 6, name: "property suite", limit: Duration::from_secs(300), run: criterion_6 },
        Criterion { id: 7, name: "Goeritz oracle agreement", limit: Duration::from_secs(300), run: criterion_7 },
        Criterion { id: 8, name: "direct enumeration classifies", limit: Duration::from_secs(600), run: criterion_8 },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(c.run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            if elapsed > c.limit {
                Err(format!("{detail}; over the {:?} limit", c.limit))
            } else {
                Ok(detail)
            }
        });
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        failed += usize::from(outcome.is_err());
        println!("{tag} [{}] {} ({:.2?}): {detail}", c.id, c.name, elapsed);
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
