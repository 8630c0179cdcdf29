use flp_tangle::classifier::{check_secsol, check_thirdsol, moreint_holds};
use flp_tangle::table1::{self, ROWS};
use flp_tangle::{
    check_system, classify, classify_solution, closure_of_sum, count_profile, denominator_closure,
    fraction_of, gauge_normalize, gauge_transform, lens_space_of, numerator_closure, table1_verdict,
    twist_vector_of, wrap_number, Assignment, ClassTriple, ClassifyError, Fraction, Label, Search,
    SearchBounds, SystemCase, TangleSystem, TwistVector, Verdict,
};
use serde_json::{json, Value};

use crate::io::{csv_output, json_output, parse_list, parse_rows, Io, Output, Verifier};
use crate::{AssignmentArg, Cli, Command, Format};

pub fn run(cli: &Cli) -> Result<Output, String> {
    let io = Io::new(&cli.opts);
    let mut v = Verifier::new(io, cli.opts.verify);
    let search = || -> Result<Search, String> {
        let bounds = SearchBounds::new(cli.opts.bound).map_err(|e| format!("--bound: {e}"))?;
        Ok(Search::new(bounds).mode(io.mode))
    };
    let tabular = matches!(
        cli.command,
        Command::SolveOf { .. }
            | Command::SolvePr { .. }
            | Command::Partners { .. }
            | Command::Enumerate { .. }
            | Command::Table1 { .. }
    );
    if io.format == Format::Csv && !tabular {
        return Err("--format csv is only available for solve-of, solve-pr, partners, enumerate and table1".into());
    }
    match &cli.command {
        Command::Eval { fraction, twist } => {
            let f = match (fraction, twist) {
                (Some(f), _) => *f,
                (None, Some(t)) => fraction_of(&t.parse::<TwistVector>().map_err(|e| format!("--twist: {e}"))?),
                (None, None) => return Err("eval needs a fraction or --twist".into()),
            };
            eval(io, &mut v, io.inp(f))
        }
        Command::Close { sum } => {
            let summands: Vec<Fraction> = parse_list(sum)?.into_iter().map(|f| io.inp(f)).collect();
            v.closure(&summands);
            let body = match closure_of_sum(&summands) {
                Ok(b) => json!({
                    "summands": summands.iter().map(|&f| io.out(f)).collect::<Vec<_>>(),
                    "fourplat": io.fourplat_out(&b),
                    "closure": io.fourplat(&b),
                }),
                Err(e) => json!({
                    "summands": summands.iter().map(|&f| io.out(f)).collect::<Vec<_>>(),
                    "fourplat": null,
                    "error": e.to_string(),
                }),
            };
            Ok(json_output("close", body, &v, false))
        }
        Command::SolveOf { case, p, r, oc } => {
            let (p, r, oc) = (io.inp(*p), io.inp(*r), io.inp(*oc));
            let rows = search()?.solve_for_of(*case, p, r, oc);
            for x in rows.iter().flatten() {
                v.closure(&[*x, oc, p]);
                v.closure(&[*x, oc, r]);
            }
            if io.format == Format::Csv {
                let table = rows
                    .iter()
                    .enumerate()
                    .flat_map(|(k, xs)| io.outs(xs).into_iter().map(move |x| vec![k.to_string(), x]))
                    .collect();
                return csv_output(&["k", "Of"], table, &v);
            }
            let of: serde_json::Map<String, Value> =
                rows.iter().enumerate().map(|(k, xs)| (k.to_string(), json!(io.outs(xs)))).collect();
            let body = json!({
                "case": case,
                "P": io.out(p),
                "R": io.out(r),
                "Oc": io.out(oc),
                "bound": cli.opts.bound,
                "mode": io.mode,
                "Of": of,
            });
            Ok(json_output("solve-of", body, &v, false))
        }
        Command::SolvePr { case, oc, of } => {
            let oc = io.inp(*oc);
            let rows: Vec<(usize, Fraction)> =
                parse_rows::<Fraction>(of)?.into_iter().map(|(k, f)| (k, io.inp(f))).collect();
            let pairs = search()?.solve_for_pr(*case, oc, &rows).map_err(|e| format!("--Of: {e}"))?;
            for &(p, r) in &pairs {
                for &(_, x) in &rows {
                    v.closure(&[x, oc, p]);
                    v.closure(&[x, oc, r]);
                }
            }
            let pairs: Vec<(String, String)> = pairs.iter().map(|&(p, r)| (io.out(p), io.out(r))).collect();
            if io.format == Format::Csv {
                let table = pairs.into_iter().map(|(p, r)| vec![p, r]).collect();
                return csv_output(&["P", "R"], table, &v);
            }
            let body = json!({
                "case": case,
                "Oc": io.out(oc),
                "Of": rows.iter().map(|&(k, x)| (k.to_string(), json!(io.out(x)))).collect::<serde_json::Map<_, _>>(),
                "bound": cli.opts.bound,
                "mode": io.mode,
                "pairs": pairs.iter().map(|(p, r)| json!({"P": p, "R": r})).collect::<Vec<_>>(),
            });
            Ok(json_output("solve-pr", body, &v, false))
        }
        Command::Partners { p } => {
            let p = io.inp(*p);
            let partners = search()?.unknot_partners(p);
            for &u in &partners {
                v.closure(&[p, u]);
            }
            if io.format == Format::Csv {
                let table = io.outs(&partners).into_iter().map(|u| vec![u]).collect();
                return csv_output(&["U"], table, &v);
            }
            let body = json!({
                "P": io.out(p),
                "bound": cli.opts.bound,
                "mode": io.mode,
                "partners": io.outs(&partners),
            });
            Ok(json_output("partners", body, &v, false))
        }
        Command::Enumerate { case } => enumerate(cli, io, &mut v, search()?, *case),
        Command::Check { system } => {
            let sys = io.system_in(system)?;
            check(io, &mut v, &sys)
        }
        Command::Classify { system } => {
            let sys = io.system_in(system)?;
            classify_command(io, &mut v, &sys)
        }
        Command::Table1 { case, triple, assignment, raw } => {
            if *raw {
                return Ok(Output { text: table1::to_tsv(), failed: false });
            }
            table1_command(io, &v, *case, triple.as_deref(), *assignment)
        }
        Command::Gauge { system, which, n, normalize } => {
            let sys = io.system_in(system)?;
            let moved = if *normalize {
                gauge_normalize(&sys)
            } else {
                let which = which.expect("clap requires --move without --normalize");
                gauge_transform(&sys, io.int_out(*n), which).map_err(|e| e.to_string())?
            };
            let pass = check_system(&moved, io.mode).ok().map(|r| r.pass);
            let body = json!({
                "input": io.system_out(&sys),
                "system": io.system_out(&moved),
                "check_pass": pass,
            });
            Ok(json_output("gauge", body, &v, false))
        }
    }
}

fn eval(io: Io, v: &mut Verifier, f: Fraction) -> Result<Output, String> {
    let external = io.sign.to_external(f);
    let numerator = numerator_closure(f);
    let denominator = denominator_closure(f);
    v.closure(&[f]);
    v.denominator(f, &denominator);
    let body = json!({
        "fraction": external.to_string(),
        "twist_vector": twist_vector_of(external).ok().map(|t| t.0),
        "class": classify(f),
        "numerator": io.fourplat_out(&numerator),
        "denominator": io.fourplat_out(&denominator),
        "wrap_number": wrap_number(f).0,
        "lens_space": lens_space_of(&io.fourplat(&numerator)).to_string(),
    });
    Ok(json_output("eval", body, v, false))
}

fn system_rows(sys: &TangleSystem) -> Vec<[Fraction; 3]> {
    let (Ok(oc), Ok(of)) = (sys.oc_fraction(), sys.of_fractions()) else {
        return Vec::new();
    };
    of.iter().flat_map(|&(_, x)| [[x, oc, sys.p()], [x, oc, sys.r()]]).collect()
}

fn enumerate(cli: &Cli, io: Io, v: &mut Verifier, search: Search, case: SystemCase) -> Result<Output, String> {
    if cli.opts.bound > SearchBounds::ENUMERATION_WARN {
        eprintln!("warning: enumeration above bound {} can take minutes", SearchBounds::ENUMERATION_WARN);
    }
    let systems = search.enumerate_systems(case);
    for sys in &systems {
        for row in system_rows(sys) {
            v.closure(&row);
        }
    }
    let class_name = |sys: &TangleSystem| match classify_solution(sys) {
        Ok(c) => format!("{c:?}"),
        Err(_) => "unclassified".to_string(),
    };
    if io.format == Format::Csv {
        let table = systems
            .iter()
            .map(|sys| {
                let ext = io.flip(sys).expect("enumerated systems are valid");
                let mut row = vec![case.to_string(), ext.p().to_string(), ext.r().to_string(), ext.oc().to_string()];
                row.extend(ext.of_entries().iter().map(|t| t.map_or(String::new(), |t| t.to_string())));
                row.push(class_name(sys));
                row
            })
            .collect();
        return csv_output(&["case", "P", "R", "Oc", "Of0", "Of1", "Of2", "Of3", "Of4", "class"], table, v);
    }
    let listed: Vec<Value> = systems
        .iter()
        .map(|sys| json!({"system": io.system_out(sys), "class": class_name(sys)}))
        .collect();
    let body = json!({
        "case": case,
        "bound": cli.opts.bound,
        "mode": io.mode,
        "count": systems.len(),
        "systems": listed,
    });
    Ok(json_output("enumerate", body, v, false))
}

fn check(io: Io, v: &mut Verifier, sys: &TangleSystem) -> Result<Output, String> {
    let report = check_system(sys, io.mode).map_err(|e| e.to_string())?;
    for row in system_rows(sys) {
        v.closure(&row);
    }
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|r| {
            json!({
                "k": r.k,
                "equation": r.equation,
                "target": io.fourplat_out(&r.target),
                "computed": r.computed.map(|b| io.fourplat_out(&b)),
                "error": r.error,
                "pass": r.pass,
            })
        })
        .collect();
    let body = json!({
        "system": io.system_out(sys),
        "mode": io.mode,
        "pass": report.pass,
        "distinct": report.distinct,
        "absent": report.absent,
        "rows": rows,
        "gauge_reduced": io.system_out(&report.gauge_reduced),
    });
    Ok(json_output("check", body, v, !report.pass))
}

fn verdict_json(v: &Verdict) -> Value {
    json!({
        "outcome": v.outcome,
        "theorem_id": v.theorem_id,
        "notes": v.notes,
        "assignment": v.assignment,
    })
}

fn classify_command(io: Io, v: &mut Verifier, sys: &TangleSystem) -> Result<Output, String> {
    let mut failed = false;
    let mut body = serde_json::Map::new();
    body.insert("system".into(), io.system_out(sys));
    let profile = count_profile(sys);
    body.insert(
        "profile".into(),
        json!({
            "infinite": profile.n_infinity,
            "integral": profile.n_integral,
            "strictly_rational": profile.n_strict,
            "labels": profile.labels,
        }),
    );
    if sys.is_all_rational() {
        let report = check_system(sys, io.mode).map_err(|e| e.to_string())?;
        for row in system_rows(sys) {
            v.closure(&row);
        }
        failed |= !report.pass;
        body.insert("check_pass".into(), json!(report.pass));
        let class = classify_solution(sys);
        failed |= class.is_err();
        body.insert(
            "class".into(),
            match &class {
                Ok(c) => json!(c),
                Err(e) => json!({"error": e.to_string()}),
            },
        );
        let secsol = match check_secsol(sys) {
            Ok(rows) => json!(rows
                .iter()
                .map(|r| json!({"k": r.k, "vertical": io.int_out(r.vertical), "horizontal": io.int_out(r.horizontal)}))
                .collect::<Vec<_>>()),
            Err(ClassifyError::NotApplicable(why)) => json!({"not_applicable": why}),
            Err(e) => {
                failed = true;
                json!({"error": e.to_string()})
            }
        };
        body.insert("secsol".into(), secsol);
        let thirdsol = match check_thirdsol(sys) {
            Ok(r) => json!(r),
            Err(ClassifyError::NotApplicable(why)) => json!({"not_applicable": why}),
            Err(e) => {
                failed = true;
                json!({"error": e.to_string()})
            }
        };
        body.insert("thirdsol".into(), thirdsol);
        let moreint = moreint_holds(sys);
        failed |= moreint == Some(false);
        body.insert("moreint".into(), json!(moreint));
    }
    let verdicts: serde_json::Map<String, Value> = sys
        .present()
        .map(|(k, of)| {
            let triple = ClassTriple::from_classes(
                flp_tangle::classify(sys.p()),
                sys.oc().class(),
                of.class(),
                Assignment::O1isOc,
            );
            let value = match triple {
                Ok(t) => verdict_json(&table1_verdict(sys.case(), &t)),
                Err(e) => json!({"error": e.to_string()}),
            };
            (k.to_string(), value)
        })
        .collect();
    body.insert("table1".into(), Value::Object(verdicts));
    Ok(json_output("classify", Value::Object(body), v, failed))
}

fn table1_command(
    io: Io,
    v: &Verifier,
    case: SystemCase,
    triple: Option<&str>,
    assignment: AssignmentArg,
) -> Result<Output, String> {
    let assignment = match assignment {
        AssignmentArg::O1IsOf => Assignment::O1isOf,
        AssignmentArg::O1IsOc => Assignment::O1isOc,
        AssignmentArg::Unassigned => Assignment::Unassigned,
    };
    if let Some(text) = triple {
        let labels = text
            .split(',')
            .map(|s| s.trim().parse::<Label>().map_err(|e| format!("--triple: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        let [p, o1, o2] = labels[..] else {
            return Err(format!("--triple: expected three labels, got {}", labels.len()));
        };
        let t = ClassTriple::new(p, o1, o2, assignment).map_err(|e| format!("--triple: {e}"))?;
        let body = json!({"case": case, "triple": text, "verdict": verdict_json(&table1_verdict(case, &t))});
        return Ok(json_output("table1", body, v, false));
    }
    let verdicts: Vec<(&table1::Row, Verdict)> = ROWS
        .iter()
        .map(|row| {
            let t = ClassTriple::new(row.p, row.o1, row.o2, assignment).expect("table rows have rational P");
            (row, table1_verdict(case, &t))
        })
        .collect();
    if io.format == Format::Csv {
        let table = verdicts
            .iter()
            .map(|(row, vd)| {
                vec![
                    row.p.to_string(),
                    row.o1.to_string(),
                    row.o2.to_string(),
                    row.citation.to_string(),
                    row.solution_text().to_string(),
                    format!("{:?}", vd.outcome),
                    vd.theorem_id.clone(),
                    vd.notes.clone(),
                    format!("{:?}", vd.assignment),
                ]
            })
            .collect();
        let header = ["P", "O1", "O2", "citation", "solution", "outcome", "theorem_id", "notes", "assignment"];
        return csv_output(&header, table, v);
    }
    let rows: Vec<Value> = verdicts
        .iter()
        .map(|(row, vd)| {
            json!({
                "P": row.p.to_string(),
                "O1": row.o1.to_string(),
                "O2": row.o2.to_string(),
                "citation": row.citation,
                "solution": row.solution_text(),
                "verdict": verdict_json(vd),
            })
        })
        .collect();
    Ok(json_output("table1", json!({"case": case, "rows": rows}), v, false))
}
