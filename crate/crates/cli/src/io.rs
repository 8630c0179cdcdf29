//! Sign conversion at the boundary, input parsing, and output assembly.

use std::fs;

use flp_tangle::oracle::{build_diagram, compare, goeritz, verify_closure, Closure, OracleError};
use flp_tangle::{
    EquivalenceMode, FourPlat, Fraction, SignConvention, Tangle, TangleSystem,
};
use serde_json::{json, Map, Value};

use crate::{Format, GlobalOpts, SystemInput};

pub const K_VALUES: usize = flp_tangle::system::K_VALUES;

/// Converts between the user's sign convention and the library's.
#[derive(Clone, Copy, Debug)]
pub struct Io {
    pub sign: SignConvention,
    pub mode: EquivalenceMode,
    pub format: Format,
}

impl Io {
    pub fn new(opts: &GlobalOpts) -> Self {
        Io {
            sign: if opts.biological_signs {
                SignConvention::Biological
            } else {
                SignConvention::Conway
            },
            mode: opts.mode,
            format: opts.format,
        }
    }

    pub fn inp(&self, f: Fraction) -> Fraction {
        self.sign.to_internal(f)
    }

    pub fn out(&self, f: Fraction) -> String {
        self.sign.to_external(f).to_string()
    }

    pub fn outs(&self, fs: &[Fraction]) -> Vec<String> {
        self.sorted(fs).iter().map(|f| f.to_string()).collect()
    }

    /// External values, in complexity order.
    pub fn sorted(&self, fs: &[Fraction]) -> Vec<Fraction> {
        let mut v: Vec<Fraction> = fs.iter().map(|&f| self.sign.to_external(f)).collect();
        v.sort_by(|a, b| a.cmp_by_complexity(b));
        v
    }

    /// The integer `n` as the user writes it.
    pub fn int_out(&self, n: i64) -> i64 {
        match self.sign {
            SignConvention::Conway => n,
            SignConvention::Biological => -n,
        }
    }

    fn tangle(&self, t: Tangle) -> Tangle {
        match t {
            Tangle::Rational(f) => Tangle::Rational(self.sign.to_internal(f)),
            other => other,
        }
    }

    /// The four-plat as seen in the user's convention.
    pub fn fourplat(&self, b: &FourPlat) -> FourPlat {
        match self.sign {
            SignConvention::Conway => *b,
            SignConvention::Biological => b.mirror(),
        }
    }

    pub fn fourplat_out(&self, b: &FourPlat) -> String {
        self.fourplat(b).display_in(self.mode)
    }

    /// Applies the (involutive) sign change to every entry.
    pub fn flip(&self, sys: &TangleSystem) -> Result<TangleSystem, String> {
        TangleSystem::new(
            sys.case(),
            self.inp(sys.p()),
            self.inp(sys.r()),
            self.tangle(sys.oc()),
            sys.of_entries().map(|t| t.map(|t| self.tangle(t))),
        )
        .map_err(|e| e.to_string())
    }

    pub fn system_out(&self, sys: &TangleSystem) -> Value {
        match self.flip(sys) {
            Ok(s) => serde_json::to_value(&s).expect("systems serialize"),
            Err(e) => Value::String(e),
        }
    }

    pub fn system_in(&self, input: &SystemInput) -> Result<TangleSystem, String> {
        let external = match &input.system {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
                serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?
            }
            None => {
                let rows = parse_rows::<Tangle>(input.of.as_deref().unwrap_or(""))?;
                let mut of = [None; K_VALUES];
                for (k, t) in rows {
                    of[k] = Some(t);
                }
                TangleSystem::new(
                    input.case.expect("clap requires --case"),
                    input.p.expect("clap requires --P"),
                    input.r.expect("clap requires --R"),
                    input.oc.expect("clap requires --Oc"),
                    of,
                )
                .map_err(|e| e.to_string())?
            }
        };
        self.flip(&external)
    }
}

pub fn parse_list(s: &str) -> Result<Vec<Fraction>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<Fraction>().map_err(|e| format!("--sum: {e}")))
        .collect()
}

/// `k=value` pairs, or plain values numbered from 0. `_` skips a row.
pub fn parse_rows<T: std::str::FromStr>(s: &str) -> Result<Vec<(usize, T)>, String>
where
    T::Err: std::fmt::Display,
{
    let mut rows = Vec::new();
    for (i, item) in s.split(',').map(str::trim).enumerate() {
        let (k, value) = match item.split_once('=') {
            Some((k, v)) => (k.trim().parse::<usize>().map_err(|_| format!("--Of: bad row index {k:?}"))?, v.trim()),
            None => (i, item),
        };
        if k >= K_VALUES {
            return Err(format!("--Of: row {k} is outside 0..{K_VALUES}"));
        }
        if value == "_" || value.is_empty() {
            continue;
        }
        if rows.iter().any(|(j, _)| *j == k) {
            return Err(format!("--Of: row {k} given twice"));
        }
        rows.push((k, value.parse::<T>().map_err(|e| format!("--Of: {e}"))?));
    }
    Ok(rows)
}

/// Oracle cross-checks collected while a command runs.
pub struct Verifier {
    io: Io,
    enabled: bool,
    checked: usize,
    mismatches: Vec<Value>,
}

impl Verifier {
    pub fn new(io: Io, enabled: bool) -> Self {
        Verifier {
            io,
            enabled,
            checked: 0,
            mismatches: Vec::new(),
        }
    }

    /// Numerator closure of `summands`, skipped when it is not a four-plat.
    pub fn closure(&mut self, summands: &[Fraction]) {
        if !self.enabled {
            return;
        }
        match verify_closure(summands) {
            Ok(check) => {
                self.checked += 1;
                if !check.agrees() {
                    self.mismatch(summands, "numerator", &check.expected, check.determinant, check.linking_q);
                }
            }
            Err(OracleError::Closure(_)) => {}
            Err(e) => self.mismatches.push(json!({
                "summands": self.io.outs(summands),
                "error": e.to_string(),
            })),
        }
    }

    pub fn denominator(&mut self, f: Fraction, expected: &FourPlat) {
        if !self.enabled {
            return;
        }
        match build_diagram(&[f], Closure::Denominator) {
            Ok(d) => {
                self.checked += 1;
                let check = compare(&goeritz(&d), expected);
                if !check.agrees() {
                    self.mismatch(&[f], "denominator", expected, check.determinant, check.linking_q);
                }
            }
            Err(e) => self.mismatches.push(json!({"summands": [self.io.out(f)], "error": e.to_string()})),
        }
    }

    fn mismatch(&mut self, summands: &[Fraction], closure: &str, expected: &FourPlat, det: u64, linking: Option<i64>) {
        let summands: Vec<String> = summands.iter().map(|&f| self.io.out(f)).collect();
        eprintln!(
            "oracle mismatch: {closure} closure of {summands:?}: closure_of_sum {} vs oracle determinant {det}, linking {linking:?}",
            self.io.fourplat_out(expected)
        );
        self.mismatches.push(json!({
            "summands": summands,
            "closure": closure,
            "computed": self.io.fourplat_out(expected),
            "oracle_determinant": det,
            "oracle_linking": linking,
        }));
    }

    pub fn failed(&self) -> bool {
        !self.mismatches.is_empty()
    }

    fn report(&self) -> Option<Value> {
        self.enabled.then(|| {
            json!({
                "checked": self.checked,
                "mismatches": self.mismatches,
            })
        })
    }
}

/// Everything a command prints, and whether it should exit 1.
pub struct Output {
    pub text: String,
    pub failed: bool,
}

/// Pretty JSON with `schema` first and an `oracle` report when verifying.
pub fn json_output(command: &str, body: Value, verifier: &Verifier, failed: bool) -> Output {
    let mut map = Map::new();
    map.insert("schema".into(), Value::String(format!("flp/{command}/1")));
    if let Value::Object(fields) = body {
        map.extend(fields);
    }
    if let Some(report) = verifier.report() {
        map.insert("oracle".into(), report);
    }
    let mut text = serde_json::to_string_pretty(&Value::Object(map)).expect("json values serialize");
    text.push('\n');
    Output {
        text,
        failed: failed || verifier.failed(),
    }
}

pub fn csv_output(header: &[&str], rows: Vec<Vec<String>>, verifier: &Verifier) -> Result<Output, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| e.to_string())?;
    for row in rows {
        w.write_record(&row).map_err(|e| e.to_string())?;
    }
    let bytes = w.into_inner().map_err(|e| e.to_string())?;
    Ok(Output {
        text: String::from_utf8(bytes).expect("csv of utf-8 fields"),
        failed: verifier.failed(),
    })
}
