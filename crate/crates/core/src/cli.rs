//! Report builders behind the `udtfs` binary. Every command yields a
//! [`Report`] whose JSON form has sorted keys and no floats, so outputs are
//! byte-stable across runs and thread counts.

use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use crate::compress::{compress_full, pad_certificate, roundtrip_of, CompressOptions, DEFAULT_NODE_BUDGET};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::gen::GenSpec;
use crate::indiscernible::{
    alternation_blocks, define_type_over_indiscernible, find_order_sensitive, flip_test, is_delta_indiscernible,
    is_delta_indiscernible_set, order_predicate_check,
};
use crate::pattern::{
    delta_n_oracle, independence_dimension, local_vc_density_check, max_tp_pattern, sauer_check, tp_bound_k,
};
use crate::scheme::{lift_chain_check, lift_setup, lift_toy, scheme_valid, suite};
use crate::trace::{load_system, realized_types, trace_of_row, TraceSystem, TypeAssignment};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CONTRACT: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Domain(_) | Error::Io(_) => EXIT_INPUT,
        Error::Contract(_) | Error::Undetermined { .. } => EXIT_CONTRACT,
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
    }
}

/// Where a trace system comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum Input {
    File(PathBuf),
    Gen(GenSpec),
    Fixture(String),
}

impl Input {
    /// Reads a bare source argument: `gen:SPEC`, a JSON spec, a fixture
    /// name, or a file path.
    pub fn parse_source(s: &str) -> Result<Input> {
        if s.starts_with("gen:") || s.trim_start().starts_with('{') {
            return Ok(Input::Gen(GenSpec::from_str(s)?));
        }
        if fixtures::by_name(s).is_some() {
            return Ok(Input::Fixture(s.to_string()));
        }
        Ok(Input::File(PathBuf::from(s)))
    }

    pub fn load(&self, seed: Option<u64>) -> Result<TraceSystem> {
        match self {
            Input::File(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
                load_system(&text)
            }
            Input::Gen(spec) => match seed {
                Some(s) => spec.clone().with_seed(s).build(),
                None => spec.build(),
            },
            Input::Fixture(name) => {
                fixtures::by_name(name).ok_or_else(|| Error::domain(format!("unknown fixture {name:?}")))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub input_digest: String,
    pub results: Value,
    pub version: String,
}

impl Report {
    pub fn new(command: &str, sys: &TraceSystem, results: Value) -> Self {
        Report {
            command: command.to_string(),
            input_digest: sys.digest(),
            results,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("reports serialize");
        let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
        s.push('\n');
        s
    }
}

fn names(sys: &TraceSystem, cols: &[usize]) -> Vec<String> {
    cols.iter().map(|&c| sys.col_name(c)).collect()
}

/// Resolves a comma-separated column list; `all` (or nothing) means every
/// column.
pub fn parse_columns(sys: &TraceSystem, csv: Option<&str>) -> Result<Vec<usize>> {
    match csv.map(str::trim) {
        None | Some("all") | Some("") => Ok((0..sys.col_count()).collect()),
        Some(s) => s.split(',').map(|n| sys.resolve_col(n.trim())).collect(),
    }
}

pub fn analyze(sys: &TraceSystem) -> Result<Report> {
    let (dim, witness) = independence_dimension(sys);
    let pos = max_tp_pattern(sys, true);
    let neg = max_tp_pattern(sys, false);
    let mut checks = Vec::new();
    for n in 1..=sys.col_count().min(4) {
        let c = local_vc_density_check(sys, n)?;
        checks.push(json!({"n": c.n, "pass": c.pass, "failing": c.failing.as_ref().map(|f| names(sys, f))}));
    }
    let all: Vec<usize> = (0..sys.col_count()).collect();
    let results = json!({
        "rows": sys.row_count(),
        "cols": sys.col_count(),
        "id_dim": dim,
        "id_witness": names(sys, &witness),
        "tp_positive": pos.length,
        "tp_negative": neg.length,
        "tp_K": tp_bound_k(sys),
        "vc_density_checks": checks,
        "sauer_ok": sauer_check(sys, &all)?,
    });
    Ok(Report::new("analyze", sys, results))
}

/// Which types `compress` handles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeSelection {
    Bits(String),
    Row(usize),
    All,
}

fn compress_entry(sys: &TraceSystem, domain: &[usize], t: &TypeAssignment, opts: &CompressOptions) -> Result<Value> {
    let (cert, ladder) = compress_full(sys, domain, t, opts)?;
    let uniform = if cert.n > 0 { Some(pad_certificate(&cert)?) } else { None };
    let params = cert.parameter_count();
    let report = roundtrip_of(sys, domain, t, cert)?;
    Ok(json!({
        "type": domain.iter().map(|&c| if t.sign(c) == Some(true) { '1' } else { '0' }).collect::<String>(),
        "ladder_height": ladder.height(),
        "ladder_size": ladder.size(),
        "certificate": report.certificate,
        "parameter_count": params,
        "uniform": uniform,
        "roundtrip_ok": report.ok(),
        "mismatches": names(sys, &report.mismatches),
    }))
}

pub fn compress_report(
    sys: &TraceSystem,
    domain: &[usize],
    selection: &TypeSelection,
    budget: Option<u64>,
) -> Result<Report> {
    if domain.len() < 2 {
        return Err(Error::contract("compression needs a domain of at least two columns"));
    }
    let opts = CompressOptions { budget: Some(budget.unwrap_or(DEFAULT_NODE_BUDGET)), record_k: true };
    let types: Vec<TypeAssignment> = match selection {
        TypeSelection::Bits(bits) => {
            if bits.chars().count() != domain.len() || !bits.chars().all(|c| c == '0' || c == '1') {
                return Err(Error::domain(format!("type {bits:?} must have one 0/1 per domain column")));
            }
            let signs: Vec<bool> = bits.chars().map(|c| c == '1').collect();
            vec![TypeAssignment::new(sys, domain.iter().copied().zip(signs))?]
        }
        TypeSelection::Row(r) => vec![trace_of_row(sys, *r, domain)?],
        TypeSelection::All => realized_types(sys, domain)?,
    };
    let entries = crate::par::map(&types, |t| compress_entry(sys, domain, t, &opts))
        .into_iter()
        .collect::<Result<Vec<Value>>>()?;
    let mismatches: usize = entries.iter().map(|e| e["mismatches"].as_array().map_or(0, Vec::len)).sum();
    let results = json!({
        "domain": names(sys, domain),
        "entries": entries,
        "total_mismatches": mismatches,
    });
    Ok(Report::new("compress", sys, results))
}

pub fn indisc_report(sys: &TraceSystem, seq: &[usize]) -> Result<Report> {
    let (n, _) = independence_dimension(sys);
    let oracle = delta_n_oracle(sys, n + 1)?;
    let ind = is_delta_indiscernible(seq, &oracle);
    let set = is_delta_indiscernible_set(seq, &oracle);
    let order = if ind.holds && !set.holds && !ind.vacuous { find_order_sensitive(seq, &oracle).ok() } else { None };
    let max_blocks = (0..sys.row_count())
        .map(|r| alternation_blocks(sys, r, seq).map(|b| b.len()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .unwrap_or(0);
    let definitions = if ind.holds && seq.len() >= 2 {
        let mut out = Vec::new();
        for t in realized_types(sys, seq)? {
            let def = define_type_over_indiscernible(sys, seq, &t)?;
            let reproduces = seq.iter().all(|&c| def.evaluate(c) == t.sign(c).expect("in domain"));
            out.push(json!({
                "type": seq.iter().map(|&c| if t.sign(c) == Some(true) { '1' } else { '0' }).collect::<String>(),
                "shape": def.shape(),
                "definition": def,
                "reproduces": reproduces,
            }));
        }
        Some(out)
    } else {
        None
    };
    let results = json!({
        "seq": names(sys, seq),
        "n": n,
        "arity": n + 1,
        "indiscernible": ind.holds,
        "vacuous": ind.vacuous,
        "failing_tuple": ind.failing_tuple,
        "set": set.holds,
        "order_sensitive": order,
        "flip_test": order.as_ref().map(|o| flip_test(seq, &oracle, o)),
        "order_predicate": order.as_ref().map(|o| order_predicate_check(seq, &oracle, o)),
        "max_blocks": max_blocks,
        "alternation_ok": !ind.holds || max_blocks <= n + 1,
        "definitions": definitions,
    });
    Ok(Report::new("indisc", sys, results))
}

pub fn schemes_report(sys: &TraceSystem, suite_name: &str, max_b: usize) -> Result<Report> {
    let (target, scheme) = suite(suite_name, sys)?;
    let validity = scheme_valid(&target, &scheme, max_b)?;
    let chain = if suite_name == "lift" {
        let s = lift_setup(lift_toy()?)?;
        Some(lift_chain_check(&s.msys, &s.scheme_hat, &s.gamma, &s.scheme_gamma, max_b)?)
    } else {
        None
    };
    let results = json!({
        "suite": suite_name,
        "tag": scheme.tag(),
        "arity": scheme.arity(),
        "system_digest": target.digest(),
        "valid": validity.valid,
        "max_b": validity.max_b,
        "sets_checked": validity.sets_checked,
        "types_checked": validity.types_checked,
        "counterexample": validity.counterexample,
        "lift_chain": chain,
    });
    Ok(Report::new("schemes", sys, results))
}

pub fn gen_report(spec: &GenSpec, sys: &TraceSystem, out: Option<&str>) -> Report {
    let results = json!({
        "spec": spec.to_string(),
        "rows": sys.row_count(),
        "cols": sys.col_count(),
        "out": out,
    });
    Report::new("gen", sys, results)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analyze_chain() {
        let r = analyze(&fixtures::chain4x3()).unwrap();
        assert_eq!(r.results["id_dim"], 1);
        assert_eq!(r.results["tp_K"], 3);
        assert_eq!(r.results["sauer_ok"], true);
        let cube = analyze(&fixtures::cube2()).unwrap();
        assert_eq!(cube.results["vc_density_checks"][1]["pass"], false);
    }

    #[test]
    fn compress_chain() {
        let sys = fixtures::chain4x3();
        let dom = parse_columns(&sys, Some("b0,b1,b2")).unwrap();
        let r = compress_report(&sys, &dom, &TypeSelection::Bits("111".into()), None).unwrap();
        let cert = &r.results["entries"][0]["certificate"];
        assert_eq!(cert["n"], 1);
        assert_eq!(cert["gammas"][0]["cols"], json!([2]));
        let all = compress_report(&sys, &dom, &TypeSelection::All, None).unwrap();
        assert_eq!(all.results["entries"].as_array().unwrap().len(), 4);
        assert_eq!(all.results["total_mismatches"], 0);
        let e = compress_report(&sys, &dom, &TypeSelection::Bits("010".into()), None).unwrap_err();
        assert_eq!(exit_code(&e), EXIT_CONTRACT);
    }

    #[test]
    fn indisc_halfline() {
        let sys = fixtures::halfline(10, 6);
        let seq = parse_columns(&sys, None).unwrap();
        let r = indisc_report(&sys, &seq).unwrap();
        assert_eq!(r.results["indiscernible"], true);
        assert_eq!(r.results["set"], false);
        assert_eq!(r.results["order_sensitive"]["s"], "10");
        assert_eq!(r.results["order_sensitive"]["t"], 0);
    }

    #[test]
    fn sources() {
        assert!(matches!(Input::parse_source("gen:cube:2").unwrap(), Input::Gen(GenSpec::Cube { dim: 2 })));
        assert!(matches!(Input::parse_source("CHAIN4x3").unwrap(), Input::Fixture(_)));
        assert!(matches!(Input::parse_source("some/file.txt").unwrap(), Input::File(_)));
        let e = Input::File("/nonexistent/x".into()).load(None).unwrap_err();
        assert_eq!(exit_code(&e), EXIT_INPUT);
    }
}
