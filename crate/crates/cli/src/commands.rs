use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use statesep::boolean::{Problem, MAX_ARITY, MAX_ENUMERATION_ARITY};
use statesep::filters::{canonical_system, permute_columns, sample_outcomes, verify_properties_with};
use statesep::oracle::{
    decide, deutsch_filter_setup, deutsch_report, deutsch_run, generalized_deutsch_setup, parity_classical,
    parity_pairwise_quantum, parity_separability, MAX_SEPARABILITY_ARITY,
};
use statesep::tables::{diff_against_golden, emit_table, TableName};
use statesep::verify::{verify_all, CheckStatus};
use statesep::{BooleanFunction, Error, Permutation, Result};

use crate::{Cli, Command};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    PropertyFailure,
    PaperDiff,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Ok => "ok",
            Status::PropertyFailure => "property-failure",
            Status::PaperDiff => "paper-diff",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CommandReport {
    pub command: String,
    pub status: Status,
    pub payload: Value,
    pub diagnostics: Vec<String>,
}

/// A report plus its human-readable rendering.
pub type Outcome = (CommandReport, Vec<String>);

fn report(command: String, ok: bool, failure: Status, payload: Value, diagnostics: Vec<String>) -> CommandReport {
    CommandReport { command, status: if ok { Status::Ok } else { failure }, payload, diagnostics }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

pub fn run(cli: &Cli, echo: String) -> Result<Outcome> {
    match &cli.command {
        Command::Filters { k, n, permutation, verify } => filters(cli, echo, *k, *n, permutation.as_deref(), *verify),
        Command::Deutsch { function, shots } => deutsch(cli, echo, function, *shots),
        Command::Gendeutsch { problem, i, j } => gendeutsch(echo, problem, *i, *j),
        Command::Parity { k, function } => parity(echo, *k, function.as_deref()),
        Command::Tables { name } => tables(echo, name),
        Command::VerifyAll => verify(cli, echo),
    }
}

fn filters(cli: &Cli, echo: String, k: usize, n: usize, permutation: Option<&str>, verify: bool) -> Result<Outcome> {
    let base = canonical_system::<f64>(k, n)?;
    let perm = match permutation {
        Some(text) => Permutation::parse(text, base.d())?,
        None => Permutation::identity(base.d()),
    };
    let system = permute_columns(&base, &perm)?;
    let rows = system.rows();
    let one_line: Vec<usize> = perm.one_line().iter().map(|i| i + 1).collect();
    let eigenvalues: Vec<&[i64]> = system.filters().iter().map(|f| f.eigenvalues()).collect();
    let mut text = vec![format!("k = {k}, n = {n}, d = {}", system.d())];
    if permutation.is_some() {
        text.push(format!("permutation: {}", one_line.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")));
    }
    text.extend(rows.render());
    let mut payload = json!({
        "k": k,
        "n": n,
        "d": system.d(),
        "permutation": one_line,
        "eigenvalues": eigenvalues,
        "rows": rows.render(),
    });
    let mut ok = true;
    if verify {
        let props = verify_properties_with(&system, cli.tol);
        ok = props.all_pass();
        let mark = |b: bool| if b { "pass" } else { "fail" };
        text.push(format!(
            "F1 {}  F2 {}  F3 {}  commuting {}",
            mark(props.f1),
            mark(props.f2),
            mark(props.f3),
            mark(props.commuting)
        ));
        payload["verification"] = to_value(&props);
    }
    Ok((report(echo, ok, Status::PropertyFailure, payload, Vec::new()), text))
}

fn signed_ket(amps: &[statesep::C64], tol: f64) -> String {
    let terms: Vec<String> = amps
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > tol)
        .map(|(i, a)| {
            let label = statesep::BasisLabel::from_index(2, 2, i).ket();
            let sign = if a.re < 0.0 { "-" } else { "+" };
            if (a.norm() - 1.0).abs() <= tol {
                format!("{sign}{label}")
            } else {
                format!("{sign}{:.4}{label}", a.norm())
            }
        })
        .collect();
    terms.join(" ")
}

fn deutsch(cli: &Cli, echo: String, function: &str, shots: Option<usize>) -> Result<Outcome> {
    let f: BooleanFunction = function.parse()?;
    if f.arity() != 1 {
        return Err(Error::MalformedTable(format!("{function}: expected a 2-entry truth table")));
    }
    let r = deutsch_report(&f)?;
    let verdict = |c: bool| if c { "constant" } else { "not constant" };
    let filter_constant = r.filter_outcome == statesep::oracle::DeutschOutcome::Constant;
    let final_constant = r.final_outcome == statesep::oracle::DeutschOutcome::Constant;
    let mut text = vec![
        format!("f = {}", r.function),
        format!("final state: {}", signed_ket(r.final_state.amplitudes(), cli.tol)),
        format!("readout: {}", verdict(final_constant)),
        format!("filter F^D1 eigenvalue {}: {}", r.filter_eigenvalue.round(), verdict(filter_constant)),
        format!("truth table: {}", verdict(r.constant)),
    ];
    let mut payload = to_value(&r);
    payload["filter_eigenvalue"] = json!(r.filter_eigenvalue.round());
    if let Some(shots) = shots {
        let setup = deutsch_filter_setup::<f64>()?;
        let run = deutsch_run::<f64>(&f)?;
        let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
        let filter = &setup.system.filters()[0];
        let counts = sample_outcomes(filter, setup.system.context(), &run.after_oracle, shots, &mut rng)?;
        let by_eigenvalue: Vec<Value> =
            filter.eigenvalues().iter().zip(&counts).map(|(e, c)| json!({ "eigenvalue": e, "count": c })).collect();
        for (e, c) in filter.eigenvalues().iter().zip(&counts) {
            text.push(format!("sampled eigenvalue {e}: {c}/{shots}"));
        }
        payload["sampling"] = json!({ "shots": shots, "seed": cli.seed, "counts": by_eigenvalue });
    }
    Ok((report(echo, r.consistent(), Status::PropertyFailure, payload, Vec::new()), text))
}

fn gendeutsch(echo: String, problem: &str, i: usize, j: usize) -> Result<Outcome> {
    let problem: Problem = problem.parse()?;
    let setup = generalized_deutsch_setup::<f64>()?;
    let d = decide(&setup, problem, i, j)?;
    let text = vec![
        format!("{problem}: {}", problem.description()),
        format!("function {}, phase pattern {}", d.function, d.pattern),
        format!("eigenvalue {}", d.eigenvalue.round()),
        format!("verdict {}, classical {}", d.verdict, d.classical),
    ];
    let mut payload = to_value(&d);
    payload["eigenvalue"] = json!(d.eigenvalue.round());
    Ok((report(echo, d.agrees(), Status::PropertyFailure, payload, Vec::new()), text))
}

fn parity(echo: String, k: usize, function: Option<&str>) -> Result<Outcome> {
    match function {
        Some(text) => {
            let f: BooleanFunction = text.parse()?;
            if f.arity() != k {
                return Err(Error::MalformedTable(format!("{text} has arity {}, expected k = {k}", f.arity())));
            }
            if !(1..=MAX_ARITY).contains(&k) {
                return Err(Error::KOutOfRange { k, min: 1, max: MAX_ARITY });
            }
            let classical = parity_classical(&f);
            let quantum = parity_pairwise_quantum::<f64>(&f)?;
            let ok = classical.sign == quantum.sign;
            let lines = vec![
                format!("f = {f}"),
                format!("classical: {} ({} queries)", classical.sign, classical.queries),
                format!("pairwise quantum: {} ({} oracle invocations)", quantum.sign, quantum.queries),
            ];
            let payload = json!({ "k": k, "function": f.table_string(), "classical": classical, "quantum": quantum });
            Ok((report(echo, ok, Status::PropertyFailure, payload, Vec::new()), lines))
        }
        None => {
            if !(1..=MAX_ENUMERATION_ARITY).contains(&k) {
                return Err(Error::KOutOfRange { k, min: 1, max: MAX_ENUMERATION_ARITY });
            }
            let (mut even, mut agree) = (0usize, 0usize);
            let all = BooleanFunction::all(k)?;
            for f in &all {
                let classical = parity_classical(f);
                let quantum = parity_pairwise_quantum::<f64>(f)?;
                even += usize::from(!classical.sign.is_odd());
                agree += usize::from(classical.sign == quantum.sign);
            }
            let mut lines = vec![
                format!("{} functions of {k} bits: {even} even, {} odd", all.len(), all.len() - even),
                format!("pairwise quantum agrees on {agree}/{}", all.len()),
                format!("queries per function: classical {}, quantum {}", 1usize << k, 1usize << (k - 1)),
            ];
            let mut payload = json!({
                "k": k,
                "functions": all.len(),
                "even": even,
                "odd": all.len() - even,
                "agreeing": agree,
                "classical_queries": 1usize << k,
                "quantum_invocations": 1usize << (k - 1),
            });
            if k <= MAX_SEPARABILITY_ARITY {
                let s = parity_separability(k)?;
                lines.push(format!(
                    "span dimensions: even {}, odd {}; single filter possible: {}",
                    s.even_span_dim, s.odd_span_dim, s.single_filter_possible
                ));
                payload["separability"] = to_value(&s);
            }
            Ok((report(echo, agree == all.len(), Status::PropertyFailure, payload, Vec::new()), lines))
        }
    }
}

fn tables(echo: String, name: &str) -> Result<Outcome> {
    let name: TableName = name.parse()?;
    let table = emit_table(name)?;
    let diff = diff_against_golden(&table);
    let mut lines: Vec<String> = table.lines();
    let mut diagnostics = Vec::new();
    if diff.partial {
        diagnostics.push("transcription lists only some rows; compared as an ordered subset".to_owned());
    }
    if diff.is_empty() {
        lines.push("diff: empty".to_owned());
    } else {
        for m in &diff.mismatches {
            lines.push(format!("line {}: golden {:?}, regenerated {:?}", m.line, m.golden, m.regenerated));
        }
        lines.extend(diff.missing.iter().map(|l| format!("missing: {l:?}")));
        lines.extend(diff.extra.iter().map(|l| format!("extra: {l:?}")));
    }
    let payload = json!({ "table": table, "diff": diff });
    Ok((report(echo, diff.is_empty(), Status::PaperDiff, payload, diagnostics), lines))
}

fn verify(cli: &Cli, echo: String) -> Result<Outcome> {
    let r = verify_all(cli.seed);
    let mut lines = Vec::new();
    let mut diagnostics = Vec::new();
    for c in &r.checks {
        let tag = match c.status {
            CheckStatus::Pass => "pass",
            CheckStatus::Warning => "warn",
            CheckStatus::Fail => "FAIL",
        };
        let detail = if c.detail.is_empty() { String::new() } else { format!(" ({})", c.detail) };
        lines.push(format!("{tag}  {}: {}{detail}", c.module, c.name));
        if c.status == CheckStatus::Warning {
            diagnostics.push(format!("documented discrepancy: {}", c.name));
        }
    }
    lines.push(format!(
        "{} passed, {} warnings, {} failed",
        r.count(CheckStatus::Pass),
        r.count(CheckStatus::Warning),
        r.count(CheckStatus::Fail)
    ));
    Ok((report(echo, r.ok(), Status::PropertyFailure, to_value(&r), diagnostics), lines))
}
