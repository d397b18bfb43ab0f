//! JSON encodings for behaviors, inequality instances and oracle verdicts.
//!
//! A behavior file looks like
//!
//! ```json
//! {
//!   "n_times": 2,
//!   "tables": {
//!     "1": {"+": 0.5, "-": 0.5},
//!     "2": {"+": 0.5, "-": 0.5},
//!     "1,2": {"++": 0.5, "+-": 0.0, "-+": 0.0, "--": 0.5}
//!   }
//! }
//! ```
//!
//! Outcome strings list times in ascending order, `+` for +1 and `-` for
//! −1; the first character belongs to the earliest measured time.

use std::collections::BTreeMap;

use macroreal::behavior::Behavior;
use macroreal::catalog::{EvalResult, InequalityInstance};
use macroreal::oracle::{NsitReport, OracleVerdict};
use macroreal::qubit::{Context, ProbTable};
use serde_json::{json, Map, Value};

use crate::{CliError, Result};

fn outcome_string(outcome: usize, arity: usize) -> String {
    (0..arity)
        .map(|p| {
            if outcome >> (arity - 1 - p) & 1 == 0 {
                '+'
            } else {
                '-'
            }
        })
        .collect()
}

fn parse_outcome(s: &str, arity: usize) -> Result<usize> {
    if s.len() != arity {
        return Err(CliError::input(format!(
            "outcome string {s:?} does not have {arity} characters"
        )));
    }
    let mut o = 0usize;
    for c in s.chars() {
        o = (o << 1)
            | match c {
                '+' => 0,
                '-' => 1,
                _ => {
                    return Err(CliError::input(format!(
                        "outcome string {s:?} contains {c:?}; expected '+' or '-'"
                    )))
                }
            };
    }
    Ok(o)
}

fn context_key(ctx: &Context) -> String {
    ctx.indices()
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_context(key: &str, n_times: usize) -> Result<Context> {
    let indices: Vec<u8> = key
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u8>()
                .map_err(|_| CliError::input(format!("bad context key {key:?}")))
        })
        .collect::<Result<_>>()?;
    Context::new(&indices, n_times).map_err(CliError::from)
}

pub fn behavior_to_json(b: &Behavior) -> Value {
    let mut tables = Map::new();
    for ctx in b.contexts() {
        let table = b.table(ctx).unwrap();
        let mut entries = Map::new();
        for o in 0..table.len() {
            entries.insert(outcome_string(o, table.arity()), json!(table.prob(o)));
        }
        tables.insert(context_key(ctx), Value::Object(entries));
    }
    json!({ "n_times": b.n_times(), "tables": Value::Object(tables) })
}

pub fn behavior_from_json(v: &Value) -> Result<Behavior> {
    let n_times = v
        .get("n_times")
        .and_then(Value::as_u64)
        .ok_or_else(|| CliError::input("behavior JSON needs an integer \"n_times\""))?
        as usize;
    let raw = v
        .get("tables")
        .and_then(Value::as_object)
        .ok_or_else(|| CliError::input("behavior JSON needs a \"tables\" object"))?;
    let mut tables = BTreeMap::new();
    for (key, entries) in raw {
        let ctx = parse_context(key, n_times)?;
        let arity = ctx.arity();
        let entries = entries
            .as_object()
            .ok_or_else(|| CliError::input(format!("table {key:?} is not an object")))?;
        let mut probs = vec![0.0; 1 << arity];
        for (outcome, p) in entries {
            let o = parse_outcome(outcome, arity)?;
            probs[o] = p.as_f64().ok_or_else(|| {
                CliError::input(format!("probability for {key:?}/{outcome:?} is not a number"))
            })?;
        }
        tables.insert(ctx, ProbTable::new(arity, probs)?);
    }
    Behavior::new(n_times, tables).map_err(CliError::from)
}

pub fn instance_to_json(inst: &InequalityInstance) -> Value {
    json!({
        "family": inst.family.name(),
        "index": inst.index,
        "variant": inst.variant,
        "signs": inst.signs,
        "terms": inst.terms.iter().map(|t| json!({
            "context": context_key(&t.context),
            "outcome": outcome_string(t.outcome as usize, t.context.arity()),
            "coeff": t.coeff,
        })).collect::<Vec<_>>(),
        "constant": inst.constant,
    })
}

pub fn eval_to_json(r: &EvalResult) -> Value {
    json!({
        "family": r.family.name(),
        "index": r.index,
        "lhs": r.lhs,
        "violated": r.violated,
    })
}

pub fn verdict_to_json(v: &OracleVerdict) -> Value {
    json!({
        "feasible": v.feasible,
        "max_residual": v.max_residual,
        "witness": v.witness.as_ref().map(|w| json!(w.atoms())),
    })
}

pub fn nsit_to_json(reports: &[NsitReport]) -> Value {
    Value::Array(
        reports
            .iter()
            .map(|r| {
                json!({
                    "condition": r.condition.name(),
                    "residual": r.residual,
                })
            })
            .collect(),
    )
}
