//! Flag values: inline JSON, or `@path` to read JSON from a file.

use serde::de::DeserializeOwned;
use serde_json::{json, Value};
use teslerforge::defcone::DeformingVector;
use teslerforge::flow::NetFlow;
use teslerforge::matrix::{HookVector, TildeUpperTri, UpperTri};
use teslerforge::rat::{self, Rat};
use teslerforge::Error;

use crate::CliError;

pub fn load(flag: &'static str, raw: &str) -> Result<Value, CliError> {
    let text = match raw.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("--{flag}: cannot read {path}: {e}")))?,
        None => raw.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| parse_error(flag, e))
}

fn parse_error(flag: &'static str, e: impl std::fmt::Display) -> CliError {
    CliError::Domain(Error::Parse { what: flag, reason: e.to_string() })
}

fn decode<T: DeserializeOwned>(flag: &'static str, v: Value) -> Result<T, CliError> {
    serde_json::from_value(v).map_err(|e| parse_error(flag, e))
}

pub fn required<'a>(flag: &'static str, v: &'a Option<String>) -> Result<&'a str, CliError> {
    v.as_deref().ok_or_else(|| CliError::Usage(format!("missing required flag --{flag}")))
}

/// A plain array, or an object carrying it under `"a"` (the net-flow form).
pub fn vector(flag: &'static str, raw: &str) -> Result<HookVector, CliError> {
    let v = load(flag, raw)?;
    let arr = match v {
        Value::Object(mut o) if o.contains_key("a") => o.remove("a").expect("checked"),
        other => other,
    };
    Ok(HookVector::new(rat::vec_from_json(&arr)?))
}

pub fn rats(flag: &'static str, raw: &str) -> Result<Vec<Rat>, CliError> {
    Ok(rat::vec_from_json(&load(flag, raw)?)?)
}

pub fn net_flow(flag: &'static str, raw: &str) -> Result<NetFlow, CliError> {
    let v = load(flag, raw)?;
    if v.is_object() {
        return decode(flag, v);
    }
    Ok(NetFlow::new(HookVector::new(rat::vec_from_json(&v)?))?)
}

/// `{"n": .., "rows": ..}` or the bare rows.
fn with_rows(v: Value, n_from_rows: impl Fn(usize) -> usize) -> Value {
    match v {
        Value::Array(rows) => {
            let n = n_from_rows(rows.iter().filter(|r| r.as_array().is_some_and(|a| !a.is_empty())).count());
            json!({"n": n, "rows": rows})
        }
        other => other,
    }
}

pub fn matrix(flag: &'static str, raw: &str) -> Result<UpperTri, CliError> {
    decode(flag, with_rows(load(flag, raw)?, |rows| rows))
}

pub fn tilde(flag: &'static str, raw: &str) -> Result<TildeUpperTri, CliError> {
    decode(flag, with_rows(load(flag, raw)?, |rows| rows + 1))
}

pub fn deforming_vector(a: &str, btilde: &str) -> Result<DeformingVector, CliError> {
    Ok(DeformingVector::new(vector("a", a)?, tilde("btilde", btilde)?)?)
}
