//! Human-readable rendering for `--pretty`: an indented outline in which every
//! matrix object (`{"n", "rows"}`) is drawn as a bracketed triangle.

use serde_json::Value;
use teslerforge::matrix::{TildeUpperTri, UpperTri};

fn as_triangle(v: &Value) -> Option<String> {
    let obj = v.as_object()?;
    if obj.len() != 2 || !obj.contains_key("n") || !obj.contains_key("rows") {
        return None;
    }
    if let Ok(m) = serde_json::from_value::<UpperTri>(v.clone()) {
        return Some(m.to_string());
    }
    serde_json::from_value::<TildeUpperTri>(v.clone()).ok().map(|m| m.to_string())
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()) => {
            Some(format!("[{}]", a.iter().map(|x| scalar(x).unwrap_or_default()).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn push_block(out: &mut String, indent: usize, block: &str) {
    for line in block.lines() {
        out.push_str(&" ".repeat(indent));
        out.push_str(line);
        out.push('\n');
    }
}

fn walk(out: &mut String, v: &Value, indent: usize) {
    if let Some(tri) = as_triangle(v) {
        push_block(out, indent, &tri);
        return;
    }
    match v {
        Value::Object(obj) => {
            for (k, x) in obj {
                match scalar(x) {
                    Some(s) => push_block(out, indent, &format!("{k}: {s}")),
                    None => {
                        push_block(out, indent, &format!("{k}:"));
                        walk(out, x, indent + 2);
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                match scalar(x) {
                    Some(s) => push_block(out, indent, &format!("- {s}")),
                    None => {
                        push_block(out, indent, &format!("- [{i}]"));
                        walk(out, x, indent + 2);
                    }
                }
            }
        }
        other => push_block(out, indent, &scalar(other).unwrap_or_default()),
    }
}

pub fn pretty(v: &Value) -> String {
    let mut out = String::new();
    walk(&mut out, v, 0);
    out
}
