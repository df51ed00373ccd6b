//! Browser bindings: three operations taking the text typed into the demo page
//! and returning JSON for the page to draw.
//!
//! Vectors are written `2, 2, 3, 4` (rationals as `p/q`); the inequality shift
//! `b̃` is written row by row, rows separated by `;`, e.g. `-1 2 -3 -4; -5 6 7; -8 9`.

use serde_json::{json, Value};
use teslerforge::defcone::{self, DeformingVector};
use teslerforge::flow::{self, NetFlow};
use teslerforge::matrix::{HookVector, TildeUpperTri};
use teslerforge::polyhedra::Oracle;
use teslerforge::rat::{self, int, Rat};
use teslerforge::tesler;
use wasm_bindgen::prelude::wasm_bindgen;

/// Largest n drawn on the page (5! = 120 vertices).
pub const MAX_N: usize = 5;

fn numbers(text: &str) -> Result<Vec<Rat>, String> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| rat::parse(t).map_err(|e| e.to_string()))
        .collect()
}

fn vector(text: &str) -> Result<HookVector, String> {
    let v = numbers(text)?;
    if v.is_empty() {
        return Err("enter at least one number".into());
    }
    if v.len() > MAX_N {
        return Err(format!("the demo draws n ≤ {MAX_N}"));
    }
    Ok(HookVector::new(v))
}

fn tilde(text: &str, n: usize) -> Result<TildeUpperTri, String> {
    if text.trim().is_empty() {
        return Ok(TildeUpperTri::zeros(n));
    }
    let rows = text.split(';').map(numbers).filter(|r| !matches!(r, Ok(v) if v.is_empty())).collect::<Result<Vec<_>, _>>()?;
    TildeUpperTri::from_rows(rows).map_err(|e| format!("b̃ rows: {e}"))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("library types serialize")
}

fn finish(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

/// Vertices of `Tes_n(a)` and its edges, each edge labelled with the row whose
/// 1 moves.
pub fn tesler_graph_json(a: &str) -> Result<Value, String> {
    let a = vector(a)?;
    let vs = tesler::tesler_vertices_capped(&a, MAX_N).map_err(|e| e.to_string())?;
    let edges = tesler::edges(&vs).map_err(|e| e.to_string())?;
    let labelled: Vec<Value> = edges
        .iter()
        .map(|&(i, j)| {
            let row = tesler::row_ops(&vs[i], &vs[j]).iter().position(|op| *op != tesler::RowOp::Unchanged).unwrap_or(0) + 1;
            json!([i, j, row])
        })
        .collect();
    Ok(json!({
        "n": a.n(),
        "vertices": vs.iter().map(|v| rat::vec_to_json(v.flat())).collect::<Vec<_>>(),
        "edges": labelled,
    }))
}

/// Cone membership of `(a, b̃)`; inside the cone, the image of every vertex of
/// `Tes_n(1, …, 1)` in `Q(a, b̃)` together with the translate data.
pub fn deformation_json(a: &str, btilde: &str) -> Result<Value, String> {
    let a = vector(a)?;
    let n = a.n();
    let dv = DeformingVector::new(a, tilde(btilde, n)?).map_err(|e| e.to_string())?;
    let check = to_value(&defcone::cone_check(&dv));
    let base = tesler::tesler_vertices(&HookVector::new(vec![int(1); n])).map_err(|e| e.to_string())?;
    let base_edges = tesler::edges(&base).map_err(|e| e.to_string())?;
    let mut out = json!({
        "n": n,
        "check": check,
        "base": base.iter().map(|v| rat::vec_to_json(v.flat())).collect::<Vec<_>>(),
        "edges": base_edges,
    });
    if defcone::cone_contains(&dv) {
        let images = defcone::deform_map(&base, &dv).map_err(|e| e.to_string())?;
        let tr = defcone::tesler_translate(&dv).map_err(|e| e.to_string())?;
        let distinct: std::collections::BTreeSet<_> = images.iter().collect();
        out["images"] = json!(images.iter().map(|v| rat::vec_to_json(v.flat())).collect::<Vec<_>>());
        out["distinct"] = json!(distinct.len());
        out["translate"] = to_value(&tr);
    }
    Ok(out)
}

/// Whether `Flow_n(a)` deforms `Tes_n(1, …, 1)`, with the certificate.
pub fn flow_json(a: &str) -> Result<Value, String> {
    let a = NetFlow::new(vector(a)?).map_err(|e| e.to_string())?;
    let verdict = flow::is_deformation_of_tesler(&a, &Oracle::default()).map_err(|e| e.to_string())?;
    Ok(json!({"verdict": to_value(&verdict), "prefix_sums": rat::vec_to_json(&a.prefix_sums())}))
}

#[wasm_bindgen]
pub fn tesler_graph(a: &str) -> String {
    finish(tesler_graph_json(a))
}

#[wasm_bindgen]
pub fn deformation(a: &str, btilde: &str) -> String {
    finish(deformation_json(a, btilde))
}

#[wasm_bindgen]
pub fn flow_verdict(a: &str) -> String {
    finish(flow_json(a))
}
