use serde::Serialize;
use serde_json::{json, Value};
use teslerforge::defcone::{self, DeformingVector};
use teslerforge::flow::{self, NetFlow};
use teslerforge::matrix::{HookVector, UpperTri};
use teslerforge::polyhedra::{HRep, Oracle, DEFAULT_MAX_DIM};
use teslerforge::rat::{self, int};
use teslerforge::tesler::{self, RowOp};
use teslerforge::Error;

use crate::input::{self, required};
use crate::{CliError, Command, DefconeCmd, Flags, FlowCmd, OracleCmd, TesCmd};

type Out = Result<Value, CliError>;

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("library types serialize")
}

fn oracle() -> Result<Oracle, CliError> {
    match std::env::var("TESLERFORGE_MAX_DIM") {
        Ok(s) => s
            .trim()
            .parse()
            .map(Oracle::new)
            .map_err(|_| CliError::Usage(format!("TESLERFORGE_MAX_DIM must be a non-negative integer, got {s:?}"))),
        Err(_) => Ok(Oracle::new(DEFAULT_MAX_DIM)),
    }
}

pub fn execute(cmd: &Command, f: &Flags) -> Out {
    match cmd {
        Command::Tes(c) => tes(*c, f),
        Command::Defcone(c) => defcone(*c, f),
        Command::Flow(c) => flow(*c, f),
        Command::Oracle(c) => oracle_cmd(*c, f),
    }
}

fn a_vector(f: &Flags) -> Result<HookVector, CliError> {
    input::vector("a", required("a", &f.a)?)
}

fn base_vector(f: &Flags, n: usize) -> Result<HookVector, CliError> {
    match &f.a0 {
        Some(raw) => input::vector("a0", raw),
        None => Ok(HookVector::new(vec![int(1); n])),
    }
}

fn deforming_vector(f: &Flags) -> Result<DeformingVector, CliError> {
    input::deforming_vector(required("a", &f.a)?, required("btilde", &f.btilde)?)
}

fn tes(cmd: TesCmd, f: &Flags) -> Out {
    match cmd {
        TesCmd::Vertices => {
            let a = a_vector(f)?;
            let vs = tesler::tesler_vertices_capped(&a, f.max_n)?;
            Ok(json!({"n": a.n(), "count": vs.len(), "vertices": to_value(&vs)}))
        }
        TesCmd::Edges => {
            let a = a_vector(f)?;
            let vs = tesler::tesler_vertices_capped(&a, f.max_n)?;
            let mut edges = Vec::new();
            for (i, j) in tesler::edges(&vs)? {
                let row = tesler::row_ops(&vs[i], &vs[j]).iter().position(|op| *op != RowOp::Unchanged).expect("distinct") + 1;
                let vector = tesler::edge_vector(&vs[i], &vs[j])?;
                edges.push(json!({"from": i, "to": j, "row": row, "vector": to_value(&vector)}));
            }
            Ok(json!({"vertices": to_value(&vs), "edges": edges}))
        }
        TesCmd::Hooksum => {
            let m = input::matrix("matrix", required("matrix", &f.matrix)?)?;
            Ok(json!({"eta": to_value(&m.hook_vector())}))
        }
        TesCmd::DeformMap => {
            let a = a_vector(f)?;
            let a0 = base_vector(f, a.n())?;
            let base = tesler::tesler_vertices_capped(&a0, f.max_n)?;
            let images = tesler::support_map(&base, &a)?;
            let distinct: std::collections::BTreeSet<&UpperTri> = images.iter().collect();
            let map: Vec<Value> =
                base.iter().zip(&images).map(|(v, w)| json!({"from": to_value(v), "to": to_value(w)})).collect();
            Ok(json!({"a0": to_value(&a0), "a": to_value(&a), "image_count": distinct.len(), "map": map}))
        }
    }
}

fn defcone(cmd: DefconeCmd, f: &Flags) -> Out {
    match cmd {
        DefconeCmd::Check => {
            let dv = deforming_vector(f)?;
            let mut doc = to_value(&defcone::cone_check(&dv));
            doc["contains"] = json!(defcone::cone_contains(&dv));
            Ok(doc)
        }
        DefconeCmd::Face => {
            let face = match &f.btilde {
                Some(_) => defcone::cone_face_membership(&deforming_vector(f)?)?,
                None => defcone::face_index(&a_vector(f)?)?,
            };
            Ok(json!({"face": to_value(&face)}))
        }
        DefconeCmd::Translate => Ok(to_value(&defcone::tesler_translate(&deforming_vector(f)?)?)),
        DefconeCmd::DeformVertex => {
            let dv = deforming_vector(f)?;
            let v = input::matrix("vertex", required("vertex", &f.vertex)?)?;
            Ok(json!({"vertex": to_value(&defcone::deform_vertex(&v, &dv)?)}))
        }
        DefconeCmd::Compare => {
            let a = a_vector(f)?;
            let b = input::vector("b", required("b", &f.b)?)?;
            Ok(to_value(&defcone::tesler_deforms(&a, &b)?))
        }
    }
}

fn net_flow(f: &Flags) -> Result<NetFlow, CliError> {
    input::net_flow("a", required("a", &f.a)?)
}

fn flow(cmd: FlowCmd, f: &Flags) -> Out {
    let a = net_flow(f)?;
    match cmd {
        FlowCmd::Feasible => Ok(json!({
            "feasible": flow::is_feasible(&a),
            "infeasible_at": flow::infeasible_at(&a),
            "prefix_sums": rat::vec_to_json(&a.prefix_sums()),
        })),
        FlowCmd::Critical => {
            let crit = flow::critical_position(&a)?;
            let forced: Vec<Value> = flow::forced_entries(&a)?
                .into_iter()
                .map(|((i, j), v)| json!({"i": i, "j": j, "value": rat::to_json(&v)}))
                .collect();
            Ok(json!({"l": crit.l, "voided": crit.voided, "forced": forced}))
        }
        FlowCmd::Reduce => Ok(to_value(&flow::translate_reduce(&a)?)),
        FlowCmd::Witness => {
            let m = match f.m {
                Some(m) => m,
                None => a.a.first_negative().ok_or_else(|| {
                    Error::PreconditionViolated("net flow has no negative entry; pass --m".into())
                })?,
            };
            Ok(json!({"m": m, "flow": to_value(&flow::witness_flow(&a, m)?)}))
        }
        FlowCmd::Tight => Ok(to_value(&flow::tight_description(&a, &oracle()?)?)),
        FlowCmd::Verdict => Ok(to_value(&flow::is_deformation_of_tesler(&a, &oracle()?)?)),
    }
}

fn hrep(f: &Flags) -> Result<HRep, CliError> {
    let v = input::load("hrep", required("hrep", &f.hrep)?)?;
    serde_json::from_value(v).map_err(|e| CliError::Domain(Error::Parse { what: "hrep", reason: e.to_string() }))
}

fn oracle_cmd(cmd: OracleCmd, f: &Flags) -> Out {
    let o = oracle()?;
    let h = hrep(f)?;
    match cmd {
        OracleCmd::Vertices => Ok(to_value(&o.enumerate_vertices(&h)?)),
        OracleCmd::Minimize => {
            let c = input::rats("objective", required("objective", &f.objective)?)?;
            let (value, point) = o.minimize(&h, &c)?;
            Ok(json!({"value": rat::to_json(&value), "point": rat::vec_to_json(&point)}))
        }
        OracleCmd::IsDeformation => {
            let a = input::rats("a", required("a", &f.a)?)?;
            let b = input::rats("b", required("b", &f.b)?)?;
            let p0_vertices = o.enumerate_vertices(&h)?;
            let check = o.is_deformation(&h, &p0_vertices, &a, &b)?;
            Ok(json!({
                "kind": to_value(&check.kind),
                "failure": to_value(&check.failure),
                "vertex_map": check.vertex_map,
                "q": to_value(&check.q),
            }))
        }
    }
}
