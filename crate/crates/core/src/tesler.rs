//! Tesler polytope combinatorics read straight off support patterns.
//!
//! For `a ≥ 0`, a point of `Tes_n(a)` is a vertex exactly when each row of its
//! support holds at most one 1, and two vertices are adjacent when their
//! supports differ by moving the 1 of exactly one row (other rows may only
//! gain or lose their single 1).

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{HookVector, UpperTri};
use crate::rat::Rat;

/// Default cap on `n` for the support-pattern walk.
pub const DEFAULT_MAX_N: usize = 8;

/// The chain `(k, j(k)), (j(k), j²(k)), …` of positions followed through the
/// unique nonzero entry of each row, ending on the diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DepChain {
    pub start: usize,
    pub chain: Vec<(usize, usize)>,
    pub matrix: UpperTri,
}

fn not_vertex(reason: impl Into<String>) -> Error {
    Error::NotAVertex { reason: reason.into() }
}

/// Checks the support characterisation of vertices; returns the hook vector.
pub fn vertex_check(v: &UpperTri) -> Result<HookVector> {
    if !v.is_nonnegative() {
        return Err(not_vertex("negative entry"));
    }
    let eta = v.hook_vector();
    if let Some(i) = eta.first_negative() {
        return Err(not_vertex(format!("hook sum {i} is negative")));
    }
    if let Some(i) = (1..=v.n()).find(|&i| v.row_support(i).len() > 1) {
        return Err(not_vertex(format!("row {i} has more than one nonzero entry")));
    }
    Ok(eta)
}

/// The column of the unique nonzero entry of row `k`, if any.
fn lead(v: &UpperTri, k: usize) -> Option<usize> {
    v.row_support(k).first().copied()
}

pub fn tesler_vertices(a: &HookVector) -> Result<Vec<UpperTri>> {
    tesler_vertices_capped(a, DEFAULT_MAX_N)
}

/// All vertices of `Tes_n(a)`, sorted lexicographically by coordinates.
///
/// Rows are filled top to bottom: row `i` must carry `a_i` plus everything
/// flowing in from above, so a positive load goes to exactly one position and a
/// zero load leaves the row empty.
pub fn tesler_vertices_capped(a: &HookVector, max_n: usize) -> Result<Vec<UpperTri>> {
    a.require_nonnegative()?;
    let n = a.n();
    if n > max_n {
        return Err(Error::SizeTooLarge { n, max: max_n });
    }
    let mut out = BTreeSet::new();
    let mut m = UpperTri::zeros(n);
    let mut incoming = vec![Rat::zero(); n + 1];
    fill_row(a, 1, &mut m, &mut incoming, &mut out);
    Ok(out.into_iter().collect())
}

fn fill_row(a: &HookVector, i: usize, m: &mut UpperTri, incoming: &mut [Rat], out: &mut BTreeSet<UpperTri>) {
    let n = a.n();
    if i > n {
        out.insert(m.clone());
        return;
    }
    let load = a.get(i) + &incoming[i];
    if load.is_zero() {
        fill_row(a, i + 1, m, incoming, out);
        return;
    }
    for j in i..=n {
        m.set(i, j, load.clone());
        if j > i {
            incoming[j] += &load;
        }
        fill_row(a, i + 1, m, incoming, out);
        if j > i {
            incoming[j] -= &load;
        }
        m.set(i, j, Rat::zero());
    }
}

/// How a row of `supp(w)` arises from the same row of `supp(v)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowOp {
    Unchanged,
    Cleared,
    Filled,
    Moved,
}

pub fn row_ops(v: &UpperTri, w: &UpperTri) -> Vec<RowOp> {
    (1..=v.n())
        .map(|k| match (lead(v, k), lead(w, k)) {
            (p, q) if p == q => RowOp::Unchanged,
            (Some(_), None) => RowOp::Cleared,
            (None, Some(_)) => RowOp::Filled,
            _ => RowOp::Moved,
        })
        .collect()
}

fn same_polytope(v: &UpperTri, w: &UpperTri) -> Result<()> {
    if v.n() != w.n() {
        return Err(Error::SizeMismatch { expected: v.n(), got: w.n() });
    }
    let (ev, ew) = (vertex_check(v)?, vertex_check(w)?);
    if ev != ew {
        return Err(not_vertex("the two matrices have different hook sums"));
    }
    Ok(())
}

pub fn are_adjacent(v: &UpperTri, w: &UpperTri) -> Result<bool> {
    same_polytope(v, w)?;
    Ok(row_ops(v, w).iter().filter(|op| **op == RowOp::Moved).count() == 1)
}

/// Index pairs `(i, j)`, `i < j`, of adjacent vertices in `vertices`.
pub fn edges(vertices: &[UpperTri]) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            if are_adjacent(&vertices[i], &vertices[j])? {
                out.push((i, j));
            }
        }
    }
    Ok(out)
}

pub fn dep_chain(v: &UpperTri, k: usize) -> Result<DepChain> {
    vertex_check(v)?;
    let n = v.n();
    if k == 0 || k > n {
        return Err(Error::IndexOutOfRange { index: k, max: n });
    }
    let mut chain = Vec::new();
    let mut matrix = UpperTri::zeros(n);
    let mut row = k;
    loop {
        let Some(col) = lead(v, row) else {
            return if row == k {
                Err(Error::ZeroRow { row: k })
            } else {
                Err(not_vertex(format!("chain from row {k} reaches zero row {row}")))
            };
        };
        chain.push((row, col));
        matrix.set(row, col, crate::rat::one());
        if col == row {
            break;
        }
        row = col;
    }
    Ok(DepChain { start: k, chain, matrix })
}

/// The unique nonzero entry of row `k`.
fn row_value(v: &UpperTri, k: usize) -> Option<&Rat> {
    lead(v, k).map(|j| v.get(k, j))
}

/// `w − v`, checked against `c (D_w(k) − D_v(k))` where `k` is the first row
/// whose supports differ and `c` the nonzero entry of that row.
pub fn edge_vector(v: &UpperTri, w: &UpperTri) -> Result<UpperTri> {
    if !are_adjacent(v, w)? {
        return Err(Error::NotAdjacent);
    }
    let ops = row_ops(v, w);
    let k = ops.iter().position(|op| *op != RowOp::Unchanged).expect("adjacent vertices differ") + 1;
    let c = row_value(v, k).ok_or(Error::ZeroRow { row: k })?.clone();
    if row_value(w, k) != Some(&c) {
        return Err(Error::FormulaViolation(format!("row {k} entries of v and w differ")));
    }
    let diff = w - v;
    let predicted = (&dep_chain(w, k)?.matrix - &dep_chain(v, k)?.matrix).scale(&c);
    if diff != predicted {
        return Err(Error::FormulaViolation(format!("w - v differs from {c}·(D_w({k}) - D_v({k}))")));
    }
    Ok(diff)
}

/// Positions of the single 1 in each row of a vertex of `Tes_n(a₀)`, `a₀ > 0`.
pub(crate) fn full_support(v: &UpperTri) -> Result<Vec<usize>> {
    let eta = vertex_check(v)?;
    if !eta.is_positive() {
        return Err(Error::PreconditionViolated("the source vertex must come from a strictly positive hook vector".into()));
    }
    Ok((1..=v.n()).map(|i| lead(v, i).expect("positive hook sums fill every row")).collect())
}

/// The unique point of `Tes_n(a)` whose support lies inside `supp(v)`.
pub fn support_map_vertex(v: &UpperTri, a: &HookVector) -> Result<UpperTri> {
    a.require_nonnegative()?;
    if a.n() != v.n() {
        return Err(Error::SizeMismatch { expected: v.n(), got: a.n() });
    }
    let cols = full_support(v)?;
    let n = v.n();
    let mut out = UpperTri::zeros(n);
    for i in 1..=n {
        let inflow: Rat = (1..i).map(|r| out.get(r, i).clone()).sum();
        out.set(i, cols[i - 1], a.get(i) + inflow);
    }
    Ok(out)
}

/// Two points of `Tes_n(a)` that between them touch every inequality
/// `m_{i,j} ≥ 0`, `(i,j) ≠ (n,n)`: the diagonal matrix `diag(a)` and the path
/// flow along the superdiagonal.
pub fn tightness_witnesses(a: &HookVector) -> Result<(UpperTri, UpperTri)> {
    a.require_nonnegative()?;
    let n = a.n();
    let m1 = UpperTri::diag(a.as_slice());
    let mut m2 = UpperTri::zeros(n);
    let mut prefix = Rat::zero();
    for i in 1..=n {
        prefix += a.get(i);
        if i < n {
            m2.set(i, i + 1, prefix.clone());
        } else {
            m2.set(n, n, prefix.clone());
        }
    }
    debug_assert_eq!(m1.hook_vector(), *a);
    debug_assert_eq!(m2.hook_vector(), *a);
    Ok((m1, m2))
}

/// Support-preserving vertex map `Vert(Tes_n(a₀)) → Vert(Tes_n(a))`.
pub fn support_map(vertices: &[UpperTri], a: &HookVector) -> Result<Vec<UpperTri>> {
    vertices.iter().map(|v| support_map_vertex(v, a)).collect()
}

pub fn is_negative_free(v: &UpperTri) -> bool {
    v.flat().iter().all(|x| !x.is_negative())
}
