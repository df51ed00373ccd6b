//! Brute-force exact polyhedral oracle.
//!
//! Everything here works on a plain H-representation and knows nothing about
//! Tesler matrices, deformation cones or flows; the other modules are checked
//! against it. Vertices come from exhaustive basis enumeration: every choice of
//! `dim − rank(E)` inequality rows that pins down a unique point is solved
//! exactly and kept if feasible.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rat::{self, Rat};

/// Largest ambient dimension the oracle accepts unless configured otherwise.
pub const DEFAULT_MAX_DIM: usize = 15;

/// A linear row `⟨coeffs, x⟩ (= or ≤) rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    #[serde(with = "rat::serde_rat_vec")]
    pub coeffs: Vec<Rat>,
    #[serde(with = "rat::serde_rat")]
    pub rhs: Rat,
}

impl Row {
    pub fn new(coeffs: Vec<Rat>, rhs: Rat) -> Self {
        Self { coeffs, rhs }
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        rat::dot(&self.coeffs, x)
    }
}

/// `E x = α`, `G x ≤ β`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "HRepRepr")]
pub struct HRep {
    pub dim: usize,
    pub eq: Vec<Row>,
    pub ineq: Vec<Row>,
}

#[derive(Deserialize)]
struct HRepRepr {
    dim: usize,
    #[serde(default)]
    eq: Vec<Row>,
    #[serde(default)]
    ineq: Vec<Row>,
}

impl TryFrom<HRepRepr> for HRep {
    type Error = Error;
    fn try_from(r: HRepRepr) -> Result<Self> {
        HRep::new(r.dim, r.eq, r.ineq)
    }
}

impl HRep {
    pub fn new(dim: usize, eq: Vec<Row>, ineq: Vec<Row>) -> Result<Self> {
        if let Some(bad) = eq.iter().chain(&ineq).find(|r| r.coeffs.len() != dim) {
            return Err(Error::SizeMismatch { expected: dim, got: bad.coeffs.len() });
        }
        Ok(Self { dim, eq, ineq })
    }

    /// Same rows, new right-hand sides.
    pub fn with_rhs(&self, eq_rhs: &[Rat], ineq_rhs: &[Rat]) -> Result<Self> {
        if eq_rhs.len() != self.eq.len() {
            return Err(Error::SizeMismatch { expected: self.eq.len(), got: eq_rhs.len() });
        }
        if ineq_rhs.len() != self.ineq.len() {
            return Err(Error::SizeMismatch { expected: self.ineq.len(), got: ineq_rhs.len() });
        }
        let eq = self.eq.iter().zip(eq_rhs).map(|(r, b)| Row::new(r.coeffs.clone(), b.clone())).collect();
        let ineq = self.ineq.iter().zip(ineq_rhs).map(|(r, b)| Row::new(r.coeffs.clone(), b.clone())).collect();
        Ok(Self { dim: self.dim, eq, ineq })
    }

    pub fn eq_rhs(&self) -> Vec<Rat> {
        self.eq.iter().map(|r| r.rhs.clone()).collect()
    }

    pub fn ineq_rhs(&self) -> Vec<Rat> {
        self.ineq.iter().map(|r| r.rhs.clone()).collect()
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        x.len() == self.dim
            && self.eq.iter().all(|r| r.eval(x) == r.rhs)
            && self.ineq.iter().all(|r| r.eval(x) <= r.rhs)
    }

    /// Moves the given inequality rows into the equalities.
    pub fn tighten(&self, rows: &[usize]) -> Self {
        let mut eq = self.eq.clone();
        let mut ineq = Vec::with_capacity(self.ineq.len());
        for (i, r) in self.ineq.iter().enumerate() {
            if rows.contains(&i) {
                eq.push(r.clone());
            } else {
                ineq.push(r.clone());
            }
        }
        Self { dim: self.dim, eq, ineq }
    }
}

/// Vertex list with adjacency; vertices are lexicographically sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VRep {
    #[serde(with = "rat::serde_rat_mat")]
    pub vertices: Vec<Vec<Rat>>,
    pub adjacency: Vec<(usize, usize)>,
    #[serde(default)]
    pub active_sets: Vec<Vec<usize>>,
}

impl VRep {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn index_of(&self, x: &[Rat]) -> Option<usize> {
        self.vertices.binary_search_by(|v| v.as_slice().cmp(x)).ok()
    }

    pub fn are_adjacent(&self, i: usize, j: usize) -> bool {
        let key = if i < j { (i, j) } else { (j, i) };
        self.adjacency.binary_search(&key).is_ok()
    }

    /// Vertex set shifted by `t`, with adjacency carried along.
    pub fn translate(&self, t: &[Rat]) -> VRep {
        let moved: Vec<Vec<Rat>> = self.vertices.iter().map(|v| v.iter().zip(t).map(|(a, b)| a + b).collect()).collect();
        let mut order: Vec<usize> = (0..moved.len()).collect();
        order.sort_by(|&a, &b| moved[a].cmp(&moved[b]));
        let mut new_index = vec![0; moved.len()];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let mut adjacency: Vec<(usize, usize)> = self
            .adjacency
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (new_index[a], new_index[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        adjacency.sort_unstable();
        VRep {
            vertices: order.iter().map(|&i| moved[i].clone()).collect(),
            adjacency,
            active_sets: order.iter().map(|&i| self.active_sets.get(i).cloned().unwrap_or_default()).collect(),
        }
    }
}

/// Why a candidate polytope failed the deformation test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Failure {
    EmptyQ,
    NonTight { row: usize },
    NonVertexIntersection { vertex: usize },
    /// The equality rows are not constant on the candidate.
    NotInAffineTranslate,
    /// The tight right-hand side describes a strictly larger polytope.
    DescriptionMismatch,
}

impl From<&Failure> for Error {
    fn from(f: &Failure) -> Self {
        match *f {
            Failure::EmptyQ => Error::EmptyQ,
            Failure::NonTight { row } => Error::NonTight { row },
            Failure::NonVertexIntersection { vertex } => Error::NonVertexIntersection { vertex },
            Failure::NotInAffineTranslate => {
                Error::PreconditionViolated("equalities are not constant on the candidate".into())
            }
            Failure::DescriptionMismatch => {
                Error::PreconditionViolated("the base description does not cut out the candidate".into())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeformKind {
    Weak,
    Strong,
    NotDeformation,
}

/// Outcome of the facet-intersection deformation test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformCheck {
    pub kind: DeformKind,
    pub failure: Option<Failure>,
    /// Vertices of the candidate polytope (empty on failure before enumeration).
    pub q: VRep,
    /// Image of each base vertex, as an index into `q.vertices`.
    pub vertex_map: Vec<usize>,
}

impl DeformCheck {
    fn fail(failure: Failure, q: VRep) -> Self {
        Self { kind: DeformKind::NotDeformation, failure: Some(failure), q, vertex_map: Vec::new() }
    }

    pub fn is_deformation(&self) -> bool {
        self.kind != DeformKind::NotDeformation
    }

    pub fn is_weak(&self) -> bool {
        self.kind == DeformKind::Weak
    }

    pub fn images(&self) -> Vec<Vec<Rat>> {
        self.vertex_map.iter().map(|&i| self.q.vertices[i].clone()).collect()
    }

    pub fn into_result(self) -> Result<Self> {
        match &self.failure {
            Some(f) => Err(f.into()),
            None => Ok(self),
        }
    }
}

/// Oracle configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Oracle {
    pub max_dim: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Self { max_dim: DEFAULT_MAX_DIM }
    }
}

impl Oracle {
    pub fn new(max_dim: usize) -> Self {
        Self { max_dim }
    }

    fn guard(&self, h: &HRep) -> Result<()> {
        if h.dim > self.max_dim {
            return Err(Error::DimensionTooLarge { dim: h.dim, max: self.max_dim });
        }
        Ok(())
    }

    pub fn enumerate_vertices(&self, h: &HRep) -> Result<VRep> {
        self.guard(h)?;
        let eq: Vec<(&[Rat], &Rat)> = h.eq.iter().map(|r| (r.coeffs.as_slice(), &r.rhs)).collect();
        let Some(space) = linalg::affine_solve(&eq, h.dim) else {
            return Ok(VRep::default());
        };
        let k = space.basis.len();
        // Inequalities in the coordinates of the affine hull of E x = α.
        let reduced: Vec<(Vec<Rat>, Rat)> = h
            .ineq
            .iter()
            .map(|r| {
                let coeffs = space.basis.iter().map(|b| r.eval(b)).collect();
                (coeffs, &r.rhs - r.eval(&space.x0))
            })
            .collect();
        let lift = |y: &[Rat]| -> Vec<Rat> {
            let mut x = space.x0.clone();
            for (t, b) in y.iter().zip(&space.basis) {
                if !t.is_zero() {
                    for (xi, bi) in x.iter_mut().zip(b) {
                        *xi += t * bi;
                    }
                }
            }
            x
        };

        let mut found: BTreeSet<Vec<Rat>> = BTreeSet::new();
        if k == 0 {
            if reduced.iter().all(|(_, b)| !b.is_negative()) {
                found.insert(space.x0.clone());
            }
        } else {
            let all: Vec<&[Rat]> = reduced.iter().map(|(c, _)| c.as_slice()).collect();
            if linalg::rank(&all, k) < k {
                return Err(Error::UnboundedOrRankDeficient);
            }
            for subset in (0..reduced.len()).combinations(k) {
                let a: Vec<&[Rat]> = subset.iter().map(|&i| reduced[i].0.as_slice()).collect();
                let b: Vec<&Rat> = subset.iter().map(|&i| &reduced[i].1).collect();
                let Some(y) = linalg::solve_square(&a, &b) else { continue };
                if reduced.iter().all(|(c, rhs)| &rat::dot(c, &y) <= rhs) {
                    found.insert(lift(&y));
                }
            }
        }

        let vertices: Vec<Vec<Rat>> = found.into_iter().collect();
        let active_sets: Vec<Vec<usize>> = vertices
            .iter()
            .map(|v| h.ineq.iter().enumerate().filter(|(_, r)| r.eval(v) == r.rhs).map(|(i, _)| i).collect())
            .collect();
        let mut adjacency = Vec::new();
        for i in 0..vertices.len() {
            for j in i + 1..vertices.len() {
                let common: Vec<&[Rat]> = active_sets[i]
                    .iter()
                    .filter(|r| active_sets[j].binary_search(r).is_ok())
                    .map(|&r| reduced[r].0.as_slice())
                    .collect();
                // The smallest face containing both is cut out by the shared
                // tight rows; it is an edge iff it has dimension one.
                if k >= 1 && linalg::rank(&common, k) == k - 1 {
                    adjacency.push((i, j));
                }
            }
        }
        Ok(VRep { vertices, adjacency, active_sets })
    }

    /// Minimum of `⟨objective, x⟩`; ties go to the lexicographically smallest vertex.
    pub fn minimize(&self, h: &HRep, objective: &[Rat]) -> Result<(Rat, Vec<Rat>)> {
        if objective.len() != h.dim {
            return Err(Error::SizeMismatch { expected: h.dim, got: objective.len() });
        }
        let v = self.enumerate_vertices(h)?;
        minimize_over(&v, objective).ok_or(Error::EmptyPolytope)
    }

    /// Facet-intersection test for the candidate `{E x = a, G x ≤ b}` against
    /// a base polytope whose description `p0` is assumed minimal.
    pub fn is_deformation(&self, p0: &HRep, p0_vertices: &VRep, a: &[Rat], b: &[Rat]) -> Result<DeformCheck> {
        let q_h = p0.with_rhs(a, b)?;
        let q = self.enumerate_vertices(&q_h)?;
        if q.is_empty() {
            return Ok(DeformCheck::fail(Failure::EmptyQ, q));
        }
        for (row, g) in q_h.ineq.iter().enumerate() {
            let attained = q.vertices.iter().any(|v| g.eval(v) == g.rhs);
            if !attained {
                return Ok(DeformCheck::fail(Failure::NonTight { row }, q));
            }
        }
        let mut vertex_map = Vec::with_capacity(p0_vertices.len());
        for (vertex, active) in p0_vertices.active_sets.iter().enumerate() {
            let face = self.enumerate_vertices(&q_h.tighten(active))?;
            let image = match face.vertices.as_slice() {
                [single] => q.index_of(single),
                _ => None,
            };
            match image {
                Some(idx) => vertex_map.push(idx),
                None => return Ok(DeformCheck::fail(Failure::NonVertexIntersection { vertex }, q)),
            }
        }
        let distinct: BTreeSet<usize> = vertex_map.iter().copied().collect();
        let kind = if distinct.len() == vertex_map.len() && distinct.len() == q.len() {
            DeformKind::Weak
        } else {
            DeformKind::Strong
        };
        Ok(DeformCheck { kind, failure: None, q, vertex_map })
    }

    /// Drops redundant rows: implicit equalities become equalities (keeping a
    /// linearly independent subset) and only one facet-defining inequality per
    /// facet is kept. Returns the description and its vertex set.
    pub fn minimal_description(&self, h: &HRep) -> Result<(HRep, VRep)> {
        let v = self.enumerate_vertices(h)?;
        if v.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        let nv = v.len();
        let tight_at = |row: usize| -> Vec<usize> { (0..nv).filter(|&i| v.active_sets[i].binary_search(&row).is_ok()).collect() };

        let implicit: Vec<usize> = (0..h.ineq.len()).filter(|&r| tight_at(r).len() == nv).collect();
        let mut eq: Vec<Row> = Vec::new();
        for row in h.eq.iter().chain(implicit.iter().map(|&r| &h.ineq[r])) {
            let mut rows: Vec<&[Rat]> = eq.iter().map(|r| r.coeffs.as_slice()).collect();
            let before = linalg::rank(&rows, h.dim);
            rows.push(&row.coeffs);
            if linalg::rank(&rows, h.dim) > before {
                eq.push(row.clone());
            }
        }

        let dim_p = affine_rank(&v.vertices, &(0..nv).collect::<Vec<_>>());
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut ineq = Vec::new();
        for r in (0..h.ineq.len()).filter(|r| !implicit.contains(r)) {
            let tight = tight_at(r);
            if tight.is_empty() || dim_p == 0 {
                continue;
            }
            if affine_rank(&v.vertices, &tight) == dim_p - 1 && seen.insert(tight) {
                ineq.push(h.ineq[r].clone());
            }
        }
        let minimal = HRep { dim: h.dim, eq, ineq };
        let mv = self.enumerate_vertices(&minimal)?;
        debug_assert_eq!(mv.vertices, v.vertices);
        Ok((minimal, mv))
    }

    /// Decides whether the polytope with vertex set `q` is a deformation of
    /// the base polytope described minimally by `p0`, by reading off the tight
    /// right-hand side from `q` and running [`Oracle::is_deformation`].
    pub fn polytope_deforms(&self, p0: &HRep, p0_vertices: &VRep, q: &VRep) -> Result<DeformCheck> {
        let Some(first) = q.vertices.first() else {
            return Ok(DeformCheck::fail(Failure::EmptyQ, VRep::default()));
        };
        let a: Vec<Rat> = p0.eq.iter().map(|r| r.eval(first)).collect();
        if q.vertices.iter().any(|x| p0.eq.iter().zip(&a).any(|(r, ai)| &r.eval(x) != ai)) {
            return Ok(DeformCheck::fail(Failure::NotInAffineTranslate, q.clone()));
        }
        let b: Vec<Rat> = p0
            .ineq
            .iter()
            .map(|r| q.vertices.iter().map(|x| r.eval(x)).max().expect("nonempty"))
            .collect();
        let described = self.enumerate_vertices(&p0.with_rhs(&a, &b)?)?;
        if described.vertices != q.vertices {
            return Ok(DeformCheck::fail(Failure::DescriptionMismatch, described));
        }
        self.is_deformation(p0, p0_vertices, &a, &b)
    }

    /// Inequality rows whose removal leaves the vertex set unchanged.
    pub fn redundant_rows(&self, h: &HRep) -> Result<Vec<usize>> {
        let base = self.enumerate_vertices(h)?;
        let mut out = Vec::new();
        for r in 0..h.ineq.len() {
            let mut reduced = h.clone();
            reduced.ineq.remove(r);
            match self.enumerate_vertices(&reduced) {
                Ok(v) if v.vertices == base.vertices => out.push(r),
                Ok(_) | Err(Error::UnboundedOrRankDeficient) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(out)
    }
}

fn affine_rank(points: &[Vec<Rat>], idx: &[usize]) -> usize {
    let Some((&first, rest)) = idx.split_first() else { return 0 };
    let diffs: Vec<Vec<Rat>> =
        rest.iter().map(|&i| points[i].iter().zip(&points[first]).map(|(a, b)| a - b).collect()).collect();
    let rows: Vec<&[Rat]> = diffs.iter().map(Vec::as_slice).collect();
    linalg::rank(&rows, points[first].len())
}

fn minimize_over(v: &VRep, objective: &[Rat]) -> Option<(Rat, Vec<Rat>)> {
    let mut best: Option<(Rat, &Vec<Rat>)> = None;
    for x in &v.vertices {
        let val = rat::dot(objective, x);
        if best.as_ref().is_none_or(|(b, _)| &val < b) {
            best = Some((val, x));
        }
    }
    best.map(|(val, x)| (val, x.clone()))
}

pub fn enumerate_vertices(h: &HRep) -> Result<VRep> {
    Oracle::default().enumerate_vertices(h)
}

pub fn minimize(h: &HRep, objective: &[Rat]) -> Result<(Rat, Vec<Rat>)> {
    Oracle::default().minimize(h, objective)
}

pub fn is_deformation(p0: &HRep, p0_vertices: &VRep, a: &[Rat], b: &[Rat]) -> Result<DeformCheck> {
    Oracle::default().is_deformation(p0, p0_vertices, a, b)
}

/// Per-edge scale factors `r` with `φ(v) − φ(w) = r (v − w)`, or `None` when
/// the map is not surjective onto `q` or some edge is not scaled by an `r ≥ 0`.
pub fn edge_ratios(p0: &VRep, q: &VRep, images: &[Vec<Rat>]) -> Option<BTreeMap<(usize, usize), Rat>> {
    if images.len() != p0.len() {
        return None;
    }
    let hit: BTreeSet<&Vec<Rat>> = images.iter().collect();
    if hit.len() != q.len() || q.vertices.iter().any(|v| !hit.contains(v)) {
        return None;
    }
    let mut out = BTreeMap::new();
    for &(i, j) in &p0.adjacency {
        let d: Vec<Rat> = p0.vertices[i].iter().zip(&p0.vertices[j]).map(|(a, b)| a - b).collect();
        let e: Vec<Rat> = images[i].iter().zip(&images[j]).map(|(a, b)| a - b).collect();
        let pivot = d.iter().position(|x| !x.is_zero())?;
        let r = &e[pivot] / &d[pivot];
        if r.is_negative() || d.iter().zip(&e).any(|(x, y)| &(x * &r) != y) {
            return None;
        }
        out.insert((i, j), r);
    }
    Some(out)
}

pub fn edge_check_deformation(p0: &VRep, q: &VRep, images: &[Vec<Rat>]) -> bool {
    edge_ratios(p0, q, images).is_some()
}

pub fn polytopes_equal(p: &VRep, q: &VRep) -> bool {
    p.vertices == q.vertices
}
