//! The deformation cone of a Tesler polytope `Tes_n(a₀)`, `a₀ > 0`.
//!
//! A deforming vector `(a, b̃)` moves the right-hand sides of `L_n m = a`,
//! `−P_n m ≤ b̃`. It lies in the cone exactly when `η_i(b̃) ≥ −a_i` for every
//! `i < n`, and then `Q(a, b̃)` is a translate of another Tesler polytope.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{tesler_hrep, HookVector, TildeUpperTri, UpperTri};
use crate::polyhedra::HRep;
use crate::rat::Rat;
use crate::tesler;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DvRepr", into = "DvRepr")]
pub struct DeformingVector {
    pub a: HookVector,
    pub btilde: TildeUpperTri,
}

#[derive(Serialize, Deserialize)]
struct DvRepr {
    a: HookVector,
    btilde: TildeUpperTri,
}

impl TryFrom<DvRepr> for DeformingVector {
    type Error = Error;
    fn try_from(r: DvRepr) -> Result<Self> {
        Self::new(r.a, r.btilde)
    }
}

impl From<DeformingVector> for DvRepr {
    fn from(d: DeformingVector) -> Self {
        DvRepr { a: d.a, btilde: d.btilde }
    }
}

impl DeformingVector {
    pub fn new(a: HookVector, btilde: TildeUpperTri) -> Result<Self> {
        if a.n() != btilde.n() {
            return Err(Error::SizeMismatch { expected: btilde.n(), got: a.n() });
        }
        if a.n() == 0 {
            return Err(Error::SizeMismatch { expected: 1, got: 0 });
        }
        Ok(Self { a, btilde })
    }

    /// `(a, 0)`: the deforming vector whose `Q` is `Tes_n(a)` itself.
    pub fn unshifted(a: HookVector) -> Self {
        let n = a.n();
        Self { a, btilde: TildeUpperTri::zeros(n) }
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }

    /// `η_i(b̃) + a_i` for `i < n`; the cone is where all of these are ≥ 0.
    pub fn slacks(&self) -> Vec<Rat> {
        self.btilde.hook_sums().into_iter().zip(self.a.as_slice()).map(|(h, a)| h + a).collect()
    }
}

/// A subset of `{1, …, n−1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FaceIndex {
    pub n: usize,
    pub indices: BTreeSet<usize>,
}

impl FaceIndex {
    pub fn new(n: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let indices: BTreeSet<usize> = indices.into_iter().collect();
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i >= n) {
            return Err(Error::IndexOutOfRange { index: bad, max: n.saturating_sub(1) });
        }
        Ok(Self { n, indices })
    }

    pub fn full(n: usize) -> Self {
        Self { n, indices: (1..n).collect() }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.contains(&i)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.n == other.n && self.indices.is_subset(&other.indices)
    }
}

/// The first `i < n` with `η_i(b̃) < −a_i`.
pub fn cone_violation(dv: &DeformingVector) -> Option<usize> {
    dv.slacks().iter().position(Signed::is_negative).map(|p| p + 1)
}

pub fn cone_contains(dv: &DeformingVector) -> bool {
    cone_violation(dv).is_none()
}

fn require_cone(dv: &DeformingVector) -> Result<()> {
    match cone_violation(dv) {
        Some(index) => Err(Error::NotInCone { index }),
        None => Ok(()),
    }
}

/// Verdict of a cone membership test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "certificate", rename_all = "snake_case")]
pub enum ConeCheck {
    InCone { face: FaceIndex },
    NotInCone { violated_index: usize, hook_sum: String, bound: String },
}

pub fn cone_check(dv: &DeformingVector) -> ConeCheck {
    match cone_violation(dv) {
        None => ConeCheck::InCone { face: cone_face_membership(dv).expect("inside the cone") },
        Some(i) => ConeCheck::NotInCone {
            violated_index: i,
            hook_sum: dv.btilde.hook_sum(i).expect("i < n").to_string(),
            bound: (-dv.a.get(i)).to_string(),
        },
    }
}

/// `{m : L_n m = a, −P_n m ≤ b̃}`.
pub fn q_polytope(dv: &DeformingVector) -> HRep {
    let base = tesler_hrep(&dv.a);
    base.with_rhs(dv.a.as_slice(), dv.btilde.flat()).expect("shapes agree")
}

/// `Q(a, b̃) = Tes_n(a_T) + t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Translate {
    pub t: UpperTri,
    pub a_t: HookVector,
}

pub fn tesler_translate(dv: &DeformingVector) -> Result<Translate> {
    require_cone(dv)?;
    let n = dv.n();
    let mut a_t = dv.slacks();
    a_t.push(Rat::zero());
    let nn: Rat = (1..n).map(|i| dv.btilde.get(i, n).clone()).sum::<Rat>() - dv.a.get(n);
    let t = -&dv.btilde.extend(nn);
    Ok(Translate { t, a_t: HookVector::new(a_t) })
}

/// The vertex of `Q(a, b̃)` corresponding to the vertex `v` of `Tes_n(a₀)`:
/// every zero of `v` off `(n,n)` becomes `−b̃_{i,j}`, and the one remaining
/// entry per row is fixed by the hook sums, solved from the top row down.
pub fn deform_vertex(v: &UpperTri, dv: &DeformingVector) -> Result<UpperTri> {
    require_cone(dv)?;
    if v.n() != dv.n() {
        return Err(Error::SizeMismatch { expected: dv.n(), got: v.n() });
    }
    let cols = tesler::full_support(v)?;
    let n = v.n();
    let mut out = UpperTri::zeros(n);
    for i in 1..=n {
        let mut rest = Rat::zero();
        for j in (i..=n).filter(|&j| j != cols[i - 1]) {
            let x = -dv.btilde.get(i, j);
            rest += &x;
            out.set(i, j, x);
        }
        let inflow: Rat = (1..i).map(|r| out.get(r, i).clone()).sum();
        out.set(i, cols[i - 1], dv.a.get(i) + inflow - rest);
    }
    Ok(out)
}

/// `deform_vertex` applied to each of `vertices`, in order (not deduplicated).
pub fn deform_map(vertices: &[UpperTri], dv: &DeformingVector) -> Result<Vec<UpperTri>> {
    vertices.iter().map(|v| deform_vertex(v, dv)).collect()
}

/// `{i < n : a_i > 0}`.
pub fn face_index(a: &HookVector) -> Result<FaceIndex> {
    a.require_nonnegative()?;
    let n = a.n();
    Ok(FaceIndex { n, indices: (1..n).filter(|&i| a.get(i).is_positive()).collect() })
}

/// The face of the cone whose relative interior contains `dv`.
pub fn cone_face_membership(dv: &DeformingVector) -> Result<FaceIndex> {
    require_cone(dv)?;
    let slacks = dv.slacks();
    Ok(FaceIndex { n: dv.n(), indices: (1..dv.n()).filter(|&i| slacks[i - 1].is_positive()).collect() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    NormallyEquivalent,
    Deformation,
    Neither,
}

/// Whether `Tes_n(a)` is a deformation of `Tes_n(b)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TeslerComparison {
    pub verdict: Relation,
    pub face_a: FaceIndex,
    pub face_b: FaceIndex,
    /// Set when the verdict is `neither`: that direction is derived from the
    /// face structure of the cone rather than stated as a direct criterion.
    pub derived_converse: bool,
}

pub fn tesler_deforms(a: &HookVector, b: &HookVector) -> Result<TeslerComparison> {
    if a.n() != b.n() {
        return Err(Error::SizeMismatch { expected: b.n(), got: a.n() });
    }
    let face_a = face_index(a)?;
    let face_b = face_index(b)?;
    let verdict = if face_a == face_b {
        Relation::NormallyEquivalent
    } else if face_a.is_subset(&face_b) {
        Relation::Deformation
    } else {
        Relation::Neither
    };
    Ok(TeslerComparison { verdict, face_a, face_b, derived_converse: verdict == Relation::Neither })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::enumerate_vertices;
    use crate::rat::int;

    pub(crate) fn worked_dv() -> DeformingVector {
        DeformingVector::new(
            HookVector::from_ints(&[8, 7, 8, 1]),
            TildeUpperTri::from_int_rows(&[&[-1, 2, -3, -4], &[-5, 6, 7], &[-8, 9]]).unwrap(),
        )
        .unwrap()
    }

    fn worked_vertex() -> UpperTri {
        UpperTri::from_int_rows(&[&[0, 1, 0, 0], &[0, 2, 0], &[3, 0], &[4]]).unwrap()
    }

    #[test]
    fn worked_example_is_in_cone() {
        let dv = worked_dv();
        assert_eq!(dv.btilde.hook_sums(), vec![int(-6), int(6), int(-2)]);
        assert!(cone_contains(&dv));
        assert_eq!(cone_face_membership(&dv).unwrap(), FaceIndex::full(4));
    }

    #[test]
    fn cone_boundary_cases() {
        assert!(cone_contains(&DeformingVector::unshifted(HookVector::from_ints(&[0, 3, 0]))));
        let out = DeformingVector::new(HookVector::zeros(2), TildeUpperTri::from_int_rows(&[&[-1, 0]]).unwrap()).unwrap();
        assert!(!cone_contains(&out));
        assert_eq!(cone_violation(&out), Some(1));
        assert_eq!(tesler_translate(&out), Err(Error::NotInCone { index: 1 }));
        let check = serde_json::to_value(cone_check(&out)).unwrap();
        assert_eq!(check["verdict"], "not_in_cone");
        assert_eq!(check["certificate"]["violated_index"], 1);
        assert!(DeformingVector::new(HookVector::zeros(3), TildeUpperTri::zeros(2)).is_err());
    }

    #[test]
    fn translate_of_worked_example() {
        let tr = tesler_translate(&worked_dv()).unwrap();
        assert_eq!(tr.a_t, HookVector::from_ints(&[2, 13, 6, 0]));
        assert_eq!(tr.t, UpperTri::from_int_rows(&[&[1, -2, 3, 4], &[5, -6, -7], &[8, -9], &[-11]]).unwrap());
    }

    #[test]
    fn translate_of_unshifted_vector() {
        let tr = tesler_translate(&DeformingVector::unshifted(HookVector::from_ints(&[1, 2, 3]))).unwrap();
        assert_eq!(tr.a_t, HookVector::from_ints(&[1, 2, 0]));
        assert_eq!(tr.t, UpperTri::from_int_rows(&[&[0, 0, 0], &[0, 0], &[3]]).unwrap());
        let zero = tesler_translate(&DeformingVector::unshifted(HookVector::zeros(3))).unwrap();
        assert!(zero.t.is_zero() && zero.a_t == HookVector::zeros(3));
    }

    #[test]
    fn deform_vertex_of_worked_example() {
        let got = deform_vertex(&worked_vertex(), &worked_dv()).unwrap();
        assert_eq!(got, UpperTri::from_int_rows(&[&[1, 0, 3, 4], &[5, 9, -7], &[29, -9], &[-11]]).unwrap());
        assert!(q_polytope(&worked_dv()).contains(got.flat()));
        let q = enumerate_vertices(&q_polytope(&worked_dv())).unwrap();
        assert!(q.index_of(got.flat()).is_some());
    }

    #[test]
    fn deform_vertex_identity_and_support_map() {
        let v = worked_vertex();
        let a0 = v.hook_vector();
        assert_eq!(deform_vertex(&v, &DeformingVector::unshifted(a0)).unwrap(), v);
        let a = HookVector::from_ints(&[2, 0, 1, 0]);
        assert_eq!(
            deform_vertex(&v, &DeformingVector::unshifted(a.clone())).unwrap(),
            tesler::support_map_vertex(&v, &a).unwrap()
        );
    }

    #[test]
    fn face_indices() {
        assert_eq!(face_index(&HookVector::from_ints(&[1, 1, 1, 1])).unwrap(), FaceIndex::full(4));
        assert_eq!(face_index(&HookVector::from_ints(&[2, 0, 3, 0])).unwrap(), FaceIndex::new(4, [1, 3]).unwrap());
        assert!(face_index(&HookVector::from_ints(&[0, 0, 0, 5])).unwrap().indices.is_empty());
        assert_eq!(face_index(&HookVector::from_ints(&[0, -1])), Err(Error::NegativeInput { index: 2 }));
        assert!(FaceIndex::new(3, [3]).is_err());
        let zero = DeformingVector::unshifted(HookVector::zeros(3));
        assert!(cone_face_membership(&zero).unwrap().indices.is_empty());
    }

    #[test]
    fn tesler_comparisons() {
        let cmp = |a: &[i64], b: &[i64]| tesler_deforms(&HookVector::from_ints(a), &HookVector::from_ints(b)).unwrap();
        assert_eq!(cmp(&[1, 2, 3], &[1, 2, 3]).verdict, Relation::NormallyEquivalent);
        assert_eq!(cmp(&[1, 0, 1], &[1, 1, 1]).verdict, Relation::Deformation);
        let neither = cmp(&[1, 1, 1], &[1, 0, 1]);
        assert_eq!(neither.verdict, Relation::Neither);
        assert!(neither.derived_converse);
        assert_eq!(cmp(&[0, 0, 7], &[5, 5, 0]).verdict, Relation::Deformation);
    }

    #[test]
    fn deforming_vector_json() {
        let dv = worked_dv();
        let json = serde_json::to_value(&dv).unwrap();
        assert_eq!(json["a"], serde_json::json!(["8", "7", "8", "1"]));
        let back: DeformingVector = serde_json::from_value(json).unwrap();
        assert_eq!(back, dv);
        let bad = serde_json::json!({"a": ["1", "1"], "btilde": {"n": 3, "rows": [["0", "0", "0"], ["0", "0"]]}});
        assert!(serde_json::from_value::<DeformingVector>(bad).is_err());
    }
}
