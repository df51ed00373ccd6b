//! Flow polytopes on the complete directed graph with vertices `1..=n+1`.
//!
//! `Flow_n(a)` is `{m ∈ U(n) : L_n m = a, m ≥ 0}`: vertex `i` has net outflow
//! `a_i` and the sink `n + 1` absorbs the rest. Unlike Tesler polytopes the
//! net flow may have negative entries, and then `Flow_n(a)` need not be a
//! deformation of `Tes_n(1, …, 1)`.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{dim, offset, positions, tesler_hrep, HookVector, TildeUpperTri, UpperTri};
use crate::polyhedra::{HRep, Oracle, Row};
use crate::rat::{self, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "NetFlowRepr", into = "NetFlowRepr")]
pub struct NetFlow {
    pub a: HookVector,
}

#[derive(Serialize, Deserialize)]
struct NetFlowRepr {
    n: usize,
    a: HookVector,
}

impl TryFrom<NetFlowRepr> for NetFlow {
    type Error = Error;
    fn try_from(r: NetFlowRepr) -> Result<Self> {
        if r.a.n() != r.n {
            return Err(Error::SizeMismatch { expected: r.n, got: r.a.n() });
        }
        NetFlow::new(r.a)
    }
}

impl From<NetFlow> for NetFlowRepr {
    fn from(f: NetFlow) -> Self {
        NetFlowRepr { n: f.a.n(), a: f.a }
    }
}

impl NetFlow {
    pub fn new(a: HookVector) -> Result<Self> {
        if a.n() == 0 {
            return Err(Error::SizeMismatch { expected: 1, got: 0 });
        }
        Ok(Self { a })
    }

    pub fn from_ints(a: &[i64]) -> Self {
        Self::new(HookVector::from_ints(a)).expect("nonempty")
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }

    /// 1-based entry.
    pub fn get(&self, i: usize) -> &Rat {
        self.a.get(i)
    }

    pub fn prefix_sums(&self) -> Vec<Rat> {
        self.a
            .as_slice()
            .iter()
            .scan(Rat::zero(), |acc, x| {
                *acc += x;
                Some(acc.clone())
            })
            .collect()
    }
}

/// `{L_n m = a, m ≥ 0}`.
pub fn flow_hrep(a: &NetFlow) -> HRep {
    let mut h = tesler_hrep(&a.a);
    let n = a.n();
    let mut row = vec![Rat::zero(); dim(n)];
    row[offset(n, n, n)] = -rat::one();
    h.ineq.push(Row::new(row, Rat::zero()));
    h
}

/// The first `k` with a negative prefix sum `a_1 + … + a_k`.
pub fn infeasible_at(a: &NetFlow) -> Option<usize> {
    a.prefix_sums().iter().position(Signed::is_negative).map(|p| p + 1)
}

pub fn is_feasible(a: &NetFlow) -> bool {
    infeasible_at(a).is_none()
}

fn require_feasible(a: &NetFlow) -> Result<()> {
    match infeasible_at(a) {
        Some(index) => Err(Error::Infeasible { index }),
        None => Ok(()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Critical {
    pub l: usize,
    /// Every `i < n` with `a_i > 0` and `a_i + a_{i+1} = 0`.
    pub voided: Vec<usize>,
}

impl Critical {
    /// Voided positions that come before `l`.
    pub fn voided_before_l(&self) -> impl Iterator<Item = usize> + '_ {
        self.voided.iter().copied().filter(move |&i| i < self.l)
    }
}

/// The first positive entry that is not cancelled by its successor, or `n`.
pub fn critical_position(a: &NetFlow) -> Result<Critical> {
    require_feasible(a)?;
    let n = a.n();
    let voided: Vec<usize> = (1..n).filter(|&i| a.get(i).is_positive() && (a.get(i) + a.get(i + 1)).is_zero()).collect();
    let l = (1..n).find(|&i| a.get(i).is_positive() && voided.binary_search(&i).is_err()).unwrap_or(n);
    Ok(Critical { l, voided })
}

/// Entries of rows `1..l−1` shared by every point of `Flow_n(a)`.
pub fn forced_entries(a: &NetFlow) -> Result<BTreeMap<(usize, usize), Rat>> {
    let crit = critical_position(a)?;
    let n = a.n();
    let mut out: BTreeMap<(usize, usize), Rat> =
        positions(n).filter(|&(i, _)| i < crit.l).map(|p| (p, Rat::zero())).collect();
    for i in crit.voided_before_l() {
        out.insert((i, i + 1), a.get(i).clone());
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Reduction {
    /// `Flow_n(a) = Flow_n(a_hat) + t`, with `a_hat` zero before `l`,
    /// `a_hat_l > 0` and `a_hat_{l+1} ≥ 0`.
    Translated { l: usize, a_hat: NetFlow, t: UpperTri },
    /// `l = n`: the polytope is this single point.
    Point { point: UpperTri },
}

pub fn translate_reduce(a: &NetFlow) -> Result<Reduction> {
    let crit = critical_position(a)?;
    let n = a.n();
    let l = crit.l;
    let mut t = UpperTri::zeros(n);
    for i in crit.voided_before_l() {
        t.set(i, i + 1, a.get(i).clone());
    }
    if l == n {
        // Rows before n are forced; the last hook equation fixes m_{n,n}.
        let inflow: Rat = (1..n).map(|r| t.get(r, n).clone()).sum();
        t.set(n, n, a.get(n) + inflow);
        debug_assert_eq!(t.hook_vector(), a.a);
        return Ok(Reduction::Point { point: t });
    }
    let mut a_hat: Vec<Rat> = a.a.as_slice().to_vec();
    for x in a_hat.iter_mut().take(l - 1) {
        *x = Rat::zero();
    }
    if a.get(l + 1).is_negative() {
        let c = -a.get(l + 1);
        t.set(l, l + 1, c);
        a_hat[l - 1] = a.get(l) + a.get(l + 1);
        a_hat[l] = Rat::zero();
    }
    Ok(Reduction::Translated { l, a_hat: NetFlow::new(HookVector::new(a_hat))?, t })
}

/// A flow in `Flow_n(a)` that routes `−a_m` units into `m` from the rows
/// `l..m−1` and sends everything else past `m`.
///
/// Requires `a` to be zero before `l`, `a_l > 0`, `a_{l+1} ≥ 0`, feasible, and
/// `m` to be its first negative entry with `l + 2 ≤ m < n`.
pub fn witness_flow(a: &NetFlow, m: usize) -> Result<UpperTri> {
    require_feasible(a)?;
    let n = a.n();
    let pre = |s: &str| Error::PreconditionViolated(s.into());
    let l = (1..=n).find(|&i| !a.get(i).is_zero()).ok_or_else(|| pre("net flow is zero"))?;
    if !a.get(l).is_positive() || l + 1 > n || a.get(l + 1).is_negative() {
        return Err(pre("expected a_l > 0 and a_{l+1} >= 0 after leading zeros"));
    }
    if !(l + 2 <= m && m < n) {
        return Err(pre("m must satisfy l + 2 <= m < n"));
    }
    if a.a.first_negative() != Some(m) {
        return Err(pre("m must be the first negative entry"));
    }
    let need = -a.get(m);
    let prefix = a.prefix_sums();
    let k = (l..m).find(|&k| prefix[k - 1] >= need).expect("feasibility gives prefix_{m-1} >= -a_m");
    let mut f = UpperTri::zeros(n);
    for i in l..m {
        let c = if i < k {
            a.get(i).clone()
        } else if i == k {
            &need - (if k > 1 { prefix[k - 2].clone() } else { Rat::zero() })
        } else {
            Rat::zero()
        };
        let d = a.get(i) - &c;
        f.set(i, m, c);
        f.set(i, m + 1, d);
    }
    for i in m + 1..n {
        f.set(i, i + 1, prefix[i - 1].clone());
    }
    f.set(n, n, prefix[n - 1].clone());

    assert!(f.get(l, m).is_positive());
    assert_eq!((l..m).map(|i| f.get(i, m).clone()).sum::<Rat>(), need);
    assert!(f.row(m).iter().all(Zero::is_zero));
    assert!((1..l).all(|i| f.row(i).iter().all(Zero::is_zero)));
    assert!(f.is_nonnegative());
    assert_eq!(f.hook_vector(), a.a);
    Ok(f)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TightDescription {
    /// `Flow_n(a) = {L_n m = a, −P_n m ≤ b̃}` with every row attained.
    Representable { btilde: TildeUpperTri },
    /// A point satisfying `L_n m = a` and `m_{i,j} ≥ 0` off `(n,n)` but with
    /// `m_{n,n} < 0`, so `m_{n,n} ≥ 0` cannot be dropped.
    NonRedundantDiagonal { g: UpperTri },
}

pub fn tight_description(a: &NetFlow, oracle: &Oracle) -> Result<TightDescription> {
    require_feasible(a)?;
    let n = a.n();
    let relaxed = tesler_hrep(&a.a);
    let v = oracle.enumerate_vertices(&relaxed)?;
    let min_at = |p: usize| v.vertices.iter().map(|x| x[p].clone()).min().ok_or(Error::EmptyPolytope);
    let nn = offset(n, n, n);
    if min_at(nn)?.is_negative() {
        let diag = UpperTri::diag(a.a.as_slice());
        let g = if relaxed.contains(diag.flat()) {
            diag
        } else {
            let best = v.vertices.iter().min_by(|x, y| x[nn].cmp(&y[nn])).expect("nonempty");
            UpperTri::from_flat(n, best.clone())?
        };
        return Ok(TightDescription::NonRedundantDiagonal { g });
    }
    let entries = (0..nn).map(|p| min_at(p).map(|x| -x)).collect::<Result<Vec<_>>>()?;
    Ok(TightDescription::Representable { btilde: TildeUpperTri::from_flat(n, entries)? })
}

/// The arithmetic decision, without certificates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub is_deformation: bool,
    pub l: usize,
    pub voided: Vec<usize>,
    /// First negative entry at or after `l + 2`, when there is one.
    pub m: Option<usize>,
}

/// `Flow_n(a)` deforms `Tes_n(1, …, 1)` iff `l = n` or `a_i ≥ 0` for all
/// `l + 2 ≤ i ≤ n`.
pub fn decide(a: &NetFlow) -> Result<Decision> {
    let crit = critical_position(a)?;
    let n = a.n();
    let m = if crit.l == n { None } else { (crit.l + 2..=n).find(|&i| a.get(i).is_negative()) };
    Ok(Decision { is_deformation: m.is_none(), l: crit.l, voided: crit.voided, m })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    PointPolytope {
        point: UpperTri,
    },
    AllNonnegTail,
    /// In the reduced net flow `a_hat`, `η_m(b̃) < −a_hat_m` for the tight
    /// right-hand side `b̃`; `witness` is a flow emptying row `m`.
    NegativeTail {
        m: usize,
        #[serde(with = "rat::serde_rat")]
        eta_m: Rat,
        #[serde(with = "rat::serde_rat")]
        bound: Rat,
        a_hat: NetFlow,
        t: UpperTri,
        btilde: TildeUpperTri,
        witness: UpperTri,
    },
    NonRedundantDiagonal {
        a_hat: NetFlow,
        t: UpperTri,
        g: UpperTri,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlowVerdict {
    pub is_deformation: bool,
    pub l: usize,
    pub voided_positions: Vec<usize>,
    pub certificate: Certificate,
}

/// [`decide`] plus a certificate; failing certificates are computed on the
/// reduced net flow with the oracle, so they are subject to its size limit.
pub fn is_deformation_of_tesler(a: &NetFlow, oracle: &Oracle) -> Result<FlowVerdict> {
    let d = decide(a)?;
    let certificate = match (translate_reduce(a)?, d.m) {
        (Reduction::Point { point }, _) => Certificate::PointPolytope { point },
        (Reduction::Translated { .. }, None) => Certificate::AllNonnegTail,
        (Reduction::Translated { a_hat, t, .. }, Some(m)) => match tight_description(&a_hat, oracle)? {
            TightDescription::NonRedundantDiagonal { g } => Certificate::NonRedundantDiagonal { a_hat, t, g },
            TightDescription::Representable { btilde } => {
                let eta_m = btilde.hook_sum(m)?;
                let bound = -a_hat.get(m);
                if eta_m >= bound {
                    return Err(Error::FormulaViolation(format!("tight right-hand side satisfies η_{m} ≥ −a_{m}")));
                }
                let witness = witness_flow(&a_hat, m)?;
                Certificate::NegativeTail { m, eta_m, bound, a_hat, t, btilde, witness }
            }
        },
    };
    Ok(FlowVerdict { is_deformation: d.is_deformation, l: d.l, voided_positions: d.voided, certificate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::enumerate_vertices;
    use crate::rat::int;

    fn nf(a: &[i64]) -> NetFlow {
        NetFlow::from_ints(a)
    }

    fn m(rows: &[&[i64]]) -> UpperTri {
        UpperTri::from_int_rows(rows).unwrap()
    }

    #[test]
    fn feasibility() {
        assert!(is_feasible(&nf(&[1, -1, 2])));
        assert!(!is_feasible(&nf(&[-1, 3])));
        assert_eq!(infeasible_at(&nf(&[1, -2, 5])), Some(2));
        assert_eq!(critical_position(&nf(&[1, -2, 5])), Err(Error::Infeasible { index: 2 }));
    }

    #[test]
    fn critical_positions() {
        assert_eq!(critical_position(&nf(&[1, -1, 2, 0])).unwrap(), Critical { l: 3, voided: vec![1] });
        assert_eq!(critical_position(&nf(&[0, 0, 0])).unwrap(), Critical { l: 3, voided: vec![] });
        assert_eq!(critical_position(&nf(&[2, -2, 3, -3, 1])).unwrap(), Critical { l: 5, voided: vec![1, 3] });
        assert_eq!(critical_position(&nf(&[1, 1, -1, 0])).unwrap(), Critical { l: 1, voided: vec![2] });
    }

    #[test]
    fn forced_entry_maps() {
        let f = forced_entries(&nf(&[1, -1, 2, 0])).unwrap();
        assert_eq!(f.len(), 7);
        assert_eq!(f[&(1, 2)], int(1));
        assert!(f.iter().filter(|(p, _)| **p != (1, 2)).all(|(_, v)| v.is_zero()));
        assert!(forced_entries(&nf(&[3, 0, -1])).unwrap().is_empty());
        let v = enumerate_vertices(&flow_hrep(&nf(&[1, -1, 2, 0]))).unwrap();
        assert!(!v.is_empty());
        for x in &v.vertices {
            for ((i, j), val) in &f {
                assert_eq!(&x[offset(4, *i, *j)], val);
            }
        }
    }

    #[test]
    fn reductions() {
        let Reduction::Translated { l, a_hat, t } = translate_reduce(&nf(&[1, -1, 2, 0])).unwrap() else { panic!() };
        assert_eq!((l, a_hat, t), (3, nf(&[0, 0, 2, 0]), UpperTri::unit(4, 1, 2).unwrap()));
        let Reduction::Translated { l, a_hat, t } = translate_reduce(&nf(&[0, 2, -1, 1])).unwrap() else { panic!() };
        assert_eq!((l, a_hat, t), (2, nf(&[0, 1, 0, 1]), UpperTri::unit(4, 2, 3).unwrap()));
        let point = translate_reduce(&nf(&[1, -1, 0])).unwrap();
        assert_eq!(point, Reduction::Point { point: UpperTri::unit(3, 1, 2).unwrap() });
        let v = enumerate_vertices(&flow_hrep(&nf(&[1, -1, 0]))).unwrap();
        assert_eq!(v.vertices, vec![UpperTri::unit(3, 1, 2).unwrap().into_flat()]);
    }

    #[test]
    fn witness_flows() {
        let f = witness_flow(&nf(&[1, 0, -1, 1]), 3).unwrap();
        assert_eq!(f, m(&[&[0, 0, 1, 0], &[0, 0, 0], &[0, 0], &[1]]));
        let f = witness_flow(&nf(&[2, 0, -1, 1]), 3).unwrap();
        assert_eq!(f, m(&[&[0, 0, 1, 1], &[0, 0, 0], &[0, 0], &[2]]));
        let f = witness_flow(&nf(&[1, 1, 2, -3, 0, 1]), 4).unwrap();
        assert_eq!(f.get(3, 4), &int(1));
        assert_eq!(f.get(3, 5), &int(1));
        assert_eq!(f.get(5, 6), &int(1));
        assert!(matches!(witness_flow(&nf(&[1, 0, -1, 1]), 2), Err(Error::PreconditionViolated(_))));
        assert!(matches!(witness_flow(&nf(&[1, -1, 0, 1]), 2), Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn tight_descriptions() {
        let o = Oracle::default();
        let nonneg = tight_description(&nf(&[1, 0, 2]), &o).unwrap();
        assert_eq!(nonneg, TightDescription::Representable { btilde: TildeUpperTri::zeros(3) });
        let diag = tight_description(&nf(&[1, 1, -1]), &o).unwrap();
        assert_eq!(diag, TightDescription::NonRedundantDiagonal { g: UpperTri::diag(&[int(1), int(1), int(-1)]) });
        let TightDescription::Representable { btilde } = tight_description(&nf(&[1, 0, -1, 1]), &o).unwrap() else {
            panic!()
        };
        assert!(btilde.hook_sum(3).unwrap() < int(1));
    }

    #[test]
    fn verdicts() {
        let o = Oracle::default();
        let v = is_deformation_of_tesler(&nf(&[1, 2, 0]), &o).unwrap();
        assert!(v.is_deformation);
        assert_eq!(v.certificate, Certificate::AllNonnegTail);
        let v = is_deformation_of_tesler(&nf(&[1, -1, 0]), &o).unwrap();
        assert!(v.is_deformation);
        assert!(matches!(v.certificate, Certificate::PointPolytope { .. }));
        let v = is_deformation_of_tesler(&nf(&[1, 0, -1, 1]), &o).unwrap();
        assert!(!v.is_deformation);
        assert_eq!(v.l, 1);
        let Certificate::NegativeTail { m, eta_m, bound, .. } = &v.certificate else { panic!() };
        assert_eq!(*m, 3);
        assert!(eta_m < bound);
        let v = is_deformation_of_tesler(&nf(&[1, 1, -1]), &o).unwrap();
        assert!(matches!(v.certificate, Certificate::NonRedundantDiagonal { .. }));
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["certificate"]["kind"], "non_redundant_diagonal");
    }

    #[test]
    fn net_flow_json() {
        let a = nf(&[1, -1, 2]);
        let json = serde_json::to_value(&a).unwrap();
        assert_eq!(json, serde_json::json!({"n": 3, "a": ["1", "-1", "2"]}));
        assert_eq!(serde_json::from_value::<NetFlow>(json).unwrap(), a);
        assert!(serde_json::from_value::<NetFlow>(serde_json::json!({"n": 2, "a": ["1"]})).is_err());
    }
}
