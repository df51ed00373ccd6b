//! Coordinates on U(n): upper-triangular matrices indexed by the edges of the
//! complete directed graph on `n + 1` vertices.
//!
//! Entry `(i, i)` stands for the edge `(i, n + 1)`; entry `(i, j)` with `i < j`
//! stands for the edge `(i, j)`. All indices are 1-based and entries are stored
//! row-major: `(1,1), (1,2), …, (1,n), (2,2), …, (n,n)`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyhedra::{HRep, Row};
use crate::rat::{self, Rat};

/// Number of coordinates of U(n).
pub fn dim(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Flat row-major offset of the 1-based position `(i, j)`.
pub fn offset(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(1 <= i && i <= j && j <= n);
    (i - 1) * (2 * n + 2 - i) / 2 + (j - i)
}

/// All positions `(i, j)` with `1 ≤ i ≤ j ≤ n`, in storage order.
pub fn positions(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=n).flat_map(move |i| (i..=n).map(move |j| (i, j)))
}

fn check_index(n: usize, i: usize) -> Result<()> {
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, max: n });
    }
    Ok(())
}

fn check_pos(n: usize, i: usize, j: usize) -> Result<()> {
    check_index(n, i)?;
    check_index(n, j)?;
    if j < i {
        return Err(Error::IndexOutOfRange { index: j, max: n });
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct RowsRepr {
    n: usize,
    #[serde(with = "rat::serde_rat_mat")]
    rows: Vec<Vec<Rat>>,
}

/// A point of U(n).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RowsRepr", into = "RowsRepr")]
pub struct UpperTri {
    n: usize,
    entries: Vec<Rat>,
}

impl UpperTri {
    pub fn zeros(n: usize) -> Self {
        Self { n, entries: vec![Rat::zero(); dim(n)] }
    }

    /// The basis matrix `e_{i,j}`.
    pub fn unit(n: usize, i: usize, j: usize) -> Result<Self> {
        check_pos(n, i, j)?;
        let mut m = Self::zeros(n);
        m.entries[offset(n, i, j)] = rat::one();
        Ok(m)
    }

    pub fn diag(values: &[Rat]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n);
        for (i, v) in values.iter().enumerate() {
            m.entries[offset(n, i + 1, i + 1)] = v.clone();
        }
        m
    }

    pub fn from_flat(n: usize, entries: Vec<Rat>) -> Result<Self> {
        if entries.len() != dim(n) {
            return Err(Error::SizeMismatch { expected: dim(n), got: entries.len() });
        }
        Ok(Self { n, entries })
    }

    /// Row `i` holds entries `(i,i) … (i,n)`.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(dim(n));
        for (r, row) in rows.into_iter().enumerate() {
            let expected = n - r;
            if row.len() != expected {
                return Err(Error::SizeMismatch { expected, got: row.len() });
            }
            entries.extend(row);
        }
        Ok(Self { n, entries })
    }

    /// Integer convenience constructor used heavily in tests.
    pub fn from_int_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| rat::int(v)).collect()).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn flat(&self) -> &[Rat] {
        &self.entries
    }

    pub fn into_flat(self) -> Vec<Rat> {
        self.entries
    }

    pub fn rows(&self) -> Vec<Vec<Rat>> {
        (1..=self.n).map(|i| self.row(i).to_vec()).collect()
    }

    /// Entries `(i,i) … (i,n)`.
    pub fn row(&self, i: usize) -> &[Rat] {
        let start = offset(self.n, i, i);
        &self.entries[start..start + (self.n - i + 1)]
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.entries[offset(self.n, i, j)]
    }

    pub fn try_get(&self, i: usize, j: usize) -> Result<&Rat> {
        check_pos(self.n, i, j)?;
        Ok(self.get(i, j))
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        let k = offset(self.n, i, j);
        self.entries[k] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|x| !x.is_negative())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self { n: self.n, entries: self.entries.iter().map(|x| x * c).collect() }
    }

    /// Columns `j` of row `i` holding a nonzero entry.
    pub fn row_support(&self, i: usize) -> Vec<usize> {
        (i..=self.n).filter(|&j| !self.get(i, j).is_zero()).collect()
    }

    /// `m_{i,i} + Σ_{j>i} m_{i,j} − Σ_{j<i} m_{j,i}`.
    pub fn hook_sum(&self, i: usize) -> Result<Rat> {
        check_index(self.n, i)?;
        Ok(self.hook_sum_unchecked(i))
    }

    fn hook_sum_unchecked(&self, i: usize) -> Rat {
        let out: Rat = self.row(i).iter().sum();
        (1..i).fold(out, |acc, r| acc - self.get(r, i))
    }

    pub fn hook_vector(&self) -> HookVector {
        HookVector((1..=self.n).map(|i| self.hook_sum_unchecked(i)).collect())
    }

    pub fn support(&self) -> SupportPattern {
        SupportPattern { n: self.n, bits: self.entries.iter().map(|x| !x.is_zero()).collect() }
    }

    /// Drops the `(n,n)` coordinate.
    pub fn project(&self) -> TildeUpperTri {
        let mut entries = self.entries.clone();
        entries.pop();
        TildeUpperTri { n: self.n, entries }
    }

    fn same_shape(&self, other: &Self) {
        assert_eq!(self.n, other.n, "matrix sizes differ");
    }
}

impl Add for &UpperTri {
    type Output = UpperTri;
    fn add(self, rhs: &UpperTri) -> UpperTri {
        self.same_shape(rhs);
        UpperTri { n: self.n, entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &UpperTri {
    type Output = UpperTri;
    fn sub(self, rhs: &UpperTri) -> UpperTri {
        self.same_shape(rhs);
        UpperTri { n: self.n, entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &UpperTri {
    type Output = UpperTri;
    fn neg(self) -> UpperTri {
        UpperTri { n: self.n, entries: self.entries.iter().map(|x| -x).collect() }
    }
}

impl TryFrom<RowsRepr> for UpperTri {
    type Error = Error;
    fn try_from(r: RowsRepr) -> Result<Self> {
        if r.rows.len() != r.n {
            return Err(Error::SizeMismatch { expected: r.n, got: r.rows.len() });
        }
        Self::from_rows(r.rows)
    }
}

impl From<UpperTri> for RowsRepr {
    fn from(m: UpperTri) -> Self {
        RowsRepr { n: m.n, rows: m.rows() }
    }
}

/// Bracket layout, one row per line, right-aligned.
impl fmt::Display for UpperTri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_triangle(f, self.n, |i, j| Some(self.get(i, j).clone()))
    }
}

fn write_triangle(f: &mut fmt::Formatter<'_>, n: usize, get: impl Fn(usize, usize) -> Option<Rat>) -> fmt::Result {
    let cells: Vec<Vec<String>> = (1..=n)
        .map(|i| (1..=n).map(|j| if j < i { String::new() } else { get(i, j).map(|x| x.to_string()).unwrap_or_default() }).collect())
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1).max(1);
    for (r, row) in cells.iter().enumerate() {
        let body: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        write!(f, "[ {} ]", body.join(" "))?;
        if r + 1 < n {
            writeln!(f)?;
        }
    }
    Ok(())
}

/// A point of Ũ(n): U(n) with the `(n,n)` coordinate removed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RowsRepr", into = "RowsRepr")]
pub struct TildeUpperTri {
    n: usize,
    entries: Vec<Rat>,
}

impl TildeUpperTri {
    pub fn zeros(n: usize) -> Self {
        Self { n, entries: vec![Rat::zero(); dim(n) - 1] }
    }

    pub fn from_flat(n: usize, entries: Vec<Rat>) -> Result<Self> {
        if entries.len() + 1 != dim(n) {
            return Err(Error::SizeMismatch { expected: dim(n) - 1, got: entries.len() });
        }
        Ok(Self { n, entries })
    }

    /// Accepts `n − 1` full rows, optionally followed by an empty final row.
    pub fn from_rows(mut rows: Vec<Vec<Rat>>) -> Result<Self> {
        if rows.last().is_some_and(Vec::is_empty) {
            rows.pop();
        }
        let n = rows.len() + 1;
        let mut entries = Vec::with_capacity(dim(n) - 1);
        for (r, row) in rows.into_iter().enumerate() {
            let expected = n - r;
            if row.len() != expected {
                return Err(Error::SizeMismatch { expected, got: row.len() });
            }
            entries.extend(row);
        }
        Ok(Self { n, entries })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| rat::int(v)).collect()).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn flat(&self) -> &[Rat] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        debug_assert!((i, j) != (self.n, self.n));
        &self.entries[offset(self.n, i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        let k = offset(self.n, i, j);
        self.entries[k] = v;
    }

    /// Rows `1..n`; the final row is empty because its only entry is dropped.
    pub fn rows(&self) -> Vec<Vec<Rat>> {
        let mut rows: Vec<Vec<Rat>> = (1..self.n)
            .map(|i| {
                let start = offset(self.n, i, i);
                self.entries[start..start + (self.n - i + 1)].to_vec()
            })
            .collect();
        rows.push(Vec::new());
        rows
    }

    /// Hook sum on Ũ(n); only defined for `1 ≤ i ≤ n − 1`.
    pub fn hook_sum(&self, i: usize) -> Result<Rat> {
        if i == 0 || i >= self.n {
            return Err(Error::IndexOutOfRange { index: i, max: self.n.saturating_sub(1) });
        }
        let start = offset(self.n, i, i);
        let out: Rat = self.entries[start..start + (self.n - i + 1)].iter().sum();
        Ok((1..i).fold(out, |acc, r| acc - self.get(r, i)))
    }

    /// Hook sums `1..n−1`.
    pub fn hook_sums(&self) -> Vec<Rat> {
        (1..self.n).map(|i| self.hook_sum(i).expect("index in range")).collect()
    }

    /// Re-inserts an `(n,n)` entry.
    pub fn extend(&self, nn: Rat) -> UpperTri {
        let mut entries = self.entries.clone();
        entries.push(nn);
        UpperTri { n: self.n, entries }
    }
}

impl TryFrom<RowsRepr> for TildeUpperTri {
    type Error = Error;
    fn try_from(r: RowsRepr) -> Result<Self> {
        let t = Self::from_rows(r.rows)?;
        if t.n != r.n {
            return Err(Error::SizeMismatch { expected: r.n, got: t.n });
        }
        Ok(t)
    }
}

impl From<TildeUpperTri> for RowsRepr {
    fn from(m: TildeUpperTri) -> Self {
        RowsRepr { n: m.n, rows: m.rows() }
    }
}

impl fmt::Display for TildeUpperTri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n;
        write_triangle(f, n, |i, j| if (i, j) == (n, n) { None } else { Some(self.get(i, j).clone()) })
    }
}

/// A vector in R^n, used for hook sums, net flows and right-hand sides.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HookVector(#[serde(with = "rat::serde_rat_vec")] pub Vec<Rat>);

impl HookVector {
    pub fn new(values: Vec<Rat>) -> Self {
        Self(values)
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Self(values.iter().map(|&v| rat::int(v)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![Rat::zero(); n])
    }

    /// The standard basis vector `e_k` (1-based).
    pub fn basis(n: usize, k: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[k - 1] = rat::one();
        v
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// 1-based access.
    pub fn get(&self, i: usize) -> &Rat {
        &self.0[i - 1]
    }

    pub fn as_slice(&self) -> &[Rat] {
        &self.0
    }

    /// First index (1-based) holding a negative entry.
    pub fn first_negative(&self) -> Option<usize> {
        self.0.iter().position(Signed::is_negative).map(|p| p + 1)
    }

    pub fn require_nonnegative(&self) -> Result<()> {
        match self.first_negative() {
            Some(index) => Err(Error::NegativeInput { index }),
            None => Ok(()),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(Signed::is_positive)
    }
}

impl Add for &HookVector {
    type Output = HookVector;
    fn add(self, rhs: &HookVector) -> HookVector {
        HookVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for HookVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// The 0/1 support of a point of U(n).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SupportPattern {
    n: usize,
    bits: Vec<bool>,
}

impl SupportPattern {
    pub fn from_bits(n: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != dim(n) {
            return Err(Error::SizeMismatch { expected: dim(n), got: bits.len() });
        }
        Ok(Self { n, bits })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bit(&self, i: usize, j: usize) -> bool {
        self.bits[offset(self.n, i, j)]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Columns of row `i` holding a 1.
    pub fn row_ones(&self, i: usize) -> Vec<usize> {
        (i..=self.n).filter(|&j| self.bit(i, j)).collect()
    }

    /// Componentwise `≤`.
    pub fn le(&self, other: &Self) -> bool {
        self.n == other.n && self.bits.iter().zip(&other.bits).all(|(a, b)| !a || *b)
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn to_matrix(&self) -> UpperTri {
        UpperTri { n: self.n, entries: self.bits.iter().map(|&b| if b { rat::one() } else { rat::zero() }).collect() }
    }
}

impl Serialize for SupportPattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<u8>> = (1..=self.n).map(|i| (i..=self.n).map(|j| u8::from(self.bit(i, j))).collect()).collect();
        #[derive(Serialize)]
        struct Repr {
            n: usize,
            rows: Vec<Vec<u8>>,
        }
        Repr { n: self.n, rows }.serialize(s)
    }
}

/// Row `i` of `L_n` as a coefficient vector on U(n): the incidence row of
/// vertex `i` (+1 on outgoing edges, −1 on incoming edges).
pub fn hook_row(n: usize, i: usize) -> Vec<Rat> {
    let mut row = vec![Rat::zero(); dim(n)];
    for j in i..=n {
        row[offset(n, i, j)] = rat::one();
    }
    for r in 1..i {
        row[offset(n, r, i)] = -rat::one();
    }
    row
}

/// The rows of `−P_n`: one `−e_{i,j}` per coordinate except `(n,n)`.
pub fn neg_projection_rows(n: usize) -> Vec<Vec<Rat>> {
    positions(n)
        .filter(|&p| p != (n, n))
        .map(|(i, j)| {
            let mut row = vec![Rat::zero(); dim(n)];
            row[offset(n, i, j)] = -rat::one();
            row
        })
        .collect()
}

/// `L_n m = a`, `−P_n m ≤ 0`.
pub fn tesler_hrep(a: &HookVector) -> HRep {
    let n = a.n();
    let eq = (1..=n).map(|i| Row::new(hook_row(n, i), a.get(i).clone())).collect();
    let ineq = neg_projection_rows(n).into_iter().map(|g| Row::new(g, Rat::zero())).collect();
    HRep::new(dim(n), eq, ineq).expect("rows built with matching length")
}
