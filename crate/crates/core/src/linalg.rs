//! Small dense exact linear algebra used by the oracle.

use num_traits::Zero;

use crate::rat::{self, Rat};

/// Reduced row echelon form in place; returns the pivot column of each
/// nonzero row.
pub(crate) fn rref(m: &mut Vec<Vec<Rat>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = rat::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    pivots
}

pub(crate) fn rank(rows: &[&[Rat]], cols: usize) -> usize {
    let mut m: Vec<Vec<Rat>> = rows.iter().map(|r| r.to_vec()).collect();
    rref_rank(&mut m, cols)
}

fn rref_rank(m: &mut [Vec<Rat>], cols: usize) -> usize {
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row).skip(c) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

/// Affine parametrisation `x = x0 + Σ t_k basis_k` of `{x : E x = α}`;
/// `None` when the system is inconsistent.
pub(crate) struct AffineSpace {
    pub x0: Vec<Rat>,
    pub basis: Vec<Vec<Rat>>,
}

pub(crate) fn affine_solve(rows: &[(&[Rat], &Rat)], dim: usize) -> Option<AffineSpace> {
    let mut m: Vec<Vec<Rat>> = rows
        .iter()
        .map(|(c, b)| {
            let mut r = c.to_vec();
            r.push((*b).clone());
            r
        })
        .collect();
    let pivots = rref(&mut m, dim + 1);
    if pivots.last() == Some(&dim) {
        return None;
    }
    let mut x0 = vec![Rat::zero(); dim];
    for (row, &p) in m.iter().zip(&pivots) {
        x0[p] = row[dim].clone();
    }
    let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); dim];
            v[f] = rat::one();
            for (row, &p) in m.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect();
    Some(AffineSpace { x0, basis })
}

/// Unique solution of a square system, or `None` if singular.
pub(crate) fn solve_square(a: &[&[Rat]], b: &[&Rat]) -> Option<Vec<Rat>> {
    let k = a.len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.to_vec();
            r.push((*rhs).clone());
            r
        })
        .collect();
    for c in 0..k {
        let p = (c..k).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let inv = rat::one() / &m[c][c];
        for x in m[c].iter_mut().skip(c) {
            *x *= &inv;
        }
        for i in 0..k {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot_row = m[c].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row).skip(c) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().expect("augmented column")).collect())
}
