#![allow(dead_code)]

use itertools::Itertools;
use teslerforge::matrix::{HookVector, UpperTri};
use teslerforge::rat::{int, Rat};

pub fn hv(a: &[i64]) -> HookVector {
    HookVector::from_ints(a)
}

/// Every vector in `values^n`.
pub fn grid(values: &[i64], n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|_| values.iter().copied()).multi_cartesian_product().collect()
}

pub fn flat(vs: &[UpperTri]) -> Vec<Vec<Rat>> {
    vs.iter().map(|v| v.flat().to_vec()).collect()
}

pub fn ones(n: usize) -> HookVector {
    HookVector::new(vec![int(1); n])
}
