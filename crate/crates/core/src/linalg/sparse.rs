//! Sparse integer matrices with exact row-echelon rank.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::matrix::IntMatrix;

/// Row-major sparse matrix; each row is sorted by column with no zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    /// Build from unsorted rows, merging repeated columns.
    pub fn from_rows(cols: usize, rows: Vec<Vec<(usize, i64)>>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len());
        for mut r in rows {
            r.sort_unstable_by_key(|e| e.0);
            let mut merged: Vec<(usize, i64)> = Vec::with_capacity(r.len());
            for (c, v) in r {
                if c >= cols {
                    return Err(Error::invalid(format!("column {c} out of range {cols}")));
                }
                match merged.last_mut() {
                    Some(last) if last.0 == c => last.1 += v,
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|e| e.1 != 0);
            data.push(merged);
        }
        Ok(SparseMatrix { rows: data.len(), cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[(usize, i64)] {
        &self.data[i]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i]
            .binary_search_by_key(&j, |e| e.0)
            .map_or(0, |p| self.data[i][p].1)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn transpose(&self) -> Self {
        let mut data = vec![Vec::new(); self.cols];
        for (i, r) in self.data.iter().enumerate() {
            for &(j, v) in r {
                data[j].push((i, v));
            }
        }
        SparseMatrix { rows: self.cols, cols: self.rows, data }
    }

    /// Product with overflow checking.
    pub fn mul(&self, other: &SparseMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::invalid("sparse product shape mismatch"));
        }
        let overflow = || Error::Numeric("sparse product overflows i64".into());
        let mut data = Vec::with_capacity(self.rows);
        for r in &self.data {
            let mut acc: HashMap<usize, i64> = HashMap::new();
            for &(k, a) in r {
                for &(j, b) in &other.data[k] {
                    let t = a.checked_mul(b).ok_or_else(overflow)?;
                    let e = acc.entry(j).or_insert(0);
                    *e = e.checked_add(t).ok_or_else(overflow)?;
                }
            }
            let mut row: Vec<(usize, i64)> = acc.into_iter().filter(|e| e.1 != 0).collect();
            row.sort_unstable_by_key(|e| e.0);
            data.push(row);
        }
        Ok(SparseMatrix { rows: self.rows, cols: other.cols, data })
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for (i, r) in self.data.iter().enumerate() {
            for &(j, v) in r {
                m.set(i, j, v);
            }
        }
        m
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> usize {
        // eliminate along the shorter side
        if self.rows > self.cols {
            self.transpose().pivot_columns(&[]).len()
        } else {
            self.pivot_columns(&[]).len()
        }
    }

    /// Leading columns of a row-echelon form of the rows not flagged in
    /// `skip` (an empty `skip` keeps every row). The set depends only on the
    /// row space, not on elimination order.
    pub fn pivot_columns(&self, skip: &[bool]) -> Vec<usize> {
        let rows: Vec<Vec<(usize, i128)>> = self
            .data
            .iter()
            .enumerate()
            .filter(|(i, _)| !skip.get(*i).copied().unwrap_or(false))
            .map(|(_, r)| r.iter().map(|&(c, v)| (c, v as i128)).collect())
            .collect();
        let mut pivots = match echelon(rows.clone()) {
            Some(p) => p,
            None => {
                let big = rows
                    .into_iter()
                    .map(|r| r.into_iter().map(|(c, v)| (c, BigInt::from(v))).collect())
                    .collect();
                echelon(big).expect("big integers do not overflow")
            }
        };
        pivots.sort_unstable();
        pivots
    }
}

trait Coef: Clone + PartialEq {
    fn zero_c() -> Self;
    fn is_zero_c(&self) -> bool;
    /// `a * x - b * y`.
    fn combine(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self>;
    fn gcd_c(&self, other: &Self) -> Self;
    fn div_exact(&self, g: &Self) -> Self;
    fn is_unit(&self) -> bool;
}

impl Coef for i128 {
    fn zero_c() -> Self {
        0
    }
    fn is_zero_c(&self) -> bool {
        *self == 0
    }
    fn combine(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        a.checked_mul(*x)?.checked_sub(b.checked_mul(*y)?)
    }
    fn gcd_c(&self, other: &Self) -> Self {
        self.gcd(other)
    }
    fn div_exact(&self, g: &Self) -> Self {
        self / g
    }
    fn is_unit(&self) -> bool {
        self.abs() == 1
    }
}

impl Coef for BigInt {
    fn zero_c() -> Self {
        BigInt::zero()
    }
    fn is_zero_c(&self) -> bool {
        self.is_zero()
    }
    fn combine(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        Some(a * x - b * y)
    }
    fn gcd_c(&self, other: &Self) -> Self {
        self.gcd(other)
    }
    fn div_exact(&self, g: &Self) -> Self {
        self / g
    }
    fn is_unit(&self) -> bool {
        self.abs() == BigInt::from(1)
    }
}

/// Online echelon form keyed by leading column. Each incoming row is reduced
/// against stored pivots by integer combinations and divided by its content.
fn echelon<T: Coef>(mut rows: Vec<Vec<(usize, T)>>) -> Option<Vec<usize>> {
    let mut pivots: HashMap<usize, Vec<(usize, T)>> = HashMap::new();
    // short rows first keeps fill-in low
    rows.sort_by_key(Vec::len);
    for mut r in rows {
        while let Some(&(lead, _)) = r.first() {
            let Some(p) = pivots.get(&lead) else {
                pivots.insert(lead, r);
                break;
            };
            r = reduce(&r, p)?;
            normalize(&mut r);
        }
    }
    Some(pivots.into_keys().collect())
}

/// `a * r - b * p` with `a, b` chosen to cancel the shared leading entry.
fn reduce<T: Coef>(r: &[(usize, T)], p: &[(usize, T)]) -> Option<Vec<(usize, T)>> {
    let g = p[0].1.gcd_c(&r[0].1);
    let a = p[0].1.div_exact(&g);
    let b = r[0].1.div_exact(&g);
    let z = T::zero_c();
    let mut out = Vec::with_capacity(r.len() + p.len());
    let (mut i, mut j) = (1, 1);
    while i < r.len() || j < p.len() {
        let ci = r.get(i).map_or(usize::MAX, |e| e.0);
        let cj = p.get(j).map_or(usize::MAX, |e| e.0);
        let (c, x, y) = if ci < cj {
            i += 1;
            (ci, &r[i - 1].1, &z)
        } else if cj < ci {
            j += 1;
            (cj, &z, &p[j - 1].1)
        } else {
            i += 1;
            j += 1;
            (ci, &r[i - 1].1, &p[j - 1].1)
        };
        let v = T::combine(&a, x, &b, y)?;
        if !v.is_zero_c() {
            out.push((c, v));
        }
    }
    Some(out)
}

fn normalize<T: Coef>(r: &mut [(usize, T)]) {
    let Some(first) = r.first() else {
        return;
    };
    let mut g = first.1.clone();
    for (_, v) in r.iter() {
        g = g.gcd_c(v);
        if g.is_unit() {
            return;
        }
    }
    for (_, v) in r.iter_mut() {
        *v = v.div_exact(&g);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::bareiss;
    use proptest::prelude::*;

    #[test]
    fn small_ranks() {
        let m = SparseMatrix::from_rows(3, vec![vec![(0, 1), (1, 1)], vec![(1, 1), (2, 1)], vec![(0, 1), (2, -1)]]).unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(SparseMatrix::zeros(4, 2).rank(), 0);
        let m = SparseMatrix::from_rows(2, vec![vec![(0, 2), (1, 4)], vec![(0, 3), (1, 5)]]).unwrap();
        assert_eq!(m.rank(), 2);
    }

    proptest! {
        #[test]
        fn rank_matches_bareiss(rows in 1usize..7, cols in 1usize..7, seed in proptest::collection::vec(-3i64..=3, 49)) {
            let dense = IntMatrix::from_fn(rows, cols, |i, j| if seed[i * 7 + j].abs() == 3 { 0 } else { seed[i * 7 + j] });
            let sparse = SparseMatrix::from_rows(cols, (0..rows).map(|i| (0..cols).map(|j| (j, dense.get(i, j).try_into().unwrap())).collect()).collect()).unwrap();
            prop_assert_eq!(sparse.rank(), bareiss::rank(&dense));
            prop_assert_eq!(&sparse.to_dense(), &dense);
            let pivots = sparse.pivot_columns(&[]);
            prop_assert_eq!(pivots.len(), bareiss::rank(&dense));
            for &p in &pivots {
                let left = IntMatrix::from_fn(rows, p + 1, |i, j| dense.get(i, j).try_into().unwrap());
                let shorter = IntMatrix::from_fn(rows, p, |i, j| dense.get(i, j).try_into().unwrap());
                prop_assert_eq!(bareiss::rank(&left), bareiss::rank(&shorter) + 1);
            }
        }
    }
}
