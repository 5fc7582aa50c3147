//! Small dense linear algebra over exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(rows: &mut [Vec<Q>]) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(p, r);
        let inv = Q::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let prow = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the null space of a `rows x ncols` matrix.
pub fn nullspace(rows: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Column vectors, each of length `dim`, whose span has been greedily extended:
/// returns indices of `candidates` independent of `base` and of each other.
pub fn extend_basis(base: &[Vec<Q>], candidates: &[Vec<Q>]) -> Vec<usize> {
    let mut span: Vec<Vec<Q>> = base.to_vec();
    let mut rank = rank_of(&span);
    let mut chosen = Vec::new();
    for (i, c) in candidates.iter().enumerate() {
        span.push(c.clone());
        let r = rank_of(&span);
        if r > rank {
            rank = r;
            chosen.push(i);
        } else {
            span.pop();
        }
    }
    chosen
}

/// Rank of a family of vectors.
pub fn rank_of(vectors: &[Vec<Q>]) -> usize {
    let mut m = vectors.to_vec();
    rref(&mut m).len()
}

/// Coordinates of `target` in the basis given by `basis` (vectors). `None`
/// when `target` is outside the span.
pub fn coordinates(basis: &[Vec<Q>], target: &[Q]) -> Option<Vec<Q>> {
    let k = basis.len();
    let dim = target.len();
    // augmented system: rows are coordinates, columns are basis vectors + target
    let mut m: Vec<Vec<Q>> = (0..dim)
        .map(|i| {
            let mut row: Vec<Q> = basis.iter().map(|b| b[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.contains(&k) {
        return None;
    }
    let mut x = vec![Q::zero(); k];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = m[r][k].clone();
    }
    Some(x)
}
