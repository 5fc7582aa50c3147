//! Fraction-free (Bareiss) elimination.
//!
//! Every routine first runs over `i64` with `i128` intermediates and checked
//! narrowing. On overflow it restarts over `BigInt`. Connection matrices in
//! canonical order eliminate with unit pivots, so the fast path is the common
//! one.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::matrix::IntMatrix;

trait Ring: Clone + PartialEq {
    fn r_zero() -> Self;
    fn r_one() -> Self;
    fn r_is_zero(&self) -> bool;
    fn neg(&self) -> Option<Self>;
    /// `(a*p - b*c) / prev`, exact by the Sylvester identity.
    fn step(a: &Self, p: &Self, b: &Self, c: &Self, prev: &Self) -> Option<Self>;
    /// `a * p / prev`.
    fn scale(a: &Self, p: &Self, prev: &Self) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Ring for i64 {
    fn r_zero() -> Self {
        0
    }
    fn r_one() -> Self {
        1
    }
    fn r_is_zero(&self) -> bool {
        *self == 0
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    #[inline]
    fn step(a: &Self, p: &Self, b: &Self, c: &Self, prev: &Self) -> Option<Self> {
        let num = (*a as i128) * (*p as i128) - (*b as i128) * (*c as i128);
        i64::try_from(num / (*prev as i128)).ok()
    }
    #[inline]
    fn scale(a: &Self, p: &Self, prev: &Self) -> Option<Self> {
        i64::try_from((*a as i128) * (*p as i128) / (*prev as i128)).ok()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Ring for BigInt {
    fn r_zero() -> Self {
        Zero::zero()
    }
    fn r_one() -> Self {
        One::one()
    }
    fn r_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn step(a: &Self, p: &Self, b: &Self, c: &Self, prev: &Self) -> Option<Self> {
        Some((a * p - b * c) / prev)
    }
    fn scale(a: &Self, p: &Self, prev: &Self) -> Option<Self> {
        Some(a * p / prev)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

struct Echelon<R> {
    rows: Vec<Vec<R>>,
    /// `(row, column)` of each pivot, in order.
    pivots: Vec<(usize, usize)>,
    swaps: usize,
}

/// Forward fraction-free elimination over the first `pivot_cols` columns.
/// With `row_swaps` disabled, elimination stops at the first zero pivot and
/// the returned pivots are exactly the nonzero leading principal minors.
fn forward<R: Ring>(mut rows: Vec<Vec<R>>, pivot_cols: usize, row_swaps: bool) -> Option<Echelon<R>> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut prev = R::r_one();
    let mut r = 0;
    let mut pivots = Vec::new();
    let mut swaps = 0;
    for c in 0..pivot_cols {
        if r == nrows {
            break;
        }
        let p = if row_swaps {
            match (r..nrows).find(|&i| !rows[i][c].r_is_zero()) {
                Some(p) => p,
                None => continue,
            }
        } else if rows[r][c].r_is_zero() {
            break;
        } else {
            r
        };
        if p != r {
            rows.swap(p, r);
            swaps += 1;
        }
        let piv = rows[r][c].clone();
        let (top, bottom) = rows.split_at_mut(r + 1);
        let prow = &top[r];
        let pos_unit = piv == prev;
        let neg_unit = prev.neg().is_some_and(|n| n == piv);
        for row in bottom.iter_mut() {
            let lead = row[c].clone();
            if lead.r_is_zero() {
                if pos_unit {
                    continue;
                }
                for x in row[c + 1..].iter_mut() {
                    if x.r_is_zero() {
                        continue;
                    }
                    *x = if neg_unit { x.neg()? } else { R::scale(x, &piv, &prev)? };
                }
                continue;
            }
            for j in c + 1..ncols {
                let pj = &prow[j];
                let x = &row[j];
                if pj.r_is_zero() {
                    if x.r_is_zero() || pos_unit {
                        continue;
                    }
                    row[j] = if neg_unit { x.neg()? } else { R::scale(x, &piv, &prev)? };
                } else {
                    row[j] = R::step(x, &piv, &lead, pj, &prev)?;
                }
            }
            row[c] = R::r_zero();
        }
        pivots.push((r, c));
        prev = piv;
        r += 1;
    }
    Some(Echelon { rows, pivots, swaps })
}

fn rows_i64(m: &IntMatrix) -> Option<Vec<Vec<i64>>> {
    m.to_i64_rows()
}

fn rows_big(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn run<T>(
    m: &IntMatrix,
    fast: impl Fn(Vec<Vec<i64>>) -> Option<T>,
    slow: impl Fn(Vec<Vec<BigInt>>) -> Option<T>,
) -> T {
    if let Some(out) = rows_i64(m).and_then(&fast) {
        return out;
    }
    slow(rows_big(m)).expect("big-integer elimination cannot overflow")
}

fn det_of<R: Ring>(rows: Vec<Vec<R>>) -> Option<BigInt> {
    let n = rows.len();
    let e = forward(rows, n, true)?;
    if e.pivots.len() < n {
        return Some(BigInt::zero());
    }
    let d = e.rows[n - 1][n - 1].to_big();
    Some(if e.swaps % 2 == 1 { -d } else { d })
}

/// Exact determinant.
pub fn determinant(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::invalid("determinant of a non-square matrix"));
    }
    if m.rows() == 0 {
        return Ok(BigInt::one());
    }
    Ok(run(m, det_of::<i64>, det_of::<BigInt>))
}

/// Exact rank.
pub fn rank(m: &IntMatrix) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    let cols = m.cols();
    run(
        m,
        |r| forward(r, cols, true).map(|e| e.pivots.len()),
        |r| forward(r, cols, true).map(|e| e.pivots.len()),
    )
}

/// Leading principal minors `D_1, D_2, ...` up to the first vanishing one.
pub fn leading_principal_minors(m: &IntMatrix) -> Vec<BigInt> {
    let n = m.rows();
    let collect = |pivots: &[(usize, usize)], get: &dyn Fn(usize) -> BigInt| {
        pivots.iter().map(|&(r, _)| get(r)).collect::<Vec<_>>()
    };
    run(
        m,
        |r| {
            forward(r, n, false).map(|e| collect(&e.pivots, &|i| BigInt::from(e.rows[i][i])))
        },
        |r| forward(r, n, false).map(|e| collect(&e.pivots, &|i| e.rows[i][i].clone())),
    )
}

fn solve_of<R: Ring>(rows: Vec<Vec<R>>, n: usize) -> Option<Option<Vec<BigRational>>> {
    let e = forward(rows, n, true)?;
    if e.pivots.len() < n {
        return Some(None);
    }
    let k = e.rows[0].len() - n;
    let mut x: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); k]; n];
    for i in (0..n).rev() {
        let diag = BigRational::from_integer(e.rows[i][i].to_big());
        for c in 0..k {
            let mut acc = BigRational::from_integer(e.rows[i][n + c].to_big());
            for j in i + 1..n {
                if !e.rows[i][j].r_is_zero() {
                    acc -= BigRational::from_integer(e.rows[i][j].to_big()) * &x[j][c];
                }
            }
            x[i][c] = acc / &diag;
        }
    }
    Some(Some(x.into_iter().flatten().collect()))
}

/// Solve `m x = b` exactly for square nonsingular `m`.
pub fn solve(m: &IntMatrix, b: &[BigInt]) -> Result<Vec<BigRational>> {
    if !m.is_square() || b.len() != m.rows() {
        return Err(Error::invalid("solve needs a square matrix and matching right-hand side"));
    }
    let n = m.rows();
    let mut aug = IntMatrix::zeros(n, n + 1);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, n, b[i].clone());
    }
    run(&aug, |r| solve_of(r, n), |r| solve_of(r, n))
        .ok_or_else(|| Error::invalid("singular matrix"))
}

fn gauss_jordan_of<R: Ring>(mut rows: Vec<Vec<R>>, n: usize) -> Option<Option<(BigInt, Vec<Vec<BigInt>>)>> {
    let width = rows[0].len();
    let mut prev = R::r_one();
    let mut sign_flip = false;
    for c in 0..n {
        let p = match (c..n).find(|&i| !rows[i][c].r_is_zero()) {
            Some(p) => p,
            None => return Some(None),
        };
        if p != c {
            rows.swap(p, c);
            sign_flip = !sign_flip;
        }
        let piv = rows[c][c].clone();
        let prow = rows[c].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == c {
                continue;
            }
            let lead = row[c].clone();
            for j in 0..width {
                if j == c {
                    continue;
                }
                let x = &row[j];
                row[j] = if lead.r_is_zero() {
                    if x.r_is_zero() {
                        continue;
                    }
                    R::scale(x, &piv, &prev)?
                } else {
                    R::step(x, &piv, &lead, &prow[j], &prev)?
                };
            }
            row[c] = R::r_zero();
        }
        prev = piv;
    }
    let det = prev.to_big();
    let det = if sign_flip { -det } else { det };
    // right block is prev * inverse = ±adjugate
    let adj: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            row[n..]
                .iter()
                .map(|x| if sign_flip { -x.to_big() } else { x.to_big() })
                .collect()
        })
        .collect();
    Some(Some((det, adj)))
}

/// Determinant and adjugate by fraction-free Gauss-Jordan.
pub fn adjugate(m: &IntMatrix) -> Result<(BigInt, IntMatrix)> {
    if !m.is_square() {
        return Err(Error::invalid("adjugate of a non-square matrix"));
    }
    let n = m.rows();
    if n == 0 {
        return Ok((BigInt::one(), IntMatrix::zeros(0, 0)));
    }
    let mut aug = IntMatrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, n + i, 1);
    }
    let out = run(&aug, |r| gauss_jordan_of(r, n), |r| gauss_jordan_of(r, n));
    let (det, adj) = out.ok_or_else(|| Error::invalid("singular matrix"))?;
    let data = adj.into_iter().flatten().collect();
    Ok((det, IntMatrix::from_big(n, n, data)?))
}

/// Exact integer inverse of a unimodular matrix.
pub fn unimodular_inverse(m: &IntMatrix) -> Result<IntMatrix> {
    let (det, adj) = adjugate(m)?;
    if det.abs() != BigInt::one() {
        return Err(Error::Invariant(format!("determinant {det} is not a unit")));
    }
    Ok(if det.is_one() { adj } else { adj.neg() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Cofactor expansion along the first row; exponential, test-only.
    fn cofactor_det(a: &[Vec<i64>]) -> BigInt {
        let n = a.len();
        if n == 0 {
            return BigInt::one();
        }
        let mut total = BigInt::zero();
        for j in 0..n {
            if a[0][j] == 0 {
                continue;
            }
            let minor: Vec<Vec<i64>> = a[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect())
                .collect();
            let term = BigInt::from(a[0][j]) * cofactor_det(&minor);
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    fn square(max_n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        (0..=max_n).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-3i64..=3, n), n))
    }

    proptest! {
        #[test]
        fn det_matches_cofactor_expansion(a in square(5)) {
            let m = IntMatrix::from_rows(&a).unwrap_or_else(|_| IntMatrix::zeros(0, 0));
            prop_assert_eq!(determinant(&m).unwrap(), cofactor_det(&a));
        }

        #[test]
        fn adjugate_times_matrix_is_det_identity(a in square(5)) {
            let m = IntMatrix::from_rows(&a).unwrap_or_else(|_| IntMatrix::zeros(0, 0));
            let det = cofactor_det(&a);
            match adjugate(&m) {
                Ok((d, adj)) => {
                    prop_assert_eq!(&d, &det);
                    let prod = m.mul(&adj).unwrap();
                    for i in 0..m.rows() {
                        for j in 0..m.rows() {
                            let want = if i == j { det.clone() } else { BigInt::zero() };
                            prop_assert_eq!(prod.get(i, j), &want);
                        }
                    }
                }
                Err(_) => prop_assert!(det.is_zero()),
            }
        }

        #[test]
        fn rank_of_product_bounded(a in square(4), b in square(4)) {
            let ma = IntMatrix::from_rows(&a).unwrap_or_else(|_| IntMatrix::zeros(0, 0));
            let mb = IntMatrix::from_rows(&b).unwrap_or_else(|_| IntMatrix::zeros(0, 0));
            if ma.cols() == mb.rows() {
                let p = ma.mul(&mb).unwrap();
                prop_assert!(rank(&p) <= rank(&ma).min(rank(&mb)));
            }
        }
    }

    #[test]
    fn identity_and_singular() {
        assert_eq!(determinant(&IntMatrix::identity(4)).unwrap(), BigInt::one());
        let s = IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(determinant(&s).unwrap(), BigInt::zero());
        assert_eq!(rank(&s), 1);
        assert!(solve(&s, &[BigInt::one(), BigInt::one()]).is_err());
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        // Vandermonde-like matrix with huge entries forces the big path.
        let big = 3_000_000_000i64;
        let m = IntMatrix::from_rows(&[vec![big, 1], vec![1, big]]).unwrap();
        let want = BigInt::from(big) * BigInt::from(big) - 1;
        assert_eq!(determinant(&m).unwrap(), want);
    }

    #[test]
    fn solve_small_system() {
        let m = IntMatrix::from_rows(&[vec![2, 1], vec![1, 3]]).unwrap();
        let x = solve(&m, &[BigInt::from(3), BigInt::from(5)]).unwrap();
        assert_eq!(x[0], BigRational::new(4.into(), 5.into()));
        assert_eq!(x[1], BigRational::new(7.into(), 5.into()));
    }

    #[test]
    fn leading_minors_stop_at_zero() {
        let m = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(leading_principal_minors(&m).is_empty());
        let m = IntMatrix::from_rows(&[vec![2, 1], vec![1, 3]]).unwrap();
        assert_eq!(leading_principal_minors(&m), vec![BigInt::from(2), BigInt::from(5)]);
    }

    #[test]
    fn rectangular_rank() {
        let m = IntMatrix::from_rows(&[vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 2]]).unwrap();
        assert_eq!(rank(&m), 2);
        let m = IntMatrix::from_rows(&[vec![0, 0, 1, 2]]).unwrap();
        assert_eq!(rank(&m), 1);
    }
}
