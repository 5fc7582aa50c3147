//! Division-free characteristic polynomials and exact inertia.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::bareiss;
use crate::linalg::matrix::IntMatrix;

/// Orders above this use congruence elimination instead of Berkowitz when
/// computing inertia.
pub const BERKOWITZ_INERTIA_LIMIT: usize = 96;

/// Coefficients `c_0 = 1, c_1, ..., c_n` of `det(xI - A) = sum c_j x^(n-j)`.
pub fn charpoly(a: &IntMatrix) -> Result<Vec<BigInt>> {
    if !a.is_square() {
        return Err(Error::invalid("characteristic polynomial of a non-square matrix"));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(vec![BigInt::one()]);
    }
    let mut v = vec![BigInt::one(), -a.get(0, 0)];
    for r in 1..n {
        // Toeplitz column: 1, -a_rr, -R C, -R M C, ..., -R M^(r-1) C
        let mut t = Vec::with_capacity(r + 2);
        t.push(BigInt::one());
        t.push(-a.get(r, r));
        let mut x: Vec<BigInt> = (0..r).map(|i| a.get(i, r).clone()).collect();
        for k in 0..r {
            let rx: BigInt = (0..r)
                .filter(|&j| !a.get(r, j).is_zero() && !x[j].is_zero())
                .map(|j| a.get(r, j) * &x[j])
                .sum();
            t.push(-rx);
            if k + 1 < r {
                x = (0..r)
                    .map(|i| {
                        (0..r)
                            .filter(|&j| !a.get(i, j).is_zero() && !x[j].is_zero())
                            .map(|j| a.get(i, j) * &x[j])
                            .sum()
                    })
                    .collect();
            }
        }
        let q: Vec<BigInt> = (0..r + 2)
            .map(|i| {
                (0..=i.min(r))
                    .filter(|&j| i - j < t.len())
                    .map(|j| &t[i - j] * &v[j])
                    .sum()
            })
            .collect();
        v = q;
    }
    Ok(v)
}

/// Evaluate a polynomial given in decreasing-power form.
pub fn eval_desc(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    coeffs.iter().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Expand `prod (x - r_i)` into decreasing-power coefficients.
pub fn from_roots(roots: &[BigInt]) -> Vec<BigInt> {
    let mut p = vec![BigInt::one()];
    for r in roots {
        let mut next = vec![BigInt::zero(); p.len() + 1];
        for (i, c) in p.iter().enumerate() {
            next[i] += c;
            next[i + 1] -= c * r;
        }
        p = next;
    }
    p
}

fn sign_changes<'a>(coeffs: impl Iterator<Item = &'a BigInt>) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for c in coeffs {
        let s = if c.is_positive() {
            1
        } else if c.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

/// Counts of positive, negative and zero eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Inertia {
    pub p: usize,
    pub n: usize,
    pub z: usize,
}

impl Inertia {
    pub fn signature(&self) -> i64 {
        self.p as i64 - self.n as i64
    }
}

/// Inertia from the characteristic polynomial by Descartes' rule, exact for
/// real-rooted polynomials.
pub fn inertia_from_charpoly(coeffs: &[BigInt]) -> Inertia {
    let deg = coeffs.len() - 1;
    let z = coeffs.iter().rev().take_while(|c| c.is_zero()).count();
    let trimmed = &coeffs[..coeffs.len() - z];
    let p = sign_changes(trimmed.iter());
    let flipped: Vec<BigInt> = trimmed
        .iter()
        .enumerate()
        .map(|(j, c)| if (deg - j) % 2 == 1 { -c } else { c.clone() })
        .collect();
    let n = sign_changes(flipped.iter());
    Inertia { p, n, z }
}

pub fn inertia_by_charpoly(m: &IntMatrix) -> Result<Inertia> {
    require_symmetric(m)?;
    Ok(inertia_from_charpoly(&charpoly(m)?))
}

/// Inertia by symmetric congruence. Fast path: Jacobi's sign rule on the
/// leading principal minors when none vanishes. Otherwise exact symmetric
/// elimination with 1x1 and 2x2 pivots (Sylvester's law of inertia).
pub fn inertia_by_congruence(m: &IntMatrix) -> Result<Inertia> {
    require_symmetric(m)?;
    let n = m.rows();
    let minors = bareiss::leading_principal_minors(m);
    if minors.len() == n {
        let mut neg = 0;
        let mut last_positive = true;
        for d in &minors {
            let pos = d.is_positive();
            if pos != last_positive {
                neg += 1;
            }
            last_positive = pos;
        }
        return Ok(Inertia { p: n - neg, n: neg, z: 0 });
    }
    Ok(symmetric_pivoting(m))
}

fn symmetric_pivoting(m: &IntMatrix) -> Inertia {
    let n = m.rows();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| m.row(i).iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let mut alive: Vec<usize> = (0..n).collect();
    let mut out = Inertia { p: 0, n: 0, z: 0 };
    while !alive.is_empty() {
        if let Some(&i) = alive.iter().find(|&&i| !a[i][i].is_zero()) {
            let d = a[i][i].clone();
            if d.is_positive() {
                out.p += 1;
            } else {
                out.n += 1;
            }
            alive.retain(|&k| k != i);
            let col: Vec<BigRational> = alive.iter().map(|&k| a[k][i].clone()).collect();
            for (x, &r) in alive.iter().enumerate() {
                if col[x].is_zero() {
                    continue;
                }
                let f = &col[x] / &d;
                for (y, &c) in alive.iter().enumerate() {
                    if !col[y].is_zero() {
                        let delta = &f * &col[y];
                        a[r][c] -= delta;
                    }
                }
            }
            continue;
        }
        let pair = alive
            .iter()
            .flat_map(|&i| alive.iter().map(move |&j| (i, j)))
            .find(|&(i, j)| i < j && !a[i][j].is_zero());
        let Some((i, j)) = pair else {
            out.z += alive.len();
            break;
        };
        // block [[0, b], [b, 0]] contributes one positive and one negative
        out.p += 1;
        out.n += 1;
        let b = a[i][j].clone();
        alive.retain(|&k| k != i && k != j);
        let ci: Vec<BigRational> = alive.iter().map(|&k| a[k][i].clone()).collect();
        let cj: Vec<BigRational> = alive.iter().map(|&k| a[k][j].clone()).collect();
        // inverse of [[0,b],[b,0]] is [[0,1/b],[1/b,0]]
        for (x, &r) in alive.iter().enumerate() {
            for (y, &c) in alive.iter().enumerate() {
                let delta = (&ci[x] * &cj[y] + &cj[x] * &ci[y]) / &b;
                if !delta.is_zero() {
                    a[r][c] -= delta;
                }
            }
        }
    }
    out
}

/// Exact inertia of a symmetric integer matrix.
pub fn inertia_exact(m: &IntMatrix) -> Result<Inertia> {
    if m.rows() <= BERKOWITZ_INERTIA_LIMIT {
        inertia_by_charpoly(m)
    } else {
        inertia_by_congruence(m)
    }
}

fn require_symmetric(m: &IntMatrix) -> Result<()> {
    if m.is_symmetric() {
        Ok(())
    } else {
        Err(Error::invalid("matrix is not symmetric"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn charpoly_small() {
        let a = IntMatrix::from_rows(&[vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(charpoly(&a).unwrap(), big(&[1, -5, -2]));
        assert_eq!(charpoly(&IntMatrix::identity(3)).unwrap(), big(&[1, -3, 3, -1]));
    }

    #[test]
    fn descartes_on_known_roots() {
        let p = from_roots(&big(&[-2, -1, 0, 0, 3]));
        let i = inertia_from_charpoly(&p);
        assert_eq!(i, Inertia { p: 1, n: 2, z: 2 });
    }

    #[test]
    fn identity_inertia() {
        let i = inertia_exact(&IntMatrix::identity(5)).unwrap();
        assert_eq!(i, Inertia { p: 5, n: 0, z: 0 });
    }

    #[test]
    fn asymmetric_rejected() {
        let a = IntMatrix::from_rows(&[vec![1, 2], vec![3, 4]]).unwrap();
        assert!(matches!(inertia_exact(&a), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn zero_leading_minor_uses_pivoting() {
        let a = IntMatrix::from_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 0]]).unwrap();
        let i = inertia_by_congruence(&a).unwrap();
        assert_eq!(i, Inertia { p: 1, n: 1, z: 1 });
        assert_eq!(i, inertia_by_charpoly(&a).unwrap());
    }

    fn sym(max_n: usize) -> impl Strategy<Value = IntMatrix> {
        (1..=max_n).prop_flat_map(|n| {
            prop::collection::vec(-2i64..=2, n * n).prop_map(move |v| {
                IntMatrix::from_fn(n, n, |i, j| {
                    let (a, b) = if i <= j { (i, j) } else { (j, i) };
                    v[a * n + b]
                })
            })
        })
    }

    proptest! {
        #[test]
        fn congruence_agrees_with_charpoly(m in sym(6)) {
            prop_assert_eq!(inertia_by_congruence(&m).unwrap(), inertia_by_charpoly(&m).unwrap());
        }

        #[test]
        fn charpoly_constant_is_signed_det(m in sym(6)) {
            let c = charpoly(&m).unwrap();
            let n = m.rows();
            let det = bareiss::determinant(&m).unwrap();
            let want = if n % 2 == 0 { det } else { -det };
            prop_assert_eq!(c[n].clone(), want);
        }
    }
}
