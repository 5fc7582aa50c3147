//! Dense `f64` matrices, the cyclic Jacobi eigensolver, and a tridiagonal
//! QL solver for eigenvalues of larger matrices.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    n_rows: usize,
    n_cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Mat { n_rows, n_cols, data: vec![0.0; n_rows * n_cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn from_fn(n_rows: usize, n_cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for i in 0..n_rows {
            for j in 0..n_cols {
                data.push(f(i, j));
            }
        }
        Mat { n_rows, n_cols, data }
    }

    pub fn diag(values: &[f64]) -> Self {
        Self::from_fn(values.len(), values.len(), |i, j| if i == j { values[i] } else { 0.0 })
    }

    pub fn rows(&self) -> usize {
        self.n_rows
    }

    pub fn cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n_cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n_cols + j] = v;
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.n_cols, self.n_rows, |i, j| self.at(j, i))
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.n_cols, o.n_rows, "shape mismatch in product");
        let mut out = Mat::zeros(self.n_rows, o.n_cols);
        for i in 0..self.n_rows {
            for k in 0..self.n_cols {
                let a = self.at(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..o.n_cols {
                    out.data[i * o.n_cols + j] += a * o.at(k, j);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n_rows)
            .map(|i| (0..self.n_cols).map(|j| self.at(i, j) * v[j]).sum())
            .collect()
    }

    pub fn add(&self, o: &Mat) -> Mat {
        Mat::from_fn(self.n_rows, self.n_cols, |i, j| self.at(i, j) + o.at(i, j))
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        Mat::from_fn(self.n_rows, self.n_cols, |i, j| self.at(i, j) - o.at(i, j))
    }

    pub fn scale(&self, s: f64) -> Mat {
        Mat::from_fn(self.n_rows, self.n_cols, |i, j| s * self.at(i, j))
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn is_symmetric(&self, rel_tol: f64) -> bool {
        let scale = self.frobenius().max(1.0);
        self.n_rows == self.n_cols
            && (0..self.n_rows)
                .all(|i| (0..i).all(|j| (self.at(i, j) - self.at(j, i)).abs() <= rel_tol * scale))
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n_rows).map(|i| self.at(i, j)).collect()
    }
}

/// Eigenvalues in ascending order with orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Mat,
}

const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops below
/// `1e-12 * ||M||`. Sweep order is row-major over the upper triangle.
pub fn jacobi(m: &Mat) -> Result<Eigen> {
    if !m.is_symmetric(1e-12) {
        return Err(Error::invalid("matrix is not symmetric"));
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut v = Mat::identity(n);
    let norm = m.frobenius();
    let tol = 1e-12 * norm.max(f64::MIN_POSITIVE);
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a.at(i, j) * a.at(i, j))
            .sum::<f64>()
            .sqrt();
        if off < tol {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.at(p, q);
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a.at(k, p);
                    let akq = a.at(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.at(p, k);
                    let aqk = a.at(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
                for k in 0..n {
                    let vkp = v.at(k, p);
                    let vkq = v.at(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }
    if !converged {
        return Err(Error::Numeric(format!("Jacobi did not converge in {MAX_SWEEPS} sweeps")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.at(i, i).total_cmp(&a.at(j, j)));
    let values = order.iter().map(|&i| a.at(i, i)).collect();
    let vectors = Mat::from_fn(n, n, |i, j| v.at(i, order[j]));
    Ok(Eigen { values, vectors })
}

/// Orders above this use the tridiagonal QL solver in [`eigenvalues`].
pub const JACOBI_LIMIT: usize = 64;

/// Ascending eigenvalues of a symmetric matrix.
pub fn eigenvalues(m: &Mat) -> Result<Vec<f64>> {
    if m.rows() <= JACOBI_LIMIT {
        Ok(jacobi(m)?.values)
    } else {
        tridiagonal_ql(m)
    }
}

/// Householder reduction to tridiagonal form followed by implicit QL with
/// Wilkinson shifts. Eigenvalues only.
pub fn tridiagonal_ql(m: &Mat) -> Result<Vec<f64>> {
    if !m.is_symmetric(1e-12) {
        return Err(Error::invalid("matrix is not symmetric"));
    }
    let n = m.rows();
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| (0..=i).map(|j| m.at(i, j)).collect()).collect();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    // lower triangle only: a[i][k] with k <= i
    for i in (1..n).rev() {
        let l = i - 1;
        if l > 0 {
            let scale: f64 = a[i][..=l].iter().map(|x| x.abs()).sum();
            if scale == 0.0 {
                e[i] = a[i][l];
                continue;
            }
            let mut h = 0.0;
            for k in 0..=l {
                a[i][k] /= scale;
                h += a[i][k] * a[i][k];
            }
            let f = a[i][l];
            let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
            e[i] = scale * g;
            h -= f * g;
            a[i][l] = f - g;
            let mut f = 0.0;
            for j in 0..=l {
                let mut g = 0.0;
                for k in 0..=j {
                    g += a[j][k] * a[i][k];
                }
                for k in j + 1..=l {
                    g += a[k][j] * a[i][k];
                }
                e[j] = g / h;
                f += e[j] * a[i][j];
            }
            let hh = f / (h + h);
            for j in 0..=l {
                let f = a[i][j];
                let g = e[j] - hh * f;
                e[j] = g;
                let (head, tail) = a.split_at_mut(i);
                let ai = &tail[0];
                for k in 0..=j {
                    head[j][k] -= f * e[k] + g * ai[k];
                }
            }
        } else {
            e[i] = a[i][l];
        }
    }
    for i in 0..n {
        d[i] = a[i][i];
    }
    if n > 0 {
        e.rotate_left(1);
        e[n - 1] = 0.0;
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut mm = l;
            while mm + 1 < n {
                let dd = d[mm].abs() + d[mm + 1].abs();
                if e[mm].abs() <= f64::EPSILON * dd {
                    break;
                }
                mm += 1;
            }
            if mm == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Numeric("QL iteration did not converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let r = g.hypot(1.0);
            g = d[mm] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            for i in (l..mm).rev() {
                let f = s * e[i];
                let b = c * e[i];
                let r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[mm] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                let gg = d[i + 1] - p;
                let rr = (d[i] - gg) * s + 2.0 * c * b;
                p = s * rr;
                d[i + 1] = gg + p;
                g = c * rr - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[mm] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_input() {
        let e = jacobi(&Mat::diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn cycle_laplacian() {
        // Kirchhoff Laplacian of C4
        let k = Mat::from_fn(4, 4, |i, j| {
            if i == j {
                2.0
            } else if (i + 1) % 4 == j || (j + 1) % 4 == i {
                -1.0
            } else {
                0.0
            }
        });
        let e = jacobi(&k).unwrap();
        let want = [0.0, 2.0, 2.0, 4.0];
        for (a, b) in e.values.iter().zip(want) {
            assert!((a - b).abs() < 1e-10);
        }
        // residuals
        for j in 0..4 {
            let v = e.vectors.column(j);
            let kv = k.mul_vec(&v);
            let r: f64 = kv.iter().zip(&v).map(|(a, b)| (a - e.values[j] * b).powi(2)).sum::<f64>().sqrt();
            assert!(r <= 1e-8 * k.frobenius());
        }
    }

    #[test]
    fn ql_matches_jacobi() {
        let m = Mat::from_fn(30, 30, |i, j| ((i * 7 + j * 7 + i * j) % 11) as f64 - 5.0);
        let a = jacobi(&m).unwrap().values;
        let b = tridiagonal_ql(&m).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-9, "{x} {y}");
        }
        assert_eq!(tridiagonal_ql(&Mat::diag(&[2.0])).unwrap(), vec![2.0]);
        assert!(tridiagonal_ql(&Mat::zeros(0, 0)).unwrap().is_empty());
    }

    #[test]
    fn rejects_asymmetric() {
        let m = Mat::from_fn(2, 2, |i, j| (i * 2 + j) as f64);
        assert!(jacobi(&m).is_err());
    }
}
