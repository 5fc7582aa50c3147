//! Numeric spectra: operators, zeta functions, refinement limits, tree and
//! forest counts, wave evolution and the isospectral Lax flow.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::complex::Complex;
use crate::conn;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hodge;
use crate::linalg::berkowitz::{self, Inertia};
use crate::linalg::eigen::{self, Eigen, Mat};
use crate::linalg::matrix::IntMatrix;
use crate::refine;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Operator {
    Connection,
    Hodge,
    Kirchhoff,
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Operator::Connection => "connection",
            Operator::Hodge => "hodge",
            Operator::Kirchhoff => "kirchhoff",
        })
    }
}

impl FromStr for Operator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "connection" => Ok(Operator::Connection),
            "hodge" => Ok(Operator::Hodge),
            "kirchhoff" => Ok(Operator::Kirchhoff),
            other => Err(Error::invalid(format!("unknown operator {other:?}"))),
        }
    }
}

/// Ascending eigenvalues of an operator attached to a complex.
#[derive(Clone, Debug, Serialize)]
pub struct Spectrum {
    pub operator: Operator,
    pub complex: Option<String>,
    pub values: Vec<f64>,
}

/// Kirchhoff Laplacian `K = deg - A` of a graph.
pub fn kirchhoff(g: &Graph) -> IntMatrix {
    let n = g.order();
    IntMatrix::from_fn(n, n, |i, j| {
        if i == j {
            g.degree(i) as i64
        } else {
            -i64::from(g.has_edge(i, j))
        }
    })
}

pub fn operator_matrix(c: &Complex, op: Operator) -> Result<Mat> {
    Ok(match op {
        Operator::Connection => conn::connection_matrix(c).to_f64(),
        Operator::Hodge => {
            let d = hodge::dirac_f64(c)?;
            d.mul(&d)
        }
        Operator::Kirchhoff => kirchhoff(&Graph::skeleton(c).0).to_f64(),
    })
}

pub fn spectrum(c: &Complex, op: Operator) -> Result<Spectrum> {
    Ok(Spectrum {
        operator: op,
        complex: c.name().map(str::to_owned),
        values: eigen::eigenvalues(&operator_matrix(c, op)?)?,
    })
}

/// Symmetric eigendecomposition, with eigenvectors when requested.
pub fn eig_symmetric(m: &Mat, vectors: bool) -> Result<(Vec<f64>, Option<Mat>)> {
    if vectors {
        let Eigen { values, vectors } = eigen::jacobi(m)?;
        Ok((values, Some(vectors)))
    } else {
        Ok((eigen::eigenvalues(m)?, None))
    }
}

/// Inertia read off numeric eigenvalues, counting `|λ| < tol` as zero.
pub fn numeric_inertia(values: &[f64], tol: f64) -> Inertia {
    let mut out = Inertia { p: 0, n: 0, z: 0 };
    for &v in values {
        if v.abs() < tol {
            out.z += 1;
        } else if v > 0.0 {
            out.p += 1;
        } else {
            out.n += 1;
        }
    }
    out
}

/// Eigenvalues of `L^2`.
pub fn connection_squared_spectrum(c: &Complex) -> Result<Vec<f64>> {
    Ok(eigen::eigenvalues(&conn::connection_matrix(c).to_f64())?.iter().map(|l| l * l).collect())
}

/// `zeta(s) = sum λ^{-s}` over the eigenvalues of `L^2`.
pub fn zeta_from(values: &[f64], s: Complex64) -> Complex64 {
    values.iter().map(|&l| (-s * l.ln()).exp()).sum()
}

pub fn zeta(c: &Complex, s: &[Complex64]) -> Result<Vec<Complex64>> {
    let values = connection_squared_spectrum(c)?;
    Ok(s.iter().map(|&z| zeta_from(&values, z)).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct ZetaSymmetry {
    pub max_deviation: f64,
    pub tolerance: f64,
    pub holds: bool,
}

/// `max_t |zeta(it) - zeta(-it)|` for 1-dimensional complexes.
pub fn zeta_symmetry_check(c: &Complex, ts: &[f64], tolerance: f64) -> Result<ZetaSymmetry> {
    if c.dim() != 1 {
        return Err(Error::invalid(format!("needs a 1-dimensional complex, got dimension {}", c.dim())));
    }
    let values = connection_squared_spectrum(c)?;
    let max_deviation = ts
        .iter()
        .map(|&t| (zeta_from(&values, Complex64::new(0.0, t)) - zeta_from(&values, Complex64::new(0.0, -t))).norm())
        .fold(0.0, f64::max);
    Ok(ZetaSymmetry { max_deviation, tolerance, holds: max_deviation < tolerance })
}

/// `4 sin^2(pi x / 2)`.
pub fn limit_profile(x: f64) -> f64 {
    2.0 - 2.0 * (PI * x).cos()
}

fn profile_antiderivative(x: f64) -> f64 {
    2.0 * x - 2.0 / PI * (PI * x).sin()
}

/// `∫_0^1 |F(x) - 4 sin^2(pi x/2)| dx` for the step function
/// `F(x) = λ_{floor(n x)}` of ascending eigenvalues, integrated in closed form.
pub fn l1_distance_to_limit(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let integral = |a: f64, b: f64| profile_antiderivative(b) - profile_antiderivative(a);
    values
        .iter()
        .enumerate()
        .map(|(k, &l)| {
            let (a, b) = (k as f64 / n, (k + 1) as f64 / n);
            // the profile increases on [0, 1]
            if l >= limit_profile(b) {
                l * (b - a) - integral(a, b)
            } else if l <= limit_profile(a) {
                integral(a, b) - l * (b - a)
            } else {
                let x = ((2.0 - l) / 2.0).clamp(-1.0, 1.0).acos() / PI;
                (l * (x - a) - integral(a, x)) + (integral(x, b) - l * (b - x))
            }
        })
        .sum()
}

/// `F(x) = λ_{floor(n x)}` sampled at `x = i / samples`.
pub fn spectral_function(values: &[f64], samples: usize) -> Vec<f64> {
    let n = values.len();
    (0..samples)
        .map(|i| values[((i * n) / samples).min(n.saturating_sub(1))])
        .collect()
}

pub const LIMIT_SAMPLES: usize = 64;

/// Minimum `|λ|` of the connection matrix is only reported up to this order.
pub const LIMIT_CONNECTION_MAX: usize = 2000;

#[derive(Clone, Debug, Serialize)]
pub struct LimitLevel {
    pub level: usize,
    pub simplices: usize,
    pub graph_order: usize,
    /// L¹ distance to the one-dimensional limit, reported for dimension 1.
    pub distance: Option<f64>,
    pub min_abs_connection_eigenvalue: Option<f64>,
    pub spectral_function: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitReport {
    pub levels: Vec<LimitLevel>,
    /// Distances strictly decrease from level to level.
    pub monotone: Option<bool>,
    pub final_distance: Option<f64>,
}

/// Kirchhoff spectra of the 1-skeleta of successive Barycentric refinements.
pub fn barycentric_limit(c: &Complex, levels: usize, cap: u64) -> Result<LimitReport> {
    let one_dim = c.dim() == 1;
    let mut g = c.clone();
    let mut out = Vec::with_capacity(levels);
    for level in 1..=levels {
        g = refine::barycentric_capped(&g, cap)?;
        let (skel, _) = Graph::skeleton(&g);
        let values = eigen::eigenvalues(&kirchhoff(&skel).to_f64())?;
        let min_conn = if g.len() <= LIMIT_CONNECTION_MAX {
            let ev = eigen::eigenvalues(&conn::connection_matrix(&g).to_f64())?;
            ev.iter().map(|v| v.abs()).reduce(f64::min)
        } else {
            None
        };
        out.push(LimitLevel {
            level,
            simplices: g.len(),
            graph_order: skel.order(),
            distance: one_dim.then(|| l1_distance_to_limit(&values)),
            min_abs_connection_eigenvalue: min_conn,
            spectral_function: spectral_function(&values, LIMIT_SAMPLES),
        });
    }
    let distances: Option<Vec<f64>> = out.iter().map(|l| l.distance).collect();
    let monotone = distances.as_ref().map(|d| d.windows(2).all(|w| w[1] < w[0]));
    let final_distance = distances.and_then(|d| d.last().copied());
    Ok(LimitReport { levels: out, monotone, final_distance })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeForest {
    pub tree: String,
    pub forest: String,
}

/// Pseudo-determinant of `K` and `det(K + I)`.
pub fn tree_forest_numbers(g: &Graph) -> Result<(BigInt, BigInt)> {
    let k = kirchhoff(g);
    let cp = berkowitz::charpoly(&k)?;
    let tree = cp.iter().rev().find(|c| !c.is_zero()).map(|c| c.abs()).unwrap_or_default();
    let forest = conn::det_exact(&k.add(&IntMatrix::identity(g.order()))?)?;
    Ok((tree, forest))
}

/// Largest order for brute-force forest enumeration.
pub const BRUTE_FOREST_MAX: usize = 6;

/// Rooted spanning trees and rooted spanning forests counted by enumerating
/// edge subsets. A rooted spanning tree exists only for connected graphs.
pub fn brute_tree_forest(g: &Graph) -> Result<(BigInt, BigInt)> {
    let n = g.order();
    if n > BRUTE_FOREST_MAX {
        return Err(Error::resource(format!("brute-force enumeration limited to n <= {BRUTE_FOREST_MAX}")));
    }
    let edges = g.edges();
    let mut trees = 0u64;
    let mut forests = 0u64;
    for mask in 0u64..(1u64 << edges.len()) {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        let mut acyclic = true;
        let mut used = 0;
        for (i, &(a, b)) in edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra == rb {
                    acyclic = false;
                    break;
                }
                parent[ra] = rb;
                used += 1;
            }
        }
        if !acyclic {
            continue;
        }
        let mut sizes = vec![0u64; n];
        for v in 0..n {
            let r = find(&mut parent, v);
            sizes[r] += 1;
        }
        forests += sizes.iter().filter(|&&s| s > 0).product::<u64>();
        if used + 1 == n {
            trees += n as u64;
        }
    }
    if n == 0 {
        trees = 1;
    }
    Ok((BigInt::from(trees), BigInt::from(forests)))
}

/// Real and complex wave evolution under the Dirac operator `D = d + d^T`.
pub struct WaveSolver {
    eig: Eigen,
    threshold: f64,
}

impl WaveSolver {
    pub fn new(c: &Complex) -> Result<Self> {
        let eig = eigen::jacobi(&hodge::dirac_f64(c)?)?;
        let max = eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        Ok(WaveSolver { eig, threshold: 1e-10 * max })
    }

    pub fn dim(&self) -> usize {
        self.eig.values.len()
    }

    fn coords(&self, v: &[f64]) -> Vec<f64> {
        (0..self.dim())
            .map(|k| (0..self.dim()).map(|i| self.eig.vectors.at(i, k) * v[i]).sum())
            .collect()
    }

    fn expand(&self, a: &[f64]) -> Vec<f64> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|k| self.eig.vectors.at(i, k) * a[k]).sum())
            .collect()
    }

    fn check_len(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::invalid(format!("state has length {}, expected {}", v.len(), self.dim())));
        }
        Ok(())
    }

    /// `u(t) = cos(Dt) u0 + sin(Dt) D^+ v0`, the pseudo-inverse dropping
    /// eigenvalues below `1e-10 * max |λ|`.
    pub fn position(&self, u0: &[f64], v0: &[f64], t: f64) -> Result<Vec<f64>> {
        self.check_len(u0)?;
        self.check_len(v0)?;
        let (a, b) = (self.coords(u0), self.coords(v0));
        let c: Vec<f64> = self
            .eig
            .values
            .iter()
            .enumerate()
            .map(|(k, &l)| {
                let s = if l.abs() > self.threshold { (l * t).sin() / l * b[k] } else { 0.0 };
                (l * t).cos() * a[k] + s
            })
            .collect();
        Ok(self.expand(&c))
    }

    /// `u'(t)` for the same solution.
    pub fn velocity(&self, u0: &[f64], v0: &[f64], t: f64) -> Result<Vec<f64>> {
        self.check_len(u0)?;
        self.check_len(v0)?;
        let (a, b) = (self.coords(u0), self.coords(v0));
        let c: Vec<f64> = self
            .eig
            .values
            .iter()
            .enumerate()
            .map(|(k, &l)| {
                let s = if l.abs() > self.threshold { (l * t).cos() * b[k] } else { 0.0 };
                -l * (l * t).sin() * a[k] + s
            })
            .collect();
        Ok(self.expand(&c))
    }

    /// `<u, H u> + <u', u'>` with `H = D^2`.
    pub fn energy(&self, u: &[f64], v: &[f64]) -> f64 {
        let a = self.coords(u);
        let b = self.coords(v);
        self.eig.values.iter().zip(&a).map(|(l, x)| l * l * x * x).sum::<f64>()
            + b.iter().map(|x| x * x).sum::<f64>()
    }

    /// `psi(t) = exp(i D t) psi0`.
    pub fn schrodinger(&self, psi0: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
        if psi0.len() != self.dim() {
            return Err(Error::invalid("state length mismatch"));
        }
        let n = self.dim();
        let q = &self.eig.vectors;
        let coeff: Vec<Complex64> = (0..n)
            .map(|k| {
                let a: Complex64 = (0..n).map(|i| psi0[i] * q.at(i, k)).sum();
                a * Complex64::new(0.0, self.eig.values[k] * t).exp()
            })
            .collect();
        Ok((0..n).map(|i| (0..n).map(|k| coeff[k] * q.at(i, k)).sum()).collect())
    }
}

pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Dense complex matrix for the Lax flow.
#[derive(Clone, Debug)]
struct CMat {
    n: usize,
    data: Vec<Complex64>,
}

impl CMat {
    fn from_real(m: &Mat) -> Self {
        let n = m.rows();
        CMat { n, data: (0..n * n).map(|k| Complex64::new(m.at(k / n, k % n), 0.0)).collect() }
    }

    fn at(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    fn mul(&self, o: &CMat) -> CMat {
        let n = self.n;
        let mut data = vec![Complex64::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a == Complex64::zero() {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * o.at(k, j);
                }
            }
        }
        CMat { n, data }
    }

    fn zip(&self, o: &CMat, f: impl Fn(Complex64, Complex64) -> Complex64) -> CMat {
        CMat { n: self.n, data: self.data.iter().zip(&o.data).map(|(&a, &b)| f(a, b)).collect() }
    }

    fn scale(&self, s: f64) -> CMat {
        CMat { n: self.n, data: self.data.iter().map(|&a| a * s).collect() }
    }

    fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Eigenvalues of a Hermitian matrix through the real embedding
    /// `[[Re, -Im], [Im, Re]]`, whose spectrum doubles each eigenvalue.
    fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        let n = self.n;
        let m = Mat::from_fn(2 * n, 2 * n, |i, j| {
            let z = self.at(i % n, j % n);
            match (i < n, j < n) {
                (true, true) | (false, false) => z.re,
                (true, false) => -z.im,
                (false, true) => z.im,
            }
        });
        let v = eigen::eigenvalues(&m)?;
        Ok(v.into_iter().step_by(2).collect())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LaxReport {
    pub gamma: f64,
    pub t_end: f64,
    pub dt: f64,
    pub steps: usize,
    /// `max_k |λ_k(t) - λ_k(0)|`.
    pub eigenvalue_drift: f64,
    /// `||D(t)^2 - D(0)^2||` in the Frobenius norm.
    pub square_deviation: f64,
    pub tolerance: f64,
    pub holds: bool,
}

pub const LAX_DEFAULT_DT: f64 = 1e-3;
pub const LAX_TOLERANCE: f64 = 1e-6;

/// `D' = [B, D]` with `B = d - d^* + i gamma b`, integrated by classical RK4.
/// Each step splits `D` by the dimension grading of its basis: `d` is the
/// part raising degree, `d^*` the part lowering it, `b` the part preserving it.
pub fn lax_flow(c: &Complex, gamma: f64, t_end: f64, dt: f64) -> Result<LaxReport> {
    if !(dt > 0.0 && dt.is_finite()) || !(t_end >= 0.0) {
        return Err(Error::invalid("need dt > 0 and t_end >= 0"));
    }
    let degree: Vec<usize> = c.simplices().iter().map(|s| s.dim()).collect();
    let n = degree.len();
    let d0 = CMat::from_real(&hodge::dirac_f64(c)?);
    let split_b = |m: &CMat| -> CMat {
        let mut b = m.clone();
        for i in 0..n {
            for j in 0..n {
                let z = m.at(i, j);
                b.data[i * n + j] = match degree[i].cmp(&degree[j]) {
                    std::cmp::Ordering::Greater => z,
                    std::cmp::Ordering::Less => -z,
                    std::cmp::Ordering::Equal => z * Complex64::new(0.0, gamma),
                };
            }
        }
        b
    };
    let rhs = |m: &CMat| -> CMat {
        let b = split_b(m);
        b.mul(m).zip(&m.mul(&b), |x, y| x - y)
    };
    let steps = (t_end / dt).round() as usize;
    let h = if steps == 0 { 0.0 } else { t_end / steps as f64 };
    let mut m = d0.clone();
    for _ in 0..steps {
        let k1 = rhs(&m);
        let k2 = rhs(&m.zip(&k1.scale(h / 2.0), |a, b| a + b));
        let k3 = rhs(&m.zip(&k2.scale(h / 2.0), |a, b| a + b));
        let k4 = rhs(&m.zip(&k3.scale(h), |a, b| a + b));
        let incr = k1.zip(&k2, |a, b| a + 2.0 * b).zip(&k3, |a, b| a + 2.0 * b).zip(&k4, |a, b| a + b);
        m = m.zip(&incr.scale(h / 6.0), |a, b| a + b);
        // keep the iterate Hermitian
        for i in 0..n {
            for j in i..n {
                let avg = (m.at(i, j) + m.at(j, i).conj()) * 0.5;
                m.data[i * n + j] = avg;
                m.data[j * n + i] = avg.conj();
            }
        }
    }
    let e0 = d0.hermitian_eigenvalues()?;
    let et = m.hermitian_eigenvalues()?;
    let eigenvalue_drift = e0.iter().zip(&et).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let square_deviation = m.mul(&m).zip(&d0.mul(&d0), |a, b| a - b).frobenius();
    if !eigenvalue_drift.is_finite() || eigenvalue_drift > 1e3 * LAX_TOLERANCE {
        return Err(Error::Numeric(format!(
            "Lax integration unstable (eigenvalue drift {eigenvalue_drift:e}); retry with dt = {:e}",
            dt / 10.0
        )));
    }
    Ok(LaxReport {
        gamma,
        t_end,
        dt: h,
        steps,
        eigenvalue_drift,
        square_deviation,
        tolerance: LAX_TOLERANCE,
        holds: eigenvalue_drift < LAX_TOLERANCE && square_deviation < LAX_TOLERANCE,
    })
}
