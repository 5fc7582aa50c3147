//! Connection matrices and the exact identities they satisfy.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::complex::{Complex, Simplex};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::bareiss;
use crate::linalg::berkowitz::{self, Inertia, BERKOWITZ_INERTIA_LIMIT};
use crate::linalg::matrix::IntMatrix;

/// Largest complex on which dense exact operations are attempted.
pub const EXACT_CAP: usize = 3000;

/// Above this order the inverse comes from the Green star formula, certified
/// by an exact product check, instead of the adjugate.
pub const ADJUGATE_LIMIT: usize = 250;

pub fn check_exact_cap(c: &Complex) -> Result<()> {
    if c.len() > EXACT_CAP {
        return Err(Error::resource(format!(
            "{} simplices exceed the exact-arithmetic cap of {EXACT_CAP}",
            c.len()
        )));
    }
    Ok(())
}

/// `L(x, y) = 1` iff `x` and `y` intersect.
pub fn connection_matrix(c: &Complex) -> IntMatrix {
    let s = c.simplices();
    IntMatrix::from_fn(s.len(), s.len(), |i, j| i64::from(s[i].intersects(&s[j])))
}

/// `E - L`.
pub fn dual_connection_matrix(c: &Complex) -> IntMatrix {
    let s = c.simplices();
    IntMatrix::from_fn(s.len(), s.len(), |i, j| i64::from(!s[i].intersects(&s[j])))
}

pub fn det_exact(m: &IntMatrix) -> Result<BigInt> {
    bareiss::determinant(m)
}

/// `chi(W+(x))` for every simplex, in canonical order.
fn star_euler(c: &Complex) -> Vec<i64> {
    c.up_sets()
        .iter()
        .map(|up| up.iter().map(|&k| c.simplex(k).omega()).sum())
        .collect()
}

/// `omega(x) omega(y) chi(W+(x) ∩ W+(y))`.
pub fn green_star(c: &Complex, x: &Simplex, y: &Simplex) -> Result<i64> {
    c.require(x)?;
    c.require(y)?;
    let u = x.union(y);
    let chi: i64 = c.simplices().iter().filter(|z| u.is_subset_of(z)).map(Simplex::omega).sum();
    Ok(x.omega() * y.omega() * chi)
}

/// Green star values for all pairs.
pub fn green_star_matrix(c: &Complex) -> IntMatrix {
    let s = c.simplices();
    let star = star_euler(c);
    let n = s.len();
    let mut data = vec![0i64; n * n];
    for i in 0..n {
        for j in i..n {
            let v = match c.index_of(&s[i].union(&s[j])) {
                Some(k) => s[i].omega() * s[j].omega() * star[k],
                None => 0,
            };
            data[i * n + j] = v;
            data[j * n + i] = v;
        }
    }
    IntMatrix::from_fn(n, n, |i, j| data[i * n + j])
}

fn neighbor_lists(c: &Complex) -> Vec<Vec<usize>> {
    let s = c.simplices();
    (0..s.len())
        .map(|i| (0..s.len()).filter(|&j| s[i].intersects(&s[j])).collect())
        .collect()
}

/// Exact test `L g = I` using the sparsity of `L`.
pub fn certifies_inverse(c: &Complex, g: &IntMatrix) -> bool {
    let n = c.len();
    if g.rows() != n || g.cols() != n {
        return false;
    }
    let Some(rows) = g.to_i64_rows() else {
        return false;
    };
    let nb = neighbor_lists(c);
    let mut acc = vec![0i64; n];
    for (i, list) in nb.iter().enumerate() {
        acc.iter_mut().for_each(|a| *a = 0);
        for &k in list {
            for (a, v) in acc.iter_mut().zip(&rows[k]) {
                *a += v;
            }
        }
        if acc.iter().enumerate().any(|(j, &a)| a != i64::from(i == j)) {
            return false;
        }
    }
    true
}

/// Exact integer inverse `g = L^{-1}`.
pub fn green_inverse(c: &Complex) -> Result<IntMatrix> {
    check_exact_cap(c)?;
    if c.len() <= ADJUGATE_LIMIT {
        return bareiss::unimodular_inverse(&connection_matrix(c)).map_err(|e| match e {
            Error::InvalidInput(m) => Error::Invariant(format!("connection matrix is singular: {m}")),
            other => other,
        });
    }
    let g = green_star_matrix(c);
    if certifies_inverse(c, &g) {
        Ok(g)
    } else {
        Err(Error::Invariant("Green star matrix is not the inverse of L".into()))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Unimodularity {
    pub order: usize,
    pub determinant: String,
    pub holds: bool,
}

/// `det L` by exact elimination.
pub fn unimodularity_check(c: &Complex) -> Result<Unimodularity> {
    check_exact_cap(c)?;
    let det = det_exact(&connection_matrix(c))?;
    Ok(Unimodularity { order: c.len(), holds: det.abs().is_one(), determinant: det.to_string() })
}

#[derive(Clone, Debug, Serialize)]
pub struct Energy {
    pub euler_characteristic: i64,
    pub energy: String,
    /// The Green star formula reproduces the inverse entrywise.
    pub green_star_agrees: bool,
    /// `g(x,x) = 1 - chi(S(x))` for every simplex.
    pub diagonal_holds: bool,
    pub holds: bool,
}

pub fn energy_check(c: &Complex) -> Result<Energy> {
    let g = green_inverse(c)?;
    let chi = c.euler_characteristic();
    let energy = g.sum();
    let green_star_agrees = g == green_star_matrix(c);
    let spheres = sphere_euler(c);
    let diagonal_holds = (0..c.len()).all(|i| *g.get(i, i) == BigInt::from(1 - spheres[i]));
    Ok(Energy {
        euler_characteristic: chi,
        holds: energy == BigInt::from(chi) && green_star_agrees && diagonal_holds,
        energy: energy.to_string(),
        green_star_agrees,
        diagonal_holds,
    })
}

/// `chi(S(x))` for every simplex, with `S(x)` the unit sphere in the
/// refinement graph.
pub fn sphere_euler(c: &Complex) -> Vec<i64> {
    let gamma = Graph::containment(c);
    (0..c.len()).map(|i| gamma.euler_within(gamma.neighbors(i))).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct InertiaReport {
    pub inertia: Inertia,
    pub euler_characteristic: i64,
    pub method: &'static str,
    pub holds: bool,
}

/// Exact inertia of `L`: Berkowitz with Descartes' rule up to
/// [`BERKOWITZ_INERTIA_LIMIT`], congruence elimination above.
pub fn inertia_check(c: &Complex) -> Result<InertiaReport> {
    check_exact_cap(c)?;
    let l = connection_matrix(c);
    let inertia = berkowitz::inertia_exact(&l)?;
    let chi = c.euler_characteristic();
    Ok(InertiaReport {
        inertia,
        euler_characteristic: chi,
        method: if c.len() <= BERKOWITZ_INERTIA_LIMIT { "berkowitz" } else { "congruence" },
        holds: inertia.signature() == chi && inertia.z == 0,
    })
}

fn supertrace(c: &Complex, m: &IntMatrix) -> BigInt {
    c.simplices()
        .iter()
        .enumerate()
        .map(|(i, x)| m.get(i, i) * x.omega())
        .sum()
}

#[derive(Clone, Debug, Serialize)]
pub struct Supertraces {
    pub inverse: String,
    pub identity: String,
    pub connection: String,
    pub holds: bool,
}

/// `str(L^k)` for `k = -1, 0, 1`.
pub fn supertrace_powers(c: &Complex) -> Result<Supertraces> {
    let g = green_inverse(c)?;
    let l = connection_matrix(c);
    let id = IntMatrix::identity(c.len());
    let vals = [supertrace(c, &g), supertrace(c, &id), supertrace(c, &l)];
    let chi = BigInt::from(c.euler_characteristic());
    Ok(Supertraces {
        holds: vals.iter().all(|v| *v == chi),
        inverse: vals[0].to_string(),
        identity: vals[1].to_string(),
        connection: vals[2].to_string(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DualProduct {
    /// `det(-L Lbar)`.
    pub determinant: String,
    pub expected: i64,
    pub determinant_holds: bool,
    /// `-Lbar g` has `n-1` eigenvalues 1 and one eigenvalue `1 - chi`.
    pub spectrum_holds: bool,
    /// The same spectral statement for `-L Lbar` itself, decided by exact
    /// characteristic polynomials when the order allows.
    pub literal_spectrum_holds: Option<bool>,
}

fn expected_charpoly(n: usize, root: i64) -> Vec<BigInt> {
    let mut roots = vec![BigInt::one(); n.saturating_sub(1)];
    if n > 0 {
        roots.push(BigInt::from(root));
    }
    berkowitz::from_roots(&roots)
}

pub fn dual_product_check(c: &Complex) -> Result<DualProduct> {
    check_exact_cap(c)?;
    let n = c.len();
    let chi = c.euler_characteristic();
    let l = connection_matrix(c);
    let lbar = dual_connection_matrix(c);
    let prod = l.mul(&lbar)?.neg();
    let det = det_exact(&prod)?;
    let g = green_inverse(c)?;
    let m = lbar.mul(&g)?.neg();
    // -Lbar g = I - E g, and E g has rank at most one with trace chi
    let spectrum_holds = if n <= BERKOWITZ_INERTIA_LIMIT {
        berkowitz::charpoly(&m)? == expected_charpoly(n, 1 - chi)
    } else {
        let shifted = m.sub(&IntMatrix::identity(n))?;
        bareiss::rank(&shifted) <= 1 && m.trace() == BigInt::from(n as i64 - chi)
    };
    let literal_spectrum_holds = if n <= BERKOWITZ_INERTIA_LIMIT {
        Some(berkowitz::charpoly(&prod)? == expected_charpoly(n, 1 - chi))
    } else {
        None
    };
    Ok(DualProduct {
        determinant_holds: det == BigInt::from(1 - chi),
        determinant: det.to_string(),
        expected: 1 - chi,
        spectrum_holds,
        literal_spectrum_holds,
    })
}

fn require_dim_one(c: &Complex) -> Result<()> {
    if c.dim() != 1 {
        return Err(Error::invalid(format!("needs a 1-dimensional complex, got dimension {}", c.dim())));
    }
    Ok(())
}

/// Sign-less incidence: `d(y, x) = 1` when `x` is a facet of `y`.
pub fn signless_incidence(c: &Complex) -> IntMatrix {
    let mut d = IntMatrix::zeros(c.len(), c.len());
    for (i, y) in c.simplices().iter().enumerate() {
        if y.card() > 1 {
            for x in y.facets() {
                d.set(i, c.index_of(&x).expect("closed"), 1);
            }
        }
    }
    d
}

#[derive(Clone, Debug, Serialize)]
pub struct Hydrogen {
    pub holds: bool,
    /// First entry `(x, y)` where `L - g` and `H` differ.
    pub witness: Option<(usize, usize)>,
}

/// `L - L^{-1} = H` with `H = (d + d^T)^2` for the sign-less incidence `d`.
pub fn hydrogen_check(c: &Complex) -> Result<Hydrogen> {
    require_dim_one(c)?;
    let g = green_inverse(c)?;
    let lhs = connection_matrix(c).sub(&g)?;
    let d = signless_incidence(c);
    let dirac = d.add(&d.transpose())?;
    let h = dirac.mul(&dirac)?;
    let n = c.len();
    let witness = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| lhs.get(i, j) != h.get(i, j));
    Ok(Hydrogen { holds: witness.is_none(), witness })
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceIdentity {
    pub trace: i64,
    pub sphere_sum: i64,
    pub derivative_difference: i64,
    pub holds: bool,
}

/// `tr(L - g) = sum_x chi(S(x)) = f'(0) - f'(-1)` where `f` is the
/// generating function of the Barycentric refinement.
pub fn trace_identity(c: &Complex) -> Result<TraceIdentity> {
    let g = green_inverse(c)?;
    let trace = c.len() as i64 - crate::hodge::to_i64(&g.trace())?;
    let sphere_sum: i64 = sphere_euler(c).iter().sum();
    // generating function of the refinement, 1 + sum v_k t^(k+1)
    let f: Vec<i64> = crate::refine::predicted_f_vector(&c.f_vector())
        .iter()
        .map(crate::hodge::to_i64)
        .collect::<Result<_>>()?;
    let d0 = f.first().copied().unwrap_or(0);
    let dm1: i64 = f
        .iter()
        .enumerate()
        .map(|(k, &v)| (k as i64 + 1) * v * if k % 2 == 0 { 1 } else { -1 })
        .sum();
    let derivative_difference = d0 - dm1;
    Ok(TraceIdentity {
        trace,
        sphere_sum,
        derivative_difference,
        holds: trace == sphere_sum && sphere_sum == derivative_difference,
    })
}

/// Largest order for the exact characteristic polynomials of `L^2`, `g^2`.
pub const SYMMETRY_LIMIT: usize = 200;

#[derive(Clone, Debug, Serialize)]
pub struct SpectralSymmetry {
    pub charpoly: Vec<String>,
    pub holds: bool,
}

/// `charpoly(L^2) = charpoly(L^{-2})` for 1-dimensional complexes.
pub fn spectral_symmetry_check(c: &Complex) -> Result<SpectralSymmetry> {
    require_dim_one(c)?;
    if c.len() > SYMMETRY_LIMIT {
        return Err(Error::resource(format!(
            "exact characteristic polynomials limited to order {SYMMETRY_LIMIT}"
        )));
    }
    let l = connection_matrix(c);
    let g = green_inverse(c)?;
    let p = berkowitz::charpoly(&l.mul(&l)?)?;
    let q = berkowitz::charpoly(&g.mul(&g)?)?;
    Ok(SpectralSymmetry { holds: p == q, charpoly: p.iter().map(ToString::to_string).collect() })
}

/// Sum of `M(x, y) = omega(x) omega(y) chi(W-(x) ∩ W-(y))`.
pub fn wu_matrix_sum(c: &Complex) -> i64 {
    let s = c.simplices();
    s.iter()
        .map(|x| {
            s.iter()
                .filter(|y| x.intersects(y))
                .map(|y| x.omega() * y.omega())
                .sum::<i64>()
        })
        .sum()
}

/// Every Green function value lies in `{-1, 0, 1}`.
pub fn green_values_are_units(g: &IntMatrix) -> bool {
    g.entries().iter().all(|x| x.abs() <= BigInt::one())
}

/// Minor sums are only enumerated up to this size.
pub const CAUCHY_BINET_LIMIT: usize = 8;

#[derive(Clone, Debug, Serialize)]
pub struct CauchyBinet {
    /// `p_k`, the coefficients of `det(1 + z F^T G)`.
    pub coefficients: Vec<String>,
    pub minor_sums: Option<Vec<String>>,
    pub holds: bool,
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn minor(m: &IntMatrix, rows: &[usize], cols: &[usize]) -> Result<BigInt> {
    let data = rows.iter().flat_map(|&i| cols.iter().map(move |&j| m.get(i, j).clone())).collect();
    det_exact(&IntMatrix::from_big(rows.len(), cols.len(), data)?)
}

/// `p_k = sum_{|P| = |Q| = k} det(F_{P,Q}) det(G_{P,Q})` against the
/// characteristic polynomial of `F^T G`.
pub fn cauchy_binet_coeffs(f: &IntMatrix, g: &IntMatrix) -> Result<CauchyBinet> {
    if f.rows() != g.rows() || f.cols() != g.cols() {
        return Err(Error::invalid(format!(
            "shapes {}x{} and {}x{} differ",
            f.rows(),
            f.cols(),
            g.rows(),
            g.cols()
        )));
    }
    let cp = berkowitz::charpoly(&f.transpose().mul(g)?)?;
    let coefficients: Vec<BigInt> =
        cp.iter().enumerate().map(|(k, c)| if k % 2 == 0 { c.clone() } else { -c }).collect();
    let (n, m) = (f.rows(), f.cols());
    let minor_sums = if n <= CAUCHY_BINET_LIMIT && m <= CAUCHY_BINET_LIMIT {
        let mut sums = Vec::with_capacity(m + 1);
        for k in 0..=m {
            let mut s = BigInt::zero();
            for p in subsets(n, k) {
                for q in subsets(m, k) {
                    s += minor(f, &p, &q)? * minor(g, &p, &q)?;
                }
            }
            sums.push(s);
        }
        Some(sums)
    } else {
        None
    };
    let holds = minor_sums.as_ref().is_none_or(|s| *s == coefficients);
    Ok(CauchyBinet {
        coefficients: coefficients.iter().map(ToString::to_string).collect(),
        minor_sums: minor_sums.map(|s| s.iter().map(ToString::to_string).collect()),
        holds,
    })
}
