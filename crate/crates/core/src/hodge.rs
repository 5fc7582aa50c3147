//! Simplicial cohomology and the theorems built on it: Euler–Poincaré,
//! McKean–Singer, Lefschetz, Künneth, interaction cohomology, Alexander
//! duality and Stokes.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::build::ring_product;
use crate::complex::{Complex, Simplex, Vertex};
use crate::error::{Error, Result};
use crate::linalg::eigen::{self, Mat};
use crate::linalg::matrix::IntMatrix;
use crate::linalg::sparse::SparseMatrix;
use crate::linalg::rational::{self, Q};

/// Graded cochain complex with coboundaries `d_k : C^k -> C^{k+1}`.
#[derive(Clone, Debug)]
pub struct ChainComplexData {
    /// Number of basis elements per degree.
    pub dims: Vec<usize>,
    /// `d[k]` is a `dims[k+1] x dims[k]` matrix.
    pub d: Vec<SparseMatrix>,
}

impl ChainComplexData {
    fn from_parts(dims: Vec<usize>, d: Vec<SparseMatrix>) -> Result<Self> {
        let c = ChainComplexData { dims, d };
        c.verify_dd()?;
        Ok(c)
    }

    fn verify_dd(&self) -> Result<()> {
        for k in 1..self.d.len() {
            if !self.d[k].mul(&self.d[k - 1])?.is_zero() {
                return Err(Error::Invariant(format!("d_{k} d_{} is not zero", k - 1)));
            }
        }
        Ok(())
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    fn offsets(&self) -> Vec<usize> {
        let mut o = vec![0];
        for &n in &self.dims {
            o.push(o.last().unwrap() + n);
        }
        o
    }

    /// Dirac operator `D = d + d^T` on the whole cochain space.
    pub fn dirac(&self) -> IntMatrix {
        let n = self.total_dim();
        let off = self.offsets();
        let mut m = IntMatrix::zeros(n, n);
        for (k, dk) in self.d.iter().enumerate() {
            for i in 0..dk.rows() {
                for &(j, v) in dk.row(i) {
                    m.set(off[k + 1] + i, off[k] + j, v);
                    m.set(off[k] + j, off[k + 1] + i, v);
                }
            }
        }
        m
    }

    /// Hodge block `H_k = d_{k-1} d_{k-1}^T + d_k^T d_k` on `C^k`.
    pub fn hodge_block(&self, k: usize) -> Result<IntMatrix> {
        let n = self.dims[k];
        let mut h = IntMatrix::zeros(n, n);
        if k > 0 {
            let a = self.d[k - 1].to_dense();
            h = h.add(&a.mul(&a.transpose())?)?;
        }
        if k < self.d.len() {
            let b = self.d[k].to_dense();
            h = h.add(&b.transpose().mul(&b)?)?;
        }
        Ok(h)
    }

    /// Ranks of every coboundary, top degree first. A pivot column of
    /// `d[k+1]` marks a row of `d[k]` that is a combination of rows with
    /// larger index (since `d[k+1] d[k] = 0`), so those rows are skipped.
    fn ranks(&self) -> Vec<usize> {
        let mut ranks = vec![0; self.d.len()];
        let mut skip: Vec<bool> = Vec::new();
        for k in (0..self.d.len()).rev() {
            let pivots = self.d[k].pivot_columns(&skip);
            ranks[k] = pivots.len();
            skip = vec![false; self.d[k].cols()];
            for p in pivots {
                skip[p] = true;
            }
        }
        ranks
    }

    pub fn betti(&self) -> Vec<usize> {
        let r = self.ranks();
        (0..self.dims.len())
            .map(|k| {
                let out = r.get(k).copied().unwrap_or(0);
                let inc = if k > 0 { r[k - 1] } else { 0 };
                self.dims[k] - out - inc
            })
            .collect()
    }
}

fn position_maps(c: &Complex) -> (Vec<usize>, Vec<usize>) {
    // degree and position inside the degree, per canonical index
    let mut deg = Vec::with_capacity(c.len());
    let mut pos = Vec::with_capacity(c.len());
    let mut counts: Vec<usize> = Vec::new();
    for s in c.simplices() {
        let k = s.dim();
        if counts.len() <= k {
            counts.resize(k + 1, 0);
        }
        deg.push(k);
        pos.push(counts[k]);
        counts[k] += 1;
    }
    (deg, pos)
}

/// Signed coboundaries with simplices oriented by increasing vertex order:
/// `(d f)(x) = sum_j (-1)^j f(x without its j-th vertex)`.
pub fn exterior_derivative(c: &Complex) -> Result<ChainComplexData> {
    let dims: Vec<usize> = c.f_vector().0.iter().map(|&v| v as usize).collect();
    let (_, pos) = position_maps(c);
    let mut rows: Vec<Vec<Vec<(usize, i64)>>> = vec![Vec::new(); dims.len().saturating_sub(1)];
    for y in c.simplices().iter().filter(|y| y.card() > 1) {
        let row = y
            .facets()
            .iter()
            .enumerate()
            .map(|(j, x)| {
                let xi = c.index_of(x).expect("closed complex");
                (pos[xi], if j % 2 == 0 { 1 } else { -1 })
            })
            .collect();
        rows[y.dim() - 1].push(row);
    }
    let d = rows
        .into_iter()
        .enumerate()
        .map(|(k, r)| SparseMatrix::from_rows(dims[k], r))
        .collect::<Result<_>>()?;
    ChainComplexData::from_parts(dims, d)
}

/// Betti numbers with the Poincaré and Euler polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyReport {
    pub betti: Vec<usize>,
    /// `p(t) = sum b_k t^k`, lowest degree first.
    pub poincare_poly: Vec<i64>,
    /// `e(t) = sum v_k t^k`, lowest degree first.
    pub euler_poly: Vec<i64>,
    /// `p(-1) = e(-1)`.
    pub euler_characteristic: i64,
}

fn alternating(v: &[i64]) -> i64 {
    v.iter().enumerate().map(|(k, &x)| if k % 2 == 0 { x } else { -x }).sum()
}

impl CohomologyReport {
    fn new(betti: Vec<usize>, dims: &[usize]) -> Result<Self> {
        let poincare_poly: Vec<i64> = betti.iter().map(|&b| b as i64).collect();
        let euler_poly: Vec<i64> = dims.iter().map(|&v| v as i64).collect();
        let chi = alternating(&euler_poly);
        if alternating(&poincare_poly) != chi {
            return Err(Error::Invariant("Euler–Poincaré identity failed".into()));
        }
        Ok(CohomologyReport { betti, poincare_poly, euler_poly, euler_characteristic: chi })
    }
}

/// Exact Betti numbers `b_k = v_k - rank d_k - rank d_{k-1}`.
pub fn betti(c: &Complex) -> Result<CohomologyReport> {
    let cc = exterior_derivative(c)?;
    CohomologyReport::new(cc.betti(), &cc.dims)
}

/// Kernel dimensions of the Hodge blocks from numeric eigenvalues below
/// `1e-8`.
pub fn numeric_betti(c: &Complex) -> Result<Vec<usize>> {
    let cc = exterior_derivative(c)?;
    (0..cc.dims.len())
        .map(|k| {
            let h = cc.hodge_block(k)?.to_f64();
            Ok(eigen::eigenvalues(&h)?.iter().filter(|l| l.abs() < 1e-8).count())
        })
        .collect()
}

/// McKean–Singer report: exact super traces of Hodge powers and numeric
/// heat-kernel super traces.
#[derive(Clone, Debug, Serialize)]
pub struct McKeanSinger {
    pub euler_characteristic: i64,
    /// `str(H^k)` for `k = 0..=6`, as decimal strings.
    pub exact_supertraces: Vec<String>,
    /// `(t, str(exp(-tH)))`.
    pub heat_supertraces: Vec<(f64, f64)>,
    pub holds: bool,
}

pub fn mckean_singer_check(c: &Complex, ts: &[f64]) -> Result<McKeanSinger> {
    let cc = exterior_derivative(c)?;
    let chi = c.euler_characteristic();
    let blocks: Vec<IntMatrix> = (0..cc.dims.len()).map(|k| cc.hodge_block(k)).collect::<Result<_>>()?;
    let mut exact = Vec::new();
    let mut holds = true;
    let mut powers: Vec<IntMatrix> = blocks.iter().map(|b| IntMatrix::identity(b.rows())).collect();
    for m in 0..=6 {
        if m > 0 {
            for (p, b) in powers.iter_mut().zip(&blocks) {
                *p = p.mul(b)?;
            }
        }
        let st: BigInt = powers
            .iter()
            .enumerate()
            .map(|(k, p)| if k % 2 == 0 { p.trace() } else { -p.trace() })
            .sum();
        let want = if m == 0 { BigInt::from(chi) } else { BigInt::zero() };
        holds &= st == want;
        exact.push(st.to_string());
    }
    let spectra: Vec<Vec<f64>> = blocks
        .iter()
        .map(|b| eigen::eigenvalues(&b.to_f64()))
        .collect::<Result<_>>()?;
    let heat: Vec<(f64, f64)> = ts
        .iter()
        .map(|&t| {
            let s: f64 = spectra
                .iter()
                .enumerate()
                .map(|(k, sp)| {
                    let tr: f64 = sp.iter().map(|l| (-t * l).exp()).sum();
                    if k % 2 == 0 {
                        tr
                    } else {
                        -tr
                    }
                })
                .sum();
            (t, s)
        })
        .collect();
    holds &= heat.iter().all(|&(_, s)| (s - chi as f64).abs() < 1e-8);
    Ok(McKeanSinger { euler_characteristic: chi, exact_supertraces: exact, heat_supertraces: heat, holds })
}

fn permutation_sign(v: &[Vertex]) -> i64 {
    let mut inv = 0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] > v[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LefschetzReport {
    /// Trace of the induced map on `H^k`.
    pub traces: Vec<String>,
    pub cohomological: String,
    pub fixed_point_sum: i64,
    pub fixed_simplices: usize,
    pub agree: bool,
}

/// Image of `x` under a vertex map, with the sign of the permutation that
/// sorts the image tuple.
fn apply_map(x: &Simplex, t: &BTreeMap<Vertex, Vertex>) -> (Simplex, i64) {
    let img: Vec<Vertex> = x.vertices().iter().map(|v| t[v]).collect();
    let sign = permutation_sign(&img);
    (Simplex::new(img).expect("nonempty"), sign)
}

/// Lefschetz number of a simplicial automorphism against its fixed-point sum.
pub fn lefschetz(c: &Complex, t: &BTreeMap<Vertex, Vertex>) -> Result<LefschetzReport> {
    let verts: HashSet<Vertex> = c.vertices().iter().copied().collect();
    let mut images = HashSet::new();
    for v in c.vertices() {
        let w = t.get(v).ok_or_else(|| Error::invalid(format!("map undefined at vertex {v}")))?;
        if !verts.contains(w) || !images.insert(*w) {
            return Err(Error::invalid("map is not a permutation of the vertices"));
        }
    }
    let (_, pos) = position_maps(c);
    let cc = exterior_derivative(c)?;
    let mut pullbacks: Vec<Vec<(usize, usize, i64)>> = vec![Vec::new(); cc.dims.len()];
    let mut fixed_sum = 0i64;
    let mut fixed = 0usize;
    for (i, x) in c.simplices().iter().enumerate() {
        let (y, sign) = apply_map(x, t);
        let j = c
            .index_of(&y)
            .ok_or_else(|| Error::invalid(format!("map sends {x:?} outside the complex")))?;
        pullbacks[x.dim()].push((pos[i], pos[j], sign));
        if i == j {
            fixed += 1;
            fixed_sum += x.omega() * sign;
        }
    }
    let mut traces = Vec::new();
    let mut total = Q::zero();
    for k in 0..cc.dims.len() {
        let n = cc.dims[k];
        let to_q = |m: &IntMatrix| -> Vec<Vec<Q>> {
            (0..m.rows())
                .map(|i| m.row(i).iter().map(|x| Q::from_integer(x.clone())).collect())
                .collect()
        };
        let cocycles = if k < cc.d.len() {
            rational::nullspace(&to_q(&cc.d[k].to_dense()), n)
        } else {
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { rational::q(1) } else { Q::zero() }).collect())
                .collect()
        };
        let boundaries: Vec<Vec<Q>> = if k > 0 {
            let dk = cc.d[k - 1].to_dense();
            let cols: Vec<Vec<Q>> = (0..dk.cols())
                .map(|j| (0..dk.rows()).map(|i| Q::from_integer(dk.get(i, j).clone())).collect())
                .collect();
            let idx = rational::extend_basis(&[], &cols);
            idx.into_iter().map(|j| cols[j].clone()).collect()
        } else {
            Vec::new()
        };
        let reps_idx = rational::extend_basis(&boundaries, &cocycles);
        let reps: Vec<Vec<Q>> = reps_idx.iter().map(|&i| cocycles[i].clone()).collect();
        let mut basis = boundaries.clone();
        basis.extend(reps.iter().cloned());
        let mut trace = Q::zero();
        for (r, h) in reps.iter().enumerate() {
            let mut img = vec![Q::zero(); n];
            for &(px, py, sign) in &pullbacks[k] {
                img[px] = &h[py] * rational::q(sign);
            }
            let coords = rational::coordinates(&basis, &img)
                .ok_or_else(|| Error::Invariant("pulled-back cocycle left the cocycle space".into()))?;
            trace += &coords[boundaries.len() + r];
        }
        if k % 2 == 0 {
            total += &trace;
        } else {
            total -= &trace;
        }
        traces.push(trace.to_string());
    }
    let agree = total == rational::q(fixed_sum);
    Ok(LefschetzReport {
        traces,
        cohomological: total.to_string(),
        fixed_point_sum: fixed_sum,
        fixed_simplices: fixed,
        agree,
    })
}

/// Cochain complex of the product cell complex `A x B` with the graded
/// tensor coboundary `d_A ⊗ 1 + (-1)^deg 1 ⊗ d_B`. Cells are ordered
/// `(i, j) -> i * |B| + j`, degree-blocked.
pub fn product_cochains(a: &Complex, b: &Complex) -> Result<(ChainComplexData, Vec<(usize, usize)>)> {
    let ca = exterior_derivative(a)?;
    let cb = exterior_derivative(b)?;
    let (_, pa) = position_maps(a);
    let (_, pb) = position_maps(b);
    let max_deg = ca.dims.len() + cb.dims.len() - 2;
    let mut cells_by_deg: Vec<Vec<(usize, usize)>> = vec![Vec::new(); max_deg + 1];
    for (i, x) in a.simplices().iter().enumerate() {
        for (j, y) in b.simplices().iter().enumerate() {
            cells_by_deg[x.dim() + y.dim()].push((i, j));
        }
    }
    let index: HashMap<(usize, usize), usize> = cells_by_deg
        .iter()
        .flat_map(|cells| cells.iter().enumerate().map(|(p, &c)| (c, p)))
        .collect();
    let dims: Vec<usize> = cells_by_deg.iter().map(Vec::len).collect();
    let (ta, tb) = (ca.d.iter().map(SparseMatrix::transpose).collect::<Vec<_>>(), cb.d.iter().map(SparseMatrix::transpose).collect::<Vec<_>>());
    let (oa, ob) = (first_of_dim(a), first_of_dim(b));
    let sa = a.simplices();
    let sb = b.simplices();
    let mut d = Vec::with_capacity(max_deg);
    for k in 0..max_deg {
        // rows of the transpose: images of each degree-k cell
        let mut cols: Vec<Vec<(usize, i64)>> = Vec::with_capacity(dims[k]);
        for &(i, j) in &cells_by_deg[k] {
            let (di, dj) = (sa[i].dim(), sb[j].dim());
            let mut out = Vec::new();
            if di < ta.len() {
                for &(r, v) in ta[di].row(pa[i]) {
                    out.push((index[&(oa[di + 1] + r, j)], v));
                }
            }
            if dj < tb.len() {
                let sign = if di % 2 == 0 { 1 } else { -1 };
                for &(r, v) in tb[dj].row(pb[j]) {
                    out.push((index[&(i, ob[dj + 1] + r)], v * sign));
                }
            }
            cols.push(out);
        }
        d.push(SparseMatrix::from_rows(dims[k + 1], cols)?.transpose());
    }
    let flat: Vec<(usize, usize)> = cells_by_deg.into_iter().flatten().collect();
    Ok((ChainComplexData::from_parts(dims, d)?, flat))
}

/// Canonical index of the first simplex of each dimension.
fn first_of_dim(c: &Complex) -> Vec<usize> {
    let mut out = Vec::new();
    for (i, s) in c.simplices().iter().enumerate() {
        if s.dim() == out.len() {
            out.push(i);
        }
    }
    out
}

fn multiset_close(mut a: Vec<f64>, mut b: Vec<f64>, tol: f64) -> bool {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= tol)
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct KuennethReport {
    pub betti_left: Vec<usize>,
    pub betti_right: Vec<usize>,
    /// Betti numbers of the order complex `(A x B)_1`.
    pub betti_product: Vec<usize>,
    pub poincare_multiplicative: bool,
    pub euler_multiplicative: bool,
    pub hodge_spectrum_additive: bool,
    pub connection_kronecker: bool,
    pub connection_spectrum_multiplicative: bool,
    pub holds: bool,
}

/// Künneth and strong-ring checks for the product of two complexes.
pub fn kuenneth_check(a: &Complex, b: &Complex, cap: usize) -> Result<KuennethReport> {
    let cells = a.len() * b.len();
    if cells > cap {
        return Err(Error::resource(format!("product has {cells} cells, cap is {cap}")));
    }
    let pa = betti(a)?;
    let pb = betti(b)?;
    let poset = ring_product(a, b);
    let oc = poset.order_complex();
    let pab = betti(&oc)?;
    let mut want = poly_mul(&pa.poincare_poly, &pb.poincare_poly);
    let mut got = pab.poincare_poly.clone();
    trim(&mut want);
    trim(&mut got);
    let poincare_multiplicative = want == got;

    // cell counts of the product by degree against e_A * e_B
    let mut cell_counts = vec![0i64; (a.dim() + b.dim() + 1).max(0) as usize];
    for c in &poset.cells {
        cell_counts[c.dim()] += 1;
    }
    let euler_multiplicative = poly_mul(&pa.euler_poly, &pb.euler_poly) == cell_counts;

    let (pc, _) = product_cochains(a, b)?;
    let h_prod = eigen::eigenvalues(&pc.dirac().to_f64().mul(&pc.dirac().to_f64()))?;
    let ha = hodge_spectrum(a)?;
    let hb = hodge_spectrum(b)?;
    let sums: Vec<f64> = ha.iter().flat_map(|x| hb.iter().map(move |y| x + y)).collect();
    let hodge_spectrum_additive = multiset_close(h_prod, sums, 1e-6);

    let la = crate::conn::connection_matrix(a);
    let lb = crate::conn::connection_matrix(b);
    let kron = la.kron(&lb);
    let direct = IntMatrix::from_fn(cells, cells, |p, q| {
        let (i, j) = (p / b.len(), p % b.len());
        let (k, l) = (q / b.len(), q % b.len());
        i64::from(a.simplex(i).intersects(a.simplex(k)) && b.simplex(j).intersects(b.simplex(l)))
    });
    let connection_kronecker = kron == direct;
    let sa = eigen::eigenvalues(&la.to_f64())?;
    let sb = eigen::eigenvalues(&lb.to_f64())?;
    let prods: Vec<f64> = sa.iter().flat_map(|x| sb.iter().map(move |y| x * y)).collect();
    let connection_spectrum_multiplicative =
        multiset_close(eigen::eigenvalues(&kron.to_f64())?, prods, 1e-6);

    let holds = poincare_multiplicative
        && euler_multiplicative
        && hodge_spectrum_additive
        && connection_kronecker
        && connection_spectrum_multiplicative;
    Ok(KuennethReport {
        betti_left: pa.betti,
        betti_right: pb.betti,
        betti_product: pab.betti,
        poincare_multiplicative,
        euler_multiplicative,
        hodge_spectrum_additive,
        connection_kronecker,
        connection_spectrum_multiplicative,
        holds,
    })
}

fn trim(v: &mut Vec<i64>) {
    while v.len() > 1 && v.last() == Some(&0) {
        v.pop();
    }
}

/// Eigenvalues of `H = (d + d^T)^2`.
pub fn hodge_spectrum(c: &Complex) -> Result<Vec<f64>> {
    let cc = exterior_derivative(c)?;
    let mut all = Vec::new();
    for k in 0..cc.dims.len() {
        all.extend(eigen::eigenvalues(&cc.hodge_block(k)?.to_f64())?);
    }
    all.sort_by(f64::total_cmp);
    Ok(all)
}

/// Interaction cohomology on ordered intersecting pairs `(x, y)`, graded by
/// `dim x + dim y`.
pub fn interaction_cochains(c: &Complex) -> Result<(ChainComplexData, Vec<(usize, usize)>)> {
    let s = c.simplices();
    let n = s.len();
    let max_deg = if n == 0 { 0 } else { 2 * c.dim() as usize };
    let mut by_deg: Vec<Vec<(usize, usize)>> = vec![Vec::new(); if n == 0 { 0 } else { max_deg + 1 }];
    for i in 0..n {
        for j in 0..n {
            if s[i].intersects(&s[j]) {
                by_deg[s[i].dim() + s[j].dim()].push((i, j));
            }
        }
    }
    let index: HashMap<(usize, usize), usize> = by_deg
        .iter()
        .flat_map(|v| v.iter().enumerate().map(|(p, &c)| (c, p)))
        .collect();
    let dims: Vec<usize> = by_deg.iter().map(Vec::len).collect();
    let mut d = Vec::with_capacity(dims.len().saturating_sub(1));
    for k in 1..by_deg.len() {
        let mut rows = Vec::with_capacity(dims[k]);
        for &(i, j) in &by_deg[k] {
            let (x, y) = (&s[i], &s[j]);
            let mut row = Vec::new();
            if x.card() > 1 {
                for (q, fx) in x.facets().iter().enumerate() {
                    if fx.intersects(y) {
                        let fi = c.index_of(fx).expect("face");
                        row.push((index[&(fi, j)], if q % 2 == 0 { 1 } else { -1 }));
                    }
                }
            }
            if y.card() > 1 {
                let sx = if x.dim() % 2 == 0 { 1 } else { -1 };
                for (q, fy) in y.facets().iter().enumerate() {
                    if x.intersects(fy) {
                        let fj = c.index_of(fy).expect("face");
                        row.push((index[&(i, fj)], if q % 2 == 0 { sx } else { -sx }));
                    }
                }
            }
            rows.push(row);
        }
        d.push(SparseMatrix::from_rows(dims[k - 1], rows)?);
    }
    let flat = by_deg.into_iter().flatten().collect();
    Ok((ChainComplexData::from_parts(dims, d)?, flat))
}

pub fn interaction_cohomology(c: &Complex) -> Result<CohomologyReport> {
    let (cc, _) = interaction_cochains(c)?;
    CohomologyReport::new(cc.betti(), &cc.dims)
}

/// `K(v) = sum_{v in x, x ~ y} omega(x) omega(y) / |x|` with `|x|` the number
/// of vertices of `x`; the curvatures sum to the Wu characteristic.
pub fn wu_gauss_bonnet(c: &Complex) -> Vec<(Vertex, BigRational)> {
    let s = c.simplices();
    let reach: Vec<i64> = s
        .iter()
        .map(|x| s.iter().filter(|y| x.intersects(y)).map(Simplex::omega).sum())
        .collect();
    let mut k: BTreeMap<Vertex, BigRational> =
        c.vertices().iter().map(|&v| (v, BigRational::zero())).collect();
    for (x, r) in s.iter().zip(&reach) {
        let share = BigRational::new(BigInt::from(x.omega() * r), BigInt::from(x.card()));
        for v in x.vertices() {
            *k.get_mut(v).expect("vertex") += &share;
        }
    }
    k.into_iter().collect()
}

/// Alexander dual `G* = { x ⊆ V : V \ x ∉ G }` with the empty face tracked
/// separately: `has_empty_face` is false only for the void complex.
#[derive(Clone, Debug)]
pub struct AlexanderDual {
    pub complex: Complex,
    pub has_empty_face: bool,
}

pub const ALEXANDER_MAX_GROUND: usize = 20;

pub fn alexander_dual(c: &Complex, ground: &[Vertex]) -> Result<AlexanderDual> {
    let mut v: Vec<Vertex> = ground.to_vec();
    v.sort_unstable();
    v.dedup();
    if v.len() > ALEXANDER_MAX_GROUND {
        return Err(Error::resource(format!(
            "ground set of {} vertices exceeds {ALEXANDER_MAX_GROUND}",
            v.len()
        )));
    }
    if let Some(w) = c.vertices().iter().find(|w| v.binary_search(w).is_err()) {
        return Err(Error::invalid(format!("vertex {w} is not in the ground set")));
    }
    let n = v.len();
    // G always contains the empty face
    let in_g = |mask: u32| -> bool {
        mask == 0 || c.contains(&Simplex::from_sorted((0..n).filter(|i| mask >> i & 1 == 1).map(|i| v[i]).collect()))
    };
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut set = HashSet::new();
    for mask in 1..=full {
        if !in_g(full & !mask) {
            set.insert(Simplex::from_sorted((0..n).filter(|i| mask >> i & 1 == 1).map(|i| v[i]).collect()));
        }
    }
    Ok(AlexanderDual { complex: Complex::from_closed_set(set), has_empty_face: !in_g(full) })
}

/// Reduced Betti numbers indexed from degree `-1`.
pub fn reduced_betti(c: &Complex, has_empty_face: bool) -> Result<Vec<i64>> {
    if c.is_empty() {
        return Ok(vec![i64::from(has_empty_face)]);
    }
    let b = betti(c)?.betti;
    let mut out = vec![0i64];
    out.extend(b.iter().map(|&x| x as i64));
    out[1] -= 1;
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct AlexanderReport {
    pub ground_size: usize,
    /// Reduced Betti numbers of `G` from degree `-1`.
    pub reduced_betti: Vec<i64>,
    /// Reduced Betti numbers of `G*` from degree `-1`.
    pub reduced_betti_dual: Vec<i64>,
    pub holds: bool,
}

/// `b~_k(G*) = b~_{n-3-k}(G)` for every `k`.
pub fn alexander_check(c: &Complex, ground: &[Vertex]) -> Result<AlexanderReport> {
    let dual = alexander_dual(c, ground)?;
    let n = ground.len() as i64;
    let bg = reduced_betti(c, true)?;
    let bd = reduced_betti(&dual.complex, dual.has_empty_face)?;
    let get = |v: &[i64], k: i64| -> i64 {
        if k < -1 {
            0
        } else {
            v.get((k + 1) as usize).copied().unwrap_or(0)
        }
    };
    let holds = (-1..=n).all(|k| get(&bd, k) == get(&bg, n - 3 - k));
    Ok(AlexanderReport { ground_size: ground.len(), reduced_betti: bg, reduced_betti_dual: bd, holds })
}

/// `(dF(A), F(δA))` for a `k`-form `F` and a `(k+1)`-chain `A`, both in the
/// oriented bases of degree `k` and `k+1`.
pub fn stokes_pairing(c: &Complex, k: usize, form: &[BigInt], chain: &[BigInt]) -> Result<(BigInt, BigInt)> {
    let cc = exterior_derivative(c)?;
    if k >= cc.d.len() {
        return Err(Error::invalid(format!("no coboundary out of degree {k}")));
    }
    let d = cc.d[k].to_dense();
    if form.len() != d.cols() || chain.len() != d.rows() {
        return Err(Error::invalid(format!(
            "expected a form of length {} and a chain of length {}",
            d.cols(),
            d.rows()
        )));
    }
    let df = d.mul_vec(form)?;
    let lhs: BigInt = df.iter().zip(chain).map(|(a, b)| a * b).sum();
    let boundary = d.transpose().mul_vec(chain)?;
    let rhs: BigInt = boundary.iter().zip(form).map(|(a, b)| a * b).sum();
    Ok((lhs, rhs))
}

/// Numeric spectrum of the Dirac operator as `f64` matrix.
pub fn dirac_f64(c: &Complex) -> Result<Mat> {
    Ok(exterior_derivative(c)?.dirac().to_f64())
}

/// Convert a small big integer to `i64`, erroring when it does not fit.
pub fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::Numeric(format!("{x} does not fit in i64")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build::{complete, cross_polytope, cycle, icosahedron};

    #[test]
    fn derivative_examples() {
        let k2 = complete(2).unwrap();
        let cc = exterior_derivative(&k2).unwrap();
        assert_eq!(cc.d[0].to_dense(), IntMatrix::from_rows(&[vec![-1, 1]]).unwrap());
        let c4 = cycle(4).unwrap();
        assert_eq!(exterior_derivative(&c4).unwrap().d[0].rank(), 3);
    }

    #[test]
    fn betti_examples() {
        assert_eq!(betti(&cycle(4).unwrap()).unwrap().betti, vec![1, 1]);
        assert_eq!(betti(&cross_polytope(2).unwrap()).unwrap().betti, vec![1, 0, 1]);
        assert_eq!(betti(&icosahedron()).unwrap().betti, vec![1, 0, 1]);
        assert_eq!(betti(&complete(3).unwrap()).unwrap().betti, vec![1, 0, 0]);
        assert_eq!(numeric_betti(&cross_polytope(2).unwrap()).unwrap(), vec![1, 0, 1]);
        assert!(betti(&Complex::empty()).unwrap().betti.is_empty());
    }

    #[test]
    fn mckean_singer() {
        let r = mckean_singer_check(&cross_polytope(2).unwrap(), &[0.1, 1.0, 10.0]).unwrap();
        assert!(r.holds, "{r:?}");
        assert_eq!(r.exact_supertraces[0], "2");
    }

    fn rotation(n: u32, step: u32) -> BTreeMap<Vertex, Vertex> {
        (0..n).map(|v| (v, (v + step) % n)).collect()
    }

    #[test]
    fn lefschetz_on_cycles() {
        let c4 = cycle(4).unwrap();
        let id = rotation(4, 0);
        let r = lefschetz(&c4, &id).unwrap();
        assert_eq!(r.cohomological, "0");
        assert!(r.agree);
        let r = lefschetz(&c4, &rotation(4, 1)).unwrap();
        assert_eq!(r.fixed_simplices, 0);
        assert_eq!(r.cohomological, "0");
        let refl: BTreeMap<Vertex, Vertex> = [(0, 0), (1, 3), (2, 2), (3, 1)].into_iter().collect();
        let r = lefschetz(&c4, &refl).unwrap();
        assert_eq!(r.cohomological, "2");
        assert_eq!(r.fixed_point_sum, 2);
        assert_eq!(r.traces, vec!["1", "-1"]);
        let bad: BTreeMap<Vertex, Vertex> = [(0, 0), (1, 2), (2, 1), (3, 3)].into_iter().collect();
        assert!(lefschetz(&c4, &bad).is_err());
    }

    #[test]
    fn kuenneth() {
        let c4 = cycle(4).unwrap();
        let r = kuenneth_check(&c4, &complete(1).unwrap(), 10_000).unwrap();
        assert_eq!(r.betti_product, vec![1, 1]);
        assert!(r.holds);
        let r = kuenneth_check(&c4, &c4, 10_000).unwrap();
        assert_eq!(r.betti_product, vec![1, 2, 1]);
        assert!(r.holds, "{r:?}");
        let k2 = complete(2).unwrap();
        assert_eq!(kuenneth_check(&k2, &k2, 100).unwrap().betti_product, vec![1, 0, 0]);
        assert!(kuenneth_check(&c4, &c4, 10).is_err());
    }

    #[test]
    fn interaction() {
        let k2 = complete(2).unwrap();
        assert_eq!(interaction_cohomology(&k2).unwrap().euler_characteristic, -1);
        assert_eq!(interaction_cohomology(&cycle(4).unwrap()).unwrap().euler_characteristic, 0);
        let k3 = complete(3).unwrap();
        assert_eq!(interaction_cohomology(&k3).unwrap().euler_characteristic, 1);
        let oct = cross_polytope(2).unwrap();
        assert_eq!(interaction_cohomology(&oct).unwrap().euler_characteristic, oct.wu());
    }

    #[test]
    fn wu_curvature_sums() {
        for c in [complete(2).unwrap(), cycle(4).unwrap(), cross_polytope(2).unwrap()] {
            let total: BigRational = wu_gauss_bonnet(&c).into_iter().map(|(_, k)| k).sum();
            assert_eq!(total, BigRational::from_integer(c.wu().into()));
        }
        let oct = cross_polytope(2).unwrap();
        assert_eq!(oct.wu(), 2);
    }

    #[test]
    fn alexander() {
        let c5 = cycle(5).unwrap();
        let ground: Vec<Vertex> = (0..5).collect();
        let r = alexander_check(&c5, &ground).unwrap();
        assert!(r.holds, "{r:?}");
        let k5 = complete(5).unwrap();
        let d = alexander_dual(&k5, &ground).unwrap();
        assert!(d.complex.is_empty() && !d.has_empty_face);
        let sphere = Complex::close_simplices(
            Simplex::new(0..5).unwrap().facets(),
        );
        assert!(alexander_check(&sphere, &ground).unwrap().holds);
    }

    #[test]
    fn stokes() {
        let k2 = complete(2).unwrap();
        let f = vec![BigInt::from(3), BigInt::from(10)];
        let a = vec![BigInt::from(1)];
        let (l, r) = stokes_pairing(&k2, 0, &f, &a).unwrap();
        assert_eq!(l, BigInt::from(7));
        assert_eq!(l, r);
        assert!(stokes_pairing(&k2, 0, &f, &f).is_err());
    }
}
