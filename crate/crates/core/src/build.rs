//! Named complexes, Erdős–Rényi Whitney complexes and the strong-ring product.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{Complex, Simplex, Vertex};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::refine;

/// Closure of the simplex on `n` vertices.
pub fn complete(n: usize) -> Result<Complex> {
    if n == 0 {
        return Err(Error::invalid("complete complex needs n >= 1"));
    }
    Ok(Complex::close([(0..n as Vertex).collect::<Vec<_>>()])?.with_name(format!("K{n}")))
}

/// `n` isolated points; `points(2)` is the 0-sphere.
pub fn points(n: usize) -> Result<Complex> {
    if n == 0 {
        return Err(Error::invalid("point complex needs n >= 1"));
    }
    Ok(Complex::close((0..n as Vertex).map(|v| vec![v]))?.with_name(format!("P{n}")))
}

/// Cycle graph `C_n` as a 1-dimensional complex.
pub fn cycle(n: usize) -> Result<Complex> {
    if n < 3 {
        return Err(Error::invalid("cycle needs n >= 3"));
    }
    let n32 = n as Vertex;
    Ok(Complex::close((0..n32).map(|i| vec![i, (i + 1) % n32]))?.with_name(format!("C{n}")))
}

/// Path graph on `n` vertices.
pub fn path(n: usize) -> Result<Complex> {
    if n == 0 {
        return Err(Error::invalid("path needs n >= 1"));
    }
    let c = if n == 1 {
        Complex::close([vec![0]])?
    } else {
        Complex::close((0..n as Vertex - 1).map(|i| vec![i, i + 1]))?
    };
    Ok(c.with_name(format!("L{n}")))
}

/// Join of `d + 1` copies of the 0-sphere.
pub fn cross_polytope(d: usize) -> Result<Complex> {
    let p2 = points(2)?;
    let mut c = p2.clone();
    for _ in 0..d {
        c = c.join(&p2).0;
    }
    Ok(c.with_name(format!("cross{d}")))
}

pub const ICOSAHEDRON_EDGES: [(usize, usize); 30] = [
    (0, 1), (0, 2), (0, 3), (0, 4), (0, 5),
    (1, 2), (2, 3), (3, 4), (4, 5), (1, 5),
    (1, 6), (1, 7), (2, 7), (2, 8), (3, 8), (3, 9), (4, 9), (4, 10), (5, 10), (5, 6),
    (6, 7), (7, 8), (8, 9), (9, 10), (6, 10),
    (6, 11), (7, 11), (8, 11), (9, 11), (10, 11),
];

pub fn icosahedron() -> Complex {
    Graph::from_edges(12, &ICOSAHEDRON_EDGES)
        .expect("fixture is a simple graph")
        .whitney_complex()
        .with_name("icosahedron")
}

/// Whitney (clique) complex of a simple graph on `0..n`.
pub fn whitney(n: usize, edges: &[(usize, usize)]) -> Result<Complex> {
    Ok(Graph::from_edges(n, edges)?.whitney_complex())
}

/// Cone over `c` with apex one above its largest vertex.
pub fn cone(c: &Complex) -> Complex {
    c.join(&Complex::close([vec![0]]).expect("point")).0
}

/// Largest order accepted by [`connected_graphs`].
pub const CONNECTED_GRAPHS_MAX: usize = 6;

/// One representative of every isomorphism class of connected simple graphs
/// on `n` vertices. Classes are told apart by the minimum edge bitmask over
/// all vertex permutations.
pub fn connected_graphs(n: usize) -> Result<Vec<Graph>> {
    if n > CONNECTED_GRAPHS_MAX {
        return Err(Error::resource(format!(
            "exhaustive enumeration limited to n <= {CONNECTED_GRAPHS_MAX}"
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let bit = |a: usize, b: usize| -> usize {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        pairs.iter().position(|&p| p == (a, b)).expect("pair")
    };
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << pairs.len()) {
        let edges: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        let g = Graph::from_edges(n, &edges)?;
        if g.components() != 1 {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| edges.iter().map(|&(a, b)| 1u32 << bit(p[a], p[b])).sum::<u32>())
            .min()
            .expect("nonempty");
        if seen.insert(canon) {
            out.push(g);
        }
    }
    Ok(out)
}

/// Seeded Erdős–Rényi model `E(n, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RandomModel {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
}

impl RandomModel {
    pub fn new(n: usize, p: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid(format!("edge probability {p} outside [0, 1]")));
        }
        Ok(RandomModel { n, p, seed })
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// ChaCha8 stream for trial `trial` of a run seeded with `seed`: the stream
/// seed is `splitmix64(splitmix64(seed) ^ trial)`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(splitmix64(seed) ^ trial))
}

/// Random graph: the `C(n,2)` pairs visited in lexicographic order, each kept
/// when the next uniform draw is below `p`.
pub fn random_graph(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut g = Graph::new(n);
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen::<f64>() < p {
                g.add_edge(a, b);
            }
        }
    }
    g
}

pub fn erdos_renyi(model: &RandomModel) -> Complex {
    let mut rng = trial_rng(model.seed, 0);
    random_graph(model.n, model.p, &mut rng).whitney_complex()
}

/// Polynomial with exact rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<BigRational>);

impl Poly {
    fn constant(c: i64) -> Self {
        Poly(vec![BigRational::from_integer(c.into())])
    }

    fn trim(mut self) -> Self {
        while self.0.len() > 1 && self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }

    fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly((0..n)
            .map(|i| {
                self.0.get(i).cloned().unwrap_or_else(BigRational::zero)
                    + o.0.get(i).cloned().unwrap_or_else(BigRational::zero)
            })
            .collect())
        .trim()
    }

    fn mul(&self, o: &Poly) -> Poly {
        let mut out = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out).trim()
    }

    fn pow(&self, k: usize) -> Poly {
        (0..k).fold(Poly::constant(1), |acc, _| acc.mul(self))
    }

    pub fn eval_exact(&self, x: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `E[dim]` on `E(n, p)`: `d_0 = -1`, `d_{m+1} = 1 + sum_k C(m,k) p^k (1-p)^(m-k) d_k`.
pub fn expected_dimension(n: usize) -> Poly {
    let p = Poly(vec![BigRational::zero(), BigRational::one()]);
    let q = Poly(vec![BigRational::one(), -BigRational::one()]);
    let mut d = vec![Poly::constant(-1)];
    for m in 0..n {
        let mut next = Poly::constant(1);
        for (k, dk) in d.iter().enumerate() {
            let coeff = Poly(vec![BigRational::from_integer(binomial(m, k))]);
            next = next.add(&coeff.mul(&p.pow(k)).mul(&q.pow(m - k)).mul(dk));
        }
        d.push(next);
    }
    d.pop().expect("nonempty")
}

/// `E[chi]` on `E(n, p)`: `sum_{k=1}^n (-1)^(k+1) C(n,k) p^C(k,2)`.
pub fn expected_euler(n: usize) -> Poly {
    let max_deg = n * n.saturating_sub(1) / 2;
    let mut c = vec![BigRational::zero(); max_deg + 1];
    for k in 1..=n {
        let sign = if k % 2 == 1 { 1 } else { -1 };
        c[k * (k - 1) / 2] += BigRational::from_integer(binomial(n, k) * sign);
    }
    Poly(c).trim()
}

/// Sample mean and standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_err: f64,
}

impl Estimate {
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        if xs.len() < 2 {
            return Estimate { mean, std_err: 0.0 };
        }
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        Estimate { mean, std_err: (var / n).sqrt() }
    }

    /// `(mean - target) / std_err`; zero when both coincide with no spread.
    pub fn z_score(&self, target: f64) -> f64 {
        let diff = self.mean - target;
        if self.std_err == 0.0 {
            if diff.abs() < 1e-12 {
                0.0
            } else {
                f64::INFINITY.copysign(diff)
            }
        } else {
            diff / self.std_err
        }
    }
}

/// Per-trial statistics on `E(n, p)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonteCarlo {
    pub dimension: Estimate,
    pub euler: Estimate,
    pub wu: Estimate,
}

/// Monte Carlo estimates of inductive dimension, Euler characteristic and
/// Wu characteristic. Trials run in parallel on independent substreams and
/// are reduced in trial order, so results do not depend on scheduling.
pub fn monte_carlo(n: usize, p: f64, trials: u64, seed: u64) -> Result<MonteCarlo> {
    RandomModel::new(n, p, seed)?;
    if trials == 0 {
        return Err(Error::invalid("trials must be >= 1"));
    }
    let samples: Vec<(f64, f64, f64)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let g = random_graph(n, p, &mut trial_rng(seed, t));
            let dim: f64 = g.inductive_dimension();
            let c = g.whitney_complex();
            (dim, c.euler_characteristic() as f64, c.wu() as f64)
        })
        .collect();
    let col = |f: fn(&(f64, f64, f64)) -> f64| samples.iter().map(f).collect::<Vec<_>>();
    Ok(MonteCarlo {
        dimension: Estimate::from_samples(&col(|s| s.0)),
        euler: Estimate::from_samples(&col(|s| s.1)),
        wu: Estimate::from_samples(&col(|s| s.2)),
    })
}

/// Cell `(x, y)` of the product `A x B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductCell {
    pub left: Simplex,
    pub right: Simplex,
}

impl ProductCell {
    pub fn dim(&self) -> usize {
        self.left.dim() + self.right.dim()
    }
}

/// Product poset of two complexes with the componentwise order. Cell
/// `(i, j)` sits at index `i * |B| + j`.
#[derive(Clone, Debug)]
pub struct ProductPoset {
    pub cells: Vec<ProductCell>,
    pub above: Vec<Vec<usize>>,
}

pub fn ring_product(a: &Complex, b: &Complex) -> ProductPoset {
    let (ua, ub) = (a.up_sets(), b.up_sets());
    let nb = b.len();
    let mut cells = Vec::with_capacity(a.len() * nb);
    let mut above = Vec::with_capacity(a.len() * nb);
    for (i, x) in a.simplices().iter().enumerate() {
        for (j, y) in b.simplices().iter().enumerate() {
            cells.push(ProductCell { left: x.clone(), right: y.clone() });
            let mut up = Vec::with_capacity(ua[i].len() * ub[j].len());
            for &k in &ua[i] {
                for &l in &ub[j] {
                    if (k, l) != (i, j) {
                        up.push(k * nb + l);
                    }
                }
            }
            above.push(up);
        }
    }
    ProductPoset { cells, above }
}

impl ProductPoset {
    /// Largest cell dimension, `-1` when empty.
    pub fn dim(&self) -> isize {
        self.cells.iter().map(|c| c.dim() as isize).max().unwrap_or(-1)
    }

    /// Simplicial realization `(A x B)_1`.
    pub fn order_complex(&self) -> Complex {
        refine::order_complex(&self.above)
    }
}
