//! Poincaré–Hopf indices, curvature, valuations, Dehn–Sommerville,
//! level surfaces, and recognition of contractible graphs, spheres and balls.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

use crate::build::{trial_rng, Estimate};
use crate::complex::{Complex, FVector, Simplex, Vertex};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// The graph on which a complex's geometry is evaluated, with the simplex
/// each graph vertex stands for. Flag complexes use their 1-skeleton; any
/// other complex uses the containment graph of its refinement.
#[derive(Clone, Debug)]
pub struct Geometry {
    pub graph: Graph,
    pub points: Vec<Simplex>,
}

impl Geometry {
    pub fn of(c: &Complex) -> Self {
        if c.is_flag() {
            let (graph, labels) = Graph::skeleton(c);
            let points = labels.into_iter().map(Simplex::vertex).collect();
            Geometry { graph, points }
        } else {
            Self::refinement(c)
        }
    }

    /// Containment graph: one vertex per simplex, in canonical order.
    pub fn refinement(c: &Complex) -> Self {
        Geometry { graph: Graph::containment(c), points: c.simplices().to_vec() }
    }

    pub fn point(&self, x: &Simplex) -> Result<usize> {
        self.points
            .iter()
            .position(|p| p == x)
            .ok_or_else(|| Error::NotFound(format!("{x:?} is not a point of the geometry graph")))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn check_locally_injective(g: &Graph, f: &[f64]) -> Result<()> {
    if f.len() != g.order() {
        return Err(Error::invalid(format!(
            "function has {} values for {} points",
            f.len(),
            g.order()
        )));
    }
    if let Some((a, b)) = g.edges().into_iter().find(|&(a, b)| f[a] == f[b]) {
        return Err(Error::invalid(format!(
            "function is not locally injective: points {a} and {b} share value {}",
            f[a]
        )));
    }
    Ok(())
}

/// `S^-_f(v)`: neighbours of `v` with smaller value.
pub fn lower_sphere(g: &Graph, f: &[f64], v: usize) -> VertexSet {
    let mut s = g.neighbors(v).clone();
    for w in g.neighbors(v).iter() {
        if f[w] >= f[v] {
            s.remove(w);
        }
    }
    s
}

/// Graph-level index `1 - chi(S^-_f(v))`.
pub fn graph_index(g: &Graph, f: &[f64], v: usize) -> i64 {
    1 - g.euler_within(&lower_sphere(g, f, v))
}

/// Poincaré–Hopf index of every simplex for a function on simplices
/// (canonical order), evaluated in the refinement graph.
pub fn ph_indices(c: &Complex, f: &[f64]) -> Result<Vec<i64>> {
    let gamma = Graph::containment(c);
    check_locally_injective(&gamma, f)?;
    Ok((0..c.len()).map(|v| graph_index(&gamma, f, v)).collect())
}

/// `i_f(x) = 1 - chi(S^-_f(x))` for a function on the simplices of `c`.
pub fn ph_index(c: &Complex, f: &[f64], x: &Simplex) -> Result<i64> {
    let i = c.require(x)?;
    Ok(ph_indices(c, f)?[i])
}

/// Monte Carlo mean of the index at `x` over uniformly random orderings of
/// the points of the geometry graph.
pub fn curvature_expectation(c: &Complex, x: &Simplex, trials: u64, seed: u64) -> Result<Estimate> {
    if trials == 0 {
        return Err(Error::invalid("trials must be >= 1"));
    }
    let geo = Geometry::of(c);
    let v = geo.point(x)?;
    let n = geo.len();
    let samples: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut trial_rng(seed, t));
            let mut f = vec![0.0; n];
            for (rank, &p) in order.iter().enumerate() {
                f[p] = rank as f64;
            }
            graph_index(&geo.graph, &f, v) as f64
        })
        .collect();
    Ok(Estimate::from_samples(&samples))
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Levitt curvature of a graph vertex: `1 - v_0/2 + v_1/3 - ...` over the
/// f-vector of its unit sphere.
pub fn graph_levitt(g: &Graph, v: usize) -> BigRational {
    let counts = g.clique_counts(g.neighbors(v));
    let mut k = BigRational::one();
    for (j, &c) in counts.iter().enumerate() {
        let term = rat(c as i64, j as i64 + 2);
        if j % 2 == 0 {
            k -= term;
        } else {
            k += term;
        }
    }
    k
}

/// Levitt curvature at a point of the geometry graph of `c`.
pub fn levitt_curvature(c: &Complex, x: &Simplex) -> Result<BigRational> {
    let geo = Geometry::of(c);
    let v = geo.point(x)?;
    Ok(graph_levitt(&geo.graph, v))
}

/// Levitt curvature of every point of the geometry graph.
pub fn levitt_curvatures(c: &Complex) -> Vec<(Simplex, BigRational)> {
    let geo = Geometry::of(c);
    (0..geo.len())
        .map(|v| (geo.points[v].clone(), graph_levitt(&geo.graph, v)))
        .collect()
}

/// Linear functional `X(G) = sum_k X_k v_k(G)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Valuation(pub Vec<BigRational>);

impl Valuation {
    pub fn from_integers(w: &[i64]) -> Self {
        Valuation(w.iter().map(|&x| rat(x, 1)).collect())
    }

    pub fn eval_f(&self, f: &FVector) -> BigRational {
        self.0
            .iter()
            .enumerate()
            .map(|(k, x)| x * BigRational::from_integer(BigInt::from(f.get(k))))
            .sum()
    }

    /// Curvature `K(v) = sum_k X_k v_{k-1}(S(v)) / (k+1)` with `v_{-1} = 1`.
    /// Summed over the vertices of a graph it gives `X` of the Whitney complex.
    pub fn curvature(&self, g: &Graph, v: usize) -> BigRational {
        let counts = g.clique_counts(g.neighbors(v));
        self.0
            .iter()
            .enumerate()
            .map(|(k, x)| {
                let below = if k == 0 { 1 } else { counts.get(k - 1).copied().unwrap_or(0) };
                x * rat(below as i64, k as i64 + 1)
            })
            .sum()
    }
}

pub fn valuation_eval(x: &Valuation, g: &Complex) -> BigRational {
    x.eval_f(&g.f_vector())
}

pub fn intersection(a: &Complex, b: &Complex) -> Complex {
    let set: HashSet<Simplex> = a.simplices().iter().filter(|s| b.contains(s)).cloned().collect();
    Complex::from_closed_set(set)
}

pub fn union(a: &Complex, b: &Complex) -> Complex {
    let mut set: HashSet<Simplex> = a.simplices().iter().cloned().collect();
    set.extend(b.simplices().iter().cloned());
    Complex::from_closed_set(set)
}

/// `X(A ∩ B) + X(A ∪ B) = X(A) + X(B)`.
pub fn valuation_check(x: &Valuation, a: &Complex, b: &Complex) -> bool {
    valuation_eval(x, &intersection(a, b)) + valuation_eval(x, &union(a, b))
        == valuation_eval(x, a) + valuation_eval(x, b)
}

fn binom(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// `X_{k,d} = sum_{j=k}^{d-1} (-1)^(j+d) C(j+1, k+1) v_j + v_k`.
pub fn dehn_sommerville(k: usize, d: usize) -> Result<Valuation> {
    if k > d {
        return Err(Error::invalid(format!("need k <= d, got k={k}, d={d}")));
    }
    let len = d.max(k + 1);
    let mut w = vec![0i64; len];
    for j in k..d {
        let sign = if (j + d).is_multiple_of(2) { 1 } else { -1 };
        w[j] += sign * binom(j + 1, k + 1);
    }
    w[k] += 1;
    Ok(Valuation::from_integers(&w))
}

/// Outcome of the Dehn–Sommerville check on a `d`-graph.
#[derive(Clone, Debug, Serialize)]
pub struct DsReport {
    pub dimension: usize,
    /// `X_{k,d+1}(G)` for `k = 0..=d`, as strings.
    pub global_values: Vec<String>,
    pub holds: bool,
    pub failure: Option<String>,
}

/// On a `d`-graph, `X_{k,d+1}(G) = 0` for all `k`; every unit sphere, a
/// `(d-1)`-graph, has `X_{k,d}(S(v)) = 0`; and the curvature of each
/// `X_{k,d+1}` vanishes at every vertex.
pub fn ds_curvature_check(c: &Complex) -> Result<DsReport> {
    if c.is_empty() {
        return Err(Error::invalid("empty complex is not a d-graph for d >= 0"));
    }
    let d = c.dim() as usize;
    if !is_d_graph(c, d as isize)? {
        return Err(Error::invalid(format!("complex is not a {d}-graph")));
    }
    let geo = Geometry::of(c);
    let f = c.f_vector();
    let mut failure = None;
    let mut global_values = Vec::new();
    for k in 0..=d {
        let x = dehn_sommerville(k, d + 1)?;
        let val = x.eval_f(&f);
        if !val.is_zero() && failure.is_none() {
            failure = Some(format!("X_{{{k},{}}}(G) = {val}", d + 1));
        }
        global_values.push(val.to_string());
        for v in 0..geo.len() {
            let curv = x.curvature(&geo.graph, v);
            if !curv.is_zero() && failure.is_none() {
                failure = Some(format!(
                    "curvature of X_{{{k},{}}} at {:?} is {curv}",
                    d + 1,
                    geo.points[v]
                ));
            }
        }
    }
    for v in 0..geo.len() {
        let s = FVector(geo.graph.clique_counts(geo.graph.neighbors(v)));
        for k in 0..d {
            let val = dehn_sommerville(k, d)?.eval_f(&s);
            if !val.is_zero() && failure.is_none() {
                failure = Some(format!("X_{{{k},{d}}}(S({:?})) = {val}", geo.points[v]));
            }
        }
    }
    Ok(DsReport { dimension: d, global_values, holds: failure.is_none(), failure })
}

/// Sub-complex of the refinement spanned by the simplices on which `f`
/// (given on vertices) takes values on both sides of `level`. Vertex ids of
/// the result are canonical indices of simplices of `c`.
pub fn level_surface(c: &Complex, f: &BTreeMap<Vertex, f64>, level: f64) -> Result<Complex> {
    for v in c.vertices() {
        match f.get(v) {
            None => return Err(Error::invalid(format!("function has no value at vertex {v}"))),
            Some(&x) if x == level => {
                return Err(Error::invalid(format!("level {level} is a value of the function")))
            }
            _ => {}
        }
    }
    let mut keep = VertexSet::new(c.len());
    for (i, s) in c.simplices().iter().enumerate() {
        let vals = s.vertices().iter().map(|v| f[v]);
        let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
        if lo < level && level < hi {
            keep.insert(i);
        }
    }
    Ok(Graph::containment(c).whitney_within(&keep))
}

/// Default number of recursive calls a recognizer may spend.
pub const DEFAULT_BUDGET: u64 = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Kind {
    Contractible,
    DGraph,
    Sphere,
    Ball,
}

/// Memoized recursive recognition on induced subgraphs of one graph.
pub struct Recognizer<'g> {
    g: &'g Graph,
    memo: HashMap<(Kind, isize, VertexSet), bool>,
    euler: HashMap<VertexSet, i64>,
    calls: u64,
    budget: u64,
}

impl<'g> Recognizer<'g> {
    pub fn new(g: &'g Graph) -> Self {
        Self::with_budget(g, DEFAULT_BUDGET)
    }

    pub fn with_budget(g: &'g Graph, budget: u64) -> Self {
        Recognizer { g, memo: HashMap::new(), euler: HashMap::new(), calls: 0, budget }
    }

    fn tick(&mut self) -> Result<()> {
        self.calls += 1;
        if self.calls > self.budget {
            return Err(Error::resource(format!(
                "recognition exceeded its budget of {} recursive calls",
                self.budget
            )));
        }
        Ok(())
    }

    fn chi(&mut self, s: &VertexSet) -> i64 {
        if let Some(&x) = self.euler.get(s) {
            return x;
        }
        let x = self.g.euler_within(s);
        self.euler.insert(s.clone(), x);
        x
    }

    fn sphere_of(&self, s: &VertexSet, v: usize) -> VertexSet {
        self.g.neighbors(v).intersection(s)
    }

    fn memoized(
        &mut self,
        kind: Kind,
        d: isize,
        s: &VertexSet,
        f: impl FnOnce(&mut Self) -> Result<bool>,
    ) -> Result<bool> {
        let key = (kind, d, s.clone());
        if let Some(&b) = self.memo.get(&key) {
            return Ok(b);
        }
        self.tick()?;
        let b = f(self)?;
        self.memo.insert(key, b);
        Ok(b)
    }

    /// Reducible to a point by removing vertices with contractible unit
    /// spheres. The empty graph is not contractible.
    pub fn contractible(&mut self, s: &VertexSet) -> Result<bool> {
        match s.len() {
            0 => return Ok(false),
            1 => return Ok(true),
            _ => {}
        }
        self.memoized(Kind::Contractible, 0, s, |r| {
            if r.chi(s) != 1 {
                return Ok(false);
            }
            let n = s.len();
            if s.iter().any(|v| r.sphere_of(s, v).len() + 1 == n) {
                return Ok(true);
            }
            for v in s.iter() {
                let sv = r.sphere_of(s, v);
                if r.contractible(&sv)? && r.contractible(&s.without(v))? {
                    return Ok(true);
                }
            }
            Ok(false)
        })
    }

    /// Removal order reducing `s` to a single vertex; the last entry is the
    /// surviving vertex.
    pub fn contraction_order(&mut self, s: &VertexSet) -> Result<Option<Vec<usize>>> {
        if !self.contractible(s)? {
            return Ok(None);
        }
        let mut cur = s.clone();
        let mut order = Vec::with_capacity(s.len());
        while cur.len() > 1 {
            let mut next = None;
            for v in cur.iter() {
                let sv = self.sphere_of(&cur, v);
                if self.contractible(&sv)? && self.contractible(&cur.without(v))? {
                    next = Some(v);
                    break;
                }
            }
            let v = next.ok_or_else(|| Error::Invariant("contraction witness lost".into()))?;
            order.push(v);
            cur.remove(v);
        }
        order.push(cur.first().expect("one vertex left"));
        Ok(Some(order))
    }

    /// Every unit sphere is a `(d-1)`-sphere; the `(-1)`-graph is empty.
    pub fn d_graph(&mut self, s: &VertexSet, d: isize) -> Result<bool> {
        if d < 0 {
            return Ok(s.is_empty());
        }
        if s.is_empty() {
            return Ok(false);
        }
        self.memoized(Kind::DGraph, d, s, |r| {
            for v in s.iter() {
                let sv = r.sphere_of(s, v);
                if !r.sphere(&sv, d - 1)? {
                    return Ok(false);
                }
            }
            Ok(true)
        })
    }

    /// A `d`-graph that becomes contractible after removing some vertex.
    pub fn sphere(&mut self, s: &VertexSet, d: isize) -> Result<bool> {
        if d < 0 {
            return Ok(s.is_empty());
        }
        if s.len() < 2 {
            return Ok(false);
        }
        self.memoized(Kind::Sphere, d, s, |r| {
            let want = if d % 2 == 0 { 2 } else { 0 };
            if r.chi(s) != want || !r.d_graph(s, d)? {
                return Ok(false);
            }
            for v in s.iter() {
                if r.contractible(&s.without(v))? {
                    return Ok(true);
                }
            }
            Ok(false)
        })
    }

    /// `0`-ball: a point. `d`-ball: contractible, every unit sphere a
    /// `(d-1)`-sphere or `(d-1)`-ball, and at least one of them a ball.
    pub fn ball(&mut self, s: &VertexSet, d: isize) -> Result<bool> {
        if d < 0 {
            return Ok(false);
        }
        if d == 0 {
            return Ok(s.len() == 1);
        }
        if s.len() < 2 {
            return Ok(false);
        }
        self.memoized(Kind::Ball, d, s, |r| {
            if r.chi(s) != 1 {
                return Ok(false);
            }
            let mut some_ball = false;
            for v in s.iter() {
                let sv = r.sphere_of(s, v);
                if r.ball(&sv, d - 1)? {
                    some_ball = true;
                } else if !r.sphere(&sv, d - 1)? {
                    return Ok(false);
                }
            }
            Ok(some_ball && r.contractible(s)?)
        })
    }
}

pub fn is_contractible(c: &Complex) -> Result<bool> {
    let geo = Geometry::of(c);
    Recognizer::new(&geo.graph).contractible(&geo.graph.all_vertices())
}

pub fn is_d_graph(c: &Complex, d: isize) -> Result<bool> {
    let geo = Geometry::of(c);
    Recognizer::new(&geo.graph).d_graph(&geo.graph.all_vertices(), d)
}

pub fn is_d_sphere(c: &Complex, d: isize) -> Result<bool> {
    let geo = Geometry::of(c);
    Recognizer::new(&geo.graph).sphere(&geo.graph.all_vertices(), d)
}

pub fn is_d_ball(c: &Complex, d: isize) -> Result<bool> {
    let geo = Geometry::of(c);
    Recognizer::new(&geo.graph).ball(&geo.graph.all_vertices(), d)
}

/// Simplices of `c` whose unit sphere in the refinement graph is a
/// `(d-1)`-ball, as a sub-complex of `c`.
pub fn boundary(c: &Complex, d: isize) -> Result<Complex> {
    let gamma = Graph::containment(c);
    let mut rec = Recognizer::new(&gamma);
    let mut set = HashSet::new();
    for (i, s) in c.simplices().iter().enumerate() {
        if rec.ball(gamma.neighbors(i), d - 1)? {
            set.insert(s.clone());
        }
    }
    for s in &set {
        if s.facets().iter().any(|f| !set.contains(f)) {
            return Err(Error::Invariant(format!(
                "boundary simplices are not closed under faces at {s:?}"
            )));
        }
    }
    Ok(Complex::from_closed_set(set))
}

/// Classification of one point under a function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PointType {
    Regular,
    /// `S^-` is an `(index-1)`-sphere.
    Critical { index: usize },
    /// `S^-` is neither contractible nor a sphere.
    Degenerate,
}

#[derive(Clone, Debug, Serialize)]
pub struct MorseReport {
    pub dimension: usize,
    pub is_morse: bool,
    pub first_failure: Option<usize>,
    pub points: Vec<PointType>,
    /// `c_k`: number of critical points of index `k`.
    pub counts: Vec<usize>,
    pub betti: Vec<usize>,
    pub weak_inequalities: bool,
    pub strong_inequalities: bool,
    pub alternating_sum: i64,
}

/// Morse analysis of a function on the vertices of a `d`-graph. A vertex is
/// regular when `S^-_f` is contractible and critical of index `m + 1` when
/// `S^-_f` is an `m`-sphere; anything else breaks the Morse property.
pub fn morse_analysis_graph(g: &Graph, f: &[f64], d: usize, betti: &[usize]) -> Result<MorseReport> {
    check_locally_injective(g, f)?;
    let mut rec = Recognizer::new(g);
    if !rec.d_graph(&g.all_vertices(), d as isize)? {
        return Err(Error::invalid(format!("graph is not a {d}-graph")));
    }
    let mut points = Vec::with_capacity(g.order());
    for v in 0..g.order() {
        let s = lower_sphere(g, f, v);
        let t = if rec.contractible(&s)? {
            PointType::Regular
        } else {
            let mut found = None;
            for m in -1..d as isize {
                if rec.sphere(&s, m)? {
                    found = Some((m + 1) as usize);
                    break;
                }
            }
            found.map_or(PointType::Degenerate, |index| PointType::Critical { index })
        };
        points.push(t);
    }
    let first_failure = points.iter().position(|p| *p == PointType::Degenerate);
    let mut counts = vec![0usize; d + 1];
    for p in &points {
        if let PointType::Critical { index } = p {
            counts[*index] += 1;
        }
    }
    let b = |k: usize| betti.get(k).copied().unwrap_or(0) as i64;
    let weak = (0..=d).all(|k| b(k) <= counts[k] as i64);
    let mut strong = true;
    let mut partial = 0i64;
    for p in 0..=d {
        let term = counts[p] as i64 - b(p);
        partial += if p % 2 == 0 { term } else { -term };
        let signed = if p % 2 == 0 { partial } else { -partial };
        strong &= signed >= 0;
    }
    let alternating_sum = counts
        .iter()
        .enumerate()
        .map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum();
    Ok(MorseReport {
        dimension: d,
        is_morse: first_failure.is_none(),
        first_failure,
        points,
        counts,
        betti: betti.to_vec(),
        weak_inequalities: weak,
        strong_inequalities: strong,
        alternating_sum,
    })
}

/// Morse analysis on the geometry graph of `c`; `f` is indexed like
/// [`Geometry::of`]'s points.
pub fn morse_analysis(c: &Complex, f: &[f64]) -> Result<MorseReport> {
    let geo = Geometry::of(c);
    let d = c.dim().max(0) as usize;
    let betti = crate::hodge::betti(c)?.betti;
    morse_analysis_graph(&geo.graph, f, d, &betti)
}

#[derive(Clone, Debug, Serialize)]
pub struct ReebResult {
    pub success: bool,
    pub indeterminate: bool,
    pub critical_points: usize,
    /// Function values on the geometry graph's points when a witness exists.
    pub function: Option<Vec<f64>>,
}

/// Points where `S^-_f` is not contractible.
pub fn critical_points(g: &Graph, f: &[f64], rec: &mut Recognizer<'_>) -> Result<usize> {
    let mut n = 0;
    for v in 0..g.order() {
        if !rec.contractible(&lower_sphere(g, f, v))? {
            n += 1;
        }
    }
    Ok(n)
}

/// Build a function with exactly two critical points on a `d`-sphere: remove
/// a vertex `v` leaving a contractible graph, order the rest by reversing a
/// contraction sequence, and put `v` on top.
pub fn reeb_sphere_check(c: &Complex) -> Result<ReebResult> {
    let geo = Geometry::of(c);
    let g = &geo.graph;
    let all = g.all_vertices();
    let mut rec = Recognizer::new(g);
    let d = c.dim();
    let attempt = (|| -> Result<ReebResult> {
        if !rec.sphere(&all, d)? {
            return Err(Error::invalid(format!("complex is not a {d}-sphere")));
        }
        for v in all.iter() {
            let Some(order) = rec.contraction_order(&all.without(v))? else {
                continue;
            };
            let mut f = vec![0.0; g.order()];
            for (rank, &p) in order.iter().rev().enumerate() {
                f[p] = rank as f64;
            }
            f[v] = order.len() as f64;
            let n = critical_points(g, &f, &mut rec)?;
            if n == 2 {
                return Ok(ReebResult { success: true, indeterminate: false, critical_points: 2, function: Some(f) });
            }
        }
        Ok(ReebResult { success: false, indeterminate: false, critical_points: 0, function: None })
    })();
    match attempt {
        Err(Error::Resource(_)) => {
            Ok(ReebResult { success: false, indeterminate: true, critical_points: 0, function: None })
        }
        other => other,
    }
}

/// Rational as a reduced fraction string, integers without denominator.
pub fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.to_integer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom().abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build::{complete, cone, cross_polytope, cycle, icosahedron, points};

    fn rq(n: i64, d: i64) -> BigRational {
        rat(n, d)
    }

    #[test]
    fn index_of_dimension_functions() {
        let oct = cross_polytope(2).unwrap();
        let dim: Vec<f64> = oct.simplices().iter().map(|s| s.dim() as f64).collect();
        let idx = ph_indices(&oct, &dim).unwrap();
        for (s, i) in oct.simplices().iter().zip(&idx) {
            assert_eq!(*i, s.omega());
        }
        let neg: Vec<f64> = dim.iter().map(|x| -x).collect();
        let idx = ph_indices(&oct, &neg).unwrap();
        for (s, i) in oct.simplices().iter().zip(&idx) {
            let chi_s = oct.unit_sphere(s).unwrap().euler_characteristic();
            assert_eq!(*i, s.omega() * (1 - chi_s));
        }
        assert_eq!(idx.iter().sum::<i64>(), 2);
    }

    #[test]
    fn non_injective_rejected() {
        let k2 = complete(2).unwrap();
        assert!(ph_indices(&k2, &[0.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn levitt_examples() {
        assert_eq!(levitt_curvature(&points(1).unwrap(), &Simplex::vertex(0)).unwrap(), rq(1, 1));
        let oct = cross_polytope(2).unwrap();
        assert_eq!(levitt_curvature(&oct, &Simplex::vertex(0)).unwrap(), rq(1, 3));
        let ico = icosahedron();
        let total: BigRational = levitt_curvatures(&ico).into_iter().map(|(_, k)| k).sum();
        assert_eq!(total, rq(2, 1));
        assert_eq!(levitt_curvature(&ico, &Simplex::vertex(3)).unwrap(), rq(1, 6));
    }

    #[test]
    fn curvature_estimate_on_a_point() {
        let e = curvature_expectation(&points(1).unwrap(), &Simplex::vertex(0), 10, 1).unwrap();
        assert_eq!(e.mean, 1.0);
    }

    #[test]
    fn valuations() {
        let oct = cross_polytope(2).unwrap();
        assert_eq!(valuation_eval(&Valuation::from_integers(&[1, -1, 1]), &oct), rq(2, 1));
        assert_eq!(valuation_eval(&Valuation::from_integers(&[0, 1, 0]), &cycle(4).unwrap()), rq(4, 1));
        let a = Complex::close([vec![0, 1, 2], vec![2, 3]]).unwrap();
        let b = Complex::close([vec![1, 2, 3], vec![4]]).unwrap();
        assert!(valuation_check(&Valuation::from_integers(&[3, -2, 5]), &a, &b));
    }

    #[test]
    fn dehn_sommerville_values() {
        let oct = cross_polytope(2).unwrap();
        // printed index pair evaluates to -12 on the octahedron
        assert_eq!(valuation_eval(&dehn_sommerville(0, 2).unwrap(), &oct), rq(-12, 1));
        for k in 0..=2 {
            assert!(valuation_eval(&dehn_sommerville(k, 3).unwrap(), &oct).is_zero());
        }
        assert!(valuation_eval(&dehn_sommerville(0, 1).unwrap(), &cycle(5).unwrap()).is_zero());
        assert!(ds_curvature_check(&icosahedron()).unwrap().holds);
        assert!(ds_curvature_check(&cross_polytope(3).unwrap()).unwrap().holds);
        assert!(ds_curvature_check(&cycle(5).unwrap()).unwrap().holds);
        assert!(ds_curvature_check(&complete(3).unwrap()).is_err());
    }

    #[test]
    fn recognition() {
        for n in 1..=5 {
            assert!(is_contractible(&complete(n).unwrap()).unwrap());
        }
        assert!(!is_contractible(&cycle(4).unwrap()).unwrap());
        assert!(!is_contractible(&Complex::empty()).unwrap());
        assert!(is_d_sphere(&Complex::empty(), -1).unwrap());
        assert!(is_d_sphere(&points(2).unwrap(), 0).unwrap());
        assert!(!is_d_sphere(&points(3).unwrap(), 0).unwrap());
        assert!(is_d_sphere(&cycle(5).unwrap(), 1).unwrap());
        assert!(is_d_sphere(&cycle(3).unwrap(), 1).unwrap());
        assert!(!is_d_sphere(&complete(3).unwrap(), 1).unwrap());
        for d in 0..=3 {
            assert!(is_d_sphere(&cross_polytope(d).unwrap(), d as isize).unwrap());
        }
        assert!(is_d_sphere(&icosahedron(), 2).unwrap());
        assert!(!is_d_sphere(&icosahedron(), 1).unwrap());
        let (s, _) = points(2).unwrap().join(&cycle(4).unwrap());
        assert!(is_d_sphere(&s, 2).unwrap());
        assert!(is_d_ball(&cone(&cycle(4).unwrap()), 2).unwrap());
        assert!(is_d_ball(&complete(4).unwrap(), 3).unwrap());
    }

    #[test]
    fn boundaries() {
        let wheel = cone(&cycle(4).unwrap());
        let b = boundary(&wheel, 2).unwrap();
        assert_eq!(b.f_vector().0, vec![4, 4]);
        assert!(boundary(&b, 1).unwrap().is_empty());
        assert_eq!(wheel.euler_characteristic() - wheel.wu(), b.euler_characteristic());
        let ball3 = cone(&cross_polytope(2).unwrap());
        let b3 = boundary(&ball3, 3).unwrap();
        assert_eq!(b3.f_vector().0, vec![6, 12, 8]);
        assert_eq!(ball3.euler_characteristic() - ball3.wu(), b3.euler_characteristic());
        let tet = complete(4).unwrap();
        let bt = boundary(&tet, 3).unwrap();
        assert_eq!(bt.f_vector().0, vec![4, 6, 4]);
        assert!(boundary(&cross_polytope(2).unwrap(), 2).unwrap().is_empty());
    }

    #[test]
    fn level_surfaces() {
        let oct = cross_polytope(2).unwrap();
        let mut f: BTreeMap<Vertex, f64> = oct.vertices().iter().map(|&v| (v, -1.0)).collect();
        f.insert(0, 1.0);
        let s = level_surface(&oct, &f, 0.0).unwrap();
        assert!(is_d_graph(&s, 1).unwrap());
        assert_eq!(s.euler_characteristic(), 0);
        let all_low: BTreeMap<Vertex, f64> = oct.vertices().iter().map(|&v| (v, -1.0)).collect();
        assert!(level_surface(&oct, &all_low, 0.0).unwrap().is_empty());
        assert!(level_surface(&oct, &all_low, -1.0).is_err());
    }

    #[test]
    fn morse_on_cycle_heights() {
        let c4 = cycle(4).unwrap();
        let r = morse_analysis(&c4, &[0.0, 1.0, 2.0, 3.0]).unwrap();
        assert!(r.is_morse);
        assert_eq!(r.counts, vec![1, 1]);
        assert_eq!(r.betti, vec![1, 1]);
        assert!(r.weak_inequalities && r.strong_inequalities);
    }

    #[test]
    fn morse_on_octahedron_and_build_order() {
        let oct = cross_polytope(2).unwrap();
        let r = morse_analysis(&oct, &[0.0, 5.0, 1.0, 4.0, 2.0, 3.0]).unwrap();
        assert!(r.is_morse);
        assert_eq!(r.alternating_sum, 2);
        // refinement with the build order as function: every simplex critical
        let g = Graph::containment(&oct);
        let f: Vec<f64> = (0..oct.len()).map(|i| i as f64).collect();
        let r = morse_analysis_graph(&g, &f, 2, &[1, 0, 1]).unwrap();
        assert!(r.is_morse);
        assert_eq!(r.counts, vec![6, 12, 8]);
    }

    #[test]
    fn reeb_functions() {
        for c in [points(2).unwrap(), cycle(5).unwrap(), cross_polytope(2).unwrap()] {
            let r = reeb_sphere_check(&c).unwrap();
            assert!(r.success, "{c:?}");
        }
    }
}
