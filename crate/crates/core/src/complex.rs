//! Simplices, complexes and their basic combinatorial invariants.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub type Vertex = u32;

/// A nonempty finite vertex set kept in strictly increasing order.
///
/// Simplices order by dimension first and lexicographically within a
/// dimension. This is the canonical order used for every matrix row and for
/// the vertex ids of refinements.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Simplex(Box<[Vertex]>);

impl Simplex {
    pub fn new<I: IntoIterator<Item = Vertex>>(vertices: I) -> Result<Self> {
        let mut v: Vec<Vertex> = vertices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        if v.is_empty() {
            return Err(Error::invalid("a simplex needs at least one vertex"));
        }
        Ok(Simplex(v.into_boxed_slice()))
    }

    /// Caller guarantees `v` is nonempty and strictly increasing.
    pub(crate) fn from_sorted(v: Vec<Vertex>) -> Self {
        debug_assert!(!v.is_empty() && v.windows(2).all(|w| w[0] < w[1]));
        Simplex(v.into_boxed_slice())
    }

    pub fn vertex(v: Vertex) -> Self {
        Simplex(vec![v].into_boxed_slice())
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn card(&self) -> usize {
        self.0.len()
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Parity weight `(-1)^dim`.
    pub fn omega(&self) -> i64 {
        if self.dim().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset_of(&self, other: &Simplex) -> bool {
        if self.0.len() > other.0.len() {
            return false;
        }
        let mut j = 0;
        for &v in self.0.iter() {
            while j < other.0.len() && other.0[j] < v {
                j += 1;
            }
            if j == other.0.len() || other.0[j] != v {
                return false;
            }
            j += 1;
        }
        true
    }

    pub fn intersects(&self, other: &Simplex) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => return true,
            }
        }
        false
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        let mut v: Vec<Vertex> = self.0.iter().chain(other.0.iter()).copied().collect();
        v.sort_unstable();
        v.dedup();
        Simplex(v.into_boxed_slice())
    }

    /// Codimension-one faces, the `j`-th omitting the `j`-th vertex.
    pub fn facets(&self) -> Vec<Simplex> {
        if self.0.len() == 1 {
            return Vec::new();
        }
        (0..self.0.len())
            .map(|j| {
                let v: Vec<Vertex> = self
                    .0
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != j)
                    .map(|(_, &x)| x)
                    .collect();
                Simplex(v.into_boxed_slice())
            })
            .collect()
    }

    /// All nonempty subsets, including the simplex itself.
    pub fn faces(&self) -> Vec<Simplex> {
        let k = self.0.len();
        assert!(k < 31, "simplex too large to enumerate faces");
        (1u32..(1u32 << k))
            .map(|mask| {
                let v: Vec<Vertex> = (0..k)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| self.0[i])
                    .collect();
                Simplex(v.into_boxed_slice())
            })
            .collect()
    }
}

impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Per-dimension simplex counts `(v_0, ..., v_r)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FVector(pub Vec<u64>);

impl FVector {
    pub fn counts(&self) -> &[u64] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    /// Alternating sum `v_0 - v_1 + v_2 - ...`.
    pub fn euler(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(k, &v)| if k % 2 == 0 { v as i64 } else { -(v as i64) })
            .sum()
    }

    pub fn get(&self, k: usize) -> u64 {
        self.0.get(k).copied().unwrap_or(0)
    }
}

/// Vertex relabeling applied to the right operand of a join or union.
pub type Relabeling = BTreeMap<Vertex, Vertex>;

/// A finite abstract simplicial complex.
///
/// Simplices are held in canonical order; `index_of` maps a simplex to its
/// position. The empty complex is a valid value.
#[derive(Clone)]
pub struct Complex {
    simplices: Vec<Simplex>,
    index: HashMap<Simplex, usize>,
    vertices: Vec<Vertex>,
    name: Option<String>,
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.simplices == other.simplices
    }
}

impl Eq for Complex {}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Complex")
            .field("name", &self.name)
            .field("f", &self.f_vector().0)
            .finish()
    }
}

impl Default for Complex {
    fn default() -> Self {
        Complex::empty()
    }
}

impl Complex {
    pub fn empty() -> Self {
        Complex {
            simplices: Vec::new(),
            index: HashMap::new(),
            vertices: Vec::new(),
            name: None,
        }
    }

    /// Downward closure of a family of vertex sets.
    pub fn close<I, S>(sets: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = Vertex>,
    {
        let mut all = HashSet::new();
        for set in sets {
            let s = Simplex::new(set)
                .map_err(|_| Error::invalid("empty set in closure input"))?;
            insert_closed(&mut all, s);
        }
        Ok(Self::from_closed_set(all))
    }

    /// Closure of already-built simplices.
    pub fn close_simplices<I: IntoIterator<Item = Simplex>>(simplices: I) -> Self {
        let mut all = HashSet::new();
        for s in simplices {
            insert_closed(&mut all, s);
        }
        Self::from_closed_set(all)
    }

    /// Caller guarantees downward closure.
    pub(crate) fn from_closed_set(set: HashSet<Simplex>) -> Self {
        let mut simplices: Vec<Simplex> = set.into_iter().collect();
        simplices.sort_unstable();
        Self::from_sorted_closed(simplices)
    }

    pub(crate) fn from_sorted_closed(simplices: Vec<Simplex>) -> Self {
        let index = simplices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let vertices = simplices
            .iter()
            .take_while(|s| s.card() == 1)
            .map(|s| s.0[0])
            .collect();
        Complex {
            simplices,
            index,
            vertices,
            name: None,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn simplex(&self, i: usize) -> &Simplex {
        &self.simplices[i]
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index.contains_key(s)
    }

    pub(crate) fn require(&self, s: &Simplex) -> Result<usize> {
        self.index_of(s)
            .ok_or_else(|| Error::NotFound(format!("simplex {s:?} is not in the complex")))
    }

    /// Maximal dimension; `-1` for the empty complex.
    pub fn dim(&self) -> isize {
        self.simplices.last().map_or(-1, |s| s.dim() as isize)
    }

    pub fn omegas(&self) -> Vec<i64> {
        self.simplices.iter().map(Simplex::omega).collect()
    }

    /// Simplices not contained in any other simplex, lexicographically sorted.
    pub fn facets(&self) -> Vec<Simplex> {
        let mut covered = vec![false; self.len()];
        for s in &self.simplices {
            for f in s.facets() {
                covered[self.index[&f]] = true;
            }
        }
        let mut out: Vec<Simplex> = self
            .simplices
            .iter()
            .zip(covered)
            .filter(|(_, c)| !c)
            .map(|(s, _)| s.clone())
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    pub fn f_vector(&self) -> FVector {
        let mut f = vec![0u64; (self.dim() + 1) as usize];
        for s in &self.simplices {
            f[s.dim()] += 1;
        }
        FVector(f)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.simplices.iter().map(Simplex::omega).sum()
    }

    /// Coefficients of `f_G(t) = 1 + v_0 t + v_1 t^2 + ...`.
    pub fn generating_function(&self) -> Vec<i64> {
        std::iter::once(1)
            .chain(self.f_vector().0.into_iter().map(|v| v as i64))
            .collect()
    }

    /// `up[i]` lists every simplex containing simplex `i`, itself included,
    /// in canonical order.
    pub fn up_sets(&self) -> Vec<Vec<usize>> {
        let mut up = vec![Vec::new(); self.len()];
        for (j, s) in self.simplices.iter().enumerate() {
            for face in s.faces() {
                up[self.index[&face]].push(j);
            }
        }
        up
    }

    /// Indices of the faces of simplex `i` (itself included).
    pub fn down_set(&self, i: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.simplices[i]
            .faces()
            .iter()
            .map(|f| self.index[f])
            .collect();
        v.sort_unstable();
        v
    }

    /// `W+(x)`: simplices containing `x`. Not a complex in general.
    pub fn star_up(&self, x: &Simplex) -> Result<Vec<Simplex>> {
        self.require(x)?;
        Ok(self
            .simplices
            .iter()
            .filter(|y| x.is_subset_of(y))
            .cloned()
            .collect())
    }

    /// `W-(x)`: the closure of `x`.
    pub fn star_down(&self, x: &Simplex) -> Result<Complex> {
        self.require(x)?;
        Ok(Complex::close_simplices([x.clone()]))
    }

    /// Unit sphere of `x` in the containment graph of the refinement. Vertex
    /// ids of the result are canonical indices of simplices of `self`.
    pub fn unit_sphere(&self, x: &Simplex) -> Result<Complex> {
        let i = self.require(x)?;
        let gamma = Graph::containment(self);
        Ok(gamma.whitney_within(gamma.neighbors(i)))
    }

    /// Wu characteristic of order `k`: the sum of `omega(x_1)...omega(x_k)`
    /// over ordered `k`-tuples with nonempty common intersection.
    ///
    /// Inclusion-exclusion over the common face gives
    /// `sum_S omega(S) * chi(W+(S))^k`.
    pub fn wu_characteristic(&self, k: u32) -> Result<i128> {
        if k == 0 {
            return Err(Error::invalid("Wu characteristic order must be >= 1"));
        }
        let mut star_chi = vec![0i128; self.len()];
        for s in &self.simplices {
            let w = s.omega() as i128;
            for face in s.faces() {
                star_chi[self.index[&face]] += w;
            }
        }
        self.simplices
            .iter()
            .zip(star_chi)
            .try_fold(0i128, |acc, (s, c)| {
                c.checked_pow(k)
                    .and_then(|p| acc.checked_add(s.omega() as i128 * p))
                    .ok_or_else(|| Error::Numeric("Wu characteristic overflows i128".into()))
            })
    }

    /// Quadratic Wu characteristic `omega(G)`.
    pub fn wu(&self) -> i64 {
        self.wu_characteristic(2).expect("order 2 fits") as i64
    }

    /// Join `G + H`: both complexes plus all unions of one simplex from each.
    /// `H` is relabeled above the largest vertex of `G`.
    pub fn join(&self, other: &Complex) -> (Complex, Relabeling) {
        let (h, map) = other.relabeled_above(self.max_vertex_bound());
        let mut all: HashSet<Simplex> = self.simplices.iter().cloned().collect();
        all.extend(h.simplices.iter().cloned());
        for x in &self.simplices {
            for y in &h.simplices {
                all.insert(x.union(y));
            }
        }
        (Complex::from_closed_set(all), map)
    }

    /// Disjoint union, relabeling `H` above the largest vertex of `G`.
    pub fn disjoint_union(&self, other: &Complex) -> (Complex, Relabeling) {
        let (h, map) = other.relabeled_above(self.max_vertex_bound());
        let mut all: HashSet<Simplex> = self.simplices.iter().cloned().collect();
        all.extend(h.simplices);
        (Complex::from_closed_set(all), map)
    }

    fn max_vertex_bound(&self) -> Vertex {
        self.vertices.last().map_or(0, |&v| v + 1)
    }

    /// Renumber vertices densely starting at `offset`, preserving order.
    pub fn relabeled_above(&self, offset: Vertex) -> (Complex, Relabeling) {
        let map: Relabeling = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, offset + i as Vertex))
            .collect();
        (self.relabeled(&map), map)
    }

    pub fn relabeled(&self, map: &Relabeling) -> Complex {
        let set = self
            .simplices
            .iter()
            .map(|s| Simplex::new(s.0.iter().map(|v| map[v])).expect("nonempty"))
            .collect();
        let mut c = Complex::from_closed_set(set);
        c.name = self.name.clone();
        c
    }

    /// Sub-complex induced on a vertex subset.
    pub fn induced(&self, keep: &HashSet<Vertex>) -> Complex {
        let set = self
            .simplices
            .iter()
            .filter(|s| s.0.iter().all(|v| keep.contains(v)))
            .cloned()
            .collect();
        Complex::from_closed_set(set)
    }

    /// Whether the complex equals the Whitney complex of its 1-skeleton.
    pub fn is_flag(&self) -> bool {
        let (g, _) = Graph::skeleton(self);
        let mut count = 0usize;
        let limit = self.len();
        g.for_each_clique_bounded(&g.all_vertices(), limit + 1, &mut |_| count += 1);
        count == limit
    }

    /// Graph carrying the geometry of the complex: the 1-skeleton when the
    /// complex is a flag complex, otherwise the refinement graph.
    pub fn geometry_graph(&self) -> Graph {
        if self.is_flag() {
            Graph::skeleton(self).0
        } else {
            Graph::containment(self)
        }
    }

    /// Inductive dimension: the recursive average over unit spheres on the
    /// geometry graph. `-1` for the empty complex.
    pub fn inductive_dimension(&self) -> BigRational {
        self.geometry_graph().inductive_dimension::<BigRational>()
    }
}

fn insert_closed(all: &mut HashSet<Simplex>, s: Simplex) {
    if all.contains(&s) {
        return;
    }
    let facets = s.facets();
    all.insert(s);
    for f in facets {
        insert_closed(all, f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{FromPrimitive, ToPrimitive};

    fn tri() -> Complex {
        Complex::close([vec![0, 1, 2]]).unwrap()
    }

    fn k2() -> Complex {
        Complex::close([vec![0, 1]]).unwrap()
    }

    fn c4() -> Complex {
        Complex::close([vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]]).unwrap()
    }

    #[test]
    fn closure_examples() {
        assert_eq!(tri().f_vector().0, vec![3, 3, 1]);
        assert_eq!(Complex::close([vec![0], vec![1]]).unwrap().f_vector().0, vec![2]);
        let c3 = Complex::close([vec![0, 1], vec![1, 2], vec![2, 0]]).unwrap();
        assert_eq!(c3.f_vector().0, vec![3, 3]);
        assert_eq!(c3.euler_characteristic(), 0);
    }

    #[test]
    fn closure_rejects_empty_set() {
        let r = Complex::close([vec![0, 1], vec![]]);
        assert!(matches!(r, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn closure_is_idempotent() {
        let g = tri();
        let again = Complex::close(g.simplices().iter().map(|s| s.vertices().to_vec())).unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn empty_complex_behaviour() {
        let e = Complex::empty();
        assert_eq!(e.f_vector().0, Vec::<u64>::new());
        assert_eq!(e.euler_characteristic(), 0);
        assert_eq!(e.dim(), -1);
        assert_eq!(e.generating_function(), vec![1]);
        assert_eq!(e.inductive_dimension(), BigRational::from_i64(-1).unwrap());
    }

    #[test]
    fn euler_characteristics() {
        assert_eq!(tri().euler_characteristic(), 1);
        assert_eq!(c4().euler_characteristic(), 0);
    }

    #[test]
    fn wu_examples() {
        assert_eq!(k2().wu_characteristic(2).unwrap(), -1);
        assert_eq!(tri().wu_characteristic(2).unwrap(), 1);
        for g in [tri(), k2(), c4()] {
            assert_eq!(g.wu_characteristic(1).unwrap(), g.euler_characteristic() as i128);
        }
        let point = Complex::close([vec![7]]).unwrap();
        for k in 1..6 {
            assert_eq!(point.wu_characteristic(k).unwrap(), 1);
        }
        assert!(k2().wu_characteristic(0).is_err());
    }

    #[test]
    fn unit_sphere_examples() {
        let g = k2();
        let ab = Simplex::new([0, 1]).unwrap();
        let s = g.unit_sphere(&ab).unwrap();
        assert_eq!(s.f_vector().0, vec![2]);
        assert_eq!(s.euler_characteristic(), 2);
        let a = Simplex::vertex(0);
        let s = g.unit_sphere(&a).unwrap();
        assert_eq!(s.f_vector().0, vec![1]);
        // the single neighbour of vertex a is the edge ab, index 2
        assert_eq!(s.vertices(), &[2]);
        let missing = Simplex::vertex(9);
        assert!(matches!(g.unit_sphere(&missing), Err(Error::NotFound(_))));
    }

    #[test]
    fn stars() {
        let g = k2();
        let a = Simplex::vertex(0);
        let up = g.star_up(&a).unwrap();
        assert_eq!(up, vec![a.clone(), Simplex::new([0, 1]).unwrap()]);
        let ab = Simplex::new([0, 1]).unwrap();
        assert_eq!(g.star_down(&ab).unwrap().euler_characteristic(), 1);
        assert!(g.star_up(&Simplex::vertex(5)).is_err());
    }

    #[test]
    fn join_examples() {
        let p2 = Complex::close([vec![0], vec![1]]).unwrap();
        let (c4, map) = p2.join(&p2);
        assert_eq!(c4.f_vector().0, vec![4, 4]);
        assert_eq!(map[&0], 2);
        let (oct, _) = c4.join(&p2);
        assert_eq!(oct.f_vector().0, vec![6, 12, 8]);
        assert_eq!(oct.euler_characteristic(), 2);
        let (same, _) = Complex::empty().join(&tri());
        assert_eq!(same, tri());
    }

    #[test]
    fn union_examples() {
        let p1 = Complex::close([vec![0]]).unwrap();
        let (u, _) = p1.disjoint_union(&p1);
        assert_eq!(u.f_vector().0, vec![2]);
        assert_eq!(u.euler_characteristic(), 2);
        let (same, _) = tri().disjoint_union(&Complex::empty());
        assert_eq!(same, tri());
        let (u, _) = c4().disjoint_union(&tri());
        assert_eq!(u.euler_characteristic(), 1);
    }

    #[test]
    fn generating_functions() {
        assert_eq!(c4().generating_function(), vec![1, 4, 4]);
        assert_eq!(k2().generating_function(), vec![1, 2, 1]);
    }

    #[test]
    fn inductive_dimension_examples() {
        let point = Complex::close([vec![0]]).unwrap();
        assert_eq!(point.inductive_dimension().to_i64(), Some(0));
        assert_eq!(tri().inductive_dimension().to_i64(), Some(2));
    }

    #[test]
    fn facets_are_sorted_lexicographically() {
        let g = Complex::close([vec![2, 3], vec![0, 1, 2]]).unwrap();
        let f: Vec<Vec<u32>> = g.facets().iter().map(|s| s.vertices().to_vec()).collect();
        assert_eq!(f, vec![vec![0, 1, 2], vec![2, 3]]);
    }

    #[test]
    fn flag_detection() {
        assert!(tri().is_flag());
        let hollow = Complex::close([vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        assert!(!hollow.is_flag());
        assert!(c4().is_flag());
    }
}
