//! Finite simple graphs with Whitney-complex semantics.

use std::collections::HashMap;

use num_traits::{FromPrimitive, Num};

use crate::complex::{Complex, Simplex, Vertex};
use crate::error::{Error, Result};

/// Fixed-capacity bitset over graph vertices.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VertexSet {
    words: Vec<u64>,
}

impl VertexSet {
    pub fn new(capacity: usize) -> Self {
        VertexSet {
            words: vec![0; capacity.div_ceil(64)],
        }
    }

    pub fn full(capacity: usize) -> Self {
        let mut s = Self::new(capacity);
        for v in 0..capacity {
            s.insert(v);
        }
        s
    }

    pub fn insert(&mut self, v: usize) {
        self.words[v / 64] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        self.words[v / 64] &= !(1 << (v % 64));
    }

    pub fn contains(&self, v: usize) -> bool {
        self.words
            .get(v / 64)
            .is_some_and(|w| w & (1 << (v % 64)) != 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn without(&self, v: usize) -> VertexSet {
        let mut s = self.clone();
        s.remove(v);
        s
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + b)
                }
            })
        })
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }
}

/// Simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<VertexSet>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![VertexSet::new(n); n],
        }
    }

    /// Rejects self-loops, duplicate edges and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::invalid(format!("edge ({a},{b}) out of range for n={n}")));
            }
            if a == b {
                return Err(Error::invalid(format!("self-loop at vertex {a}")));
            }
            if g.has_edge(a, b) {
                return Err(Error::invalid(format!("duplicate edge ({a},{b})")));
            }
            g.add_edge(a, b);
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        self.adj[a].insert(b);
        self.adj[b].insert(a);
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(b)
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.order())
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.order() {
            for b in self.adj[a].iter().filter(|&b| b > a) {
                out.push((a, b));
            }
        }
        out
    }

    /// 1-skeleton of a complex, with the vertex labels of each graph vertex.
    pub fn skeleton(c: &Complex) -> (Graph, Vec<Vertex>) {
        let labels = c.vertices().to_vec();
        let pos: HashMap<Vertex, usize> = labels.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut g = Graph::new(labels.len());
        for s in c.simplices().iter().filter(|s| s.card() == 2) {
            g.add_edge(pos[&s.vertices()[0]], pos[&s.vertices()[1]]);
        }
        (g, labels)
    }

    /// Containment graph of a complex: vertices are simplices in canonical
    /// order, edges join strictly nested pairs. Its Whitney complex is the
    /// Barycentric refinement.
    pub fn containment(c: &Complex) -> Graph {
        let mut g = Graph::new(c.len());
        for (j, s) in c.simplices().iter().enumerate() {
            for f in s.faces() {
                let i = c.index_of(&f).expect("closed complex");
                if i != j {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Connection graph: simplices joined when they intersect, or when they
    /// are disjoint if `dual` is set.
    pub fn connection(c: &Complex, dual: bool) -> Graph {
        let n = c.len();
        let mut g = Graph::new(n);
        let s = c.simplices();
        for i in 0..n {
            for j in i + 1..n {
                if s[i].intersects(&s[j]) != dual {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Induced subgraph, renumbered densely in increasing vertex order.
    pub fn induced(&self, keep: &VertexSet) -> Graph {
        let verts: Vec<usize> = keep.iter().collect();
        let mut pos = vec![usize::MAX; self.order()];
        for (i, &v) in verts.iter().enumerate() {
            pos[v] = i;
        }
        let mut g = Graph::new(verts.len());
        for (i, &v) in verts.iter().enumerate() {
            for w in self.adj[v].intersection(keep).iter() {
                if pos[w] > i {
                    g.add_edge(i, pos[w]);
                }
            }
        }
        g
    }

    /// Visit every clique inside `within`, stopping after `limit` cliques.
    pub fn for_each_clique_bounded(
        &self,
        within: &VertexSet,
        limit: usize,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        let mut stack = Vec::new();
        let mut seen = 0usize;
        for v in within.iter() {
            let mut cand = self.adj[v].intersection(within);
            for w in 0..=v {
                cand.remove(w);
            }
            stack.push(v);
            if !self.extend_cliques(&mut stack, &cand, limit, &mut seen, visit) {
                return;
            }
            stack.pop();
        }
    }

    fn extend_cliques(
        &self,
        stack: &mut Vec<usize>,
        cand: &VertexSet,
        limit: usize,
        seen: &mut usize,
        visit: &mut dyn FnMut(&[usize]),
    ) -> bool {
        if *seen >= limit {
            return false;
        }
        *seen += 1;
        visit(stack);
        for w in cand.iter() {
            let mut next = cand.intersection(&self.adj[w]);
            for u in cand.iter().take_while(|&u| u <= w) {
                next.remove(u);
            }
            stack.push(w);
            let go = self.extend_cliques(stack, &next, limit, seen, visit);
            stack.pop();
            if !go {
                return false;
            }
        }
        true
    }

    /// Clique counts by size inside `within`: entry `k` counts `(k+1)`-cliques.
    pub fn clique_counts(&self, within: &VertexSet) -> Vec<u64> {
        let mut counts: Vec<u64> = Vec::new();
        self.for_each_clique_bounded(within, usize::MAX, &mut |c| {
            if counts.len() < c.len() {
                counts.resize(c.len(), 0);
            }
            counts[c.len() - 1] += 1;
        });
        counts
    }

    /// Euler characteristic of the Whitney complex of the induced subgraph.
    pub fn euler_within(&self, within: &VertexSet) -> i64 {
        self.clique_counts(within)
            .iter()
            .enumerate()
            .map(|(k, &v)| if k % 2 == 0 { v as i64 } else { -(v as i64) })
            .sum()
    }

    /// Whitney complex of the induced subgraph; vertex ids are graph vertices.
    pub fn whitney_within(&self, within: &VertexSet) -> Complex {
        let mut simplices = Vec::new();
        self.for_each_clique_bounded(within, usize::MAX, &mut |c| {
            simplices.push(Simplex::from_sorted(c.iter().map(|&v| v as Vertex).collect()));
        });
        simplices.sort_unstable();
        Complex::from_sorted_closed(simplices)
    }

    pub fn whitney_complex(&self) -> Complex {
        self.whitney_within(&self.all_vertices())
    }

    /// Maximal cliques by Bron-Kerbosch with Tomita pivoting.
    pub fn maximal_cliques(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut r = Vec::new();
        self.bron_kerbosch(
            &mut r,
            self.all_vertices(),
            VertexSet::new(self.order()),
            &mut out,
        );
        out
    }

    fn bron_kerbosch(
        &self,
        r: &mut Vec<usize>,
        mut p: VertexSet,
        mut x: VertexSet,
        out: &mut Vec<Vec<usize>>,
    ) {
        if p.is_empty() {
            if x.is_empty() && !r.is_empty() {
                let mut c = r.clone();
                c.sort_unstable();
                out.push(c);
            }
            return;
        }
        let pivot = p
            .iter()
            .chain(x.iter())
            .max_by_key(|&u| self.adj[u].intersection(&p).len())
            .expect("p nonempty");
        let candidates: Vec<usize> = p
            .iter()
            .filter(|&v| !self.adj[pivot].contains(v))
            .collect();
        for v in candidates {
            r.push(v);
            self.bron_kerbosch(
                r,
                p.intersection(&self.adj[v]),
                x.intersection(&self.adj[v]),
                out,
            );
            r.pop();
            p.remove(v);
            x.insert(v);
        }
    }

    /// Inductive dimension `1 + mean(dim S(v))`, empty graph `-1`.
    pub fn inductive_dimension<T>(&self) -> T
    where
        T: Num + FromPrimitive + Clone,
    {
        let mut memo = HashMap::new();
        self.dim_within(&self.all_vertices(), &mut memo)
    }

    fn dim_within<T>(&self, within: &VertexSet, memo: &mut HashMap<VertexSet, T>) -> T
    where
        T: Num + FromPrimitive + Clone,
    {
        let n = within.len();
        if n == 0 {
            return T::zero() - T::one();
        }
        if let Some(d) = memo.get(within) {
            return d.clone();
        }
        let mut total = T::zero();
        for v in within.iter() {
            let sphere = self.adj[v].intersection(within);
            total = total + self.dim_within(&sphere, memo);
        }
        let d = T::one() + total / T::from_usize(n).expect("vertex count fits");
        memo.insert(within.clone(), d.clone());
        d
    }

    /// Number of connected components.
    pub fn components(&self) -> usize {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut count = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            count += 1;
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(v) = stack.pop() {
                for w in self.adj[v].iter() {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::ToPrimitive;

    fn cycle(n: usize) -> Graph {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &e).unwrap()
    }

    #[test]
    fn bitset_basics() {
        let mut s = VertexSet::new(130);
        s.insert(0);
        s.insert(64);
        s.insert(129);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(s.len(), 3);
        s.remove(64);
        assert!(!s.contains(64));
        assert!(!s.contains(500));
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::from_edges(3, &[(0, 0)]).is_err());
        assert!(Graph::from_edges(3, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(3, &[(0, 5)]).is_err());
    }

    #[test]
    fn whitney_of_small_graphs() {
        let tri = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(tri.whitney_complex().f_vector().0, vec![3, 3, 1]);
        assert_eq!(cycle(4).whitney_complex().f_vector().0, vec![4, 4]);
    }

    #[test]
    fn maximal_cliques_generate_all_cliques() {
        // octahedron: K_{2,2,2}
        let mut e = Vec::new();
        for a in 0..6 {
            for b in a + 1..6 {
                if b != a + 3 {
                    e.push((a, b));
                }
            }
        }
        let g = Graph::from_edges(6, &e).unwrap();
        let max = g.maximal_cliques();
        assert_eq!(max.len(), 8);
        let closed = Complex::close(max.iter().map(|c| c.iter().map(|&v| v as u32).collect::<Vec<_>>())).unwrap();
        assert_eq!(closed, g.whitney_complex());
        assert_eq!(closed.f_vector().0, vec![6, 12, 8]);
    }

    #[test]
    fn clique_limit_stops_early() {
        let g = cycle(10);
        let mut n = 0;
        g.for_each_clique_bounded(&g.all_vertices(), 5, &mut |_| n += 1);
        assert_eq!(n, 5);
    }

    #[test]
    fn inductive_dimension_of_cycles_and_paths() {
        let d: BigRational = cycle(5).inductive_dimension();
        assert_eq!(d.to_i64(), Some(1));
        // path a-b-c: S(a)={b} dim 0, S(b)={a,c} dim 0 -> every vertex 1
        let p = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let d: f64 = p.inductive_dimension();
        assert!((d - 1.0).abs() < 1e-12);
        let empty: f64 = Graph::new(0).inductive_dimension();
        assert_eq!(empty, -1.0);
    }

    #[test]
    fn components_count() {
        let g = Graph::from_edges(5, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.components(), 3);
    }
}
