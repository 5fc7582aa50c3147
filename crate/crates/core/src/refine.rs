//! Barycentric refinement, connection graphs and the Stirling operator.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::complex::{Complex, FVector, Simplex, Vertex};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::rational;

/// Default ceiling on the number of simplices a refinement may produce.
pub const DEFAULT_CAP: u64 = 5_000_000;

/// Simplex cap from `SIMPLEXION_CAP` when set and valid, else [`DEFAULT_CAP`].
pub fn default_cap() -> u64 {
    std::env::var("SIMPLEXION_CAP")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_CAP)
}

/// Barycentric refinement with the default cap.
pub fn barycentric(g: &Complex) -> Result<Complex> {
    barycentric_capped(g, default_cap())
}

/// Order complex of the containment poset of `g`. Vertex `i` of the result
/// is the `i`-th simplex of `g` in canonical order. Refuses with a resource
/// error when the predicted size exceeds `cap`.
pub fn barycentric_capped(g: &Complex, cap: u64) -> Result<Complex> {
    let predicted = predicted_size(&g.f_vector());
    if predicted > BigInt::from(cap) {
        return Err(Error::resource(format!(
            "refinement would have {predicted} simplices, cap is {cap}"
        )));
    }
    let up = g.up_sets();
    let strict: Vec<Vec<usize>> = up
        .iter()
        .enumerate()
        .map(|(i, u)| u.iter().copied().filter(|&j| j != i).collect())
        .collect();
    let mut out = order_complex(&strict);
    if let Some(name) = g.name() {
        out = out.with_name(format!("{name}_1"));
    }
    Ok(out)
}

/// Order complex of a finite poset whose elements are `0..n` and where
/// `above[i]` lists every element strictly greater than `i`. Chains are
/// enumerated depth first from each minimal element upward.
pub fn order_complex(above: &[Vec<usize>]) -> Complex {
    let mut chains = Vec::new();
    let mut stack = Vec::new();
    for start in 0..above.len() {
        stack.push(start);
        extend_chains(above, &mut stack, &mut chains);
        stack.pop();
    }
    chains.sort_unstable();
    Complex::from_sorted_closed(chains)
}

fn extend_chains(above: &[Vec<usize>], stack: &mut Vec<usize>, out: &mut Vec<Simplex>) {
    let mut verts: Vec<Vertex> = stack.iter().map(|&v| v as Vertex).collect();
    verts.sort_unstable();
    out.push(Simplex::from_sorted(verts));
    let top = *stack.last().expect("chain nonempty");
    for &next in &above[top] {
        stack.push(next);
        extend_chains(above, stack, out);
        stack.pop();
    }
}

/// Graph on the simplices of `g` joining intersecting pairs, or disjoint
/// pairs when `dual` is set.
pub fn connection_graph(g: &Complex, dual: bool) -> Graph {
    Graph::connection(g, dual)
}

/// `S(x, y) = Stirling2(y, x) * x!` with 1-based indices `x, y` in `1..=r+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StirlingOperator {
    order: usize,
    entries: Vec<Vec<BigInt>>,
}

impl StirlingOperator {
    pub fn new(order: usize) -> Self {
        let n = order + 1;
        // Stirling numbers of the second kind by the standard recurrence.
        let mut s2 = vec![vec![BigInt::zero(); n + 1]; n + 1];
        s2[0][0] = BigInt::one();
        for m in 1..=n {
            for k in 1..=m {
                s2[m][k] = BigInt::from(k) * &s2[m - 1][k] + &s2[m - 1][k - 1];
            }
        }
        let mut fact = vec![BigInt::one(); n + 1];
        for k in 1..=n {
            fact[k] = &fact[k - 1] * BigInt::from(k);
        }
        let entries = (1..=n)
            .map(|x| (1..=n).map(|y| &s2[y][x] * &fact[x]).collect())
            .collect();
        StirlingOperator { order, entries }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entry(&self, x: usize, y: usize) -> &BigInt {
        &self.entries[x][y]
    }

    pub fn entries(&self) -> &[Vec<BigInt>] {
        &self.entries
    }
}

/// `S f`, with `f` zero-padded to the operator size.
pub fn stirling_apply(s: &StirlingOperator, f: &FVector) -> Result<Vec<BigInt>> {
    let n = s.order + 1;
    if f.0.len() > n {
        return Err(Error::invalid(format!(
            "f-vector of length {} exceeds operator size {n}",
            f.0.len()
        )));
    }
    let fv: Vec<BigInt> = (0..n).map(|k| BigInt::from(f.get(k))).collect();
    let mut out: Vec<BigInt> = (0..n)
        .map(|x| (0..n).map(|y| &s.entries[x][y] * &fv[y]).sum())
        .collect();
    while out.last().is_some_and(Zero::is_zero) {
        out.pop();
    }
    Ok(out)
}

/// Predicted f-vector of the refinement.
pub fn predicted_f_vector(f: &FVector) -> Vec<BigInt> {
    if f.0.is_empty() {
        return Vec::new();
    }
    let s = StirlingOperator::new(f.0.len() - 1);
    stirling_apply(&s, f).expect("operator sized to f")
}

/// Predicted number of simplices of the refinement.
pub fn predicted_size(f: &FVector) -> BigInt {
    predicted_f_vector(f).into_iter().sum()
}

/// Fixed vector of `S^T` normalized to first coordinate 1.
pub fn euler_unique_vector(r: usize) -> Result<Vec<BigRational>> {
    let s = StirlingOperator::new(r);
    let n = r + 1;
    // rows of S^T - I
    let rows: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut v = BigRational::from_integer(s.entries[j][i].clone());
                    if i == j {
                        v -= BigRational::one();
                    }
                    v
                })
                .collect()
        })
        .collect();
    let ns = rational::nullspace(&rows, n);
    if ns.len() != 1 {
        return Err(Error::Invariant(format!(
            "fixed space of the transposed Stirling operator has dimension {}",
            ns.len()
        )));
    }
    let v = &ns[0];
    if v[0].is_zero() {
        return Err(Error::Invariant("fixed vector has zero first coordinate".into()));
    }
    let scale = v[0].clone();
    Ok(v.iter().map(|x| x / &scale).collect())
}

/// Colouring vertex `i` of `g1` by the dimension of the `i`-th simplex of `g`
/// is proper: the vertices of a chain have distinct dimensions.
pub fn dimension_coloring_is_proper(g: &Complex, g1: &Complex) -> bool {
    g1.simplices().iter().filter(|s| s.card() == 2).all(|e| {
        g.simplex(e.vertices()[0] as usize).dim() != g.simplex(e.vertices()[1] as usize).dim()
    })
}

/// Covering pairs `x ⊂ y` with `dim y = dim x + 1` always join opposite
/// dimension parities, so the Hasse diagram is bipartite.
pub fn hasse_parity_is_bipartite(g: &Complex) -> bool {
    g.simplices().iter().all(|y| {
        y.card() == 1 || y.facets().iter().all(|x| (x.dim() + y.dim()) % 2 == 1 && g.contains(x))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn refinement_of_edge_and_triangle() {
        let k2 = Complex::close([vec![0, 1]]).unwrap();
        let b = barycentric(&k2).unwrap();
        assert_eq!(b.f_vector().0, vec![3, 2]);
        let tri = Complex::close([vec![0, 1, 2]]).unwrap();
        let b = barycentric(&tri).unwrap();
        assert_eq!(b.f_vector().0, vec![7, 12, 6]);
        assert_eq!(b.euler_characteristic(), 1);
        assert!(dimension_coloring_is_proper(&tri, &b));
        assert!(hasse_parity_is_bipartite(&tri));
    }

    #[test]
    fn refinement_vertices_index_simplices() {
        let k2 = Complex::close([vec![5, 9]]).unwrap();
        let b = barycentric(&k2).unwrap();
        // simplices of K2 in canonical order: {5}, {9}, {5,9}
        let edges: Vec<Vec<Vertex>> = b
            .simplices()
            .iter()
            .filter(|s| s.card() == 2)
            .map(|s| s.vertices().to_vec())
            .collect();
        assert_eq!(edges, vec![vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn stirling_examples() {
        let s1 = StirlingOperator::new(1);
        assert_eq!(stirling_apply(&s1, &FVector(vec![2, 1])).unwrap(), big(&[3, 2]));
        let s2 = StirlingOperator::new(2);
        assert_eq!(stirling_apply(&s2, &FVector(vec![3, 3, 1])).unwrap(), big(&[7, 12, 6]));
        assert_eq!(stirling_apply(&s2, &FVector(vec![6, 12, 8])).unwrap(), big(&[26, 72, 48]));
        assert!(stirling_apply(&s1, &FVector(vec![1, 1, 1])).is_err());
    }

    #[test]
    fn stirling_diagonal_is_factorial() {
        let s = StirlingOperator::new(6);
        let mut f = BigInt::one();
        for k in 0..=6 {
            f *= BigInt::from(k + 1);
            assert_eq!(s.entry(k, k), &f);
            for j in 0..k {
                assert!(s.entry(k, j).is_zero());
            }
        }
    }

    #[test]
    fn euler_vector_alternates() {
        for r in 0..=6 {
            let v = euler_unique_vector(r).unwrap();
            for (k, x) in v.iter().enumerate() {
                let want = if k % 2 == 0 { 1 } else { -1 };
                assert_eq!(x, &BigRational::from_integer(want.into()));
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let tri = Complex::close([vec![0, 1, 2]]).unwrap();
        assert!(matches!(barycentric_capped(&tri, 10), Err(Error::Resource(_))));
    }

    #[test]
    fn connection_graph_examples() {
        let k2 = Complex::close([vec![0, 1]]).unwrap();
        assert_eq!(connection_graph(&k2, false).edges(), vec![(0, 2), (1, 2)]);
        let two = Complex::close([vec![0], vec![1]]).unwrap();
        assert!(connection_graph(&two, false).edges().is_empty());
        assert_eq!(connection_graph(&two, true).edges(), vec![(0, 1)]);
    }
}
