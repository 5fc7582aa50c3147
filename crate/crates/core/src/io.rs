//! JSON wire formats for complexes, graphs and vertex functions.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::complex::{Complex, Vertex};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Facet-only serialization; closure is implied on load.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub facets: Vec<Vec<Vertex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl ComplexJson {
    pub fn of(c: &Complex) -> Self {
        ComplexJson {
            facets: c.facets().iter().map(|f| f.vertices().to_vec()).collect(),
            name: c.name().map(str::to_owned),
        }
    }

    pub fn into_complex(self) -> Result<Complex> {
        let c = Complex::close(self.facets)?;
        Ok(match self.name {
            Some(n) => c.with_name(n),
            None => c,
        })
    }
}

pub fn complex_from_str(s: &str) -> Result<Complex> {
    serde_json::from_str::<ComplexJson>(s)?.into_complex()
}

/// Canonical text: facets sorted lexicographically, trailing newline.
pub fn complex_to_string(c: &Complex) -> String {
    let mut s = serde_json::to_string(&ComplexJson::of(c)).expect("complex JSON serializes");
    s.push('\n');
    s
}

pub fn read_complex(path: &Path) -> Result<Complex> {
    complex_from_str(&std::fs::read_to_string(path)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl GraphJson {
    pub fn of(g: &Graph) -> Self {
        GraphJson { n: g.order(), edges: g.edges().into_iter().map(|(a, b)| [a, b]).collect() }
    }

    pub fn into_graph(self) -> Result<Graph> {
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|e| (e[0], e[1])).collect();
        Graph::from_edges(self.n, &edges)
    }
}

pub fn graph_from_str(s: &str) -> Result<Graph> {
    serde_json::from_str::<GraphJson>(s)?.into_graph()
}

/// Vertex function keyed by decimal vertex id.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionJson {
    pub values: BTreeMap<String, f64>,
}

impl FunctionJson {
    pub fn into_map(self) -> Result<BTreeMap<Vertex, f64>> {
        self.values
            .into_iter()
            .map(|(k, v)| {
                let id = k
                    .parse::<Vertex>()
                    .map_err(|_| Error::invalid(format!("bad vertex id {k:?}")))?;
                if !v.is_finite() {
                    return Err(Error::invalid(format!("non-finite value at vertex {id}")));
                }
                Ok((id, v))
            })
            .collect()
    }
}

pub fn function_from_str(s: &str) -> Result<BTreeMap<Vertex, f64>> {
    serde_json::from_str::<FunctionJson>(s)?.into_map()
}

/// Values for every vertex of `c`, in vertex order.
pub fn function_on(c: &Complex, f: &BTreeMap<Vertex, f64>) -> Result<Vec<f64>> {
    c.vertices()
        .iter()
        .map(|v| f.get(v).copied().ok_or_else(|| Error::NotFound(format!("no value for vertex {v}"))))
        .collect()
}
