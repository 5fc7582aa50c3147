//! Finite abstract simplicial complexes and the calculus built on them.

pub mod complex;
pub mod error;
pub mod graph;
pub mod linalg;

pub use complex::{Complex, FVector, Simplex, Vertex};
pub use error::{Error, Result};
pub use graph::{Graph, VertexSet};
pub mod build;
pub mod refine;
pub mod conn;
pub mod geom;
pub mod hodge;
pub mod spectra;
pub mod io;
pub mod cli;
