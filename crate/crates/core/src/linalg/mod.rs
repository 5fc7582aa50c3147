//! Exact integer/rational linear algebra and the numeric eigensolver.

pub mod bareiss;
pub mod berkowitz;
pub mod eigen;
pub mod matrix;
pub mod rational;
pub mod sparse;

pub use berkowitz::Inertia;
pub use eigen::Mat;
pub use matrix::{IntMatrix, MatrixJson};
