//! Exact computational models of GKM graphs.

pub mod chern;
pub mod classify;
pub mod cohomology;
pub mod constructions;
pub mod expr;
pub mod graph;
pub mod lattice;
pub mod linalg;
pub mod octonion;
pub mod poly;
pub mod symmetry;

pub use graph::{GkmGraph, GraphError, ValidationReport, Violation};
pub use lattice::{IntegerMatrix, LatticeError, Weight};
pub use poly::{Polynomial, RationalFunction};
