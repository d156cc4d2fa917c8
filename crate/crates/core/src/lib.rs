//! Exact-weight matroid basis toolkit.
//!
//! Given a matroid over `n` elements, an integer weight matrix
//! `W` with entries in `{-delta, .., delta}`, and a target vector `beta`,
//! the solver finds a basis `B` with `W(B) = beta` or reports that none
//! exists. The search is driven by an exact rational LP vertex of the base
//! polytope intersected with the weight-equality subspace: the true count of
//! elements per weight class lies in a proximity window around the vertex's
//! class sums, so only count vectors in that window are tried, each via
//! matroid intersection with a partition matroid.
//!
//! The crate also ships a randomized algebraic solver for linear matroids,
//! constraint reductions (inequalities, congruences, group constraints), and
//! an experiment lab that stress-tests the sensitivity and proximity bounds
//! the window sizes rely on.

pub mod algebraic;
pub mod cli;
pub mod error;
pub mod intersect;
pub mod io;
pub mod lab;
pub mod lp;
pub mod mask;
pub mod matroid;
pub mod reduce;
pub mod rng;
pub mod selftest;
pub mod solver;
pub mod weights;

pub use error::{Error, Result};
pub use mask::Mask;
pub use matroid::{compile, FieldSpec, Matroid, MatroidSpec};
pub use weights::{CountVector, WeightMatrix};
