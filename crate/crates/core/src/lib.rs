//! Triangle factors in dense graphs and their random sparsifications.
//!
//! The crate bundles exact factor solvers and embedding counters, a
//! fractional clique-factor LP engine with integer rounding, randomized
//! triangle-matching procedures driven by lazily revealed edges,
//! regularity utilities, entropy diagnostics and a Monte Carlo harness for
//! threshold estimation.

pub mod diagnostics;
pub mod error;
pub mod exact;
pub mod experiment;
pub mod generators;
pub mod graph;
pub mod hsz;
pub mod io;
pub mod lp;
pub mod matching;
mod par;
pub mod regularity;
pub mod seed;
pub mod sparsify;

pub use error::{Error, Result};
pub use graph::{Edge, Graph, Triangle, TriangleMatching, TripartiteGraph, Vertex, VertexTuple};
