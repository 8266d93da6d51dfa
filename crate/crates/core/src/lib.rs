//! Cut sparsification and succinct representation of submodular hypergraphs.
//!
//! A submodular hypergraph assigns every hyperedge `e` a splitting function
//! `g_e: 2^e -> R+` and defines the value of a cut `S` as `sum_e g_e(S ∩ e)`.
//! This crate provides
//!
//! - the domain model ([`SplittingFn`], [`Hyperedge`], [`SubmodularHypergraph`])
//!   with a JSON file format,
//! - structural checkers (submodularity, monotonicity, spread, imbalance),
//! - exhaustive directed min-cut and importance oracles ([`sfm`]),
//! - three importance-sampling sparsifiers ([`sparsify`]),
//! - the deformation of additive splitting functions into low-support
//!   hyperedges plus a compact binary encoding ([`deform`], [`encode`]),
//! - support-size lower-bound calculators, lower-bound hypergraph families
//!   with cut-query decoders, and a verification harness ([`analysis`]).

pub mod analysis;
pub mod checks;
pub mod deform;
pub mod encode;
mod error;
pub mod func;
pub mod generate;
pub mod graph;
pub mod hypergraph;
pub mod io;
pub mod math;
mod par;
pub mod rng;
pub mod set;
pub mod sfm;
pub mod sparsify;

pub use error::{Error, Result};
pub use func::{Matroid, SplittingFn};
pub use hypergraph::{Hyperedge, SubmodularHypergraph};
pub use set::VertexSet;

/// Default cap on the number of vertices enumerated exhaustively.
pub const EXHAUSTIVE_THRESHOLD: usize = 16;

/// Relative tolerance used by comparisons throughout the crate.
pub const REL_TOL: f64 = 1e-9;

