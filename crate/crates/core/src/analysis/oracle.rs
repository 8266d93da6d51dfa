//! Cut-query access to a hypergraph.
//!
//! The decoders only ever ask for cut values, so they run unchanged against
//! a hypergraph, a reweighted sparsifier or a decoded byte encoding.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::encode::{decode, EncodedSparsifier};
use crate::{Result, SubmodularHypergraph, VertexSet};

pub trait CutOracle {
    /// Number of vertices.
    fn n(&self) -> usize;
    fn cut(&self, s: &VertexSet) -> f64;

    /// Cut of the set whose bit `v` is set for every member `v` (`n ≤ 64`).
    fn cut_mask(&self, s: u64) -> f64 {
        self.cut(&VertexSet::from_mask(self.n(), s))
    }

    fn cut_of(&self, vertices: &[u32]) -> f64 {
        self.cut(&VertexSet::from_vertices(self.n(), vertices.iter().copied()))
    }
}

impl CutOracle for SubmodularHypergraph {
    fn n(&self) -> usize {
        self.n
    }

    fn cut(&self, s: &VertexSet) -> f64 {
        self.cut_value(s)
    }

    fn cut_mask(&self, s: u64) -> f64 {
        self.cut_value_mask(s)
    }
}

/// Cut oracle backed by a byte encoding, decoded once up front.
#[derive(Clone, Debug)]
pub struct EncodedOracle {
    decoded: SubmodularHypergraph,
    pub bit_count: usize,
}

impl EncodedOracle {
    pub fn new(enc: &EncodedSparsifier) -> Result<Self> {
        Ok(Self {
            decoded: decode(&enc.bytes)?,
            bit_count: enc.bit_count,
        })
    }
}

impl CutOracle for EncodedOracle {
    fn n(&self) -> usize {
        self.decoded.n
    }

    fn cut(&self, s: &VertexSet) -> f64 {
        self.decoded.cut_value(s)
    }

    fn cut_mask(&self, s: u64) -> f64 {
        self.decoded.cut_value_mask(s)
    }
}

/// Wraps an oracle and counts the queries made through it.
pub struct Counting<'a> {
    inner: &'a dyn CutOracle,
    queries: AtomicU64,
}

impl<'a> Counting<'a> {
    pub fn new(inner: &'a dyn CutOracle) -> Self {
        Self {
            inner,
            queries: AtomicU64::new(0),
        }
    }

    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }
}

impl CutOracle for Counting<'_> {
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn cut(&self, s: &VertexSet) -> f64 {
        self.queries.fetch_add(1, Ordering::Relaxed);
        self.inner.cut(s)
    }
}
