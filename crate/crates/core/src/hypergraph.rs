use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, SplittingFn, VertexSet};

/// Hyperedges up to this arity cache their full local value table.
pub const TABLE_CACHE_ARITY: usize = 12;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Hyperedge {
    pub vertices: Vec<u32>,
    #[serde(rename = "fn")]
    pub func: SplittingFn,
    #[serde(default = "one")]
    pub scale: f64,
    #[serde(skip)]
    table: OnceLock<Option<Vec<f64>>>,
}

fn one() -> f64 {
    1.0
}

impl PartialEq for Hyperedge {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.func == other.func && self.scale == other.scale
    }
}

impl Hyperedge {
    /// Builds a hyperedge; `vertices` must be sorted and free of duplicates.
    pub fn new(vertices: Vec<u32>, func: SplittingFn, scale: f64) -> Result<Self> {
        let e = Self {
            vertices,
            func,
            scale,
            table: OnceLock::new(),
        };
        e.validate()?;
        Ok(e)
    }

    pub fn unit(vertices: Vec<u32>, func: SplittingFn) -> Result<Self> {
        Self::new(vertices, func, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(Error::InvalidHypergraph("hyperedge has no vertices".into()));
        }
        if self.vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidHypergraph(
                "hyperedge vertices must be sorted and distinct".into(),
            ));
        }
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(Error::InvalidHypergraph(format!(
                "scale must be a positive finite number, got {}",
                self.scale
            )));
        }
        self.func.validate(&self.vertices)
    }

    pub fn arity(&self) -> usize {
        self.vertices.len()
    }

    pub fn with_scale(&self, scale: f64) -> Self {
        Self {
            vertices: self.vertices.clone(),
            func: self.func.clone(),
            scale,
            table: self.table.clone(),
        }
    }

    pub fn contains(&self, v: u32) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn position(&self, v: u32) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    /// Local word representation of `S ∩ e`.
    pub fn local_words(&self, s: &VertexSet) -> Vec<u64> {
        let mut w = vec![0u64; self.arity().div_ceil(64).max(1)];
        for (i, &v) in self.vertices.iter().enumerate() {
            if s.contains(v) {
                w[i / 64] |= 1 << (i % 64);
            }
        }
        w
    }

    /// Local mask of `S ∩ e` for a global mask `s` (both at most 64 wide).
    #[inline]
    pub fn local_mask(&self, s: u64) -> u64 {
        let mut m = 0;
        for (i, &v) in self.vertices.iter().enumerate() {
            m |= (s >> v & 1) << i;
        }
        m
    }

    /// Unscaled value table over all local masks, cached for small arities.
    pub fn table(&self) -> Option<&[f64]> {
        self.table
            .get_or_init(|| {
                (self.arity() <= TABLE_CACHE_ARITY).then(|| {
                    (0..1u64 << self.arity())
                        .map(|m| self.func.eval_mask(&self.vertices, m))
                        .collect()
                })
            })
            .as_deref()
    }

    /// Unscaled `g_e` on a local word set.
    pub fn raw_local(&self, words: &[u64]) -> f64 {
        if let Some(t) = self.table() {
            return t[words[0] as usize];
        }
        self.func.eval_local(&self.vertices, words)
    }

    /// Unscaled `g_e` on a local mask (arity at most 64).
    #[inline]
    pub fn raw_mask(&self, mask: u64) -> f64 {
        match self.table() {
            Some(t) => t[mask as usize],
            None => self.func.eval_mask(&self.vertices, mask),
        }
    }

    /// `s_e · g_e(S ∩ e)`.
    pub fn eval(&self, s: &VertexSet) -> f64 {
        self.scale * self.raw_local(&self.local_words(s))
    }

    /// Scaled value on a local mask.
    #[inline]
    pub fn eval_mask(&self, mask: u64) -> f64 {
        self.scale * self.raw_mask(mask)
    }

    /// Scaled value on a local word set.
    pub fn eval_local(&self, words: &[u64]) -> f64 {
        self.scale * self.raw_local(words)
    }

    /// Scaled value for `|S ∩ e| = c` on count-based kinds.
    pub fn eval_count(&self, c: usize) -> Option<f64> {
        self.func
            .count_value(self.arity(), c)
            .map(|v| v * self.scale)
    }

    /// Scaled `g_e(e)`.
    pub fn full_value(&self) -> f64 {
        if let Some(v) = self.eval_count(self.arity()) {
            return v;
        }
        let k = self.arity();
        let mut w = vec![u64::MAX; k.div_ceil(64)];
        if !k.is_multiple_of(64) {
            *w.last_mut().unwrap() = (1u64 << (k % 64)) - 1;
        }
        self.eval_local(&w)
    }

    /// Scaled `g_e({v})` for the vertex at local position `i`.
    pub fn singleton_value(&self, i: usize) -> f64 {
        if let Some(v) = self.eval_count(1) {
            return v;
        }
        let mut w = vec![0u64; self.arity().div_ceil(64)];
        w[i / 64] = 1 << (i % 64);
        self.eval_local(&w)
    }
}

/// A submodular hypergraph `H = (V, E, g)` on vertices `[0, n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubmodularHypergraph {
    pub n: usize,
    pub edges: Vec<Hyperedge>,
    pub labels: Option<Vec<String>>,
}

impl SubmodularHypergraph {
    pub fn new(n: usize, edges: Vec<Hyperedge>) -> Result<Self> {
        let h = Self {
            n,
            edges,
            labels: None,
        };
        h.validate()?;
        Ok(h)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n > u32::MAX as usize {
            return Err(Error::InvalidHypergraph("too many vertices".into()));
        }
        for (i, e) in self.edges.iter().enumerate() {
            e.validate()
                .map_err(|err| Error::InvalidHypergraph(format!("edge {i}: {err}")))?;
            if let Some(&v) = e.vertices.last() {
                if v as usize >= self.n {
                    return Err(Error::InvalidHypergraph(format!(
                        "edge {i}: vertex {v} is outside [0, {})",
                        self.n
                    )));
                }
            }
        }
        if let Some(l) = &self.labels {
            if l.len() != self.n {
                return Err(Error::InvalidHypergraph(format!(
                    "{} labels for {} vertices",
                    l.len(),
                    self.n
                )));
            }
        }
        Ok(())
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// `cut_H(S) = Σ_e s_e g_e(S ∩ e)`.
    pub fn cut_value(&self, s: &VertexSet) -> f64 {
        self.edges.iter().map(|e| e.eval(s)).sum()
    }

    /// Cut value for a global bitmask, `n <= 64`.
    pub fn cut_value_mask(&self, s: u64) -> f64 {
        self.edges.iter().map(|e| e.eval_mask(e.local_mask(s))).sum()
    }

    /// Vertex-to-incident-edges index.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            for &v in &e.vertices {
                inc[v as usize].push(i);
            }
        }
        inc
    }

    pub fn max_arity(&self) -> usize {
        self.edges.iter().map(Hyperedge::arity).max().unwrap_or(0)
    }

    pub fn total_support(&self) -> usize {
        self.edges.iter().map(Hyperedge::arity).sum()
    }
}
