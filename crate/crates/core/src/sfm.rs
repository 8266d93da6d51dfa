//! Directed minimum cuts of splitting functions and the brute-force
//! importance oracle.
//!
//! `g_e^{u→v} = min { g_e(S ∩ e) : u ∈ S, v ∉ S }`. Both minimizations are
//! done by enumerating the subsets of `e`, which is exact and fast for the
//! arities this crate works with.

use serde::{Deserialize, Serialize};

use crate::checks::subset_table;
use crate::{par, Error, Hyperedge, Result, SubmodularHypergraph};

/// All directed min-cut values of one hyperedge.
///
/// Only rows `u ∈ e` can be non-zero. For `v ∈ e` the value depends on both
/// endpoints and is kept in `within`; for `v ∉ e` it is the same for every
/// such `v` and is kept in `outside`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectedCutTable {
    pub edge_index: usize,
    pub vertices: Vec<u32>,
    /// Row-major `k × k`, entry `(i, j)` is `g_e^{e_i→e_j}`; the diagonal is 0.
    pub within: Vec<f64>,
    /// Entry `i` is `g_e^{e_i→v}` for any `v ∉ e`.
    pub outside: Vec<f64>,
}

impl DirectedCutTable {
    pub fn arity(&self) -> usize {
        self.vertices.len()
    }

    /// `g_e^{u→v}` for global vertices.
    pub fn get(&self, u: u32, v: u32) -> f64 {
        let Ok(i) = self.vertices.binary_search(&u) else {
            return 0.0;
        };
        match self.vertices.binary_search(&v) {
            Ok(j) => self.within[i * self.arity() + j],
            Err(_) => self.outside[i],
        }
    }

    /// Dense `n × n` matrix, row-major.
    pub fn to_dense(&self, n: usize) -> Vec<f64> {
        let mut m = vec![0.0; n * n];
        for u in 0..n as u32 {
            for v in 0..n as u32 {
                if u != v {
                    m[u as usize * n + v as usize] = self.get(u, v);
                }
            }
        }
        m
    }
}

/// Source of directed min-cut tables. The exhaustive oracle is the only
/// implementation shipped; the trait is the seam for a polynomial-time one.
pub trait DirectedCutOracle: Sync {
    fn table(&self, e: &Hyperedge, edge_index: usize) -> Result<DirectedCutTable>;
}

/// Exact oracle by subset enumeration, refusing edges above `threshold`.
#[derive(Clone, Copy, Debug)]
pub struct Exhaustive {
    pub threshold: usize,
}

impl Default for Exhaustive {
    fn default() -> Self {
        Self {
            threshold: crate::EXHAUSTIVE_THRESHOLD,
        }
    }
}

impl DirectedCutOracle for Exhaustive {
    fn table(&self, e: &Hyperedge, edge_index: usize) -> Result<DirectedCutTable> {
        directed_cut_table(e, edge_index, self.threshold)
    }
}

/// `g_e^{u→v}` for a single pair.
pub fn directed_min_cut(e: &Hyperedge, u: u32, v: u32, threshold: usize) -> Result<f64> {
    if u == v {
        return Err(Error::InvalidArgument(format!(
            "directed cut needs distinct endpoints, got u = v = {u}"
        )));
    }
    let Some(i) = e.position(u) else {
        return Ok(0.0);
    };
    let g = subset_table(e, threshold, "directed_min_cut")?;
    let j = e.position(v);
    let best = g
        .iter()
        .enumerate()
        .filter(|&(m, _)| m >> i & 1 == 1 && j.is_none_or(|j| m >> j & 1 == 0))
        .map(|(_, &x)| x)
        .fold(f64::INFINITY, f64::min);
    Ok(best * e.scale)
}

/// Fills every ordered pair of one hyperedge.
pub fn directed_cut_table(
    e: &Hyperedge,
    edge_index: usize,
    threshold: usize,
) -> Result<DirectedCutTable> {
    let k = e.arity();
    let g = subset_table(e, threshold, "directed_cut_table")?;
    let mut within = vec![f64::INFINITY; k * k];
    let mut outside = vec![f64::INFINITY; k];
    for (m, &x) in g.iter().enumerate() {
        let x = x * e.scale;
        for i in (0..k).filter(|&i| m >> i & 1 == 1) {
            outside[i] = outside[i].min(x);
            let row = &mut within[i * k..(i + 1) * k];
            for (j, slot) in row.iter_mut().enumerate() {
                if m >> j & 1 == 0 && *slot > x {
                    *slot = x;
                }
            }
        }
    }
    for i in 0..k {
        within[i * k + i] = 0.0;
    }
    Ok(DirectedCutTable {
        edge_index,
        vertices: e.vertices.clone(),
        within,
        outside,
    })
}

/// Tables for every edge of `H`, in edge order.
pub fn all_tables(
    h: &SubmodularHypergraph,
    oracle: &dyn DirectedCutOracle,
) -> Result<Vec<DirectedCutTable>> {
    par::map_range(h.num_edges(), |i| oracle.table(&h.edges[i], i))
        .into_iter()
        .collect()
}

fn check_n(h: &SubmodularHypergraph, threshold: usize, what: &'static str) -> Result<()> {
    if h.n > threshold.min(40) {
        return Err(Error::ThresholdExceeded {
            what,
            limit: threshold,
            got: h.n,
        });
    }
    Ok(())
}

/// `σ_e = max_S g_e(S ∩ e) / cut_H(S)` with `0/0 = 0`.
pub fn sigma_brute(h: &SubmodularHypergraph, edge: usize, threshold: usize) -> Result<f64> {
    check_n(h, threshold, "sigma_brute")?;
    let e = h.edges.get(edge).ok_or_else(|| {
        Error::InvalidArgument(format!("edge {edge} out of range ({} edges)", h.num_edges()))
    })?;
    let mut best: f64 = 0.0;
    for s in 0..1u64 << h.n {
        let mine = e.eval_mask(e.local_mask(s));
        if mine > 0.0 {
            best = best.max(mine / h.cut_value_mask(s));
        }
    }
    Ok(best)
}

/// `σ_e` for every edge in one sweep over the cuts.
pub fn sigma_all(h: &SubmodularHypergraph, threshold: usize) -> Result<Vec<f64>> {
    check_n(h, threshold, "sigma_all")?;
    let m = h.num_edges();
    let ranges = par::chunks(1u64 << h.n, 64);
    let partial = par::map_range(ranges.len(), |c| {
        let (lo, hi) = ranges[c];
        let mut best = vec![0.0f64; m];
        let mut vals = vec![0.0f64; m];
        for s in lo..hi {
            let mut total = 0.0;
            for (x, e) in vals.iter_mut().zip(&h.edges) {
                *x = e.eval_mask(e.local_mask(s));
                total += *x;
            }
            if total > 0.0 {
                for (b, &x) in best.iter_mut().zip(&vals) {
                    *b = b.max(x / total);
                }
            }
        }
        best
    });
    let mut out = vec![0.0f64; m];
    for p in partial {
        for (o, x) in out.iter_mut().zip(p) {
            *o = o.max(x);
        }
    }
    Ok(out)
}
