//! Structural checks on splitting functions.
//!
//! Every check is exact: kinds that depend only on `|S ∩ e|` are decided from
//! their value table over counts, everything else by subset enumeration up
//! to a threshold. Past the threshold the checks refuse instead of sampling.

use serde::{Deserialize, Serialize};

use crate::{Error, Hyperedge, Result, SubmodularHypergraph, REL_TOL};

/// Violation of `g(T ∪ {v}) - g(T) <= g(S ∪ {v}) - g(S)` with `S ⊆ T`, `v ∉ T`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubmodularWitness {
    pub s: Vec<u32>,
    pub t: Vec<u32>,
    pub v: u32,
    /// Marginal of `v` at `S`.
    pub gain_s: f64,
    /// Marginal of `v` at `T`.
    pub gain_t: f64,
}

/// Violation of `g(S) <= g(T)` for `S ⊂ T`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotoneWitness {
    pub s: Vec<u32>,
    pub t: Vec<u32>,
    pub value_s: f64,
    pub value_t: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrivialSets {
    /// `W_e = {∅}`
    Empty,
    /// `W_e = {∅, e}`, when `g_e(e) = 0`.
    EmptyAndFull,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpreadStats {
    pub max_value: f64,
    pub min_nontrivial: f64,
    /// `max_value / min_nontrivial`, `+∞` when the minimum is zero (serialized as `null`).
    pub spread: f64,
    pub trivial: TrivialSets,
}

impl SpreadStats {
    pub fn is_finite(&self) -> bool {
        self.spread.is_finite()
    }
}

fn tol(a: f64, b: f64) -> f64 {
    REL_TOL * a.abs().max(b.abs()).max(1.0)
}

fn refuse(what: &'static str, limit: usize, got: usize) -> Error {
    Error::ThresholdExceeded { what, limit, got }
}

fn members(e: &Hyperedge, mask: u64) -> Vec<u32> {
    (0..e.arity())
        .filter(|&i| mask >> i & 1 == 1)
        .map(|i| e.vertices[i])
        .collect()
}

/// Unscaled count table `f[0..=k]` for count-based kinds.
pub fn count_table(e: &Hyperedge) -> Option<Vec<f64>> {
    let k = e.arity();
    (0..=k).map(|c| e.func.count_value(k, c)).collect()
}

/// Unscaled value table over local masks, refusing above `threshold`.
pub fn subset_table(e: &Hyperedge, threshold: usize, what: &'static str) -> Result<Vec<f64>> {
    let k = e.arity();
    if k > threshold.min(30) {
        return Err(refuse(what, threshold, k));
    }
    Ok(match e.table() {
        Some(t) => t.to_vec(),
        None => (0..1u64 << k).map(|m| e.raw_mask(m)).collect(),
    })
}

/// Exhaustive submodularity check; `Ok(None)` means the function is submodular.
pub fn check_submodular(e: &Hyperedge, threshold: usize) -> Result<Option<SubmodularWitness>> {
    if let Some(f) = count_table(e) {
        // f(|S|) is submodular iff its increments are non-increasing.
        for c in 1..f.len().saturating_sub(1) {
            let (before, after) = (f[c] - f[c - 1], f[c + 1] - f[c]);
            if after > before + tol(after, before) {
                return Ok(Some(SubmodularWitness {
                    s: e.vertices[..c - 1].to_vec(),
                    t: e.vertices[..c].to_vec(),
                    v: e.vertices[c],
                    gain_s: before,
                    gain_t: after,
                }));
            }
        }
        return Ok(None);
    }
    let k = e.arity();
    let g = subset_table(e, threshold, "check_submodular")?;
    // Pairwise form: g(B+u) + g(B+v) >= g(B+u+v) + g(B) for u, v ∉ B.
    for base in 0..1u64 << k {
        for u in (0..k).filter(|&u| base >> u & 1 == 0) {
            let bu = base | 1 << u;
            for v in (u + 1..k).filter(|&v| base >> v & 1 == 0) {
                let bv = base | 1 << v;
                let gain_s = g[bv as usize] - g[base as usize];
                let gain_t = g[(bu | bv) as usize] - g[bu as usize];
                if gain_t > gain_s + tol(gain_t, gain_s) {
                    return Ok(Some(SubmodularWitness {
                        s: members(e, base),
                        t: members(e, bu),
                        v: e.vertices[v],
                        gain_s,
                        gain_t,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Exhaustive monotonicity check over one-element extensions.
pub fn check_monotone(e: &Hyperedge, threshold: usize) -> Result<Option<MonotoneWitness>> {
    if let Some(f) = count_table(e) {
        for c in 0..f.len() - 1 {
            if f[c] > f[c + 1] + tol(f[c], f[c + 1]) {
                return Ok(Some(MonotoneWitness {
                    s: e.vertices[..c].to_vec(),
                    t: e.vertices[..=c].to_vec(),
                    value_s: f[c],
                    value_t: f[c + 1],
                }));
            }
        }
        return Ok(None);
    }
    let k = e.arity();
    let g = subset_table(e, threshold, "check_monotone")?;
    for s in 0..1u64 << k {
        for v in (0..k).filter(|&v| s >> v & 1 == 0) {
            let t = s | 1 << v;
            let (a, b) = (g[s as usize], g[t as usize]);
            if a > b + tol(a, b) {
                return Ok(Some(MonotoneWitness {
                    s: members(e, s),
                    t: members(e, t),
                    value_s: a,
                    value_t: b,
                }));
            }
        }
    }
    Ok(None)
}

/// Returns a set `S` with `g(S) != g(e \ S)`, or `None` for symmetric functions.
pub fn check_symmetric(e: &Hyperedge, threshold: usize) -> Result<Option<Vec<u32>>> {
    let k = e.arity();
    if let Some(f) = count_table(e) {
        return Ok((0..=k)
            .find(|&c| (f[c] - f[k - c]).abs() > tol(f[c], f[k - c]))
            .map(|c| e.vertices[..c].to_vec()));
    }
    let g = subset_table(e, threshold, "check_symmetric")?;
    let full = (1u64 << k) - 1;
    Ok((0..1u64 << k)
        .find(|&s| {
            let (a, b) = (g[s as usize], g[(full ^ s) as usize]);
            (a - b).abs() > tol(a, b)
        })
        .map(|s| members(e, s)))
}

fn stats_from(max: f64, min: f64, full: f64, scale: f64) -> SpreadStats {
    let spread = if min > 0.0 { max / min } else { f64::INFINITY };
    SpreadStats {
        max_value: max * scale,
        min_nontrivial: min * scale,
        spread,
        trivial: if full == 0.0 {
            TrivialSets::EmptyAndFull
        } else {
            TrivialSets::Empty
        },
    }
}

/// Spread `μ_e = max_T g(T) / min_{S ∉ W_e} g(S)`.
pub fn spread_stats(e: &Hyperedge, threshold: usize) -> Result<SpreadStats> {
    let k = e.arity();
    let (vals, full): (Vec<(usize, f64)>, f64) = match count_table(e) {
        Some(f) => (f.iter().copied().enumerate().collect(), f[k]),
        None => {
            let g = subset_table(e, threshold, "spread_stats")?;
            let full = g[(1usize << k) - 1];
            (
                g.iter()
                    .enumerate()
                    .map(|(m, &v)| (if m == 0 { 0 } else if m == (1 << k) - 1 { k } else { 1 }, v))
                    .collect(),
                full,
            )
        }
    };
    // Positions are counts here: 0 is the empty set, k the full set.
    let max = vals.iter().map(|&(_, v)| v).fold(0.0, f64::max);
    let min = vals
        .iter()
        .filter(|&&(c, _)| c != 0 && !(c == k && full == 0.0))
        .map(|&(_, v)| v)
        .fold(f64::INFINITY, f64::min);
    let min = if min.is_finite() { min } else { 0.0 };
    Ok(stats_from(max, min, full, e.scale))
}

/// Imbalance `β_e = max_{∅ ≠ S ⊊ e} g(S) / g(e \ S)`; `1` for single-vertex edges.
pub fn imbalance(e: &Hyperedge, threshold: usize) -> Result<f64> {
    let k = e.arity();
    let ratio = |a: f64, b: f64| {
        if b > 0.0 {
            a / b
        } else if a > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    };
    if k < 2 {
        return Ok(1.0);
    }
    if let Some(f) = count_table(e) {
        return Ok((1..k).map(|c| ratio(f[c], f[k - c])).fold(0.0, f64::max));
    }
    let g = subset_table(e, threshold, "imbalance")?;
    let full = (1u64 << k) - 1;
    Ok((1..full)
        .map(|s| ratio(g[s as usize], g[(full ^ s) as usize]))
        .fold(0.0, f64::max))
}

/// `μ_H = max_e μ_e`.
pub fn hypergraph_spread(h: &SubmodularHypergraph, threshold: usize) -> Result<f64> {
    let mut mu: f64 = 1.0;
    for e in &h.edges {
        mu = mu.max(spread_stats(e, threshold)?.spread);
    }
    Ok(mu)
}

/// Index of the first edge failing the submodularity check, with its witness.
pub fn first_non_submodular(
    h: &SubmodularHypergraph,
    threshold: usize,
) -> Result<Option<(usize, SubmodularWitness)>> {
    for (i, e) in h.edges.iter().enumerate() {
        if let Some(w) = check_submodular(e, threshold)? {
            return Ok(Some((i, w)));
        }
    }
    Ok(None)
}
