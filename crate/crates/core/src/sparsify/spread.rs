//! Strength-based sampling for finite-spread hypergraphs and the coverage
//! compression built on it.
//!
//! Every hyperedge `e` becomes a clique `F_e` in an auxiliary graph with
//! weights summing to 1. With `κ_e` the smallest edge strength in `F_e`,
//! edge `e` is kept with probability `min(1, ρ / κ_e)` where
//! `ρ = ε⁻² t μ_H γ² ln n`.
//!
//! Clique weights are found by a balancing loop: start uniform and, while
//! some clique has `κ_e^max > γ κ_e`, move half the weight of its strongest
//! positive pair onto its weakest pair. Whatever the loop returns is checked
//! against both clique conditions before it is used.

use serde::{Deserialize, Serialize};

use super::{check_epsilon, check_positive, sample_edges};
use crate::checks::{spread_stats, SpreadStats};
use crate::graph::{distinct_values, pair_strengths, WeightedGraph};
use crate::{Error, Hyperedge, Result, SplittingFn, SubmodularHypergraph, VertexSet};

/// Tolerance for the clique-sum condition.
pub const CLIQUE_SUM_TOL: f64 = 1e-12;

/// Fraction of the strongest pair's weight moved per balancing round.
pub const SHIFT_FRACTION: f64 = 0.5;
const SNAP_WEIGHT: f64 = 1e-9;

/// Weighted clique standing in for one hyperedge.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Clique {
    pub edge: usize,
    pub vertices: Vec<u32>,
    /// One weight per pair `(vertices[i], vertices[j])`, `i < j`, in
    /// lexicographic order.
    pub weights: Vec<f64>,
    pub strengths: Vec<f64>,
    pub kappa: f64,
    pub kappa_max: f64,
}

impl Clique {
    fn uniform(edge: usize, vertices: Vec<u32>) -> Self {
        let k = vertices.len();
        let pairs = k * (k - 1) / 2;
        Self {
            edge,
            vertices,
            weights: vec![1.0 / pairs as f64; pairs],
            strengths: vec![0.0; pairs],
            kappa: 0.0,
            kappa_max: 0.0,
        }
    }

    pub fn pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let v = &self.vertices;
        (0..v.len()).flat_map(move |i| (i + 1..v.len()).map(move |j| (v[i], v[j])))
    }

    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    fn refresh(&mut self, n: usize, k: &[f64]) {
        let s: Vec<f64> = self
            .pairs()
            .map(|(a, b)| k[a as usize * n + b as usize])
            .collect();
        self.kappa = s.iter().copied().fold(f64::INFINITY, f64::min);
        self.kappa_max = s
            .iter()
            .zip(&self.weights)
            .filter(|(_, &w)| w > 0.0)
            .map(|(&x, _)| x)
            .fold(0.0, f64::max);
        self.strengths = s;
    }

    fn violates(&self, gamma: f64) -> bool {
        self.kappa_max > gamma * self.kappa * (1.0 + crate::REL_TOL)
    }
}

/// Auxiliary graph with clique weights and strengths.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrengthMap {
    pub n: usize,
    pub gamma: u32,
    pub cliques: Vec<Clique>,
    pub distinct_strengths: usize,
    pub iterations: usize,
    pub violations: usize,
}

impl StrengthMap {
    /// The auxiliary multigraph, one edge per clique pair.
    pub fn auxiliary_graph(&self) -> WeightedGraph {
        let mut g = WeightedGraph::new(self.n);
        for c in &self.cliques {
            for ((a, b), &w) in c.pairs().zip(&c.weights) {
                g.add_edge(a, b, w);
            }
        }
        g
    }

    fn dense(n: usize, cliques: &[Clique]) -> Vec<f64> {
        let mut w = vec![0.0; n * n];
        for c in cliques {
            for ((a, b), &x) in c.pairs().zip(&c.weights) {
                w[a as usize * n + b as usize] += x;
                w[b as usize * n + a as usize] += x;
            }
        }
        w
    }

    fn refresh(&mut self) {
        let k = pair_strengths(self.n, &Self::dense(self.n, &self.cliques));
        for c in &mut self.cliques {
            c.refresh(self.n, &k);
        }
        self.distinct_strengths =
            distinct_values(self.cliques.iter().flat_map(|c| c.strengths.iter().copied()));
        let gamma = self.gamma as f64;
        self.violations = self.cliques.iter().filter(|c| c.violates(gamma)).count();
    }

    /// Checks both clique conditions and the distinct-strength bound.
    pub fn check_contract(&self) -> std::result::Result<(), String> {
        for c in &self.cliques {
            let s = c.weight_sum();
            if (s - 1.0).abs() > CLIQUE_SUM_TOL {
                return Err(format!("clique of edge {} sums to {s}", c.edge));
            }
            if c.weights.iter().any(|&w| w < 0.0) {
                return Err(format!("clique of edge {} has a negative weight", c.edge));
            }
            if c.violates(self.gamma as f64) {
                return Err(format!(
                    "clique of edge {} has kappa_max {} > {} * kappa {}",
                    c.edge, c.kappa_max, self.gamma, c.kappa
                ));
            }
        }
        if self.n > 0 && self.distinct_strengths > self.n.saturating_sub(1).max(1) {
            return Err(format!(
                "{} distinct strengths on {} vertices",
                self.distinct_strengths, self.n
            ));
        }
        Ok(())
    }

    /// `κ_e` by edge index, `None` for edges without a clique.
    pub fn kappa_of(&self, num_edges: usize) -> Vec<Option<f64>> {
        let mut out = vec![None; num_edges];
        for c in &self.cliques {
            out[c.edge] = Some(c.kappa);
        }
        out
    }
}

/// Builds the auxiliary graph for every hyperedge with at least two vertices.
/// Fails if some edge has infinite spread or the balancer does not reach
/// `κ^max / κ <= γ` within `100 |E|` rounds.
pub fn build_auxiliary(h: &SubmodularHypergraph, gamma: u32, threshold: usize) -> Result<StrengthMap> {
    if gamma < 2 {
        return Err(Error::InvalidArgument(format!("gamma must be at least 2, got {gamma}")));
    }
    for (i, e) in h.edges.iter().enumerate() {
        if !spread_stats(e, threshold)?.is_finite() {
            return Err(Error::InfiniteSpread { edge: i });
        }
    }
    let cliques = h
        .edges
        .iter()
        .enumerate()
        .filter(|(_, e)| e.arity() >= 2)
        .map(|(i, e)| Clique::uniform(i, e.vertices.clone()))
        .collect();
    balance(h.n, cliques, gamma, 100 * h.num_edges().max(1))
}

fn balance(n: usize, cliques: Vec<Clique>, gamma: u32, cap: usize) -> Result<StrengthMap> {
    let mut map = StrengthMap {
        n,
        gamma,
        cliques,
        distinct_strengths: 0,
        iterations: 0,
        violations: 0,
    };
    let g = gamma as f64;
    let mut best: Option<StrengthMap> = None;
    loop {
        map.refresh();
        if best.as_ref().is_none_or(|b| map.violations < b.violations) {
            best = Some(map.clone());
        }
        if map.violations == 0 {
            map.check_contract()
                .map_err(|m| Error::InvalidHypergraph(format!("clique contract broken: {m}")))?;
            return Ok(map);
        }
        if map.iterations >= cap {
            let best = best.unwrap();
            return Err(Error::BalancerFailed {
                gamma,
                violations: best.violations,
                iterations: map.iterations,
                best: Box::new(best),
            });
        }
        map.iterations += 1;
        for c in map.cliques.iter_mut().filter(|c| c.violates(g)) {
            let strongest = (0..c.weights.len())
                .filter(|&i| c.weights[i] > 0.0)
                .max_by(|&a, &b| c.strengths[a].total_cmp(&c.strengths[b]))
                .unwrap();
            let weakest = (0..c.weights.len())
                .min_by(|&a, &b| c.strengths[a].total_cmp(&c.strengths[b]))
                .unwrap();
            // Halving never reaches zero, so tiny remainders move in full.
            let w = c.weights[strongest];
            let moved = if w < SNAP_WEIGHT { w } else { w * SHIFT_FRACTION };
            c.weights[strongest] -= moved;
            c.weights[weakest] += moved;
            let s = c.weight_sum();
            c.weights.iter_mut().for_each(|w| *w /= s);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpreadConfig {
    pub epsilon: f64,
    pub seed: u64,
    pub t: f64,
    pub gamma: u32,
    pub threshold: usize,
}

impl SpreadConfig {
    pub const DEFAULT_T: f64 = 25.0;

    pub fn new(epsilon: f64, seed: u64) -> Self {
        Self {
            epsilon,
            seed,
            t: Self::DEFAULT_T,
            gamma: 2,
            threshold: crate::EXHAUSTIVE_THRESHOLD,
        }
    }

    pub fn with_t(mut self, t: f64) -> Self {
        self.t = t;
        self
    }

    /// `ρ = ε⁻² t μ γ² ln n`.
    pub fn rho(&self, mu: f64, n: usize) -> f64 {
        let g = self.gamma as f64;
        self.t * mu * g * g * (n as f64).ln() / (self.epsilon * self.epsilon)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpreadEdge {
    /// `true` for the part with `g_e(e) > 0`.
    pub full_positive: bool,
    pub spread: f64,
    /// Minimum nontrivial value relative to the smallest one in the part.
    pub multiplicity: f64,
    pub kappa: Option<f64>,
    pub kappa_max: Option<f64>,
    pub p: f64,
    pub sampled: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartSummary {
    pub full_positive: bool,
    pub edges: usize,
    pub balancer_iterations: usize,
    pub distinct_strengths: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpreadReport {
    pub config: SpreadConfig,
    pub n: usize,
    pub mu_h: f64,
    pub rho: f64,
    pub input_edges: usize,
    pub output_edges: usize,
    /// Edges whose splitting function is identically zero; they are dropped.
    pub zero_edges: usize,
    /// `ρ γ n`, the size envelope up to its constant.
    pub size_envelope: f64,
    pub expected_size: f64,
    pub parts: Vec<PartSummary>,
    /// One entry per input edge; `None` for dropped zero edges.
    pub edges: Vec<Option<SpreadEdge>>,
}

/// Strength-based sparsifier for finite-spread hypergraphs.
pub fn sparsify_spread(
    h: &SubmodularHypergraph,
    cfg: &SpreadConfig,
) -> Result<(SubmodularHypergraph, SpreadReport)> {
    check_epsilon(cfg.epsilon)?;
    check_positive("t", cfg.t)?;
    let stats: Vec<SpreadStats> = h
        .edges
        .iter()
        .map(|e| spread_stats(e, cfg.threshold))
        .collect::<Result<_>>()?;
    let zero: Vec<bool> = stats.iter().map(|s| s.max_value == 0.0).collect();
    if let Some(i) = (0..stats.len()).find(|&i| !zero[i] && !stats[i].is_finite()) {
        return Err(Error::InfiniteSpread { edge: i });
    }
    let mu_h = (0..stats.len())
        .filter(|&i| !zero[i])
        .map(|i| stats[i].spread)
        .fold(1.0, f64::max);
    let rho = cfg.rho(mu_h, h.n);

    let mut p = vec![0.0; h.num_edges()];
    let mut rows: Vec<Option<SpreadEdge>> = vec![None; h.num_edges()];
    let mut parts = Vec::new();
    for full_positive in [false, true] {
        let idx: Vec<usize> = (0..h.num_edges())
            .filter(|&i| !zero[i] && (h.edges[i].full_value() > 0.0) == full_positive)
            .collect();
        if idx.is_empty() {
            continue;
        }
        let unit = idx
            .iter()
            .map(|&i| stats[i].min_nontrivial)
            .fold(f64::INFINITY, f64::min);
        let sub = SubmodularHypergraph {
            n: h.n,
            edges: idx.iter().map(|&i| h.edges[i].clone()).collect(),
            labels: None,
        };
        let map = build_auxiliary(&sub, cfg.gamma, cfg.threshold)?;
        let kappa = map.kappa_of(idx.len());
        let mut kmax = vec![None; idx.len()];
        for c in &map.cliques {
            kmax[c.edge] = Some(c.kappa_max);
        }
        for (j, &i) in idx.iter().enumerate() {
            let mult = stats[i].min_nontrivial / unit;
            p[i] = match kappa[j] {
                Some(k) if k > 0.0 => (mult * rho / k).min(1.0),
                _ => 1.0,
            };
            rows[i] = Some(SpreadEdge {
                full_positive,
                spread: stats[i].spread,
                multiplicity: mult,
                kappa: kappa[j],
                kappa_max: kmax[j],
                p: p[i],
                sampled: false,
            });
        }
        parts.push(PartSummary {
            full_positive,
            edges: idx.len(),
            balancer_iterations: map.iterations,
            distinct_strengths: map.distinct_strengths,
        });
    }

    let (out, kept) = sample_edges(h, &p, cfg.seed);
    for (row, &k) in rows.iter_mut().zip(&kept) {
        if let Some(r) = row {
            r.sampled = k;
        }
    }
    let report = SpreadReport {
        config: *cfg,
        n: h.n,
        mu_h,
        rho,
        input_edges: h.num_edges(),
        output_edges: out.num_edges(),
        zero_edges: zero.iter().filter(|&&z| z).count(),
        size_envelope: rho * cfg.gamma as f64 * h.n as f64,
        expected_size: p.iter().sum(),
        parts,
        edges: rows,
    };
    Ok((out, report))
}

/// A coverage function `f(S) = Σ_w weight(w) · [w ∈ ∪_{v∈S} A_v]` over the
/// vertex set `[0, n)`; `sets[v]` is `A_v`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverageInstance {
    #[serde(default = "version_one")]
    pub version: u32,
    pub n: usize,
    pub weights: Vec<f64>,
    pub sets: Vec<Vec<u32>>,
}

fn version_one() -> u32 {
    1
}

impl CoverageInstance {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidHypergraph(m));
        if self.sets.len() != self.n {
            return bad(format!("{} member sets for n = {}", self.sets.len(), self.n));
        }
        if let Some(w) = self.weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return bad(format!("weight {w} is not a finite non-negative value"));
        }
        for (v, s) in self.sets.iter().enumerate() {
            if let Some(x) = s.iter().find(|&&x| x as usize >= self.weights.len()) {
                return bad(format!("set of vertex {v} names element {x} out of range"));
            }
        }
        Ok(())
    }

    pub fn ground_size(&self) -> usize {
        self.weights.len()
    }

    pub fn value(&self, s: &VertexSet) -> f64 {
        let mut covered = vec![false; self.weights.len()];
        for v in s.iter() {
            for &x in &self.sets[v as usize] {
                covered[x as usize] = true;
            }
        }
        covered
            .iter()
            .zip(&self.weights)
            .filter(|(&c, _)| c)
            .map(|(_, &w)| w)
            .sum()
    }

    /// One hyperedge `g_w(S) = weight(w) · min(|V_w ∩ S|, 1)` per ground
    /// element, where `V_w` is the set of vertices covering `w`. Elements
    /// with the same `V_w` are merged and elements that are uncovered or
    /// weightless are left out; neither step changes any value.
    pub fn to_hypergraph(&self) -> Result<SubmodularHypergraph> {
        self.validate()?;
        let mut covers: Vec<Vec<u32>> = vec![Vec::new(); self.weights.len()];
        for (v, s) in self.sets.iter().enumerate() {
            for &x in s {
                covers[x as usize].push(v as u32);
            }
        }
        let mut merged: std::collections::BTreeMap<Vec<u32>, f64> = Default::default();
        for (mut c, &w) in covers.into_iter().zip(&self.weights) {
            c.sort_unstable();
            c.dedup();
            if !c.is_empty() && w > 0.0 {
                *merged.entry(c).or_insert(0.0) += w;
            }
        }
        let edges = merged
            .into_iter()
            .map(|(c, w)| Hyperedge::new(c, SplittingFn::additive(1.0), w))
            .collect::<Result<_>>()?;
        SubmodularHypergraph::new(self.n, edges)
    }

    /// Inverse of [`to_hypergraph`](Self::to_hypergraph) for hypergraphs whose
    /// edges are all `min(|S ∩ e|, 1)`.
    pub fn from_hypergraph(h: &SubmodularHypergraph) -> Result<Self> {
        let mut sets = vec![Vec::new(); h.n];
        let mut weights = Vec::with_capacity(h.num_edges());
        for (i, e) in h.edges.iter().enumerate() {
            match &e.func {
                SplittingFn::Additive { k, symmetric: false } if *k == 1.0 => {}
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "edge {i} is not a coverage element"
                    )))
                }
            }
            for &v in &e.vertices {
                sets[v as usize].push(i as u32);
            }
            weights.push(e.scale);
        }
        Ok(Self {
            version: 1,
            n: h.n,
            weights,
            sets,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub ground_in: usize,
    pub ground_merged: usize,
    pub ground_out: usize,
    /// `ε⁻² n ln n`; the output ground size is compared against a constant
    /// multiple of it.
    pub envelope: f64,
    pub spread: SpreadReport,
}

/// Compresses the ground set of a coverage function by sparsifying its
/// element hypergraph.
pub fn coverage_compress(
    f: &CoverageInstance,
    cfg: &SpreadConfig,
) -> Result<(CoverageInstance, CoverageReport)> {
    let h = f.to_hypergraph()?;
    let (out, spread) = sparsify_spread(&h, cfg)?;
    let g = CoverageInstance::from_hypergraph(&out)?;
    let n = f.n as f64;
    let report = CoverageReport {
        ground_in: f.ground_size(),
        ground_merged: h.num_edges(),
        ground_out: g.ground_size(),
        envelope: n * n.ln() / (cfg.epsilon * cfg.epsilon),
        spread,
    };
    Ok((g, report))
}
