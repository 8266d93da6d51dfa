//! Sparsifiers for general and for monotone submodular hypergraphs.
//!
//! General: `ρ_e = Σ_{(u,v)} g_e^{u→v} / Σ_f g_f^{u→v}`, `ρ'_e = g_e(e) / Σ_f g_f(f)`
//! and `p_e = min(1, M (ρ_e + ρ'_e))`.
//!
//! Monotone: `ρ_e = Σ_v g_e({v}) / Σ_f g_f({v})` and `p_e = min(1, M ρ_e)`.
//!
//! In both cases `M = c ε⁻² n`.

use serde::{Deserialize, Serialize};

use super::{check_epsilon, check_positive, sample_edges, Method};
use crate::checks::check_monotone;
use crate::sfm::{self, DirectedCutOracle, Exhaustive};
use crate::{Error, Result, SubmodularHypergraph};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeImportance {
    pub rho: f64,
    pub rho_prime: f64,
    /// Brute-force importance, when the instance is small enough.
    pub sigma: Option<f64>,
    pub p: f64,
    pub sampled: bool,
    /// `1 / p` for kept edges, 0 for dropped ones.
    pub applied_scale: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImportanceReport {
    pub method: Method,
    pub epsilon: f64,
    pub oversample: f64,
    #[serde(rename = "M")]
    pub amplification: f64,
    pub seed: u64,
    pub n: usize,
    pub input_edges: usize,
    pub output_edges: usize,
    pub edges: Vec<EdgeImportance>,
}

impl ImportanceReport {
    pub fn rho_sum(&self) -> f64 {
        self.edges.iter().map(|e| e.rho).sum()
    }

    pub fn expected_size(&self) -> f64 {
        self.edges.iter().map(|e| e.p).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleConfig {
    pub epsilon: f64,
    pub seed: u64,
    /// The constant `c` in `M = c ε⁻² n`.
    pub oversample: f64,
    /// Fill in `σ_e` when `n` is at most this many vertices.
    pub sigma_up_to: usize,
    /// Arity limit for the exhaustive directed-cut and monotonicity checks.
    pub threshold: usize,
}

impl SampleConfig {
    pub fn new(epsilon: f64, seed: u64, oversample: f64) -> Self {
        Self {
            epsilon,
            seed,
            oversample,
            sigma_up_to: 0,
            threshold: crate::EXHAUSTIVE_THRESHOLD,
        }
    }

    fn validate(&self) -> Result<()> {
        check_epsilon(self.epsilon)?;
        check_positive("oversample", self.oversample)
    }

    pub fn amplification(&self, n: usize) -> f64 {
        self.oversample * n as f64 / (self.epsilon * self.epsilon)
    }
}

/// `ρ_e` of the general sampler, using the given directed-cut oracle.
pub fn rho_general_with(h: &SubmodularHypergraph, oracle: &dyn DirectedCutOracle) -> Result<Vec<f64>> {
    let n = h.n;
    let tables = sfm::all_tables(h, oracle)?;
    // denom[u * n + v] = Σ_f g_f^{u→v}, accumulated in edge order.
    let mut denom = vec![0.0f64; n * n];
    for t in &tables {
        let k = t.arity();
        for (i, &u) in t.vertices.iter().enumerate() {
            let row = &mut denom[u as usize * n..(u as usize + 1) * n];
            let out = t.outside[i];
            if out != 0.0 {
                row.iter_mut().for_each(|x| *x += out);
            }
            for (j, &v) in t.vertices.iter().enumerate() {
                row[v as usize] += t.within[i * k + j] - out;
            }
        }
    }
    Ok(tables
        .iter()
        .map(|t| {
            let k = t.arity();
            let mut rho = 0.0;
            for (i, &u) in t.vertices.iter().enumerate() {
                let row = &denom[u as usize * n..(u as usize + 1) * n];
                let out = t.outside[i];
                let mut j = 0;
                for (v, &d) in row.iter().enumerate() {
                    let x = if j < k && t.vertices[j] as usize == v {
                        j += 1;
                        t.within[i * k + j - 1]
                    } else {
                        out
                    };
                    if v != u as usize && x > 0.0 {
                        rho += x / d;
                    }
                }
            }
            rho
        })
        .collect())
}

pub fn rho_general(h: &SubmodularHypergraph) -> Result<Vec<f64>> {
    rho_general_with(h, &Exhaustive::default())
}

/// `ρ'_e = g_e(e) / Σ_f g_f(f)`, all zero when the denominator vanishes.
pub fn rho_prime(h: &SubmodularHypergraph) -> Vec<f64> {
    let full: Vec<f64> = h.edges.iter().map(|e| e.full_value()).collect();
    let total: f64 = full.iter().sum();
    full.iter()
        .map(|&x| if total > 0.0 { x / total } else { 0.0 })
        .collect()
}

/// `ρ_e` of the monotone sampler.
pub fn rho_monotone(h: &SubmodularHypergraph) -> Vec<f64> {
    let singles: Vec<Vec<f64>> = h
        .edges
        .iter()
        .map(|e| (0..e.arity()).map(|i| e.singleton_value(i)).collect())
        .collect();
    let mut denom = vec![0.0f64; h.n];
    for (e, s) in h.edges.iter().zip(&singles) {
        for (&v, &x) in e.vertices.iter().zip(s) {
            denom[v as usize] += x;
        }
    }
    h.edges
        .iter()
        .zip(&singles)
        .map(|(e, s)| {
            e.vertices
                .iter()
                .zip(s)
                .filter(|(_, &x)| x > 0.0)
                .map(|(&v, &x)| x / denom[v as usize])
                .sum()
        })
        .collect()
}

fn finish(
    h: &SubmodularHypergraph,
    cfg: &SampleConfig,
    method: Method,
    rho: Vec<f64>,
    rho_prime: Vec<f64>,
) -> Result<(SubmodularHypergraph, ImportanceReport)> {
    let amp = cfg.amplification(h.n);
    let p: Vec<f64> = rho
        .iter()
        .zip(&rho_prime)
        .map(|(&r, &rp)| (amp * (r + rp)).min(1.0))
        .collect();
    let sigma = if h.n <= cfg.sigma_up_to && h.n > 0 {
        Some(sfm::sigma_all(h, cfg.sigma_up_to)?)
    } else {
        None
    };
    let (out, kept) = sample_edges(h, &p, cfg.seed);
    let edges = (0..h.num_edges())
        .map(|i| EdgeImportance {
            rho: rho[i],
            rho_prime: rho_prime[i],
            sigma: sigma.as_ref().map(|s| s[i]),
            p: p[i],
            sampled: kept[i],
            applied_scale: if kept[i] { 1.0 / p[i] } else { 0.0 },
        })
        .collect();
    let report = ImportanceReport {
        method,
        epsilon: cfg.epsilon,
        oversample: cfg.oversample,
        amplification: amp,
        seed: cfg.seed,
        n: h.n,
        input_edges: h.num_edges(),
        output_edges: out.num_edges(),
        edges,
    };
    Ok((out, report))
}

/// Importance-sampling sparsifier for arbitrary submodular splitting functions.
pub fn sparsify_general(
    h: &SubmodularHypergraph,
    cfg: &SampleConfig,
) -> Result<(SubmodularHypergraph, ImportanceReport)> {
    cfg.validate()?;
    let rho = rho_general_with(
        h,
        &Exhaustive {
            threshold: cfg.threshold,
        },
    )?;
    finish(h, cfg, Method::General, rho, rho_prime(h))
}

/// Sparsifier for monotone submodular splitting functions. Edges small
/// enough for the exhaustive check (and all count-based edges) are verified
/// to be monotone first.
pub fn sparsify_monotone(
    h: &SubmodularHypergraph,
    cfg: &SampleConfig,
) -> Result<(SubmodularHypergraph, ImportanceReport)> {
    cfg.validate()?;
    for (i, e) in h.edges.iter().enumerate() {
        if e.arity() > cfg.threshold && !e.func.is_count_based() {
            continue;
        }
        if let Some(w) = check_monotone(e, cfg.threshold)? {
            return Err(Error::NotMonotone {
                edge: i,
                witness: format!(
                    "g({:?}) = {} > g({:?}) = {}",
                    w.s, w.value_s, w.t, w.value_t
                ),
            });
        }
    }
    let zeros = vec![0.0; h.num_edges()];
    finish(h, cfg, Method::Monotone, rho_monotone(h), zeros)
}
