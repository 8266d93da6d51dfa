//! Deformation of additive splitting functions into low-support pieces, and
//! the succinct pipeline that follows it with the spread sparsifier.
//!
//! For `g_e(S) = min(|S ∩ e|, K)` (or its symmetric variant) the deformation
//! draws `N` independent vertex samples `e_i ⊆ e` at rate
//! `p = c ε'⁻² ln|e| / K` with `ε' = ε / 4`, and gives each the function
//! `g_{e_i}(S) = (1/N) min(|S ∩ e_i| / p, K)`. Pieces are stored as local
//! bitsets over `e`, so a few million of them fit in memory.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::encode::{encode, EncodedSparsifier};
use crate::math::{upper_tails, LnFactorial};
use crate::sparsify::spread::{sparsify_spread, SpreadConfig, SpreadReport};
use crate::{par, rng, Error, Hyperedge, Result, SplittingFn, SubmodularHypergraph};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeformConfig {
    pub epsilon: f64,
    pub seed: u64,
    /// Piece multiplier: `N = q ε'⁻² |e|²`.
    pub q: f64,
    /// Probability multiplier: `p = c ε'⁻² ln|e| / K`.
    pub c: f64,
    /// Deform even when the edge is already small enough to keep as is.
    pub force: bool,
    /// Upper limit on `N`. When it binds the guarantees degrade to those of
    /// a Monte Carlo estimate and the result is marked `capped`.
    pub piece_budget: Option<usize>,
}

impl DeformConfig {
    pub const DEFAULT_Q: f64 = 13.0;
    pub const DEFAULT_C: f64 = 21.0;

    pub fn new(epsilon: f64, seed: u64) -> Self {
        Self {
            epsilon,
            seed,
            q: Self::DEFAULT_Q,
            c: Self::DEFAULT_C,
            force: false,
            piece_budget: None,
        }
    }

    pub fn eps_prime(&self) -> f64 {
        self.epsilon / 4.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeformationResult {
    pub vertices: Vec<u32>,
    pub k: f64,
    pub symmetric: bool,
    /// Scale of the input edge.
    pub scale: f64,
    pub config: DeformConfig,
    pub eps_prime: f64,
    pub p: f64,
    /// Number of pieces actually drawn.
    pub n_pieces: usize,
    /// Number of pieces the construction asks for.
    pub n_pieces_target: f64,
    pub capped: bool,
    /// The edge was returned unchanged.
    pub identity: bool,
    pub max_support: usize,
    pub max_spread: f64,
    /// `2 p |e|`.
    pub support_bound: f64,
    /// `K p`.
    pub spread_bound: f64,
    /// Local bitsets over `e`, one per piece.
    #[serde(skip)]
    pub pieces: Vec<Vec<u64>>,
}

fn popcount(w: &[u64]) -> usize {
    w.iter().map(|x| x.count_ones() as usize).sum()
}

fn piece_spread(m: usize, cap: f64, symmetric: bool) -> f64 {
    let top = if symmetric { (m / 2) as f64 } else { m as f64 };
    let max = top.min(cap);
    let min = cap.min(1.0);
    if max <= 0.0 {
        0.0
    } else {
        max / min
    }
}

impl DeformationResult {
    pub fn arity(&self) -> usize {
        self.vertices.len()
    }

    /// Per-piece parameter `K p`.
    pub fn piece_k(&self) -> f64 {
        self.k * self.p
    }

    /// Per-piece scale `s_e / (N p)`.
    pub fn piece_scale(&self) -> f64 {
        self.scale / (self.n_pieces as f64 * self.p)
    }

    pub fn support_ok(&self) -> bool {
        self.identity || self.max_support as f64 <= self.support_bound
    }

    pub fn spread_ok(&self) -> bool {
        self.identity || self.max_spread <= self.spread_bound * (1.0 + crate::REL_TOL)
    }

    /// `Σ_i g_{e_i}(S)` for a local set `S ⊆ e`, scale included.
    pub fn value(&self, s: &[u64]) -> f64 {
        let k = self.arity();
        if self.identity {
            let f = if self.symmetric {
                SplittingFn::additive_symmetric(self.k)
            } else {
                SplittingFn::additive(self.k)
            };
            return self.scale * f.eval_local(&self.vertices, s);
        }
        let cap = self.piece_k();
        let full_last = if k.is_multiple_of(64) { u64::MAX } else { (1u64 << (k % 64)) - 1 };
        let nw = k.div_ceil(64);
        let mut total = 0.0;
        for piece in &self.pieces {
            let mut inside = 0usize;
            let mut outside = 0usize;
            for (i, &w) in piece.iter().enumerate() {
                let sw = s.get(i).copied().unwrap_or(0);
                let mask = if i + 1 == nw { full_last } else { u64::MAX };
                inside += (w & sw).count_ones() as usize;
                outside += (w & !sw & mask).count_ones() as usize;
            }
            let side = if self.symmetric { inside.min(outside) } else { inside };
            total += (side as f64).min(cap);
        }
        total * self.piece_scale()
    }

    /// Materializes the non-empty pieces as hyperedges.
    pub fn to_hyperedges(&self) -> Result<Vec<Hyperedge>> {
        if self.identity {
            let f = SplittingFn::Additive { k: self.k, symmetric: self.symmetric };
            return Ok(vec![Hyperedge::new(self.vertices.clone(), f, self.scale)?]);
        }
        let f = SplittingFn::Additive {
            k: self.piece_k(),
            symmetric: self.symmetric,
        };
        let scale = self.piece_scale();
        self.pieces
            .iter()
            .filter(|w| popcount(w) > 0)
            .map(|w| {
                let vs = (0..self.arity())
                    .filter(|&i| w[i / 64] >> (i % 64) & 1 == 1)
                    .map(|i| self.vertices[i])
                    .collect();
                Hyperedge::new(vs, f.clone(), scale)
            })
            .collect()
    }
}

/// Deforms one additive hyperedge.
pub fn deform_additive(e: &Hyperedge, cfg: &DeformConfig) -> Result<DeformationResult> {
    let SplittingFn::Additive { k, symmetric } = e.func else {
        return Err(Error::InvalidArgument(format!(
            "deformation needs an additive splitting function, got {}",
            e.func.kind_name()
        )));
    };
    crate::sparsify::check_epsilon(cfg.epsilon)?;
    for (name, x) in [("q", cfg.q), ("c", cfg.c)] {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::InvalidArgument(format!("{name} must be positive, got {x}")));
        }
    }
    let size = e.arity();
    let ln = (size as f64).ln();
    let eps = cfg.epsilon;
    let ep = cfg.eps_prime();
    let small = k <= 100.0 * ln / (eps * eps) || 1.0 / (eps * eps) > size as f64;
    let p = (cfg.c * ln / (ep * ep * k)).min(1.0);
    let target = cfg.q * size as f64 * size as f64 / (ep * ep);
    let mut out = DeformationResult {
        vertices: e.vertices.clone(),
        k,
        symmetric,
        scale: e.scale,
        config: *cfg,
        eps_prime: ep,
        p: 1.0,
        n_pieces: 1,
        n_pieces_target: target,
        capped: false,
        identity: true,
        max_support: size,
        max_spread: piece_spread(size, k, symmetric),
        support_bound: 2.0 * p * size as f64,
        spread_bound: k * p,
        pieces: Vec::new(),
    };
    if (small && !cfg.force) || size < 2 {
        return Ok(out);
    }
    let mut n = target.ceil().max(1.0) as usize;
    if let Some(b) = cfg.piece_budget {
        if n > b {
            n = b.max(1);
            out.capped = true;
        }
    }
    let words = size.div_ceil(64);
    let pieces = par::map_range(n, |i| {
        let mut r = rng::stream(cfg.seed, i as u64);
        let mut w = vec![0u64; words];
        for j in 0..size {
            if r.gen::<f64>() < p {
                w[j / 64] |= 1 << (j % 64);
            }
        }
        w
    });
    let cap = k * p;
    out.max_support = pieces.iter().map(|w| popcount(w)).max().unwrap_or(0);
    out.max_spread = pieces
        .iter()
        .map(|w| piece_spread(popcount(w), cap, symmetric))
        .fold(0.0, f64::max);
    out.p = p;
    out.n_pieces = n;
    out.identity = false;
    out.pieces = pieces;
    Ok(out)
}

/// `E[N g_{e_i}(S)]` for `|e| = size`, `|S| = s`, computed exactly from the
/// binomial distribution of `|S ∩ e_i|` (and of `|S̄ ∩ e_i|` for the
/// symmetric variant, using `P(min(X,Y) >= m) = P(X >= m) P(Y >= m)`).
/// The input edge's scale is not applied.
pub fn expected_piece_value(
    size: usize,
    s: usize,
    k: f64,
    p: f64,
    symmetric: bool,
    lf: &LnFactorial,
) -> f64 {
    assert!(s <= size && size <= lf.max());
    let term = |z: usize| (z as f64 / p).min(k);
    let px = lf.binomial_pmf(s, p);
    if !symmetric {
        return px.iter().enumerate().map(|(x, &w)| w * term(x)).sum();
    }
    let py = lf.binomial_pmf(size - s, p);
    let (tx, ty) = (upper_tails(&px), upper_tails(&py));
    let top = s.min(size - s);
    (0..=top)
        .map(|z| {
            let ge = tx[z] * ty[z];
            let gt = tx[z + 1] * ty[z + 1];
            (ge - gt) * term(z)
        })
        .sum()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub epsilon: f64,
    pub seed: u64,
    pub deform: DeformConfig,
    pub input_edges: usize,
    pub identity_edges: usize,
    pub capped_edges: usize,
    pub deformed_edges: usize,
    pub intermediate_spread: f64,
    pub output_edges: usize,
    pub bit_count: usize,
    /// `(1 + ε)²`, the quality the two stages compose to.
    pub quality_target: f64,
    pub spread: SpreadReport,
}

/// Deforms every additive edge, sparsifies the result by spread, and encodes it.
pub fn succinct_pipeline(
    h: &SubmodularHypergraph,
    deform: &DeformConfig,
    spread: &SpreadConfig,
) -> Result<(SubmodularHypergraph, EncodedSparsifier, PipelineReport)> {
    if let Some(i) = h
        .edges
        .iter()
        .position(|e| !matches!(e.func, SplittingFn::Additive { .. }))
    {
        return Err(Error::InvalidArgument(format!(
            "the succinct pipeline needs additive edges only; edge {i} is {}",
            h.edges[i].func.kind_name()
        )));
    }
    let results = par::map_range(h.num_edges(), |i| {
        let cfg = DeformConfig {
            seed: rng::derive(deform.seed, i as u64),
            ..*deform
        };
        deform_additive(&h.edges[i], &cfg)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let mut edges = Vec::new();
    for r in &results {
        edges.extend(r.to_hyperedges()?);
    }
    let mid = SubmodularHypergraph {
        n: h.n,
        edges,
        labels: h.labels.clone(),
    };
    let mid_spread = crate::checks::hypergraph_spread(&mid, spread.threshold)?;
    let (out, srep) = sparsify_spread(&mid, spread)?;
    let enc = encode(&out)?;
    let report = PipelineReport {
        epsilon: deform.epsilon,
        seed: deform.seed,
        deform: *deform,
        input_edges: h.num_edges(),
        identity_edges: results.iter().filter(|r| r.identity).count(),
        capped_edges: results.iter().filter(|r| r.capped).count(),
        deformed_edges: mid.num_edges(),
        intermediate_spread: mid_spread,
        output_edges: out.num_edges(),
        bit_count: enc.bit_count,
        quality_target: (1.0 + spread.epsilon).powi(2),
        spread: srep,
    };
    Ok((out, enc, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn add(size: u32, k: f64, symmetric: bool) -> Hyperedge {
        Hyperedge::unit((0..size).collect(), SplittingFn::Additive { k, symmetric }).unwrap()
    }

    #[test]
    fn small_k_short_circuits() {
        let r = deform_additive(&add(64, 1.0, false), &DeformConfig::new(0.5, 1)).unwrap();
        assert!(r.identity);
        assert_eq!(r.to_hyperedges().unwrap(), vec![add(64, 1.0, false)]);
    }

    #[test]
    fn rejects_non_additive() {
        let e = Hyperedge::unit(vec![0, 1], SplittingFn::Product).unwrap();
        assert!(deform_additive(&e, &DeformConfig::new(0.5, 1)).is_err());
    }

    #[test]
    fn forced_pieces_match_value() {
        let e = add(40, 20.0, true);
        let cfg = DeformConfig {
            force: true,
            c: 0.5,
            piece_budget: Some(50),
            ..DeformConfig::new(0.5, 9)
        };
        let r = deform_additive(&e, &cfg).unwrap();
        assert!(!r.identity && r.capped && r.n_pieces == 50);
        let s = vec![0xff_ffffu64];
        let direct: f64 = r.to_hyperedges().unwrap().iter().map(|x| x.eval_local(&s)).sum();
        assert!((direct - r.value(&s)).abs() < 1e-9 * direct.max(1.0));
    }

    #[test]
    fn expectation_brute_force() {
        // Enumerate every sample of a 6-vertex edge and compare.
        let lf = LnFactorial::new(64);
        let (size, p, k) = (6usize, 0.3f64, 1.5);
        for symmetric in [false, true] {
            for s in 0..=size {
                let mut exact = 0.0;
                for m in 0..1u32 << size {
                    let c = m.count_ones() as i32;
                    let prob = p.powi(c) * (1.0 - p).powi(size as i32 - c);
                    let inside = (m & ((1 << s) - 1)).count_ones() as f64;
                    let outside = c as f64 - inside;
                    let side = if symmetric { inside.min(outside) } else { inside };
                    exact += prob * (side / p).min(k);
                }
                let got = expected_piece_value(size, s, k, p, symmetric, &lf);
                assert!((got - exact).abs() < 1e-12, "{symmetric} {s}: {got} vs {exact}");
            }
        }
    }
}
