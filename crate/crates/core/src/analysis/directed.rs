//! Directed all-or-nothing hypergraphs that cannot be sparsified below all
//! their edges, and whose sparsifiers reveal random tail bits.
//!
//! Vertices split into thirds `V`, `U`, `W` of size `m = n/3`. For every
//! `i, j < m` and `r ∈ [1, R]` with `R = 1/(8ε)` there is an edge with tail
//! `{u_i, u_{i+r mod m}}` plus a random half of `V`, and head `{w_j}`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::CutOracle;
use crate::{rng, Error, Hyperedge, Result, SplittingFn, SubmodularHypergraph};

/// `1/(cε)` as an integer, refusing values that are not (nearly) integral.
pub(crate) fn integral_inverse(c: f64, epsilon: f64, what: &str) -> Result<usize> {
    let x = 1.0 / (c * epsilon);
    let r = x.round();
    if !(r >= 1.0 && (x - r).abs() <= 1e-9 * x) {
        return Err(Error::InvalidArgument(format!(
            "{what} = 1/({c}ε) = {x} must be a positive integer"
        )));
    }
    Ok(r as usize)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectedMeta {
    pub n: usize,
    pub epsilon: f64,
    /// `R = 1/(8ε)`.
    pub r_max: usize,
    /// `(i, r, j)` of each edge, in edge order.
    pub labels: Vec<(usize, usize, usize)>,
}

impl DirectedMeta {
    pub fn m(&self) -> usize {
        self.n / 3
    }

    fn u(&self, i: usize) -> u32 {
        (self.m() + i % self.m()) as u32
    }

    fn w(&self, j: usize) -> u32 {
        (2 * self.m() + j) as u32
    }

    /// `S_{i,j} = {u_i} ∪ (W ∖ {w_j})`.
    pub fn s_set(&self, i: usize, j: usize) -> Vec<u32> {
        let mut s = vec![self.u(i)];
        s.extend((0..self.m()).filter(|&x| x != j).map(|x| self.w(x)));
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DirectedFamily {
    pub meta: DirectedMeta,
    pub seed: u64,
    /// `tails[e][k]` is true when `v_k` is in the tail of edge `e`.
    pub tails: Vec<Vec<bool>>,
    #[serde(skip)]
    pub hypergraph: SubmodularHypergraph,
}

/// Builds a family member for `n` divisible by 3 and `1/(4ε) < n/3`, with
/// `1/(8ε)` integral.
pub fn gen_directed_family(n: usize, epsilon: f64, seed: u64) -> Result<DirectedFamily> {
    crate::sparsify::check_epsilon(epsilon)?;
    if n == 0 || !n.is_multiple_of(3) {
        return Err(Error::InvalidArgument(format!(
            "n must be a positive multiple of 3, got {n}"
        )));
    }
    let m = n / 3;
    if 1.0 / (4.0 * epsilon) >= m as f64 {
        return Err(Error::InvalidArgument(format!(
            "need 1/(4ε) < n/3, got 1/(4ε) = {} and n/3 = {m}",
            1.0 / (4.0 * epsilon)
        )));
    }
    let r_max = integral_inverse(8.0, epsilon, "R")?;
    let mut labels = Vec::with_capacity(m * m * r_max);
    for i in 0..m {
        for r in 1..=r_max {
            for j in 0..m {
                labels.push((i, r, j));
            }
        }
    }
    let meta = DirectedMeta {
        n,
        epsilon,
        r_max,
        labels,
    };
    let mut tails = Vec::with_capacity(meta.labels.len());
    let mut edges = Vec::with_capacity(meta.labels.len());
    for (idx, &(i, r, j)) in meta.labels.iter().enumerate() {
        let mut rg = rng::stream(seed, idx as u64);
        let bits: Vec<bool> = (0..m).map(|_| rg.gen()).collect();
        let mut tail: Vec<u32> = (0..m as u32).filter(|&k| bits[k as usize]).collect();
        tail.push(meta.u(i));
        tail.push(meta.u(i + r));
        tail.sort_unstable();
        let head = vec![meta.w(j)];
        let mut verts = tail.clone();
        verts.extend_from_slice(&head);
        verts.sort_unstable();
        edges.push(Hyperedge::unit(
            verts,
            SplittingFn::DirectedAllOrNothing { head, tail },
        )?);
        tails.push(bits);
    }
    Ok(DirectedFamily {
        hypergraph: SubmodularHypergraph::new(n, edges)?,
        meta,
        seed,
        tails,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectedDecoding {
    pub tails: Vec<Vec<bool>>,
    /// Smallest recovered weight of a present bit, largest magnitude of an absent one.
    pub min_one: Option<f64>,
    pub max_zero: Option<f64>,
    pub queries: u64,
}

/// Recovers every tail bit from the cuts of a reweighted sparsifier whose
/// weights lie in `[1 − ε, 1 + ε]`.
///
/// With `T_j = W ∖ {w_j}` and `S ⊇ T_j`,
/// `w'(E(S) ∩ E({v_k})) = (cut(T_j ∪ {v_k}) − cut(T_j)) − (cut(S ∪ {v_k}) − cut(S))`.
/// Adding `v_k` to a set containing `T_j` only cuts edges with head `w_j`,
/// so the baseline is taken against `T_j` rather than the empty set. The
/// weight of the single edge in `E(S_{i,j}) ∩ E(S_{i+r,j})` that contains
/// `v_k` then follows by inclusion–exclusion over `S_{i,j}`, `S_{i+r,j}`
/// and their union.
pub fn decode_directed(oracle: &dyn CutOracle, meta: &DirectedMeta) -> Result<DirectedDecoding> {
    if oracle.n() != meta.n {
        return Err(Error::InvalidArgument(format!(
            "meta describes n = {}, oracle has n = {}",
            meta.n,
            oracle.n()
        )));
    }
    let counter = super::oracle::Counting::new(oracle);
    let m = meta.m();
    let threshold = 0.5 * (1.0 - meta.epsilon);

    // Marginal of each v_k on top of S.
    let marginals = |s: &[u32]| -> Vec<f64> {
        let base = counter.cut_of(s);
        let mut with = s.to_vec();
        with.push(0);
        (0..m)
            .map(|k| {
                *with.last_mut().unwrap() = k as u32;
                counter.cut_of(&with) - base
            })
            .collect()
    };
    let baselines: Vec<Vec<f64>> = (0..m)
        .map(|j| marginals(&meta.s_set(0, j)[1..]))
        .collect();
    let scale = baselines.iter().flatten().copied().fold(1.0, f64::max);
    let tol = 1e-9 * scale;
    let recover = |s: &[u32], j: usize| -> Vec<f64> {
        marginals(s)
            .into_iter()
            .zip(&baselines[j])
            .map(|(x, b)| b - x)
            .collect()
    };

    let mut tails = Vec::with_capacity(meta.labels.len());
    let (mut min_one, mut max_zero): (Option<f64>, Option<f64>) = (None, None);
    for &(i, r, j) in &meta.labels {
        let s1 = meta.s_set(i, j);
        let s2 = meta.s_set(i + r, j);
        let mut union = s1.clone();
        union.push(s2[0]);
        let (a, b, c) = (recover(&s1, j), recover(&s2, j), recover(&union, j));
        let mut bits = Vec::with_capacity(m);
        for k in 0..m {
            let w = a[k] + b[k] - c[k];
            if w.abs() <= tol {
                max_zero = Some(max_zero.map_or(w.abs(), |x: f64| x.max(w.abs())));
                bits.push(false);
            } else if w >= threshold {
                min_one = Some(min_one.map_or(w, |x: f64| x.min(w)));
                bits.push(true);
            } else {
                return Err(Error::DecodeFailure(format!(
                    "ambiguous weight {w} for v_{k} in edge ({i}, {r}, {j})"
                )));
            }
        }
        tails.push(bits);
    }
    Ok(DirectedDecoding {
        tails,
        min_one,
        max_zero,
        queries: counter.queries(),
    })
}
