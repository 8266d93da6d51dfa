//! Cardinality-based hypergraphs whose reweighted sparsifiers reveal a
//! random bit matrix through cut queries.
//!
//! Vertices split into `V = [0, n/6)`, `U = [n/6, 5n/6)` and `W = [5n/6, n)`.
//! Edge `j` is `P_j ∪ R_j ∪ {w_j}` where `P_j ⊆ U` is a codeword with
//! pairwise overlaps in `{0, d/2}` and `R_j` a random `n/12`-subset of `V`.
//! The hidden matrix is `B[i][j] = [v_i ∈ R_j]`.

use rand::seq::index;
use serde::{Deserialize, Serialize};

use super::delta::GradientSeries;
use super::CutOracle;
use crate::{rng, Error, Hyperedge, Result, SplittingFn, SubmodularHypergraph};

/// What a decoder may know about a family member: everything except `B`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HadamardMeta {
    pub n: usize,
    pub d: usize,
    /// First gradient `Δ_0` and the gradient `Δ_d` at the codeword weight.
    pub delta_0: f64,
    pub delta_d: f64,
    /// `P_j` as global vertex ids.
    pub codewords: Vec<Vec<u32>>,
}

impl HadamardMeta {
    pub fn v_count(&self) -> usize {
        self.n / 6
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HadamardFamily {
    pub meta: HadamardMeta,
    /// First index where the template's gradient drops.
    pub t: usize,
    pub template: SplittingFn,
    pub arity: usize,
    pub seed: u64,
    /// `b[i][j]` is true when `v_i ∈ e_j`.
    pub b: Vec<Vec<bool>>,
    #[serde(skip)]
    pub hypergraph: SubmodularHypergraph,
}

/// The splitting function `template` restricted to a hyperedge of `arity`.
fn instantiate(template: &SplittingFn, arity: usize) -> Result<SplittingFn> {
    match template {
        SplittingFn::CardinalityBased { table } => {
            if table.len() <= arity {
                return Err(Error::InvalidArgument(format!(
                    "template table has {} entries, hyperedges need {}",
                    table.len(),
                    arity + 1
                )));
            }
            Ok(SplittingFn::CardinalityBased {
                table: table[..=arity].to_vec(),
            })
        }
        f if f.is_count_based() => Ok(f.clone()),
        f => Err(Error::InvalidArgument(format!(
            "template must depend only on |S ∩ e|, got {}",
            f.kind_name()
        ))),
    }
}

fn gradient(template: &SplittingFn, arity: usize) -> Result<GradientSeries> {
    let f = instantiate(template, arity)?;
    let table: Vec<f64> = (0..=arity).map(|c| f.count_value(arity, c).unwrap()).collect();
    Ok(GradientSeries::from_table(&table))
}

/// Augmented Hadamard code of length `2d` without the all-zero and all-one
/// words: `x ↦ (a · x) ⊕ b` for `a ≠ 0`. Each word has weight `d`; two
/// words overlap in `d/2` positions, or in none when they are complements.
pub fn augmented_hadamard(d: usize) -> Vec<Vec<bool>> {
    assert!(d.is_power_of_two());
    let len = 2 * d;
    let mut words = Vec::with_capacity(2 * len - 2);
    for a in 1..len {
        for b in [false, true] {
            words.push(
                (0..len)
                    .map(|x| ((a & x).count_ones() % 2 == 1) ^ b)
                    .collect(),
            );
        }
    }
    words
}

/// Builds a family member for an `n` divisible by 12 and a count-based
/// template whose gradient drops at some `t` with `d ≤ n/3`, where `d` is
/// the smallest power of two at least `t`.
pub fn gen_hadamard_family(n: usize, template: &SplittingFn, seed: u64) -> Result<HadamardFamily> {
    if n == 0 || !n.is_multiple_of(12) {
        return Err(Error::InvalidArgument(format!(
            "n must be a positive multiple of 12, got {n}"
        )));
    }
    let (nv, nu) = (n / 6, 2 * n / 3);
    let half_v = n / 12;
    // The arity depends on d and the gradient on the arity; take the
    // smallest d that is consistent with its own gradient.
    let mut found = None;
    let mut d = 1;
    while d <= n / 3 {
        let arity = d + half_v + 1;
        let g = gradient(template, arity)?;
        if let Some(t) = g.first_drop {
            if t.next_power_of_two() == d {
                found = Some((d, t, arity, g));
                break;
            }
        }
        d *= 2;
    }
    let (d, t, arity, g) = found.ok_or_else(|| {
        Error::InvalidArgument(format!(
            "the template's gradient has no drop at t with d ≤ n/3 = {}",
            n / 3
        ))
    })?;
    let func = instantiate(template, arity)?;
    let (delta_0, delta_d) = (g.deltas[0], g.deltas[d]);
    if delta_d < 0.0 {
        return Err(Error::InvalidArgument(
            "the template must be non-decreasing up to the codeword weight".into(),
        ));
    }

    let block: Vec<Vec<bool>> = if d == 1 {
        vec![vec![true, false], vec![false, true]]
    } else {
        augmented_hadamard(d)
    };
    let per_block = block.len();
    let blocks = nv.div_ceil(per_block);
    if blocks * 2 * d > nu {
        return Err(Error::InvalidArgument(format!(
            "{blocks} code blocks of length {} do not fit in |U| = {nu}",
            2 * d
        )));
    }
    let u0 = nv as u32;
    let codewords: Vec<Vec<u32>> = (0..nv)
        .map(|k| {
            let (blk, w) = (k / per_block, k % per_block);
            block[w]
                .iter()
                .enumerate()
                .filter(|&(_, &bit)| bit)
                .map(|(x, _)| u0 + (blk * 2 * d + x) as u32)
                .collect()
        })
        .collect();

    let w0 = (5 * n / 6) as u32;
    let mut b = vec![vec![false; nv]; nv];
    let mut edges = Vec::with_capacity(nv);
    for (j, p) in codewords.iter().enumerate() {
        let mut r = rng::stream(seed, j as u64);
        let mut verts: Vec<u32> = index::sample(&mut r, nv, half_v)
            .into_iter()
            .map(|i| i as u32)
            .collect();
        for &i in &verts {
            b[i as usize][j] = true;
        }
        verts.extend_from_slice(p);
        verts.push(w0 + j as u32);
        verts.sort_unstable();
        edges.push(Hyperedge::unit(verts, func.clone())?);
    }
    Ok(HadamardFamily {
        meta: HadamardMeta {
            n,
            d,
            delta_0,
            delta_d,
            codewords,
        },
        t,
        template: template.clone(),
        arity,
        seed,
        b,
        hypergraph: SubmodularHypergraph::new(n, edges)?,
    })
}

impl HadamardFamily {
    /// Whether `|P_j|² = d` and `|P_j ∩ P_k| ∈ {d/2, 0}` for `j ≠ k`.
    pub fn codewords_ok(&self) -> bool {
        let d = self.meta.d;
        let cw = &self.meta.codewords;
        cw.iter().all(|p| p.len() == d)
            && (0..cw.len()).all(|j| {
                (j + 1..cw.len()).all(|k| {
                    let overlap = cw[j].iter().filter(|x| cw[k].contains(x)).count();
                    overlap == 0 || 2 * overlap == d
                })
            })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HadamardDecoding {
    pub b: Vec<Vec<bool>>,
    /// `(Δ_0 − Δ_d)(1 − ε)`: the smallest gap a present bit can produce.
    pub margin: f64,
    /// Smallest gap observed on a recovered one, largest on a zero.
    pub min_gap_one: Option<f64>,
    pub max_gap_zero: Option<f64>,
    pub queries: u64,
}

/// Recovers `B` from the cuts of a reweighted sparsifier whose weights lie
/// in `[1 − ε, 1 + ε]`. Comparisons that fall between the two cases are
/// reported as a decode failure instead of being guessed.
pub fn decode_hadamard(
    oracle: &dyn CutOracle,
    meta: &HadamardMeta,
    epsilon: f64,
) -> Result<HadamardDecoding> {
    crate::sparsify::check_epsilon(epsilon)?;
    if oracle.n() != meta.n || meta.codewords.len() != meta.v_count() {
        return Err(Error::InvalidArgument(format!(
            "meta describes n = {} with {} codewords, oracle has n = {}",
            meta.n,
            meta.codewords.len(),
            oracle.n()
        )));
    }
    let counter = super::oracle::Counting::new(oracle);
    let nv = meta.v_count();
    let margin = (meta.delta_0 - meta.delta_d) * (1.0 - epsilon);
    if margin <= 0.0 {
        return Err(Error::DecodeFailure(
            "Δ_0 = Δ_d leaves no separation between the cases".into(),
        ));
    }
    let singles: Vec<f64> = (0..nv as u32).map(|i| counter.cut_of(&[i])).collect();
    let mut b = vec![vec![false; nv]; nv];
    let (mut min_one, mut max_zero): (Option<f64>, Option<f64>) = (None, None);
    for (j, p) in meta.codewords.iter().enumerate() {
        let base = counter.cut_of(p);
        let mut with = p.clone();
        with.push(0);
        for (i, &single) in singles.iter().enumerate() {
            with[p.len()] = i as u32;
            let beta = counter.cut_of(&with) - base;
            let gap = single - beta;
            let zero_tol = 1e-9 * single.abs().max(base.abs()).max(1.0);
            if gap.abs() <= zero_tol {
                max_zero = Some(max_zero.map_or(gap, |m: f64| m.max(gap)));
            } else if gap >= 0.5 * margin {
                b[i][j] = true;
                min_one = Some(min_one.map_or(gap, |m: f64| m.min(gap)));
            } else {
                return Err(Error::DecodeFailure(format!(
                    "ambiguous gap {gap} for v_{i} and e_{j} (margin {margin})"
                )));
            }
        }
    }
    Ok(HadamardDecoding {
        b,
        margin,
        min_gap_one: min_one,
        max_gap_zero: max_zero,
        queries: counter.queries(),
    })
}
