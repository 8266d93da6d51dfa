//! Seeded instance generators.
//!
//! Every edge draws from its own random stream, so an instance is a pure
//! function of its spec and seed.

use rand::seq::{index, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::checks::check_submodular;
use crate::sparsify::spread::CoverageInstance;
use crate::{rng, Error, Hyperedge, Matroid, Result, SplittingFn, SubmodularHypergraph};

/// Explicit tables are only built up to this arity.
pub const EXPLICIT_GEN_ARITY: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomSpec {
    pub n: usize,
    pub edges: usize,
    pub min_arity: usize,
    pub max_arity: usize,
    /// Attempts per edge before giving up on certification.
    pub retries: usize,
}

impl RandomSpec {
    pub fn new(n: usize, edges: usize, max_arity: usize) -> Self {
        Self {
            n,
            edges,
            min_arity: 2.min(max_arity),
            max_arity,
            retries: 8,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.min_arity == 0 || self.min_arity > self.max_arity || self.max_arity > self.n {
            return Err(Error::InvalidArgument(format!(
                "need 1 ≤ min_arity ≤ max_arity ≤ n, got {} ≤ {} ≤ {}",
                self.min_arity, self.max_arity, self.n
            )));
        }
        Ok(())
    }
}

fn vertices(r: &mut rng::StreamRng, spec: &RandomSpec) -> Vec<u32> {
    let k = r.gen_range(spec.min_arity..=spec.max_arity);
    let mut v: Vec<u32> = index::sample(r, spec.n, k)
        .into_iter()
        .map(|x| x as u32)
        .collect();
    v.sort_unstable();
    v
}

/// Weight rounded to two decimals so files stay readable.
fn weight(r: &mut rng::StreamRng) -> f64 {
    (r.gen_range(0.5..2.0f64) * 100.0).round() / 100.0
}

/// Random concave table on `0..=k` with `f(0) = 0` and `f(1) = 1`, rounded
/// to a 1/64 grid. Non-decreasing unless `symmetric`, in which case
/// `f(c) = g(min(c, k − c))` for such a `g`.
pub fn concave_table(r: &mut impl Rng, k: usize, symmetric: bool) -> Vec<f64> {
    let half = if symmetric { k / 2 } else { k };
    let mut inc: Vec<f64> = (0..half.max(1))
        .map(|_| (r.gen_range(0.0..=1.0f64) * 64.0).round() / 64.0)
        .collect();
    inc.sort_by(|a, b| b.total_cmp(a));
    inc[0] = 1.0;
    let mut g = vec![0.0];
    for d in inc {
        g.push(g.last().unwrap() + d);
    }
    (0..=k)
        .map(|c| if symmetric { g[c.min(k - c)] } else { g[c] })
        .collect()
}

/// `c^β` on `0..=k`.
pub fn polynomial_table(k: usize, beta: f64) -> Vec<f64> {
    (0..=k).map(|c| (c as f64).powf(beta)).collect()
}

/// `ln(c + 1)` on `0..=k`.
pub fn log_table(k: usize) -> Vec<f64> {
    (0..=k).map(|c| (c as f64 + 1.0).ln()).collect()
}

/// A random submodular function given as an explicit table: a weighted sum
/// of concave functions of `|S ∩ A_i|` for random subsets `A_i`.
fn concave_mixture(r: &mut rng::StreamRng, k: usize) -> SplittingFn {
    let terms = r.gen_range(1..=3);
    let mut table = vec![0.0; 1 << k];
    for _ in 0..terms {
        let size = r.gen_range(1..=k);
        let a: u64 = index::sample(r, k, size).into_iter().fold(0, |m, i| m | 1 << i);
        let sym = r.gen_bool(0.5);
        let phi = concave_table(r, size, sym);
        let w = weight(r);
        for (s, slot) in table.iter_mut().enumerate() {
            *slot += w * phi[(s as u64 & a).count_ones() as usize];
        }
    }
    SplittingFn::Explicit { table }
}

fn random_coverage(r: &mut rng::StreamRng, k: usize) -> SplittingFn {
    let ground = r.gen_range(1..=2 * k);
    let weights = (0..ground).map(|_| weight(r)).collect();
    let member_sets = (0..k)
        .map(|_| {
            let mut s: Vec<u32> = (0..ground as u32).filter(|_| r.gen_bool(0.4)).collect();
            if s.is_empty() {
                s.push(r.gen_range(0..ground as u32));
            }
            s
        })
        .collect();
    SplittingFn::Coverage {
        weights,
        member_sets,
    }
}

fn random_matroid(r: &mut rng::StreamRng, k: usize) -> SplittingFn {
    let matroid = if r.gen_bool(0.5) {
        Matroid::Uniform {
            rank: r.gen_range(1..=k),
        }
    } else {
        let mut pos: Vec<u32> = (0..k as u32).collect();
        pos.shuffle(r);
        let parts = r.gen_range(1..=k.min(3));
        let blocks: Vec<Vec<u32>> = (0..parts)
            .map(|p| {
                let mut b: Vec<u32> = pos.iter().copied().skip(p).step_by(parts).collect();
                b.sort_unstable();
                b
            })
            .collect();
        let capacities = blocks.iter().map(|b| r.gen_range(1..=b.len())).collect();
        Matroid::Partition { blocks, capacities }
    };
    SplittingFn::MatroidRank { matroid }
}

fn random_kind(r: &mut rng::StreamRng, verts: &[u32]) -> SplittingFn {
    let k = verts.len();
    let choices = if k <= EXPLICIT_GEN_ARITY { 9 } else { 8 };
    match r.gen_range(0..choices) {
        0 => SplittingFn::AllOrNothing,
        1 => SplittingFn::SmallSide,
        2 => SplittingFn::Additive {
            k: r.gen_range(1..=k) as f64,
            symmetric: r.gen_bool(0.3),
        },
        3 => SplittingFn::Product,
        4 => {
            let sym = r.gen_bool(0.3);
            SplittingFn::CardinalityBased {
                table: concave_table(r, k, sym),
            }
        }
        5 => random_coverage(r, k),
        6 => random_matroid(r, k),
        7 => {
            let mut v = verts.to_vec();
            v.shuffle(r);
            let cut = r.gen_range(1..k);
            let (mut tail, mut head) = (v[..cut].to_vec(), v[cut..].to_vec());
            tail.sort_unstable();
            head.sort_unstable();
            SplittingFn::DirectedAllOrNothing { head, tail }
        }
        _ => concave_mixture(r, k),
    }
}

fn certified(
    spec: &RandomSpec,
    seed: u64,
    mut make: impl FnMut(&mut rng::StreamRng) -> Result<Hyperedge>,
) -> Result<SubmodularHypergraph> {
    spec.validate()?;
    let mut edges = Vec::with_capacity(spec.edges);
    for i in 0..spec.edges {
        let mut r = rng::stream(seed, i as u64);
        let mut ok = None;
        for _ in 0..spec.retries.max(1) {
            let e = make(&mut r)?;
            if check_submodular(&e, EXPLICIT_GEN_ARITY.max(crate::EXHAUSTIVE_THRESHOLD))?.is_none() {
                ok = Some(e);
                break;
            }
        }
        edges.push(ok.ok_or_else(|| {
            Error::InvalidArgument(format!(
                "edge {i} failed the submodularity check {} times",
                spec.retries
            ))
        })?);
    }
    SubmodularHypergraph::new(spec.n, edges)
}

/// Mixed instance over every built-in kind plus explicit concave mixtures.
/// Each edge is certified submodular before it is accepted.
pub fn random_submodular(spec: &RandomSpec, seed: u64) -> Result<SubmodularHypergraph> {
    certified(spec, seed, |r| {
        let v = vertices(r, spec);
        let f = random_kind(r, &v);
        let w = weight(r);
        Hyperedge::new(v, f, w)
    })
}

/// Mixed monotone instance: additive, coverage, uniform-matroid and
/// non-decreasing concave cardinality functions.
pub fn random_monotone(spec: &RandomSpec, seed: u64) -> Result<SubmodularHypergraph> {
    certified(spec, seed, |r| {
        let v = vertices(r, spec);
        let k = v.len();
        let f = match r.gen_range(0..4) {
            0 => SplittingFn::additive(r.gen_range(1..=k) as f64),
            1 => random_coverage(r, k),
            2 => SplittingFn::MatroidRank {
                matroid: Matroid::Uniform {
                    rank: r.gen_range(1..=k),
                },
            },
            _ => SplittingFn::CardinalityBased {
                table: concave_table(r, k, false),
            },
        };
        let w = weight(r);
        Hyperedge::new(v, f, w)
    })
}

/// Concave cardinality-based edges with `f(1) = 1`; with `symmetric` every
/// table satisfies `f(c) = f(|e| − c)`. Edges have unit weight.
pub fn cardinality(spec: &RandomSpec, symmetric: bool, seed: u64) -> Result<SubmodularHypergraph> {
    certified(spec, seed, |r| {
        let v = vertices(r, spec);
        let table = concave_table(r, v.len(), symmetric);
        Hyperedge::unit(v, SplittingFn::CardinalityBased { table })
    })
}

/// Edges `min(|S ∩ e|, K)` with unit weight and random vertex sets.
pub fn additive_family(spec: &RandomSpec, k: f64, seed: u64) -> Result<SubmodularHypergraph> {
    spec.validate()?;
    let edges = (0..spec.edges)
        .map(|i| {
            let mut r = rng::stream(seed, i as u64);
            Hyperedge::unit(vertices(&mut r, spec), SplittingFn::additive(k))
        })
        .collect::<Result<_>>()?;
    SubmodularHypergraph::new(spec.n, edges)
}

/// Coverage function on `n` vertices over `ground` elements. Each element
/// is covered by each vertex with probability `density` (at least one
/// vertex always) and gets a weight in `[0.5, 2)`.
pub fn coverage_instance(n: usize, ground: usize, density: f64, seed: u64) -> Result<CoverageInstance> {
    if n == 0 || !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidArgument(format!(
            "need n ≥ 1 and density in [0, 1], got n = {n}, density = {density}"
        )));
    }
    let mut sets = vec![Vec::new(); n];
    let mut weights = Vec::with_capacity(ground);
    for x in 0..ground {
        let mut r = rng::stream(seed, x as u64);
        weights.push(weight(&mut r));
        let mut any = false;
        for s in sets.iter_mut() {
            if r.gen_bool(density) {
                s.push(x as u32);
                any = true;
            }
        }
        if !any {
            sets[r.gen_range(0..n)].push(x as u32);
        }
    }
    for s in sets.iter_mut() {
        s.sort_unstable();
    }
    let f = CoverageInstance {
        version: 1,
        n,
        weights,
        sets,
    };
    f.validate()?;
    Ok(f)
}

/// Parses `additive:K`, `additive-sym:K`, `polynomial:B`, `log`,
/// `all-or-nothing`, `small-side`, `product` or a JSON object.
pub fn from_spec(spec: &str, arity: usize) -> Result<SplittingFn, Error> {
    let bad = || Error::InvalidArgument(format!("cannot parse splitting function {spec:?}"));
    if spec.trim_start().starts_with('{') {
        return serde_json::from_str(spec).map_err(|e| Error::InvalidArgument(e.to_string()));
    }
    let (name, arg) = match spec.split_once(':') {
        Some((a, b)) => (a, Some(b.parse::<f64>().map_err(|_| bad())?)),
        None => (spec, None),
    };
    Ok(match (name, arg) {
        ("additive", Some(k)) => SplittingFn::additive(k),
        ("additive-sym", Some(k)) => SplittingFn::additive_symmetric(k),
        ("polynomial", Some(b)) => SplittingFn::CardinalityBased {
            table: polynomial_table(arity, b),
        },
        ("log", None) => SplittingFn::CardinalityBased {
            table: log_table(arity),
        },
        ("all-or-nothing", None) => SplittingFn::AllOrNothing,
        ("small-side", None) => SplittingFn::SmallSide,
        ("product", None) => SplittingFn::Product,
        _ => return Err(bad()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn function_specs() {
        assert_eq!(from_spec("additive:3", 5).unwrap(), SplittingFn::additive(3.0));
        assert_eq!(from_spec("small-side", 5).unwrap(), SplittingFn::SmallSide);
        let SplittingFn::CardinalityBased { table } = from_spec("polynomial:0.5", 4).unwrap() else {
            panic!()
        };
        assert_eq!(table.len(), 5);
        assert!(from_spec("additive", 5).is_err());
        assert!(from_spec("bogus:1", 5).is_err());
        let j = from_spec(r#"{"kind":"additive","k":2,"symmetric":true}"#, 4).unwrap();
        assert_eq!(j, SplittingFn::additive_symmetric(2.0));
    }

    use crate::analysis::GradientSeries;
    use crate::checks::first_non_submodular;

    #[test]
    fn random_is_certified_and_reproducible() {
        let spec = RandomSpec::new(10, 60, 8);
        let h = random_submodular(&spec, 7).unwrap();
        assert_eq!(h.num_edges(), 60);
        assert!(first_non_submodular(&h, 16).unwrap().is_none());
        assert_eq!(h, random_submodular(&spec, 7).unwrap());
        assert_ne!(h, random_submodular(&spec, 8).unwrap());
    }

    #[test]
    fn concave_tables() {
        let mut r = rng::stream(1, 0);
        for k in 1..12 {
            for sym in [false, true] {
                let t = concave_table(&mut r, k, sym);
                assert_eq!(t.len(), k + 1);
                assert_eq!(t[0], 0.0);
                if !sym || k >= 2 {
                    assert_eq!(t[1], 1.0);
                }
                assert!(GradientSeries::from_table(&t).is_non_increasing());
                if sym {
                    assert!((0..=k).all(|c| t[c] == t[k - c]));
                }
            }
        }
    }

    #[test]
    fn coverage_generator() {
        let f = coverage_instance(10, 500, 0.2, 3).unwrap();
        assert_eq!(f.ground_size(), 500);
        assert!(f.sets.iter().flatten().count() >= 500);
        assert_eq!(f, coverage_instance(10, 500, 0.2, 3).unwrap());
    }

    #[test]
    fn bad_spec() {
        assert!(random_submodular(&RandomSpec::new(3, 1, 5), 1).is_err());
    }
}
