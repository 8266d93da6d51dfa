//! Checks that one hypergraph approximates the cuts of another.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::CutOracle;
use crate::{par, rng, Error, Result, SubmodularHypergraph, VertexSet};

/// Default limit on `n` for exhaustive verification.
pub const EXHAUSTIVE_LIMIT: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum VerifyMode {
    /// Every cut, refused above `limit` vertices.
    Exhaustive { limit: usize },
    /// `count` uniformly random cuts plus all singletons, their complements
    /// and the full vertex set.
    Sampled { count: usize, seed: u64 },
}

impl VerifyMode {
    pub fn exhaustive() -> Self {
        VerifyMode::Exhaustive {
            limit: EXHAUSTIVE_LIMIT,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutWitness {
    pub set: Vec<u32>,
    pub cut: f64,
    pub cut_approx: f64,
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub mode: VerifyMode,
    pub n: usize,
    pub epsilon: f64,
    pub cuts_tested: u64,
    pub max_error: f64,
    pub mean_error: f64,
    pub worst: Option<CutWitness>,
    pub pass: bool,
}

/// Relative error of `approx` against `exact`. Two zero cuts agree; a zero
/// approximation of a positive cut has error 1; a positive approximation of
/// a zero cut has infinite error.
pub fn relative_error(exact: f64, approx: f64) -> f64 {
    if exact == 0.0 {
        if approx == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (approx - exact).abs() / exact.abs()
    }
}

#[derive(Clone, Copy)]
struct Acc {
    count: u64,
    sum: f64,
    worst: f64,
    worst_set: u64,
}

impl Acc {
    fn new() -> Self {
        Acc {
            count: 0,
            sum: 0.0,
            worst: -1.0,
            worst_set: 0,
        }
    }

    fn merge(self, o: Acc) -> Acc {
        let (worst, worst_set) = if o.worst > self.worst {
            (o.worst, o.worst_set)
        } else {
            (self.worst, self.worst_set)
        };
        Acc {
            count: self.count + o.count,
            sum: self.sum + o.sum,
            worst,
            worst_set,
        }
    }
}

/// Compares every tested cut of `approx` with `exact`. The test passes when
/// the largest relative error is at most `ε` (up to float slack).
pub fn verify(
    exact: &dyn SyncOracle,
    approx: &dyn SyncOracle,
    epsilon: f64,
    mode: VerifyMode,
) -> Result<VerificationReport> {
    crate::sparsify::check_epsilon(epsilon)?;
    let n = exact.n();
    if approx.n() != n {
        return Err(Error::InvalidArgument(format!(
            "vertex counts differ: {n} vs {}",
            approx.n()
        )));
    }
    let sets: Box<dyn Fn(usize) -> VertexSet + Sync>;
    let total: usize;
    match mode {
        VerifyMode::Exhaustive { limit } => {
            if n > limit.min(40) {
                return Err(Error::ThresholdExceeded {
                    what: "exhaustive verification",
                    limit,
                    got: n,
                });
            }
            total = 1usize << n;
            sets = Box::new(move |i| VertexSet::from_mask(n, i as u64));
        }
        VerifyMode::Sampled { count, seed } => {
            // Singletons, their complements and V first, then random cuts.
            let fixed = 2 * n + 1;
            total = fixed + count;
            sets = Box::new(move |i| {
                if i < n {
                    VertexSet::from_vertices(n, [i as u32])
                } else if i < 2 * n {
                    VertexSet::from_vertices(n, [(i - n) as u32]).complement()
                } else if i == 2 * n {
                    VertexSet::full(n)
                } else {
                    let mut r = rng::stream(seed, i as u64);
                    VertexSet::from_vertices(n, (0..n as u32).filter(|_| r.gen::<bool>()))
                }
            });
        }
    }
    let exhaustive = matches!(mode, VerifyMode::Exhaustive { .. });
    let ranges = par::chunks(total as u64, 256);
    let parts = par::map_range(ranges.len(), |c| {
        let (lo, hi) = ranges[c];
        let mut acc = Acc::new();
        for i in lo..hi {
            let err = if exhaustive {
                relative_error(exact.cut_mask(i), approx.cut_mask(i))
            } else {
                let s = sets(i as usize);
                relative_error(exact.cut(&s), approx.cut(&s))
            };
            acc.count += 1;
            acc.sum += err;
            if err > acc.worst {
                acc.worst = err;
                acc.worst_set = i;
            }
        }
        acc
    });
    let acc = parts.into_iter().fold(Acc::new(), Acc::merge);
    let worst = (acc.count > 0).then(|| {
        let s = sets(acc.worst_set as usize);
        CutWitness {
            set: s.to_vec(),
            cut: exact.cut(&s),
            cut_approx: approx.cut(&s),
            error: acc.worst,
        }
    });
    let max_error = acc.worst.max(0.0);
    Ok(VerificationReport {
        mode,
        n,
        epsilon,
        cuts_tested: acc.count,
        max_error,
        mean_error: if acc.count > 0 { acc.sum / acc.count as f64 } else { 0.0 },
        worst,
        pass: max_error <= epsilon * (1.0 + crate::REL_TOL),
    })
}

/// Cut oracles that can be queried from several threads.
pub trait SyncOracle: CutOracle + Sync {}
impl<T: CutOracle + Sync> SyncOracle for T {}

/// [`verify`] for two hypergraphs.
pub fn verify_hypergraphs(
    h: &SubmodularHypergraph,
    h2: &SubmodularHypergraph,
    epsilon: f64,
    mode: VerifyMode,
) -> Result<VerificationReport> {
    verify(h, h2, epsilon, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Hyperedge, SplittingFn};

    fn two_edges() -> SubmodularHypergraph {
        let e = |v: Vec<u32>| Hyperedge::unit(v, SplittingFn::AllOrNothing).unwrap();
        SubmodularHypergraph::new(4, vec![e(vec![0, 1]), e(vec![2, 3])]).unwrap()
    }

    #[test]
    fn identical_has_zero_error() {
        let h = two_edges();
        let r = verify_hypergraphs(&h, &h, 0.1, VerifyMode::exhaustive()).unwrap();
        assert_eq!(r.max_error, 0.0);
        assert_eq!(r.cuts_tested, 16);
        assert!(r.pass);
    }

    #[test]
    fn dropped_edge_is_witnessed() {
        let h = two_edges();
        let mut h2 = h.clone();
        h2.edges.pop();
        let r = verify_hypergraphs(&h, &h2, 0.5, VerifyMode::exhaustive()).unwrap();
        assert_eq!(r.max_error, 1.0);
        assert!(!r.pass);
        let w = r.worst.unwrap();
        assert_eq!((w.cut, w.cut_approx), (1.0, 0.0));
        assert!(w.set.contains(&2) != w.set.contains(&3));
    }

    #[test]
    fn sampled_is_deterministic() {
        let h = two_edges();
        let h2 = SubmodularHypergraph::new(4, vec![h.edges[0].with_scale(1.2), h.edges[1].clone()]).unwrap();
        let mode = VerifyMode::Sampled { count: 50, seed: 3 };
        let a = verify_hypergraphs(&h, &h2, 0.3, mode).unwrap();
        assert_eq!(a, verify_hypergraphs(&h, &h2, 0.3, mode).unwrap());
        assert_eq!(a.cuts_tested, 59);
        assert!((a.max_error - 0.2).abs() < 1e-12);
    }

    #[test]
    fn zero_conventions() {
        assert_eq!(relative_error(0.0, 0.0), 0.0);
        assert_eq!(relative_error(2.0, 0.0), 1.0);
        assert_eq!(relative_error(0.0, 1.0), f64::INFINITY);
    }

    #[test]
    fn exhaustive_refuses_large_n() {
        let h = SubmodularHypergraph::new(30, vec![]).unwrap();
        let r = verify_hypergraphs(&h, &h, 0.1, VerifyMode::exhaustive());
        assert!(matches!(r, Err(Error::ThresholdExceeded { .. })));
    }
}
