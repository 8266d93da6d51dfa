//! Splitting functions.
//!
//! A splitting function is evaluated on the *local* representation of
//! `S ∩ e`: bit `i` of the word slice is set when the `i`-th smallest vertex
//! of `e` belongs to `S`. Parameters that refer to members of the hyperedge
//! (coverage member sets, partition blocks, independent families) use these
//! local positions as well. The only exception is
//! [`SplittingFn::DirectedAllOrNothing`], whose head and tail are given as
//! global vertex ids.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest hyperedge for which an explicit table is accepted (2^24 entries).
pub const EXPLICIT_MAX_ARITY: usize = 24;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SplittingFn {
    /// `1` when the cut splits the hyperedge, `0` otherwise.
    AllOrNothing,
    /// `1` when `S` meets the tail and does not contain the whole head.
    DirectedAllOrNothing { head: Vec<u32>, tail: Vec<u32> },
    /// `min(|S|, |e \ S|)`.
    SmallSide,
    /// `min(|S|, K)`, or `min(|S|, |e \ S|, K)` when `symmetric`.
    Additive {
        k: f64,
        #[serde(default)]
        symmetric: bool,
    },
    /// `|S| * |e \ S|`.
    Product,
    /// `f(|S|)` for a table `f[0..=|e|]`.
    CardinalityBased { table: Vec<f64> },
    /// Weight of the ground elements covered by the member sets of `S`.
    Coverage {
        weights: Vec<f64>,
        member_sets: Vec<Vec<u32>>,
    },
    MatroidRank { matroid: Matroid },
    /// One value per subset of `e`, indexed by local bitmask.
    Explicit { table: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Matroid {
    Uniform {
        rank: usize,
    },
    /// Disjoint blocks with capacities; positions outside every block are loops.
    Partition {
        blocks: Vec<Vec<u32>>,
        capacities: Vec<usize>,
    },
    /// Explicit list of independent sets. The empty set is implied.
    Family { independent: Vec<Vec<u32>> },
}

#[inline]
fn has(words: &[u64], i: usize) -> bool {
    words.get(i / 64).is_some_and(|w| w >> (i % 64) & 1 == 1)
}

#[inline]
fn popcount(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

impl SplittingFn {
    pub fn additive(k: f64) -> Self {
        SplittingFn::Additive { k, symmetric: false }
    }

    pub fn additive_symmetric(k: f64) -> Self {
        SplittingFn::Additive { k, symmetric: true }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            SplittingFn::AllOrNothing => "all_or_nothing",
            SplittingFn::DirectedAllOrNothing { .. } => "directed_all_or_nothing",
            SplittingFn::SmallSide => "small_side",
            SplittingFn::Additive { .. } => "additive",
            SplittingFn::Product => "product",
            SplittingFn::CardinalityBased { .. } => "cardinality_based",
            SplittingFn::Coverage { .. } => "coverage",
            SplittingFn::MatroidRank { .. } => "matroid_rank",
            SplittingFn::Explicit { .. } => "explicit",
        }
    }

    /// Value as a function of `c = |S ∩ e|` for kinds that depend only on
    /// the size of the intersection.
    pub fn count_value(&self, k: usize, c: usize) -> Option<f64> {
        let c = c.min(k);
        let v = match self {
            SplittingFn::AllOrNothing => (c > 0 && c < k) as u8 as f64,
            SplittingFn::SmallSide => c.min(k - c) as f64,
            SplittingFn::Additive { k: cap, symmetric } => {
                let side = if *symmetric { c.min(k - c) } else { c };
                (side as f64).min(*cap)
            }
            SplittingFn::Product => (c * (k - c)) as f64,
            SplittingFn::CardinalityBased { table } => *table.get(c)?,
            SplittingFn::MatroidRank {
                matroid: Matroid::Uniform { rank },
            } => c.min(*rank) as f64,
            _ => return None,
        };
        Some(v)
    }

    pub fn is_count_based(&self) -> bool {
        self.count_value(1, 0).is_some()
    }

    /// Evaluates `g_e` on the local set `s` of the hyperedge with the given
    /// sorted vertex list.
    pub fn eval_local(&self, vertices: &[u32], s: &[u64]) -> f64 {
        let k = vertices.len();
        if let Some(v) = self.count_value(k, popcount(s)) {
            return v;
        }
        match self {
            SplittingFn::DirectedAllOrNothing { head, tail } => {
                let inside = |v: &u32| {
                    vertices
                        .binary_search(v)
                        .map(|i| has(s, i))
                        .unwrap_or(false)
                };
                (tail.iter().any(inside) && !head.iter().all(inside)) as u8 as f64
            }
            SplittingFn::Coverage {
                weights,
                member_sets,
            } => {
                let mut covered = vec![false; weights.len()];
                let mut total = 0.0;
                for (i, set) in member_sets.iter().enumerate() {
                    if !has(s, i) {
                        continue;
                    }
                    for &w in set {
                        let w = w as usize;
                        if !covered[w] {
                            covered[w] = true;
                            total += weights[w];
                        }
                    }
                }
                total
            }
            SplittingFn::MatroidRank { matroid } => matroid.rank(s) as f64,
            SplittingFn::Explicit { table } => {
                let idx = s.first().copied().unwrap_or(0) as usize;
                table[idx]
            }
            _ => unreachable!("count-based kinds handled above"),
        }
    }

    /// Evaluates on a local bitmask; the hyperedge must have at most 64 vertices.
    #[inline]
    pub fn eval_mask(&self, vertices: &[u32], mask: u64) -> f64 {
        self.eval_local(vertices, std::slice::from_ref(&mask))
    }

    /// Checks the structural invariants of the descriptor against the
    /// vertex list it is attached to.
    pub fn validate(&self, vertices: &[u32]) -> Result<()> {
        let k = vertices.len();
        let bad = |m: String| Err(Error::MalformedFunction(m));
        let check_values = |vals: &[f64], what: &str| -> Result<()> {
            if let Some((i, v)) = vals
                .iter()
                .enumerate()
                .find(|(_, v)| !v.is_finite() || **v < 0.0)
            {
                return bad(format!("{what}[{i}] = {v} is not a finite non-negative value"));
            }
            Ok(())
        };
        match self {
            SplittingFn::AllOrNothing | SplittingFn::SmallSide | SplittingFn::Product => {}
            SplittingFn::DirectedAllOrNothing { head, tail } => {
                for (name, part) in [("head", head), ("tail", tail)] {
                    if let Some(v) = part.iter().find(|v| vertices.binary_search(v).is_err()) {
                        return bad(format!("{name} vertex {v} is not in the hyperedge"));
                    }
                }
            }
            SplittingFn::Additive { k: cap, .. } => {
                if !(cap.is_finite() && *cap > 0.0) {
                    return bad(format!("additive K must be positive, got {cap}"));
                }
            }
            SplittingFn::CardinalityBased { table } => {
                if table.len() != k + 1 {
                    return bad(format!(
                        "cardinality table has {} entries, expected |e|+1 = {}",
                        table.len(),
                        k + 1
                    ));
                }
                check_values(table, "table")?;
                if table[0] != 0.0 {
                    return bad(format!("table[0] must be 0, got {}", table[0]));
                }
            }
            SplittingFn::Coverage {
                weights,
                member_sets,
            } => {
                check_values(weights, "weights")?;
                if member_sets.len() != k {
                    return bad(format!(
                        "coverage has {} member sets for a hyperedge of {} vertices",
                        member_sets.len(),
                        k
                    ));
                }
                for (i, set) in member_sets.iter().enumerate() {
                    if let Some(w) = set.iter().find(|&&w| w as usize >= weights.len()) {
                        return bad(format!(
                            "member_sets[{i}] names element {w} but there are {} weights",
                            weights.len()
                        ));
                    }
                }
            }
            SplittingFn::MatroidRank { matroid } => matroid.validate(k)?,
            SplittingFn::Explicit { table } => {
                if k > EXPLICIT_MAX_ARITY {
                    return bad(format!(
                        "explicit tables are limited to {EXPLICIT_MAX_ARITY} vertices, got {k}"
                    ));
                }
                if table.len() != 1usize << k {
                    return bad(format!(
                        "explicit table has {} entries, expected 2^{k} = {}",
                        table.len(),
                        1usize << k
                    ));
                }
                check_values(table, "table")?;
                if table[0] != 0.0 {
                    return bad(format!("table[0] must be 0, got {}", table[0]));
                }
            }
        }
        Ok(())
    }

    /// Maps global vertex ids inside the descriptor through `map`. Used when a
    /// hyperedge is relabelled.
    pub fn remap_global(&self, map: impl Fn(u32) -> u32) -> Self {
        match self {
            SplittingFn::DirectedAllOrNothing { head, tail } => {
                let mut head: Vec<u32> = head.iter().map(|&v| map(v)).collect();
                let mut tail: Vec<u32> = tail.iter().map(|&v| map(v)).collect();
                head.sort_unstable();
                tail.sort_unstable();
                SplittingFn::DirectedAllOrNothing { head, tail }
            }
            other => other.clone(),
        }
    }
}

impl Matroid {
    pub fn rank(&self, s: &[u64]) -> usize {
        match self {
            Matroid::Uniform { rank } => popcount(s).min(*rank),
            Matroid::Partition { blocks, capacities } => blocks
                .iter()
                .zip(capacities)
                .map(|(b, &cap)| b.iter().filter(|&&i| has(s, i as usize)).count().min(cap))
                .sum(),
            Matroid::Family { independent } => independent
                .iter()
                .filter(|set| set.iter().all(|&i| has(s, i as usize)))
                .map(|set| set.len())
                .max()
                .unwrap_or(0),
        }
    }

    fn validate(&self, k: usize) -> Result<()> {
        let bad = |m: String| Err(Error::MalformedFunction(m));
        match self {
            Matroid::Uniform { .. } => {}
            Matroid::Partition { blocks, capacities } => {
                if blocks.len() != capacities.len() {
                    return bad(format!(
                        "{} partition blocks but {} capacities",
                        blocks.len(),
                        capacities.len()
                    ));
                }
                let mut seen = vec![false; k];
                for b in blocks {
                    for &i in b {
                        let i = i as usize;
                        if i >= k || seen[i] {
                            return bad(format!("partition position {i} is out of range or repeated"));
                        }
                        seen[i] = true;
                    }
                }
            }
            Matroid::Family { independent } => {
                if let Some(i) = independent.iter().flatten().find(|&&i| i as usize >= k) {
                    return bad(format!("independent set names position {i} outside the hyperedge"));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mask_of(vertices: &[u32], s: &[u32]) -> u64 {
        s.iter()
            .map(|v| 1u64 << vertices.binary_search(v).unwrap())
            .sum()
    }

    #[test]
    fn eval_examples() {
        let e = [1, 2, 3];
        let aon = SplittingFn::AllOrNothing;
        assert_eq!(aon.eval_mask(&e, mask_of(&e, &[1])), 1.0);
        assert_eq!(aon.eval_mask(&e, mask_of(&e, &[1, 2, 3])), 0.0);

        let e4 = [1, 2, 3, 4];
        assert_eq!(SplittingFn::SmallSide.eval_mask(&e4, mask_of(&e4, &[1, 2])), 2.0);

        let d = SplittingFn::DirectedAllOrNothing {
            head: vec![3],
            tail: vec![1, 2],
        };
        assert_eq!(d.eval_mask(&e, mask_of(&e, &[1])), 1.0);
        assert_eq!(d.eval_mask(&e, mask_of(&e, &[1, 3])), 0.0);
        assert_eq!(d.eval_mask(&e, mask_of(&e, &[3])), 0.0);
    }

    #[test]
    fn additive_variants() {
        let e = [1, 2, 3, 4, 5];
        let s = mask_of(&e, &[1, 2, 3, 4]);
        assert_eq!(SplittingFn::additive(2.0).eval_mask(&e, s), 2.0);
        assert_eq!(SplittingFn::additive_symmetric(2.0).eval_mask(&e, s), 1.0);
    }

    #[test]
    fn coverage_and_matroids() {
        let e = [0, 1, 2];
        let cov = SplittingFn::Coverage {
            weights: vec![1.0, 2.0, 4.0],
            member_sets: vec![vec![0, 1], vec![1], vec![2]],
        };
        assert_eq!(cov.eval_mask(&e, 0b011), 3.0);
        assert_eq!(cov.eval_mask(&e, 0b110), 6.0);

        let part = Matroid::Partition {
            blocks: vec![vec![0, 1], vec![2]],
            capacities: vec![1, 1],
        };
        assert_eq!(part.rank(&[0b011]), 1);
        assert_eq!(part.rank(&[0b111]), 2);
        let fam = Matroid::Family {
            independent: vec![vec![0], vec![1], vec![0, 1]],
        };
        assert_eq!(fam.rank(&[0b111]), 2);
        assert_eq!(fam.rank(&[0b100]), 0);
    }

    #[test]
    fn validation() {
        let e = [0, 1];
        assert!(SplittingFn::Explicit { table: vec![0.0, 1.0, 1.0] }.validate(&e).is_err());
        assert!(SplittingFn::Explicit { table: vec![1.0, 1.0, 1.0, 0.0] }.validate(&e).is_err());
        assert!(SplittingFn::Explicit { table: vec![0.0, 1.0, 1.0, 0.0] }.validate(&e).is_ok());
        assert!(SplittingFn::additive(0.0).validate(&e).is_err());
        let d = SplittingFn::DirectedAllOrNothing { head: vec![5], tail: vec![0] };
        assert!(d.validate(&e).is_err());
        assert!(SplittingFn::CardinalityBased { table: vec![0.0, 1.0] }.validate(&e).is_err());
    }

    #[test]
    fn serde_tagging() {
        let f = SplittingFn::Additive { k: 2.0, symmetric: true };
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"kind":"additive","k":2.0,"symmetric":true}"#);
        let g: SplittingFn = serde_json::from_str(r#"{"kind":"additive","k":3}"#).unwrap();
        assert_eq!(g, SplittingFn::additive(3.0));
        let m: SplittingFn =
            serde_json::from_str(r#"{"kind":"matroid_rank","matroid":{"type":"uniform","rank":2}}"#)
                .unwrap();
        assert_eq!(m.eval_mask(&[0, 1, 2, 3], 0b0111), 2.0);
    }
}
