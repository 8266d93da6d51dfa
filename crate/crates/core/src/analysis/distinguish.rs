//! Directed hypergraphs that pairwise admit no common `(1 + ε)`-sparsifier.
//!
//! On `U = [0, n)` and `W = [n, 2n)`, every pair `(i, j)` draws a uniform
//! `q`-subset `V_{i,j}` of `[1, R]` with `q = 1/(16ε)` and `R = 2q`, and each
//! `x ∈ V_{i,j}` adds the edge with tail `{u_i, u_{i+x mod n}}` and head
//! `{w_j}`. Two members are told apart by a cut whose `(1 ± ε)` intervals
//! do not overlap.

use rand::seq::{index, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::directed::integral_inverse;
use super::CutOracle;
use crate::{rng, Error, Hyperedge, Result, SplittingFn, SubmodularHypergraph};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistinguishFamily {
    pub n: usize,
    pub epsilon: f64,
    pub q: usize,
    pub r_max: usize,
    /// `v_sets[i][j]`, sorted.
    pub v_sets: Vec<Vec<Vec<usize>>>,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SiblingKind {
    /// One edge removed (the result leaves the family).
    Removal,
    /// One offset of one `V_{i,j}` replaced by another.
    Swap,
    /// Two swaps under the same head that leave every `cut(S_i)` unchanged.
    BalancedSwap,
}

impl DistinguishFamily {
    pub fn hypergraph(&self) -> Result<SubmodularHypergraph> {
        build(self.n, &self.v_sets)
    }

    /// `S_i = {u_i} ∪ (W ∖ {w_j})` for head `j`.
    pub fn s_set(&self, i: usize, j: usize) -> Vec<u32> {
        let n = self.n;
        let mut s = vec![(i % n) as u32];
        s.extend((0..n).filter(|&x| x != j).map(|x| (n + x) as u32));
        s
    }

    /// A sibling whose edge set differs from this member's.
    #[allow(clippy::needless_range_loop)]
    pub fn sibling(&self, kind: SiblingKind, seed: u64) -> Result<Sibling> {
        let mut r = rng::stream(seed, 0);
        let n = self.n;
        let mut v = self.v_sets.clone();
        let pick_in = |r: &mut rng::StreamRng, set: &[usize]| set[r.gen_range(0..set.len())];
        let pick_out = |r: &mut rng::StreamRng, set: &[usize]| {
            let free: Vec<usize> = (1..=self.r_max).filter(|x| !set.contains(x)).collect();
            free[r.gen_range(0..free.len())]
        };
        match kind {
            SiblingKind::Removal => {
                let (i, j) = (r.gen_range(0..n), r.gen_range(0..n));
                let x = pick_in(&mut r, &v[i][j]);
                v[i][j].retain(|&y| y != x);
            }
            SiblingKind::Swap => {
                let (i, j) = (r.gen_range(0..n), r.gen_range(0..n));
                let x = pick_in(&mut r, &v[i][j]);
                let y = pick_out(&mut r, &v[i][j]);
                replace(&mut v[i][j], x, y);
            }
            SiblingKind::BalancedSwap => {
                // a: x → y. b = a + y − y' trades y' → x' = x − y + y', so the
                // in-degrees of u_{a+x} and u_{a+y} are restored.
                let mut options = Vec::new();
                for a in 0..n {
                    for j in 0..n {
                        for &x in &v[a][j] {
                            for y in (1..=self.r_max).filter(|y| !v[a][j].contains(y)) {
                                for yp in 1..=self.r_max {
                                    let b = (a + n + y - yp) % n;
                                    let xp = x as isize - y as isize + yp as isize;
                                    if b == a || xp < 1 || xp as usize > self.r_max {
                                        continue;
                                    }
                                    let xp = xp as usize;
                                    if v[b][j].contains(&yp) && !v[b][j].contains(&xp) {
                                        options.push((a, j, x, y, b, yp, xp));
                                    }
                                }
                            }
                        }
                    }
                }
                let &(a, j, x, y, b, yp, xp) = options.choose(&mut r).ok_or_else(|| {
                    Error::InvalidArgument("no cut-preserving double swap exists".into())
                })?;
                replace(&mut v[a][j], x, y);
                replace(&mut v[b][j], yp, xp);
            }
        }
        Ok(Sibling {
            kind,
            hypergraph: build(n, &v)?,
            v_sets: v,
        })
    }

    /// Edges `(i, x, j)` present in exactly one of `self` and `other`, with
    /// a flag telling whether `self` has it.
    #[allow(clippy::needless_range_loop)]
    fn differences(&self, other: &[Vec<Vec<usize>>]) -> Vec<(usize, usize, usize, bool)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                let (a, b) = (&self.v_sets[i][j], &other[i][j]);
                out.extend(a.iter().filter(|x| !b.contains(x)).map(|&x| (i, x, j, true)));
                out.extend(b.iter().filter(|x| !a.contains(x)).map(|&x| (i, x, j, false)));
            }
        }
        out
    }
}

fn replace(set: &mut Vec<usize>, from: usize, to: usize) {
    set.retain(|&y| y != from);
    set.push(to);
    set.sort_unstable();
}

fn build(n: usize, v_sets: &[Vec<Vec<usize>>]) -> Result<SubmodularHypergraph> {
    let mut edges = Vec::new();
    for (i, row) in v_sets.iter().enumerate() {
        for (j, set) in row.iter().enumerate() {
            for &x in set {
                let mut tail = vec![i as u32, ((i + x) % n) as u32];
                tail.sort_unstable();
                let head = vec![(n + j) as u32];
                let mut verts = tail.clone();
                verts.push(head[0]);
                edges.push(Hyperedge::unit(
                    verts,
                    SplittingFn::DirectedAllOrNothing { head, tail },
                )?);
            }
        }
    }
    SubmodularHypergraph::new(2 * n, edges)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sibling {
    pub kind: SiblingKind,
    pub v_sets: Vec<Vec<Vec<usize>>>,
    #[serde(skip)]
    pub hypergraph: SubmodularHypergraph,
}

/// Builds a family member on `2n` vertices; `1/(16ε)` must be an integer
/// and `n > 2/(8ε)` so that the offsets do not wrap onto each other.
pub fn gen_distinguish_family(n: usize, epsilon: f64, seed: u64) -> Result<DistinguishFamily> {
    crate::sparsify::check_epsilon(epsilon)?;
    let q = integral_inverse(16.0, epsilon, "q")?;
    let r_max = 2 * q;
    if n <= 2 * r_max {
        return Err(Error::InvalidArgument(format!(
            "n must exceed 2/(8ε) = {}, got {n}",
            2 * r_max
        )));
    }
    let v_sets = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut r = rng::stream(seed, (i * n + j) as u64);
                    let mut s: Vec<usize> =
                        index::sample(&mut r, r_max, q).into_iter().map(|x| x + 1).collect();
                    s.sort_unstable();
                    s
                })
                .collect()
        })
        .collect();
    Ok(DistinguishFamily {
        n,
        epsilon,
        q,
        r_max,
        v_sets,
        seed,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// Some `S_i` has different cut values in the two hypergraphs.
    Gap,
    /// All `S_i` agree and `S_a ∪ S_{a+x}` separates them.
    Union,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutRange {
    pub min: f64,
    pub max: f64,
    /// Cuts inside `[1/(16ε), 1/(8ε)]`, and the number of cuts checked.
    pub in_stated_range: usize,
    /// Cuts inside `[1/(16ε), 3/(16ε)]`: `q` out-edges plus up to `R` in-edges.
    pub in_full_range: usize,
    pub total: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistinguishCheck {
    pub epsilon: f64,
    pub range: CutRange,
    pub certificate: Option<Certificate>,
    /// `cut_H` and `cut_Ĥ` of the separating set.
    pub cut_h: f64,
    pub cut_sibling: f64,
    /// `|cut_Ĥ / cut_H − 1|` on the separating set.
    pub relative_gap: f64,
    /// For the union certificate: whether `cut(S_a ∪ S_{a+x})` equals
    /// `cut(S_a) + cut(S_{a+x}) − 1` in the member holding the edge and
    /// `cut(S_a) + cut(S_{a+x})` in the other.
    pub union_identity: Option<bool>,
    /// `(1 + ε) · min < (1 − ε) · max` on the separating set.
    pub separated: bool,
}

fn disjoint(a: f64, b: f64, eps: f64) -> bool {
    (1.0 + eps) * a.min(b) < (1.0 - eps) * a.max(b)
}

/// Range of `cut_H(S_i)` over every `i` and head `j`.
pub fn cut_range(f: &DistinguishFamily, h: &dyn CutOracle) -> CutRange {
    let (lo, hi) = (f.q as f64, f.r_max as f64);
    let full_hi = (f.q + f.r_max) as f64;
    let mut r = CutRange {
        min: f64::INFINITY,
        max: f64::NEG_INFINITY,
        in_stated_range: 0,
        in_full_range: 0,
        total: 0,
    };
    for j in 0..f.n {
        for i in 0..f.n {
            let c = h.cut_of(&f.s_set(i, j));
            r.min = r.min.min(c);
            r.max = r.max.max(c);
            r.in_stated_range += (lo <= c && c <= hi) as usize;
            r.in_full_range += (lo <= c && c <= full_hi) as usize;
            r.total += 1;
        }
    }
    r
}

/// Looks for a cut on which no hypergraph can `(1 ± ε)`-approximate both
/// `f` and `sibling`.
pub fn check_distinguish(f: &DistinguishFamily, sibling: &Sibling) -> Result<DistinguishCheck> {
    let h = f.hypergraph()?;
    let hs = &sibling.hypergraph;
    let eps = f.epsilon;
    let range = cut_range(f, &h);
    let diffs = f.differences(&sibling.v_sets);
    if diffs.is_empty() {
        return Err(Error::InvalidArgument("the sibling equals the member".into()));
    }
    let mut heads: Vec<usize> = diffs.iter().map(|d| d.2).collect();
    heads.sort_unstable();
    heads.dedup();
    let mut out = DistinguishCheck {
        epsilon: eps,
        range,
        certificate: None,
        cut_h: 0.0,
        cut_sibling: 0.0,
        relative_gap: 0.0,
        union_identity: None,
        separated: false,
    };
    let gap = |a: f64, b: f64| (b / a - 1.0).abs();

    // Gap branch: the first S_i whose values differ.
    for &j in &heads {
        for i in 0..f.n {
            let s = f.s_set(i, j);
            let (a, b) = (h.cut_of(&s), hs.cut_of(&s));
            if a != b {
                out.certificate = Some(Certificate::Gap);
                out.cut_h = a;
                out.cut_sibling = b;
                out.relative_gap = gap(a, b);
                out.separated = disjoint(a, b, eps);
                return Ok(out);
            }
        }
    }

    // Union branch: the first differing edge whose union cut separates, or
    // the first differing edge when none does.
    let mut first = None;
    for &(a, x, j, in_self) in &diffs {
        let s1 = f.s_set(a, j);
        let s2 = f.s_set(a + x, j);
        let mut u = s1.clone();
        u.push(s2[0]);
        let (c1, c2) = (h.cut_of(&s1), h.cut_of(&s2));
        let (ch, cs) = (h.cut_of(&u), hs.cut_of(&u));
        let (with, without) = if in_self { (ch, cs) } else { (cs, ch) };
        let identity = with == c1 + c2 - 1.0 && without == c1 + c2;
        let found = (ch, cs, identity);
        if disjoint(ch, cs, eps) {
            first = Some(found);
            break;
        }
        first.get_or_insert(found);
    }
    let (ch, cs, identity) = first.expect("diffs is non-empty");
    out.certificate = Some(Certificate::Union);
    out.cut_h = ch;
    out.cut_sibling = cs;
    out.relative_gap = gap(ch, cs);
    out.union_identity = Some(identity);
    out.separated = disjoint(ch, cs, eps);
    Ok(out)
}
