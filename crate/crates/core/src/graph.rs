//! Weighted graphs, exact global minimum cuts and edge strengths.

use serde::{Deserialize, Serialize};

/// Undirected multigraph with non-negative edge weights.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct WeightedGraph {
    pub n: usize,
    pub edges: Vec<(u32, u32, f64)>,
}

impl WeightedGraph {
    pub fn new(n: usize) -> Self {
        Self { n, edges: Vec::new() }
    }

    pub fn add_edge(&mut self, u: u32, v: u32, w: f64) {
        assert!((u as usize) < self.n && (v as usize) < self.n && u != v);
        assert!(w >= 0.0, "edge weights must be non-negative");
        self.edges.push((u, v, w));
    }

    /// Parallel edges summed into a dense symmetric `n × n` matrix.
    pub fn dense(&self) -> Vec<f64> {
        let n = self.n;
        let mut m = vec![0.0; n * n];
        for &(u, v, w) in &self.edges {
            m[u as usize * n + v as usize] += w;
            m[v as usize * n + u as usize] += w;
        }
        m
    }

    pub fn cut(&self, side: &[bool]) -> f64 {
        self.edges
            .iter()
            .filter(|&&(u, v, _)| side[u as usize] != side[v as usize])
            .map(|e| e.2)
            .sum()
    }
}

/// Global minimum cut of a dense symmetric weight matrix by repeated
/// minimum-cut phases. Returns the value and one side of a minimum cut.
/// Needs at least two vertices.
pub fn stoer_wagner(n: usize, w: &[f64]) -> (f64, Vec<bool>) {
    assert!(n >= 2, "a cut needs two vertices");
    let mut w = w.to_vec();
    // members[i] lists the original vertices merged into super-vertex i.
    let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut alive: Vec<usize> = (0..n).collect();
    let mut best = (f64::INFINITY, Vec::new());

    while alive.len() > 1 {
        let mut attach = vec![0.0f64; n];
        let mut added = vec![false; n];
        let mut prev = alive[0];
        let mut last = alive[0];
        for step in 0..alive.len() {
            let next = if step == 0 {
                alive[0]
            } else {
                *alive
                    .iter()
                    .filter(|&&v| !added[v])
                    .max_by(|&&a, &&b| attach[a].total_cmp(&attach[b]).then(b.cmp(&a)))
                    .unwrap()
            };
            added[next] = true;
            prev = last;
            last = next;
            for &v in &alive {
                if !added[v] {
                    attach[v] += w[next * n + v];
                }
            }
        }
        let phase = attach[last];
        if phase < best.0 {
            best = (phase, members[last].clone());
        }
        // Merge `last` into `prev`.
        let moved = std::mem::take(&mut members[last]);
        members[prev].extend(moved);
        for &v in &alive {
            let x = w[last * n + v];
            w[prev * n + v] += x;
            w[v * n + prev] += x;
        }
        w[prev * n + prev] = 0.0;
        alive.retain(|&v| v != last);
    }
    let mut side = vec![false; n];
    for v in best.1 {
        side[v] = true;
    }
    (best.0, side)
}

/// Connected components over positive-weight pairs of the induced subgraph.
fn components(verts: &[usize], n: usize, w: &[f64]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; verts.len()];
    let mut out = Vec::new();
    for s in 0..verts.len() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![verts[s]];
        let mut stack = vec![s];
        while let Some(a) = stack.pop() {
            for b in 0..verts.len() {
                if !seen[b] && w[verts[a] * n + verts[b]] > 0.0 {
                    seen[b] = true;
                    comp.push(verts[b]);
                    stack.push(b);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// Strength of every vertex pair: the largest `k` such that both endpoints
/// lie in a common vertex-induced subgraph with minimum cut at least `k`.
/// Pairs in different connected components get 0. Returned as a dense
/// symmetric matrix with a zero diagonal.
pub fn pair_strengths(n: usize, w: &[f64]) -> Vec<f64> {
    let mut k = vec![0.0; n * n];
    let mut stack: Vec<(Vec<usize>, f64)> = vec![((0..n).collect(), 0.0)];
    let assign = |a: &[usize], b: &[usize], val: f64, k: &mut Vec<f64>| {
        for &x in a {
            for &y in b {
                k[x * n + y] = val;
                k[y * n + x] = val;
            }
        }
    };
    while let Some((verts, parent)) = stack.pop() {
        if verts.len() < 2 {
            continue;
        }
        let comps = components(&verts, n, w);
        if comps.len() > 1 {
            for i in 0..comps.len() {
                for j in i + 1..comps.len() {
                    assign(&comps[i], &comps[j], parent, &mut k);
                }
            }
            stack.extend(comps.into_iter().map(|c| (c, parent)));
            continue;
        }
        let m = verts.len();
        let mut sub = vec![0.0; m * m];
        for (i, &a) in verts.iter().enumerate() {
            for (j, &b) in verts.iter().enumerate() {
                sub[i * m + j] = w[a * n + b];
            }
        }
        let (cut, side) = stoer_wagner(m, &sub);
        let level = parent.max(cut);
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for (&v, &s) in verts.iter().zip(&side) {
            if s { a.push(v) } else { b.push(v) }
        }
        assign(&a, &b, level, &mut k);
        stack.push((a, level));
        stack.push((b, level));
    }
    k
}

/// Strength `k_f` of every edge of a multigraph, in edge order. Parallel
/// edges share the strength of their endpoint pair.
pub fn edge_strengths(g: &WeightedGraph) -> Vec<f64> {
    let k = pair_strengths(g.n, &g.dense());
    g.edges
        .iter()
        .map(|&(u, v, _)| k[u as usize * g.n + v as usize])
        .collect()
}

/// Number of distinct values in `xs` up to a relative tolerance.
pub fn distinct_values(xs: impl IntoIterator<Item = f64>) -> usize {
    let mut v: Vec<f64> = xs.into_iter().collect();
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() <= crate::REL_TOL * a.abs().max(b.abs()).max(1.0));
    v.len()
}
