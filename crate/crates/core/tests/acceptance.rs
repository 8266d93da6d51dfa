//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.
//!
//! Reference values (directed min-cuts, importances, cut values, binomial
//! expectations, binomial ratios) are recomputed here by brute force rather
//! than taken from the library.

use std::time::Instant;

use subsparse::analysis::{
    check_distinguish, decode_directed, decode_hadamard, delta::disjoint_pair_fraction, delta_stats,
    gen_directed_family, gen_distinguish_family, gen_hadamard_family, reweight, DeltaOptions,
    SiblingKind,
};
use subsparse::checks::{check_monotone, spread_stats};
use subsparse::deform::{deform_additive, succinct_pipeline, DeformConfig};
use subsparse::encode::decode;
use subsparse::generate::{
    additive_family, cardinality, coverage_instance, log_table, polynomial_table, random_monotone,
    random_submodular, RandomSpec,
};
use subsparse::sparsify::general::SampleConfig;
use subsparse::sparsify::spread::{build_auxiliary, coverage_compress, SpreadConfig};
use subsparse::sparsify::{
    rho_general, rho_monotone, rho_prime, sparsify_general, sparsify_monotone, sparsify_spread,
};
use subsparse::{Hyperedge, SplittingFn, SubmodularHypergraph, VertexSet};

const SLACK: f64 = 1e-9;

/// Oversampling constant shared by the general and monotone criteria.
const C_IMPORTANCE: f64 = 0.5;
/// Strength-sampler constant `t`, tuned on criterion 5 and reused by 7 and 11.
const T_SPREAD: f64 = 0.3;
const GAMMA: f64 = 2.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn le(a: f64, b: f64) -> bool {
    a <= b + SLACK * a.abs().max(b.abs()).max(1.0)
}

fn edge_value(e: &Hyperedge, s: u64) -> f64 {
    e.eval_mask(e.local_mask(s))
}

fn cut(h: &SubmodularHypergraph, s: u64) -> f64 {
    h.edges.iter().map(|e| edge_value(e, s)).sum()
}

/// `g_e^{u→v}` by enumerating local subsets; `u`, `v` are local positions
/// (`v = None` stands for any vertex outside `e`).
fn directed(e: &Hyperedge, u: usize, v: Option<usize>) -> f64 {
    (0..1u64 << e.arity())
        .filter(|m| m >> u & 1 == 1 && v.is_none_or(|v| m >> v & 1 == 0))
        .map(|m| e.eval_mask(m))
        .fold(f64::INFINITY, f64::min)
}

/// Dense `n × n` directed min-cut matrix of one edge.
fn directed_matrix(e: &Hyperedge, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for (i, &u) in e.vertices.iter().enumerate() {
        let away = directed(e, i, None);
        for v in 0..n as u32 {
            if v != u {
                out[u as usize * n + v as usize] = match e.position(v) {
                    Some(j) => directed(e, i, Some(j)),
                    None => away,
                };
            }
        }
    }
    out
}

/// Largest relative cut error over all `2^n` cuts, with the zero-cut
/// conventions (0 vs 0 is exact, anything else against 0 is a violation).
fn max_cut_error(n: usize, exact: impl Fn(u64) -> f64, approx: impl Fn(u64) -> f64) -> f64 {
    let mut worst: f64 = 0.0;
    for s in 0..1u64 << n {
        let (a, b) = (exact(s), approx(s));
        let err = if a == 0.0 {
            if b.abs() <= 1e-12 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (b / a - 1.0).abs()
        };
        worst = worst.max(err);
    }
    worst
}

fn instances() -> Vec<(bool, SubmodularHypergraph)> {
    (0..100u64)
        .map(|seed| {
            let n = 6 + (seed % 5) as usize;
            let spec = RandomSpec::new(n, 8, 8.min(n));
            let monotone = seed % 2 == 1;
            let h = if monotone {
                random_monotone(&spec, seed)
            } else {
                random_submodular(&spec, seed)
            };
            (monotone, h.expect("generator"))
        })
        .collect()
}

fn sandwich(inst: &[(bool, SubmodularHypergraph)]) -> Outcome {
    let (mut checks, mut monotone_edges) = (0u64, 0usize);
    for (idx, (_, h)) in inst.iter().enumerate() {
        let n = h.n;
        for (ei, e) in h.edges.iter().enumerate() {
            let d = directed_matrix(e, n);
            let mono = check_monotone(e, 16).unwrap().is_none();
            monotone_edges += mono as usize;
            let singles: Vec<f64> = (0..n as u64).map(|v| edge_value(e, 1 << v)).collect();
            for s in 1..(1u64 << n) - 1 {
                let g = edge_value(e, s);
                let (mut max, mut sum) = (0.0f64, 0.0);
                for u in (0..n).filter(|u| s >> u & 1 == 1) {
                    for v in (0..n).filter(|v| s >> v & 1 == 0) {
                        max = max.max(d[u * n + v]);
                        sum += d[u * n + v];
                    }
                }
                if !(le(max, g) && le(g, sum)) {
                    return outcome(
                        false,
                        format!("directed-cut sandwich broken: instance {idx}, edge {ei}, S = {s:#b}: {max} ≤ {g} ≤ {sum}"),
                    );
                }
                if mono {
                    let members = (0..n).filter(|v| s >> v & 1 == 1);
                    let lo = members.clone().map(|v| singles[v]).fold(0.0, f64::max);
                    let hi: f64 = members.map(|v| singles[v]).sum();
                    if !(le(lo, g) && le(g, hi)) {
                        return outcome(
                            false,
                            format!("singleton sandwich broken: instance {idx}, edge {ei}, S = {s:#b}"),
                        );
                    }
                }
                checks += 1;
            }
        }
    }
    outcome(
        true,
        format!("{} instances, {checks} (edge, S) pairs, singleton bounds on {monotone_edges} monotone edges", inst.len()),
    )
}

fn importance(inst: &[(bool, SubmodularHypergraph)]) -> Outcome {
    let mut worst_general: f64 = 0.0;
    let mut worst_monotone: f64 = 0.0;
    for (idx, (monotone, h)) in inst.iter().enumerate() {
        let n = h.n;
        let rho = rho_general(h).unwrap();
        let sum: f64 = rho.iter().sum();
        worst_general = worst_general.max(sum / (n * (n - 1)) as f64);
        if !le(sum, (n * (n - 1)) as f64) {
            return outcome(false, format!("instance {idx}: Σρ = {sum} > n(n−1)"));
        }
        let total: f64 = h.edges.iter().map(|e| e.full_value()).sum();
        let rp: f64 = rho_prime(h).iter().sum();
        if total > 0.0 && (rp - 1.0).abs() > SLACK {
            return outcome(false, format!("instance {idx}: Σρ' = {rp}"));
        }
        if *monotone {
            let rm: f64 = rho_monotone(h).iter().sum();
            worst_monotone = worst_monotone.max(rm / n as f64);
            if !le(rm, n as f64) {
                return outcome(false, format!("instance {idx}: monotone Σρ = {rm} > n"));
            }
        }
        // σ_e = max_S g_e(S) / cut(S), by brute force.
        let mut sigma = vec![0.0f64; h.num_edges()];
        for s in 0..1u64 << n {
            let c = cut(h, s);
            for (x, e) in sigma.iter_mut().zip(&h.edges) {
                let g = edge_value(e, s);
                if g > 0.0 {
                    *x = x.max(g / c);
                }
            }
        }
        if let Some(i) = (0..sigma.len()).find(|&i| !le(sigma[i], rho[i])) {
            return outcome(false, format!("instance {idx}, edge {i}: ρ = {} < σ = {}", rho[i], sigma[i]));
        }
    }
    outcome(
        true,
        format!(
            "largest Σρ/n(n−1) = {worst_general:.3}, largest monotone Σρ/n = {worst_monotone:.3}, Σρ' = 1 and ρ ≥ σ everywhere"
        ),
    )
}

fn sampler_quality(monotone: bool) -> Outcome {
    let (n, eps, seeds) = (12usize, 0.5, 20u64);
    let spec = RandomSpec::new(n, 300, 6);
    let (mut passed, mut size, mut worst) = (0, 0.0, 0.0f64);
    for seed in 0..seeds {
        let cfg = SampleConfig::new(eps, seed, C_IMPORTANCE);
        let (h, s) = if monotone {
            let h = random_monotone(&spec, seed).unwrap();
            let s = sparsify_monotone(&h, &cfg).unwrap().0;
            (h, s)
        } else {
            let h = random_submodular(&spec, seed).unwrap();
            let s = sparsify_general(&h, &cfg).unwrap().0;
            (h, s)
        };
        let err = max_cut_error(n, |x| cut(&h, x), |x| cut(&s, x));
        worst = worst.max(err);
        passed += (err <= eps * (1.0 + SLACK)) as u32;
        size += s.num_edges() as f64;
    }
    let mean = size / seeds as f64;
    let nf = n as f64;
    let envelope = if monotone {
        C_IMPORTANCE * nf * nf / (eps * eps)
    } else {
        C_IMPORTANCE * nf * nf * nf / (eps * eps) / 10.0
    };
    let rate = passed as f64 / seeds as f64;
    outcome(
        rate >= 0.95 && mean <= envelope,
        format!(
            "c = {C_IMPORTANCE}: {passed}/{seeds} exhaustive passes, worst error {worst:.3}, mean size {mean:.1} of 300 (envelope {envelope:.1})"
        ),
    )
}

fn spread_quality() -> Outcome {
    let (n, eps, seeds) = (12usize, 0.5, 20u64);
    let (mut passed, mut size, mut worst, mut max_mu) = (0, 0.0, 0.0f64, 0.0f64);
    let mut max_distinct = 0;
    for seed in 0..seeds {
        let h = cardinality(&RandomSpec::new(n, 1000, n), seed % 2 == 0, seed).unwrap();
        let map = match build_auxiliary(&h, GAMMA as u32, 16) {
            Ok(m) => m,
            Err(e) => return outcome(false, format!("seed {seed}: balancer error {e}")),
        };
        for c in &map.cliques {
            let sum: f64 = c.weights.iter().sum();
            if (sum - 1.0).abs() > 1e-12 || c.kappa_max > GAMMA * c.kappa * (1.0 + SLACK) {
                return outcome(
                    false,
                    format!("seed {seed}, edge {}: clique sum {sum}, κmax/κ = {}", c.edge, c.kappa_max / c.kappa),
                );
            }
        }
        max_distinct = max_distinct.max(map.distinct_strengths);
        if map.distinct_strengths > n - 1 {
            return outcome(false, format!("seed {seed}: {} distinct strengths", map.distinct_strengths));
        }
        let cfg = SpreadConfig::new(eps, seed).with_t(T_SPREAD);
        let (s, rep) = sparsify_spread(&h, &cfg).unwrap();
        max_mu = max_mu.max(rep.mu_h);
        let err = max_cut_error(n, |x| cut(&h, x), |x| cut(&s, x));
        worst = worst.max(err);
        passed += (err <= eps * (1.0 + SLACK)) as u32;
        size += s.num_edges() as f64;
    }
    let rate = passed as f64 / seeds as f64;
    outcome(
        rate >= 0.95 && max_mu <= 12.0,
        format!(
            "t = {T_SPREAD}: μ_H ≤ {max_mu:.2}, clique contract held on every run, at most {max_distinct} distinct strengths, {passed}/{seeds} exhaustive passes (worst {worst:.3}), mean size {:.1} of 1000",
            size / seeds as f64
        ),
    )
}

/// Log-space binomial pmf, computed by the ratio recurrence.
fn pmf(s: usize, p: f64) -> Vec<f64> {
    let mut lp = vec![s as f64 * (1.0 - p).ln()];
    let odds = (p / (1.0 - p)).ln();
    for x in 0..s {
        let next = lp[x] + ((s - x) as f64 / (x + 1) as f64).ln() + odds;
        lp.push(next);
    }
    lp.into_iter().map(f64::exp).collect()
}

/// `P(X ≥ z)` for `z = 0..=s+1`.
fn tails(pmf: &[f64]) -> Vec<f64> {
    let mut t = vec![0.0; pmf.len() + 1];
    for z in (0..pmf.len()).rev() {
        t[z] = t[z + 1] + pmf[z];
    }
    t
}

fn expectation(size: usize, s: usize, k: f64, p: f64, symmetric: bool) -> f64 {
    let term = |z: usize| (z as f64 / p).min(k);
    let px = pmf(s, p);
    if !symmetric {
        return px.iter().enumerate().map(|(x, w)| w * term(x)).sum();
    }
    let (tx, ty) = (tails(&px), tails(&pmf(size - s, p)));
    (0..=s.min(size - s))
        .map(|z| (tx[z] * ty[z] - tx[z + 1] * ty[z + 1]) * term(z))
        .sum()
}

/// Local bitset of the first `s` positions.
fn prefix(s: usize, words: usize) -> Vec<u64> {
    (0..words)
        .map(|w| match s.saturating_sub(64 * w) {
            0 => 0,
            x if x >= 64 => u64::MAX,
            x => (1u64 << x) - 1,
        })
        .collect()
}

fn deformation() -> Outcome {
    let (size, k, eps) = (4096usize, 2048.0, 0.5);
    let mut notes = Vec::new();
    let mut ok = true;
    for symmetric in [false, true] {
        let e = Hyperedge::unit((0..size as u32).collect(), SplittingFn::Additive { k, symmetric }).unwrap();
        let base = DeformConfig {
            c: 1.0,
            force: true,
            piece_budget: Some(128),
            ..DeformConfig::new(eps, 0)
        };
        let ep = base.eps_prime();
        let probe = deform_additive(&e, &base).unwrap();
        let p = probe.p;
        let mut worst: f64 = 0.0;
        for i in 0..200 {
            let s = 1 + (size - 1) * i / 199;
            let g = if symmetric { (s.min(size - s) as f64).min(k) } else { (s as f64).min(k) };
            let x = expectation(size, s, k, p, symmetric);
            let err = if g == 0.0 { x.abs() } else { (x / g - 1.0).abs() };
            worst = worst.max(err);
        }
        ok &= worst <= 2.0 * ep;
        let mut good_seeds = 0;
        for seed in 0..50 {
            let r = deform_additive(&e, &DeformConfig { seed, ..base }).unwrap();
            let pieces = r.to_hyperedges().unwrap();
            let support = pieces.iter().map(|x| x.arity()).max().unwrap_or(0);
            let spread = pieces
                .iter()
                .map(|x| spread_stats(x, 16).unwrap().spread)
                .fold(0.0, f64::max);
            good_seeds += (support as f64 <= 2.0 * p * size as f64 && spread <= k * p * (1.0 + SLACK)) as u32;
        }
        ok &= good_seeds == 50;
        notes.push(format!(
            "{}: p = {p:.4}, worst expectation error {worst:.4} (limit {}), support/spread bounds on {good_seeds}/50 seeds",
            if symmetric { "symmetric" } else { "monotone" },
            2.0 * ep
        ));
    }

    // Uncapped run: every requested piece is drawn.
    let (size, k) = (128usize, 64.0);
    let e = Hyperedge::unit((0..size as u32).collect(), SplittingFn::additive(k)).unwrap();
    let cfg = DeformConfig {
        c: 0.1,
        q: 1.0,
        force: true,
        ..DeformConfig::new(eps, 7)
    };
    let r = deform_additive(&e, &cfg).unwrap();
    let mut worst: f64 = 0.0;
    for s in (1..=size).step_by(3) {
        let mask = prefix(s, 2);
        let got = r.value(&mask);
        let want = (s as f64).min(k);
        worst = worst.max((got / want - 1.0).abs());
    }
    let uncapped = !r.capped && r.n_pieces as f64 >= r.n_pieces_target && worst <= eps && r.support_ok() && r.spread_ok();
    ok &= uncapped;
    notes.push(format!(
        "uncapped |e| = 128: N = {}, p = {:.3}, worst prefix-cut error {worst:.4}",
        r.n_pieces, r.p
    ));
    outcome(ok, notes.join("; "))
}

fn succinct() -> Outcome {
    let eps = 0.5;
    let mut bits = Vec::new();
    let mut notes = Vec::new();
    for n in [32usize, 64] {
        let spec = RandomSpec { min_arity: 4, ..RandomSpec::new(n, 2 * n * n, 8) };
        let h = additive_family(&spec, 1.0, n as u64).unwrap();
        // K = |e| / 2, so K / |e| stays constant.
        let edges = h
            .edges
            .iter()
            .map(|e| Hyperedge::unit(e.vertices.clone(), SplittingFn::additive((e.arity() / 2) as f64)))
            .collect::<Result<Vec<_>, _>>()
            .unwrap();
        let h = SubmodularHypergraph::new(n, edges).unwrap();
        let (out, enc, rep) = succinct_pipeline(
            &h,
            &DeformConfig::new(eps, n as u64),
            &SpreadConfig::new(eps, n as u64).with_t(T_SPREAD),
        )
        .unwrap();
        if decode(&enc.bytes).unwrap() != out {
            return outcome(false, format!("n = {n}: decode(encode(H'')) differs from H''"));
        }
        bits.push(enc.bit_count as f64);
        notes.push(format!("n = {n}: {} → {} edges, {} bits", rep.input_edges, rep.output_edges, enc.bit_count));
    }
    let f = |n: f64| n * n.ln().powi(4);
    let predicted = f(64.0) / f(32.0);
    let observed = bits[1] / bits[0];
    outcome(
        observed <= 3.0 * predicted,
        format!(
            "{}; bit ratio {observed:.2} vs n·log⁴n ratio {predicted:.2} (limit ×3), decode∘encode exact",
            notes.join(", ")
        ),
    )
}

fn hadamard() -> Outcome {
    let eps = 0.1;
    let template = SplittingFn::additive(2.0);
    let mut recovered = 0;
    let mut min_slack = f64::INFINITY;
    for seed in 0..50u64 {
        let fam = gen_hadamard_family(48, &template, seed).unwrap();
        let h2 = reweight(&fam.hypergraph, eps, 1000 + seed);
        match decode_hadamard(&h2, &fam.meta, eps) {
            Ok(d) if d.b == fam.b => {
                recovered += 1;
                if let Some(g) = d.min_gap_one {
                    min_slack = min_slack.min(g / d.margin);
                }
            }
            _ => {}
        }
    }
    outcome(
        recovered == 50,
        format!("B recovered on {recovered}/50 reweighted instances, smallest gap/margin {min_slack:.3}"),
    )
}

fn directed_family() -> Outcome {
    let (n, eps) = (24usize, 1.0 / 16.0);
    let m = n / 3;
    let mut ok = true;
    let mut notes = Vec::new();
    let mut recovered = 0;
    for seed in 0..10u64 {
        let f = gen_directed_family(n, eps, seed).unwrap();
        ok &= f.hypergraph.num_edges() == m * m * 2;
        let plain = decode_directed(&f.hypergraph, &f.meta).map(|d| d.tails == f.tails);
        let noisy = decode_directed(&reweight(&f.hypergraph, eps, 500 + seed), &f.meta).map(|d| d.tails == f.tails);
        recovered += matches!((plain, noisy), (Ok(true), Ok(true))) as u32;
    }
    ok &= recovered == 10;
    notes.push(format!("{} edges per member, tails recovered on {recovered}/10 members (plain and reweighted)", m * m * 2));

    // At ε = 1/16 there are only two offsets, so no cut-preserving double
    // swap exists; the union branch is exercised at ε = 1/32.
    let runs = (0..20u64)
        .map(|i| (eps, if i % 2 == 0 { SiblingKind::Removal } else { SiblingKind::Swap }, i))
        .chain((0..10u64).map(|i| (eps / 2.0, SiblingKind::BalancedSwap, 100 + i)));
    let (mut separated, mut union, mut stated, mut full, mut total) = (0, 0, 0, 0, 0);
    for (e, kind, seed) in runs {
        let f = gen_distinguish_family(n, e, seed).unwrap();
        let c = f.sibling(kind, 77 + seed).and_then(|sib| check_distinguish(&f, &sib)).unwrap();
        separated += (c.separated && c.union_identity != Some(false)) as u32;
        union += (c.union_identity == Some(true)) as u32;
        stated += c.range.in_stated_range;
        full += c.range.in_full_range;
        total += c.range.total;
    }
    ok &= separated == 30 && union == 10 && full == total;
    notes.push(format!(
        "{separated}/30 sibling pairs separated (20 removal/swap at ε = 1/16, {union} balanced swaps via the union cut at ε = 1/32), S_i cuts in [1/16ε, 3/16ε]: {full}/{total}, in [1/16ε, 1/8ε]: {stated}/{total}"
    ));
    outcome(ok, notes.join("; "))
}

fn count_edge(k: usize, f: SplittingFn) -> Hyperedge {
    Hyperedge::unit((0..k as u32).collect(), f).unwrap()
}

/// `C(a, b)` exactly.
fn binom(a: u128, b: u128) -> u128 {
    (0..b).fold(1u128, |acc, i| acc * (a - i) / (i + 1))
}

fn delta_calculators() -> Outcome {
    let opts = DeltaOptions::default();
    let mut notes = Vec::new();
    let mut ok = true;
    for k in [2usize, 8, 16] {
        let d = delta_stats(&count_edge(64, SplittingFn::additive(k as f64)), k, &opts).unwrap();
        ok &= d.delta_bar >= 0.5;
    }
    notes.push("additive δ̄_K = 1/2 for K ∈ {2, 8, 16}".to_string());
    let mut worst: f64 = 0.0;
    for beta in [0.25, 0.5, 0.9] {
        let e = count_edge(64, SplittingFn::CardinalityBased { table: polynomial_table(64, beta) });
        for t in [1, 2, 5, 16, 32] {
            let d = delta_stats(&e, t, &opts).unwrap();
            worst = worst.max((d.delta_bar - (1.0 - 2f64.powf(beta - 1.0))).abs());
        }
    }
    ok &= worst <= 1e-12;
    notes.push(format!("polynomial worst deviation {worst:.1e}"));
    let t = 5f64.exp().ceil() as usize;
    let e = count_edge(2 * t + 2, SplittingFn::CardinalityBased { table: log_table(2 * t + 2) });
    let d = delta_stats(&e, t, &opts).unwrap();
    ok &= d.delta_bar > 0.4;
    notes.push(format!("log δ̄_{t} = {:.4}", d.delta_bar));
    let mut min_frac = f64::INFINITY;
    for q in 1..16usize {
        let exact = binom(256 - q as u128, q as u128) as f64 / binom(256, q as u128) as f64;
        let got = disjoint_pair_fraction(256, q);
        ok &= (got - exact).abs() <= 1e-12 && got > 0.1;
        min_frac = min_frac.min(got);
    }
    notes.push(format!("|e| = 256 disjoint fraction ≥ {min_frac:.4} for q < 16"));
    outcome(ok, notes.join("; "))
}

fn coverage() -> Outcome {
    let (n, eps, seeds) = (10usize, 0.5, 20u64);
    let c = T_SPREAD * GAMMA.powi(3);
    let bound = c * n as f64 * (n as f64).ln() / (eps * eps);
    let (mut passed, mut worst, mut largest) = (0, 0.0f64, 0usize);
    for seed in 0..seeds {
        let f = coverage_instance(n, 500, 0.5, seed).unwrap();
        let (g, rep) = coverage_compress(&f, &SpreadConfig::new(eps, seed).with_t(T_SPREAD)).unwrap();
        largest = largest.max(rep.ground_out);
        let value = |x: &subsparse::sparsify::spread::CoverageInstance, s: u64| x.value(&VertexSet::from_mask(n, s));
        let err = max_cut_error(n, |s| value(&f, s), |s| value(&g, s));
        worst = worst.max(err);
        passed += (err <= eps * (1.0 + SLACK)) as u32;
    }
    outcome(
        passed as f64 / seeds as f64 >= 0.95 && largest as f64 <= bound,
        format!(
            "largest ground set {largest} of 500 (bound c·ε⁻²n ln n = {bound:.1} with c = γ³t = {c}), {passed}/{seeds} exhaustive passes, worst error {worst:.3}"
        ),
    )
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() {
    let inst = instances();
    let criteria: Vec<Criterion> = vec![
        ("sandwich bounds", Box::new(|| sandwich(&inst))),
        ("importance identities", Box::new(|| importance(&inst))),
        ("general sparsifier", Box::new(|| sampler_quality(false))),
        ("monotone sparsifier", Box::new(|| sampler_quality(true))),
        ("spread sparsifier", Box::new(spread_quality)),
        ("deformation", Box::new(deformation)),
        ("succinct pipeline", Box::new(succinct)),
        ("hadamard decoder", Box::new(hadamard)),
        ("directed family", Box::new(directed_family)),
        ("delta calculators", Box::new(delta_calculators)),
        ("coverage compression", Box::new(coverage)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        failed += !o.pass as usize;
        println!(
            "criterion {:>2} {:<22} {} ({:.1}s) {}",
            i + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            o.detail
        );
    }
    if failed > 0 {
        eprintln!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
