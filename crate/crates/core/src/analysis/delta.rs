//! Distance from additivity of a splitting function and the support-size
//! lower bounds derived from it.
//!
//! For `|S| = |T| = t`, `δ_t(S, T) = 1 − g(S ∪ T) / (g(S) + g(T))`. Kinds that
//! depend only on `|S ∩ e|` are handled in closed form over intersection
//! sizes; other kinds enumerate pairs of `t`-subsets, or sample them when
//! there are too many.

use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::checks::{count_table, spread_stats};
use crate::math::LnFactorial;
use crate::{par, rng, Error, Hyperedge, Result, SplittingFn};

/// Slack used when comparing `δ` values against a threshold.
const DELTA_TOL: f64 = 1e-12;

/// Default cap on exhaustively enumerated pairs.
pub const PAIR_BUDGET: u64 = 10_000_000;

/// How the pair statistics were obtained.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum PairMethod {
    /// Counted over intersection sizes (count-based kinds).
    ClosedForm,
    /// Every unordered pair of distinct `t`-subsets.
    Exhaustive { pairs: u64 },
    /// Uniform pairs with a 95% Wilson interval for the pair fraction.
    Sampled { pairs: u64, ci_low: f64, ci_high: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaStats {
    pub t: usize,
    pub arity: usize,
    /// `δ̄_t = 1 − max g(S ∪ T) / (g(S) + g(T))` over `|S| = |T| = t`.
    /// For sampled runs this is the smallest value observed.
    pub delta_bar: f64,
    /// Threshold used for the pair fraction.
    pub delta_hat: f64,
    /// Fraction of unordered pairs of distinct `t`-subsets with `δ_t ≥ δ̂`.
    pub pair_fraction: f64,
    /// Fraction of pairs of `t`-subsets that are disjoint.
    pub disjoint_pair_fraction: f64,
    /// `ρ δ̂² |e| / t`, with the unknown constant taken as 1.
    pub implied_support_bound: f64,
    pub method: PairMethod,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaOptions {
    /// Threshold `δ̂`; defaults to `δ̄_t`.
    pub delta_hat: Option<f64>,
    pub pair_budget: u64,
    pub samples: u64,
    pub seed: u64,
}

impl Default for DeltaOptions {
    fn default() -> Self {
        Self {
            delta_hat: None,
            pair_budget: PAIR_BUDGET,
            samples: 200_000,
            seed: rng::DEFAULT_SEED,
        }
    }
}

/// Increments `Δ_i = f(i + 1) − f(i)` of a count-based splitting function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradientSeries {
    pub deltas: Vec<f64>,
    /// Smallest `i` with `Δ_i < Δ_0`, if any.
    pub first_drop: Option<usize>,
}

impl GradientSeries {
    pub fn from_table(f: &[f64]) -> Self {
        let deltas: Vec<f64> = f.windows(2).map(|w| w[1] - w[0]).collect();
        let first_drop = deltas.first().and_then(|&d0| {
            deltas
                .iter()
                .position(|&d| d < d0 - DELTA_TOL * d0.abs().max(1.0))
        });
        Self { deltas, first_drop }
    }

    pub fn of(e: &Hyperedge) -> Result<Self> {
        let f = count_table(e).ok_or_else(|| not_count_based(e))?;
        Ok(Self::from_table(&f))
    }

    pub fn is_non_increasing(&self) -> bool {
        self.deltas
            .windows(2)
            .all(|w| w[1] <= w[0] + DELTA_TOL * w[0].abs().max(1.0))
    }
}

fn not_count_based(e: &Hyperedge) -> Error {
    Error::InvalidArgument(format!(
        "{} is not a function of |S ∩ e|",
        e.func.kind_name()
    ))
}

/// `δ` from the three values, `0` when both sides vanish.
fn delta_of(gs: f64, gt: f64, gu: f64) -> f64 {
    let d = gs + gt;
    if d > 0.0 {
        1.0 - gu / d
    } else {
        0.0
    }
}

fn check_t(t: usize, m: usize) -> Result<()> {
    if t == 0 || 2 * t > m {
        return Err(Error::InvalidArgument(format!(
            "t must lie in [1, |e|/2] = [1, {}], got {t}",
            m / 2
        )));
    }
    Ok(())
}

/// `δ̄_t` of a count table: one minus the largest `f(u) / 2f(t)` for
/// `u ∈ [t, min(2t, m)]`.
pub fn delta_bar_from_table(f: &[f64], t: usize) -> f64 {
    let m = f.len() - 1;
    let ft = f[t];
    (t..=(2 * t).min(m))
        .map(|u| delta_of(ft, ft, f[u]))
        .fold(f64::INFINITY, f64::min)
}

/// Probability that two uniform `t`-subsets of an `m`-set are disjoint:
/// `Π_{i<t} (m − t − i) / (m − i)`.
pub fn disjoint_pair_fraction(m: usize, t: usize) -> f64 {
    if 2 * t > m {
        return 0.0;
    }
    (0..t).map(|i| (m - t - i) as f64 / (m - i) as f64).product()
}

/// `δ_t` statistics of one hyperedge.
pub fn delta_stats(e: &Hyperedge, t: usize, opts: &DeltaOptions) -> Result<DeltaStats> {
    let m = e.arity();
    check_t(t, m)?;
    let disjoint = disjoint_pair_fraction(m, t);
    let finish = |delta_bar: f64, delta_hat: f64, rho: f64, method| DeltaStats {
        t,
        arity: m,
        delta_bar,
        delta_hat,
        pair_fraction: rho,
        disjoint_pair_fraction: disjoint,
        implied_support_bound: rho * delta_hat * delta_hat * m as f64 / t as f64,
        method,
    };

    if let Some(f) = count_table(e) {
        let delta_bar = delta_bar_from_table(&f, t);
        let hat = opts.delta_hat.unwrap_or(delta_bar);
        // Distinct pairs meet in i < t elements; the number of T for a fixed S
        // is C(t, i) C(m − t, t − i) out of C(m, t) − 1.
        let lf = LnFactorial::new(m);
        let ln_total = lf.ln_choose(m, t);
        let ln_others = ln_total + (-(-ln_total).exp()).ln_1p();
        let rho = if ln_others == f64::NEG_INFINITY {
            0.0
        } else {
            (0..t)
                .filter(|&i| delta_of(f[t], f[t], f[2 * t - i]) >= hat - DELTA_TOL)
                .map(|i| (lf.ln_choose(t, i) + lf.ln_choose(m - t, t - i) - ln_others).exp())
                .sum::<f64>()
                .min(1.0)
        };
        return Ok(finish(delta_bar, hat, rho, PairMethod::ClosedForm));
    }

    let lf = LnFactorial::new(m);
    let subsets = lf.ln_choose(m, t).exp();
    let pairs = subsets * (subsets - 1.0) / 2.0;
    if pairs <= opts.pair_budget as f64 {
        let sets: Vec<Vec<u64>> = combinations(m, t).collect();
        let vals: Vec<f64> = sets.iter().map(|s| e.raw_local(s)).collect();
        // Per first index: minimum δ and the list of δ values (for the count).
        let rows = par::map_range(sets.len(), |a| {
            let mut ds = Vec::with_capacity(sets.len() - a - 1);
            for b in a + 1..sets.len() {
                let u: Vec<u64> = sets[a].iter().zip(&sets[b]).map(|(x, y)| x | y).collect();
                ds.push(delta_of(vals[a], vals[b], e.raw_local(&u)));
            }
            ds
        });
        let delta_bar = rows.iter().flatten().copied().fold(f64::INFINITY, f64::min);
        let delta_bar = delta_bar.min(0.5);
        let hat = opts.delta_hat.unwrap_or(delta_bar);
        let total: usize = rows.iter().map(Vec::len).sum();
        let hits = rows
            .iter()
            .flatten()
            .filter(|&&d| d >= hat - DELTA_TOL)
            .count();
        let rho = if total == 0 { 0.0 } else { hits as f64 / total as f64 };
        return Ok(finish(
            delta_bar,
            hat,
            rho,
            PairMethod::Exhaustive { pairs: total as u64 },
        ));
    }

    let n = opts.samples.max(1);
    let draws = par::map_range(n as usize, |i| {
        let mut r = rng::stream(opts.seed, i as u64);
        let s = index::sample(&mut r, m, t).into_vec();
        let mut tt = index::sample(&mut r, m, t).into_vec();
        let (ws, mut wt) = (words_of(m, &s), words_of(m, &tt));
        while ws == wt {
            tt = index::sample(&mut r, m, t).into_vec();
            wt = words_of(m, &tt);
        }
        let u: Vec<u64> = ws.iter().zip(&wt).map(|(x, y)| x | y).collect();
        delta_of(e.raw_local(&ws), e.raw_local(&wt), e.raw_local(&u))
    });
    let delta_bar = draws.iter().copied().fold(0.5, f64::min);
    let hat = opts.delta_hat.unwrap_or(delta_bar);
    let hits = draws.iter().filter(|&&d| d >= hat - DELTA_TOL).count();
    let rho = hits as f64 / n as f64;
    let (ci_low, ci_high) = wilson(hits as u64, n);
    Ok(finish(
        delta_bar,
        hat,
        rho,
        PairMethod::Sampled {
            pairs: n,
            ci_low,
            ci_high,
        },
    ))
}

fn words_of(m: usize, positions: &[usize]) -> Vec<u64> {
    let mut w = vec![0u64; m.div_ceil(64).max(1)];
    for &i in positions {
        w[i / 64] |= 1 << (i % 64);
    }
    w
}

/// 95% Wilson score interval for `hits` successes out of `n`.
pub fn wilson(hits: u64, n: u64) -> (f64, f64) {
    const Z: f64 = 1.959_963_984_540_054;
    let n = n as f64;
    let p = hits as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// All `t`-subsets of `[0, m)` as local words, in lexicographic order.
fn combinations(m: usize, t: usize) -> impl Iterator<Item = Vec<u64>> {
    let mut idx: Vec<usize> = (0..t).collect();
    let mut done = t > m;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = words_of(m, &idx);
        // Advance to the next combination.
        let mut i = t;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            if idx[i] < m - t + i {
                idx[i] += 1;
                for j in i + 1..t {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}

/// Which lower-bound argument produced a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// `|e| / K` for `min(|S|, K)`.
    Additive,
    /// Best `δ̄_t² |e| / t` over `t ≤ |e|/2` with `δ̄_t ≥ 2ε`.
    UniformDelta,
    /// `ε² |e| / μ_e^γ` with `γ = 1 / log₂(2 − 4ε)`, for count-based kinds.
    Spread,
    /// `ε² |e| / μ_e^{2γ}` for functions with unit singletons.
    Unweighted,
}

impl Route {
    pub const ALL: [Route; 4] = [
        Route::Additive,
        Route::UniformDelta,
        Route::Spread,
        Route::Unweighted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Route::Additive => "additive",
            Route::UniformDelta => "uniform_delta",
            Route::Spread => "spread",
            Route::Unweighted => "unweighted",
        }
    }
}

impl std::str::FromStr for Route {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Route::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown route {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RouteBound {
    pub route: Route,
    /// Bound value with the unknown constant taken as 1.
    pub value: f64,
    /// Pair fraction, threshold and subset size of the underlying argument.
    pub rho: f64,
    pub delta_hat: f64,
    pub t: usize,
    /// Spread of the edge, for the spread-based routes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// Whether the chosen `t` is below `μ^γ + 1` (spread route only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_within_prediction: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RouteOutcome {
    pub route: Route,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<RouteBound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundReport {
    pub arity: usize,
    pub epsilon: f64,
    pub best: Option<RouteBound>,
    pub routes: Vec<RouteOutcome>,
    pub note: String,
}

fn skip(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

/// `γ = 1 / log₂(2 − 4ε)`.
pub fn spread_exponent(epsilon: f64) -> f64 {
    1.0 / (2.0 - 4.0 * epsilon).log2()
}

/// Lower bound on the support size of any `(1 + ε)`-approximation of `e`
/// through one route. Inapplicable routes return `InvalidArgument`; the
/// spread routes refuse with `InfiniteSpread` when `μ_e = ∞`.
pub fn route_bound(e: &Hyperedge, epsilon: f64, route: Route, threshold: usize) -> Result<RouteBound> {
    crate::sparsify::check_epsilon(epsilon)?;
    let m = e.arity();
    let base = |value, rho, delta_hat, t| RouteBound {
        route,
        value,
        rho,
        delta_hat,
        t,
        mu: None,
        gamma: None,
        t_within_prediction: None,
    };
    match route {
        Route::Additive => {
            let SplittingFn::Additive { k, .. } = e.func else {
                return Err(skip("the additive route needs an additive function"));
            };
            if epsilon > 0.1 + DELTA_TOL {
                return Err(skip("the additive route covers ε ≤ 0.1 only"));
            }
            let t = (k.ceil() as usize).clamp(1, m.max(1));
            Ok(base(m as f64 / k, 1.0, 0.5, t))
        }
        Route::UniformDelta => {
            let f = count_table(e).ok_or_else(|| not_count_based(e))?;
            let mut best: Option<RouteBound> = None;
            for t in 1..=m / 2 {
                let d = delta_bar_from_table(&f, t);
                if d > 0.0 && d + DELTA_TOL >= 2.0 * epsilon {
                    let v = d * d * m as f64 / t as f64;
                    if best.as_ref().is_none_or(|b| v > b.value) {
                        best = Some(base(v, 1.0, d, t));
                    }
                }
            }
            best.ok_or_else(|| skip(format!("no t ≤ |e|/2 has δ̄_t ≥ 2ε = {}", 2.0 * epsilon)))
        }
        Route::Spread | Route::Unweighted => {
            if epsilon >= 0.25 {
                return Err(skip("spread-based routes need ε < 1/4"));
            }
            let gamma = spread_exponent(epsilon);
            let stats = spread_stats(e, threshold)?;
            let edge = 0;
            if !stats.is_finite() {
                return Err(Error::InfiniteSpread { edge });
            }
            let mu = stats.spread;
            let mut b = if route == Route::Spread {
                let f = count_table(e).ok_or_else(|| not_count_based(e))?;
                let t = (1..=m / 2)
                    .find(|&t| delta_bar_from_table(&f, t) > 2.0 * epsilon)
                    .ok_or_else(|| skip("no t ≤ |e|/2 has δ̄_t > 2ε"))?;
                let mut b = base(epsilon * epsilon * m as f64 / mu.powf(gamma), 1.0, 2.0 * epsilon, t);
                b.t_within_prediction = Some((t as f64) < mu.powf(gamma) + 1.0);
                b
            } else {
                let unit = (0..m).all(|i| (e.singleton_value(i) - 1.0).abs() <= 1e-12);
                if !unit {
                    return Err(skip("the unweighted route needs g({v}) = 1 for every v"));
                }
                if mu >= (m as f64).powf(1.0 / (2.0 * gamma)) {
                    return Err(skip("the unweighted route needs μ_e < |e|^{1/(2γ)}"));
                }
                let rho = mu.powf(-gamma) / 160.0;
                let t = (2.0 * mu).powf(gamma).floor().max(1.0) as usize;
                base(epsilon * epsilon * m as f64 / mu.powf(2.0 * gamma), rho, 2.0 * epsilon, t)
            };
            b.mu = Some(mu);
            b.gamma = Some(gamma);
            Ok(b)
        }
    }
}

/// Best support-size lower bound over all applicable routes.
pub fn support_lower_bound(e: &Hyperedge, epsilon: f64, threshold: usize) -> Result<LowerBoundReport> {
    crate::sparsify::check_epsilon(epsilon)?;
    let mut routes = Vec::new();
    let mut best: Option<RouteBound> = None;
    for route in Route::ALL {
        match route_bound(e, epsilon, route, threshold) {
            Ok(b) => {
                if best.as_ref().is_none_or(|x| b.value > x.value) {
                    best = Some(b.clone());
                }
                routes.push(RouteOutcome {
                    route,
                    bound: Some(b),
                    skipped: None,
                });
            }
            Err(err) if matches!(err, Error::InvalidArgument(_)) || err.is_refusal() => {
                routes.push(RouteOutcome {
                    route,
                    bound: None,
                    skipped: Some(err.to_string()),
                });
            }
            Err(err) => return Err(err),
        }
    }
    Ok(LowerBoundReport {
        arity: e.arity(),
        epsilon,
        best,
        routes,
        note: "values are bounds up to an unspecified constant factor, reported with constant 1"
            .into(),
    })
}
