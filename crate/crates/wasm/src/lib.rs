//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every export takes a JSON configuration and returns JSON. Failures come
//! back as `{"error": "..."}` so the page never has to catch exceptions.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use subsparse::analysis::delta::{delta_bar_from_table, disjoint_pair_fraction};
use subsparse::analysis::{verify, GradientSeries, VerifyMode};
use subsparse::checks::count_table;
use subsparse::deform::{deform_additive, expected_piece_value, DeformConfig};
use subsparse::generate::{self, RandomSpec};
use subsparse::math::LnFactorial;
use subsparse::sparsify::general::SampleConfig;
use subsparse::sparsify::spread::SpreadConfig;
use subsparse::sparsify::{sparsify_general, sparsify_monotone, sparsify_spread};
use subsparse::{Error, Hyperedge, SplittingFn};
use wasm_bindgen::prelude::wasm_bindgen;

/// Largest `n` the demo enumerates every cut for.
pub const MAX_DEMO_N: usize = 12;

fn respond(r: Result<Value, Error>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

fn parse<T: for<'a> Deserialize<'a>>(config: &str) -> Result<T, Error> {
    serde_json::from_str(config).map_err(|e| Error::InvalidArgument(format!("bad config: {e}")))
}

#[derive(Deserialize, Serialize)]
#[serde(default)]
pub struct SparsifyDemo {
    pub n: usize,
    pub edges: usize,
    pub max_arity: usize,
    pub epsilon: f64,
    /// `general`, `monotone` or `spread`.
    pub method: String,
    pub seed: u64,
    pub oversample: f64,
    pub t: f64,
}

impl Default for SparsifyDemo {
    fn default() -> Self {
        Self {
            n: 10,
            edges: 300,
            max_arity: 5,
            epsilon: 0.5,
            method: "monotone".into(),
            seed: 1,
            oversample: 0.5,
            t: 0.3,
        }
    }
}

/// Generates an instance, sparsifies it and compares every cut.
///
/// Returns the sizes, the verification summary and `cuts`, a list of
/// `[exact, approx]` pairs indexed by cut mask.
#[wasm_bindgen]
pub fn sparsify_demo(config: &str) -> String {
    respond(parse(config).and_then(|c: SparsifyDemo| run_sparsify(&c)))
}

fn run_sparsify(c: &SparsifyDemo) -> Result<Value, Error> {
    if c.n > MAX_DEMO_N {
        return Err(Error::InvalidArgument(format!("the demo enumerates cuts only up to n = {MAX_DEMO_N}")));
    }
    let spec = RandomSpec::new(c.n, c.edges, c.max_arity.min(c.n));
    let sample = SampleConfig::new(c.epsilon, c.seed, c.oversample);
    let (h, s) = match c.method.as_str() {
        "general" => {
            let h = generate::random_submodular(&spec, c.seed)?;
            let s = sparsify_general(&h, &sample)?.0;
            (h, s)
        }
        "monotone" => {
            let h = generate::random_monotone(&spec, c.seed)?;
            let s = sparsify_monotone(&h, &sample)?.0;
            (h, s)
        }
        "spread" => {
            let h = generate::cardinality(&spec, false, c.seed)?;
            let s = sparsify_spread(&h, &SpreadConfig::new(c.epsilon, c.seed).with_t(c.t))?.0;
            (h, s)
        }
        m => return Err(Error::InvalidArgument(format!("unknown method {m:?}"))),
    };
    let report = verify(&h, &s, c.epsilon, VerifyMode::exhaustive())?;
    let cuts: Vec<[f64; 2]> = (0..1u64 << c.n)
        .map(|m| [h.cut_value_mask(m), s.cut_value_mask(m)])
        .collect();
    Ok(json!({
        "input_edges": h.num_edges(),
        "output_edges": s.num_edges(),
        "max_error": report.max_error,
        "mean_error": report.mean_error,
        "pass": report.pass,
        "cuts": cuts,
    }))
}

#[derive(Deserialize, Serialize)]
#[serde(default)]
pub struct DeformDemo {
    pub arity: usize,
    pub k: f64,
    pub symmetric: bool,
    pub epsilon: f64,
    pub c: f64,
    pub q: f64,
    pub piece_budget: usize,
    pub seed: u64,
}

impl Default for DeformDemo {
    fn default() -> Self {
        Self {
            arity: 256,
            k: 32.0,
            symmetric: false,
            epsilon: 0.9,
            c: 0.05,
            q: 1.0,
            piece_budget: 4096,
            seed: 1,
        }
    }
}

/// Deforms one additive edge and evaluates it on nested prefixes.
///
/// For each `s` the result holds the exact value, the expectation over the
/// piece distribution, and the value of the drawn pieces on `{0..s}`.
#[wasm_bindgen]
pub fn deformation_curve(config: &str) -> String {
    respond(parse(config).and_then(|c: DeformDemo| run_deform(&c)))
}

fn run_deform(c: &DeformDemo) -> Result<Value, Error> {
    let f = if c.symmetric {
        SplittingFn::additive_symmetric(c.k)
    } else {
        SplittingFn::additive(c.k)
    };
    let e = Hyperedge::unit((0..c.arity as u32).collect(), f.clone())?;
    let cfg = DeformConfig {
        c: c.c,
        q: c.q,
        force: true,
        piece_budget: Some(c.piece_budget),
        ..DeformConfig::new(c.epsilon, c.seed)
    };
    let r = deform_additive(&e, &cfg)?;
    let lf = LnFactorial::new(c.arity);
    let words = c.arity.div_ceil(64);
    let mut rows = Vec::with_capacity(c.arity + 1);
    let mut prefix = vec![0u64; words];
    for s in 0..=c.arity {
        if s > 0 {
            prefix[(s - 1) / 64] |= 1 << ((s - 1) % 64);
        }
        let exact = e.eval_count(s).expect("additive edges are count based");
        let expected = if r.identity {
            exact
        } else {
            expected_piece_value(c.arity, s, c.k, r.p, c.symmetric, &lf)
        };
        rows.push(json!({ "s": s, "exact": exact, "expected": expected, "drawn": r.value(&prefix) }));
    }
    Ok(json!({
        "p": r.p,
        "pieces": r.n_pieces,
        "pieces_target": r.n_pieces_target,
        "capped": r.capped,
        "identity": r.identity,
        "max_support": r.max_support,
        "support_bound": r.support_bound,
        "curve": rows,
    }))
}

#[derive(Deserialize, Serialize)]
#[serde(default)]
pub struct DeltaDemo {
    /// Splitting function spec such as `polynomial:0.5` or `additive:4`.
    pub func: String,
    pub arity: usize,
}

impl Default for DeltaDemo {
    fn default() -> Self {
        Self {
            func: "polynomial:0.5".into(),
            arity: 40,
        }
    }
}

/// `δ̄_t` for every `t ≤ |e|/2` of a count-based function, with the fraction
/// of disjoint `t`-subset pairs and the increment series.
#[wasm_bindgen]
pub fn delta_curve(config: &str) -> String {
    respond(parse(config).and_then(|c: DeltaDemo| run_delta(&c)))
}

fn run_delta(c: &DeltaDemo) -> Result<Value, Error> {
    let f = generate::from_spec(&c.func, c.arity)?;
    let e = Hyperedge::unit((0..c.arity as u32).collect(), f)?;
    let table = count_table(&e)
        .ok_or_else(|| Error::InvalidArgument("the demo only handles count-based functions".into()))?;
    let rows: Vec<Value> = (1..=c.arity / 2)
        .map(|t| {
            json!({
                "t": t,
                "delta_bar": delta_bar_from_table(&table, t),
                "disjoint_fraction": disjoint_pair_fraction(c.arity, t),
            })
        })
        .collect();
    let g = GradientSeries::from_table(&table);
    Ok(json!({ "table": table, "gradient": g, "curve": rows }))
}
