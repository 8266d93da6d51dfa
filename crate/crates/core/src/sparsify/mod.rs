//! Importance-sampling sparsifiers.
//!
//! All samplers share the same final step: edge `i` is kept independently
//! with probability `p_i`, drawn from the random stream `(seed, i)`, and a
//! kept edge has its scale multiplied by `1 / p_i`. The output keeps the
//! input edge order.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{par, rng, Error, Result, SubmodularHypergraph};

pub mod general;
pub mod spread;

pub use general::{
    rho_general, rho_monotone, rho_prime, sparsify_general, sparsify_monotone, ImportanceReport,
};
pub use spread::{build_auxiliary, coverage_compress, sparsify_spread, SpreadReport, StrengthMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    General,
    Monotone,
    Spread,
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "general" => Ok(Method::General),
            "monotone" => Ok(Method::Monotone),
            "spread" => Ok(Method::Spread),
            other => Err(Error::InvalidArgument(format!(
                "unknown method {other:?} (expected general, monotone or spread)"
            ))),
        }
    }
}

pub fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    Ok(())
}

pub(crate) fn check_positive(name: &str, x: f64) -> Result<()> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "{name} must be a positive number, got {x}"
        )));
    }
    Ok(())
}

/// Keeps edge `i` with probability `p[i]` and reweights it by `1 / p[i]`.
pub fn sample_edges(h: &SubmodularHypergraph, p: &[f64], seed: u64) -> (SubmodularHypergraph, Vec<bool>) {
    assert_eq!(p.len(), h.num_edges());
    let keep = par::map_range(h.num_edges(), |i| {
        let draw: f64 = rng::stream(seed, i as u64).gen();
        p[i] >= 1.0 || draw < p[i]
    });
    let edges = h
        .edges
        .iter()
        .zip(&keep)
        .zip(p)
        .filter(|((_, &k), _)| k)
        .map(|((e, _), &pi)| {
            let pi = pi.min(1.0);
            if pi >= 1.0 {
                e.clone()
            } else {
                e.with_scale(e.scale / pi)
            }
        })
        .collect();
    let out = SubmodularHypergraph {
        n: h.n,
        edges,
        labels: h.labels.clone(),
    };
    (out, keep)
}
