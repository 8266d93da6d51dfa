//! Support-size lower bounds, lower-bound hypergraph families with
//! cut-query decoders, and sparsifier verification.

use rand::Rng;

use crate::{rng, SubmodularHypergraph};

pub mod delta;
pub mod directed;
pub mod distinguish;
pub mod hadamard;
pub mod oracle;
pub mod verify;

pub use delta::{delta_stats, support_lower_bound, DeltaOptions, DeltaStats, GradientSeries, Route};
pub use directed::{decode_directed, gen_directed_family, DirectedFamily, DirectedMeta};
pub use distinguish::{check_distinguish, gen_distinguish_family, DistinguishFamily, SiblingKind};
pub use hadamard::{decode_hadamard, gen_hadamard_family, HadamardFamily, HadamardMeta};
pub use oracle::{CutOracle, EncodedOracle};
pub use verify::{verify, verify_hypergraphs, VerificationReport, VerifyMode};

/// Multiplies every edge weight by an independent uniform factor in
/// `[1 − ε, 1 + ε]`, drawn from stream `(seed, edge index)`.
pub fn reweight(h: &SubmodularHypergraph, epsilon: f64, seed: u64) -> SubmodularHypergraph {
    let edges = h
        .edges
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let f: f64 = rng::stream(seed, i as u64).gen_range(1.0 - epsilon..=1.0 + epsilon);
            e.with_scale(e.scale * f)
        })
        .collect();
    SubmodularHypergraph {
        n: h.n,
        edges,
        labels: h.labels.clone(),
    }
}
