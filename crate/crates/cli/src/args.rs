use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use subsparse::rng::DEFAULT_SEED;

#[derive(Parser, Debug)]
#[command(name = "subsparse", version, about = "Sparsify, deform and analyze submodular hypergraphs")]
pub struct Cli {
    /// Print progress to standard error.
    #[arg(short, long, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "subcommand")]
pub enum Command {
    /// Write a seeded random instance or lower-bound family.
    Generate(GenerateArgs),
    /// Importance-sample a hypergraph into a reweighted subgraph.
    Sparsify(SparsifyArgs),
    /// Split additive hyperedges into low-support pieces.
    Deform(DeformArgs),
    /// Encode an additive hypergraph, optionally after the succinct pipeline.
    Encode(EncodeArgs),
    /// Turn an encoding back into a JSON hypergraph.
    Decode(DecodeArgs),
    /// Compare the cuts of two hypergraphs.
    Verify(VerifyArgs),
    /// Per-edge importances.
    Importance(ImportanceArgs),
    /// Clique weights and edge strengths of the auxiliary graph.
    Strengths(StrengthsArgs),
    /// Structural statistics of one splitting function.
    Analyze(AnalyzeArgs),
    /// Lower-bound families and their cut-query decoders.
    Lowerbound(LowerboundArgs),
    /// Shrink the ground set of a coverage function.
    CoverageCompress(CoverageArgs),
}

fn epsilon(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x > 0.0 && x < 1.0 {
        Ok(x)
    } else {
        Err(format!("epsilon must lie in (0, 1), got {x}"))
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(format!("expected a positive number, got {x}"))
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum GenKind {
    RandomSubmodular,
    Monotone,
    Cardinality,
    Additive,
    Coverage,
    HadamardFamily,
    DirectedFamily,
}

#[derive(Args, Debug, Serialize)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    pub kind: GenKind,
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    #[arg(long, default_value_t = 20)]
    pub edges: usize,
    #[arg(long, default_value_t = 2)]
    pub min_arity: usize,
    #[arg(long, default_value_t = 4)]
    pub max_arity: usize,
    /// `K` of additive edges.
    #[arg(long, default_value_t = 2.0, value_parser = positive)]
    pub k: f64,
    /// Symmetric cardinality tables.
    #[arg(long)]
    pub symmetric: bool,
    /// Ground elements of a coverage instance.
    #[arg(long, default_value_t = 100)]
    pub ground: usize,
    #[arg(long, default_value_t = 0.3)]
    pub density: f64,
    /// Family parameter (directed family).
    #[arg(long, default_value_t = 0.0625, value_parser = epsilon)]
    pub epsilon: f64,
    /// Template of the Hadamard family, as in `analyze --fn`.
    #[arg(long, default_value = "additive:2")]
    pub template: String,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Where to write the ground truth of a family.
    #[arg(long)]
    pub meta: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum MethodArg {
    General,
    Monotone,
    Spread,
}

#[derive(Args, Debug, Serialize)]
pub struct SparsifyArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::General)]
    pub method: MethodArg,
    #[arg(long, value_parser = epsilon)]
    pub epsilon: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// `c` in `M = c ε⁻² n` (general and monotone).
    #[arg(long, default_value_t = 1.0, value_parser = positive)]
    pub oversample: f64,
    /// `t` in `ρ = ε⁻² t μ γ² ln n` (spread).
    #[arg(long, default_value_t = subsparse::sparsify::spread::SpreadConfig::DEFAULT_T, value_parser = positive)]
    pub t: f64,
    /// Fill in brute-force importances when `n` is at most this.
    #[arg(long, default_value_t = 0)]
    pub sigma_up_to: usize,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct DeformKnobs {
    #[arg(long, default_value_t = subsparse::deform::DeformConfig::DEFAULT_Q, value_parser = positive)]
    pub q: f64,
    #[arg(long, default_value_t = subsparse::deform::DeformConfig::DEFAULT_C, value_parser = positive)]
    pub c: f64,
    /// Deform edges that are small enough to keep.
    #[arg(long)]
    pub force: bool,
    /// Cap on pieces per edge. Results past the cap are Monte Carlo estimates.
    #[arg(long)]
    pub piece_budget: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
pub struct DeformArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_parser = epsilon)]
    pub epsilon: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub knobs: DeformKnobs,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct EncodeArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Deform and spread-sparsify before encoding.
    #[arg(long)]
    pub pipeline: bool,
    #[arg(long, default_value_t = 0.5, value_parser = epsilon)]
    pub epsilon: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = subsparse::sparsify::spread::SpreadConfig::DEFAULT_T, value_parser = positive)]
    pub t: f64,
    #[command(flatten)]
    pub knobs: DeformKnobs,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct DecodeArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub against: PathBuf,
    #[arg(long, value_parser = epsilon)]
    pub epsilon: f64,
    /// Check every cut (the default).
    #[arg(long, conflicts_with = "samples")]
    pub exhaustive: bool,
    /// Check this many random cuts plus singletons and their complements.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Largest `n` checked exhaustively.
    #[arg(long, default_value_t = subsparse::analysis::verify::EXHAUSTIVE_LIMIT)]
    pub limit: usize,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct ImportanceArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::General)]
    pub method: MethodArg,
    /// Also compute `σ_e` by brute force (needs `n ≤ threshold`).
    #[arg(long)]
    pub sigma: bool,
    #[arg(long, default_value_t = subsparse::EXHAUSTIVE_THRESHOLD)]
    pub threshold: usize,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct StrengthsArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub gamma: u32,
    #[arg(long, default_value_t = subsparse::EXHAUSTIVE_THRESHOLD)]
    pub threshold: usize,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

/// A splitting function, either edge `--edge` of `--in` or `--fn` on
/// `--arity` vertices.
#[derive(Args, Debug, Serialize)]
pub struct EdgeSource {
    #[arg(long = "in", requires = "edge", conflicts_with = "func")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub edge: Option<usize>,
    /// `additive:K`, `additive-sym:K`, `polynomial:B`, `log`, `all-or-nothing`,
    /// `small-side`, `product`, or a JSON splitting function.
    #[arg(long = "fn", requires = "arity")]
    pub func: Option<String>,
    #[arg(long)]
    pub arity: Option<usize>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "analysis")]
pub enum Analysis {
    /// `δ_t` statistics for one `t`.
    Delta {
        #[command(flatten)]
        source: EdgeSource,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        delta_hat: Option<f64>,
        #[arg(long, default_value_t = subsparse::analysis::delta::PAIR_BUDGET)]
        pair_budget: u64,
        #[arg(long, default_value_t = 200_000)]
        samples: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Increments of a count-based function and their first drop.
    Gradient {
        #[command(flatten)]
        source: EdgeSource,
    },
    /// Support-size lower bound over every applicable route.
    Bound {
        #[command(flatten)]
        source: EdgeSource,
        #[arg(long, value_parser = epsilon)]
        epsilon: f64,
        /// Restrict to one route (additive, uniform_delta, spread, unweighted).
        #[arg(long)]
        route: Option<String>,
    },
    /// Submodularity, monotonicity, spread and imbalance.
    Checks {
        #[command(flatten)]
        source: EdgeSource,
    },
}

#[derive(Args, Debug, Serialize)]
pub struct AnalyzeArgs {
    #[command(subcommand)]
    pub what: Analysis,
    #[arg(long, global = true, default_value_t = subsparse::EXHAUSTIVE_THRESHOLD)]
    pub threshold: usize,
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    Hadamard,
    Directed,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum SiblingArg {
    Removal,
    Swap,
    BalancedSwap,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "action")]
pub enum Lowerbound {
    /// Hadamard-code family for a count-based template.
    GenHadamard {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "additive:2")]
        template: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        meta: PathBuf,
    },
    /// Directed all-or-nothing family with random tails.
    GenDirected {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = epsilon)]
        epsilon: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        meta: PathBuf,
    },
    /// Family used to show that no sparsifier fits two members at once.
    GenDistinguish {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = epsilon)]
        epsilon: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        meta: PathBuf,
    },
    /// Recover the hidden bits of a family from the cuts of `--in`.
    Decode {
        #[arg(long, value_enum)]
        family: FamilyKind,
        #[arg(long)]
        meta: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        /// `--in` is a binary encoding rather than JSON.
        #[arg(long)]
        encoded: bool,
        #[arg(long, default_value_t = 0.1, value_parser = epsilon)]
        epsilon: f64,
    },
    /// Reweight every edge by an independent factor in `[1 − ε, 1 + ε]`.
    Reweight {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_parser = epsilon)]
        epsilon: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Build a sibling of a distinguish-family member and look for a
    /// separating cut.
    Distinguish {
        #[arg(long)]
        meta: PathBuf,
        #[arg(long, value_enum, default_value_t = SiblingArg::Removal)]
        sibling: SiblingArg,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Args, Debug, Serialize)]
pub struct LowerboundArgs {
    #[command(subcommand)]
    pub action: Lowerbound,
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct CoverageArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_parser = epsilon)]
    pub epsilon: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = subsparse::sparsify::spread::SpreadConfig::DEFAULT_T, value_parser = positive)]
    pub t: f64,
    #[arg(long)]
    pub report: Option<PathBuf>,
}
