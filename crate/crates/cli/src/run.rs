use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use subsparse::analysis::delta::{route_bound, Route};
use subsparse::analysis::{
    self, check_distinguish, decode_directed, decode_hadamard, delta_stats, gen_directed_family,
    gen_distinguish_family, gen_hadamard_family, support_lower_bound, verify, CutOracle,
    DeltaOptions, DirectedMeta, DistinguishFamily, EncodedOracle, GradientSeries, HadamardMeta,
    SiblingKind, VerifyMode,
};
use subsparse::checks::{check_monotone, check_submodular, check_symmetric, imbalance, spread_stats};
use subsparse::deform::{deform_additive, succinct_pipeline, DeformConfig};
use subsparse::generate::{self, RandomSpec};
use subsparse::sparsify::general::SampleConfig;
use subsparse::sparsify::spread::{build_auxiliary, coverage_compress, CoverageInstance, SpreadConfig};
use subsparse::sparsify::{self, rho_general, rho_monotone, rho_prime};
use subsparse::{encode, io, sfm, Error, Hyperedge, SplittingFn, SubmodularHypergraph};

use crate::args::*;

pub enum Failure {
    Core(Error),
    /// An error while reading the named file.
    Input(PathBuf, Error),
    /// The verification ran and found a cut outside the tolerance.
    Verify(String),
}

fn load(path: &Path) -> Result<SubmodularHypergraph, Failure> {
    io::load(path).map_err(|e| Failure::Input(path.to_path_buf(), e))
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Core(Error::Io(e))
    }
}

type Out = Result<(), Failure>;

fn to_json<T: Serialize + ?Sized>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("report serialization")
}

fn write_json<T: Serialize + ?Sized>(path: &Path, x: &T) -> Out {
    let mut s = to_json(x);
    s.push('\n');
    std::fs::write(path, s)?;
    Ok(())
}

/// Prints a line, treating a closed pipe as success.
fn print(s: &str) -> Out {
    use std::io::Write;
    match writeln!(std::io::stdout().lock(), "{s}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| {
        Failure::Core(Error::Format {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    })
}

/// Writes `{config, result}` to `report`, or to standard output when
/// `always` is set and no path is given.
fn emit(cmd: &Command, report: Option<&PathBuf>, always: bool, result: &impl Serialize) -> Out {
    let doc = json!({
        "tool": concat!("subsparse ", env!("CARGO_PKG_VERSION")),
        "config": cmd,
        "result": result,
    });
    match report {
        Some(p) => write_json(p, &doc),
        None if always => print(&to_json(&doc)),
        None => Ok(()),
    }
}

fn edge_from(src: &EdgeSource) -> Result<Hyperedge, Failure> {
    match (&src.input, src.edge, &src.func, src.arity) {
        (Some(path), Some(i), _, _) => {
            let h = load(path)?;
            h.edges.get(i).cloned().ok_or_else(|| {
                Error::InvalidArgument(format!("edge {i} out of range ({} edges)", h.num_edges())).into()
            })
        }
        (None, _, Some(f), Some(k)) => Ok(Hyperedge::unit((0..k as u32).collect(), generate::from_spec(f, k)?)?),
        _ => Err(Error::InvalidArgument("give either --in with --edge, or --fn with --arity".into()).into()),
    }
}

fn sibling_kind(s: SiblingArg) -> SiblingKind {
    match s {
        SiblingArg::Removal => SiblingKind::Removal,
        SiblingArg::Swap => SiblingKind::Swap,
        SiblingArg::BalancedSwap => SiblingKind::BalancedSwap,
    }
}

pub fn run(cmd: &Command, verbose: bool) -> Out {
    let say = |msg: String| {
        if verbose {
            eprintln!("{msg}");
        }
    };
    match cmd {
        Command::Generate(a) => generate(cmd, a),
        Command::Sparsify(a) => {
            let h = load(&a.input)?;
            say(format!("loaded {} edges on {} vertices", h.num_edges(), h.n));
            let (out, result) = match a.method {
                MethodArg::General | MethodArg::Monotone => {
                    let cfg = SampleConfig {
                        sigma_up_to: a.sigma_up_to,
                        ..SampleConfig::new(a.epsilon, a.seed, a.oversample)
                    };
                    let (out, rep) = if a.method == MethodArg::General {
                        sparsify::sparsify_general(&h, &cfg)?
                    } else {
                        sparsify::sparsify_monotone(&h, &cfg)?
                    };
                    (out, serde_json::to_value(rep).unwrap())
                }
                MethodArg::Spread => {
                    let cfg = SpreadConfig::new(a.epsilon, a.seed).with_t(a.t);
                    let (out, rep) = sparsify::sparsify_spread(&h, &cfg)?;
                    (out, serde_json::to_value(rep).unwrap())
                }
            };
            io::save(&out, &a.out)?;
            print(&format!("kept {} of {} edges", out.num_edges(), h.num_edges()))?;
            emit(cmd, a.report.as_ref(), false, &result)
        }
        Command::Deform(a) => {
            let h = load(&a.input)?;
            let cfg = deform_config(a.epsilon, a.seed, &a.knobs);
            let mut edges = Vec::new();
            let mut rows = Vec::new();
            let mut capped = Vec::new();
            for (i, e) in h.edges.iter().enumerate() {
                if !matches!(e.func, SplittingFn::Additive { .. }) {
                    edges.push(e.clone());
                    rows.push(Value::Null);
                    continue;
                }
                let c = DeformConfig {
                    seed: subsparse::rng::derive(a.seed, i as u64),
                    ..cfg
                };
                let r = deform_additive(e, &c)?;
                if r.capped {
                    capped.push((i, r.n_pieces_target));
                }
                edges.extend(r.to_hyperedges()?);
                rows.push(serde_json::to_value(&r).unwrap());
            }
            if let Some(&(_, worst)) = capped.iter().max_by(|a, b| a.1.total_cmp(&b.1)) {
                eprintln!(
                    "WARNING: {} of {} edges hit the piece budget (largest request {worst:.3e} pieces).\n\
                     WARNING: those edges are Monte Carlo estimates and carry no deformation guarantee.",
                    capped.len(),
                    h.num_edges()
                );
                say(format!("capped edges: {:?}", capped.iter().map(|c| c.0).collect::<Vec<_>>()));
            }
            let out = SubmodularHypergraph::new(h.n, edges)?;
            io::save(&out, &a.out)?;
            print(&format!("{} edges became {}", h.num_edges(), out.num_edges()))?;
            emit(cmd, a.report.as_ref(), false, &json!({ "edges": rows, "output_edges": out.num_edges() }))
        }
        Command::Encode(a) => {
            let h = load(&a.input)?;
            let (enc, result) = if a.pipeline {
                let d = deform_config(a.epsilon, a.seed, &a.knobs);
                let s = SpreadConfig::new(a.epsilon, a.seed).with_t(a.t);
                let (_, enc, rep) = succinct_pipeline(&h, &d, &s)?;
                (enc, serde_json::to_value(rep).unwrap())
            } else {
                let enc = encode::encode(&h)?;
                let r = json!({ "edges": h.num_edges(), "bit_count": enc.bit_count });
                (enc, r)
            };
            std::fs::write(&a.out, &enc.bytes)?;
            print(&format!("{} bits", enc.bit_count))?;
            emit(cmd, a.report.as_ref(), false, &result)
        }
        Command::Decode(a) => {
            let bytes = std::fs::read(&a.input)?;
            let h = encode::decode(&bytes)?;
            io::save(&h, &a.out)?;
            print(&format!("{} edges on {} vertices", h.num_edges(), h.n))?;
            Ok(())
        }
        Command::Verify(a) => {
            let h = load(&a.input)?;
            let h2 = load(&a.against)?;
            let mode = match a.samples {
                Some(count) => VerifyMode::Sampled { count, seed: a.seed },
                None => VerifyMode::Exhaustive { limit: a.limit },
            };
            let rep = verify(&h, &h2, a.epsilon, mode)?;
            emit(cmd, a.report.as_ref(), true, &rep)?;
            if rep.pass {
                Ok(())
            } else {
                let w = rep.worst.as_ref().expect("a failing run has a witness");
                Err(Failure::Verify(format!(
                    "cut {:?}: {} vs {} (relative error {:.6} > {})",
                    w.set, w.cut, w.cut_approx, w.error, a.epsilon
                )))
            }
        }
        Command::Importance(a) => {
            let h = load(&a.input)?;
            let rho = match a.method {
                MethodArg::Monotone => rho_monotone(&h),
                _ => rho_general(&h)?,
            };
            let sigma = if a.sigma {
                Some(sfm::sigma_all(&h, a.threshold)?)
            } else {
                None
            };
            let result = json!({
                "method": a.method,
                "rho": rho,
                "rho_sum": rho.iter().sum::<f64>(),
                "rho_prime": rho_prime(&h),
                "sigma": sigma,
            });
            emit(cmd, a.report.as_ref(), true, &result)
        }
        Command::Strengths(a) => {
            let h = load(&a.input)?;
            let map = build_auxiliary(&h, a.gamma, a.threshold)?;
            emit(cmd, a.report.as_ref(), true, &map)
        }
        Command::Analyze(a) => analyze(cmd, a),
        Command::Lowerbound(a) => lowerbound(cmd, a),
        Command::CoverageCompress(a) => {
            let f: CoverageInstance = read_json(&a.input)?;
            let (g, rep) = coverage_compress(&f, &SpreadConfig::new(a.epsilon, a.seed).with_t(a.t))?;
            write_json(&a.out, &g)?;
            print(&format!("ground set {} → {}", rep.ground_in, rep.ground_out))?;
            emit(cmd, a.report.as_ref(), false, &rep)
        }
    }
}

fn deform_config(epsilon: f64, seed: u64, k: &DeformKnobs) -> DeformConfig {
    DeformConfig {
        q: k.q,
        c: k.c,
        force: k.force,
        piece_budget: k.piece_budget,
        ..DeformConfig::new(epsilon, seed)
    }
}

fn generate(cmd: &Command, a: &GenerateArgs) -> Out {
    let spec = RandomSpec {
        min_arity: a.min_arity,
        ..RandomSpec::new(a.n, a.edges, a.max_arity)
    };
    let mut meta: Option<Value> = None;
    match a.kind {
        GenKind::Coverage => {
            let f = generate::coverage_instance(a.n, a.ground, a.density, a.seed)?;
            write_json(&a.out, &f)?;
            return emit(cmd, None, false, &());
        }
        GenKind::RandomSubmodular => io::save(&generate::random_submodular(&spec, a.seed)?, &a.out)?,
        GenKind::Monotone => io::save(&generate::random_monotone(&spec, a.seed)?, &a.out)?,
        GenKind::Cardinality => io::save(&generate::cardinality(&spec, a.symmetric, a.seed)?, &a.out)?,
        GenKind::Additive => io::save(&generate::additive_family(&spec, a.k, a.seed)?, &a.out)?,
        GenKind::HadamardFamily => {
            let f = gen_hadamard_family(a.n, &generate::from_spec(&a.template, a.n)?, a.seed)?;
            io::save(&f.hypergraph, &a.out)?;
            meta = Some(serde_json::to_value(&f).unwrap());
        }
        GenKind::DirectedFamily => {
            let f = gen_directed_family(a.n, a.epsilon, a.seed)?;
            io::save(&f.hypergraph, &a.out)?;
            meta = Some(serde_json::to_value(&f).unwrap());
        }
    }
    if let (Some(path), Some(m)) = (&a.meta, &meta) {
        write_json(path, m)?;
    }
    Ok(())
}

fn analyze(cmd: &Command, a: &AnalyzeArgs) -> Out {
    let thr = a.threshold;
    let result = match &a.what {
        Analysis::Delta {
            source,
            t,
            delta_hat,
            pair_budget,
            samples,
            seed,
        } => {
            let e = edge_from(source)?;
            let opts = DeltaOptions {
                delta_hat: *delta_hat,
                pair_budget: *pair_budget,
                samples: *samples,
                seed: *seed,
            };
            serde_json::to_value(delta_stats(&e, *t, &opts)?).unwrap()
        }
        Analysis::Gradient { source } => {
            let e = edge_from(source)?;
            let g = GradientSeries::of(&e)?;
            json!({ "non_increasing": g.is_non_increasing(), "series": g })
        }
        Analysis::Bound { source, epsilon, route } => {
            let e = edge_from(source)?;
            match route {
                Some(r) => {
                    let r: Route = r.parse()?;
                    serde_json::to_value(route_bound(&e, *epsilon, r, thr)?).unwrap()
                }
                None => serde_json::to_value(support_lower_bound(&e, *epsilon, thr)?).unwrap(),
            }
        }
        Analysis::Checks { source } => {
            let e = edge_from(source)?;
            let sub = check_submodular(&e, thr)?;
            let mono = check_monotone(&e, thr)?;
            json!({
                "kind": e.func.kind_name(),
                "arity": e.arity(),
                "submodular": sub.is_none(),
                "submodular_witness": sub,
                "monotone": mono.is_none(),
                "monotone_witness": mono,
                "symmetric": check_symmetric(&e, thr)?.is_none(),
                "spread": spread_stats(&e, thr)?,
                "imbalance": imbalance(&e, thr)?,
            })
        }
    };
    emit(cmd, a.report.as_ref(), true, &result)
}

fn field<T: serde::de::DeserializeOwned>(v: &Value, key: &str, path: &Path) -> Result<T, Failure> {
    v.get(key)
        .cloned()
        .ok_or_else(|| format!("missing field {key:?}"))
        .and_then(|x| serde_json::from_value(x).map_err(|e| e.to_string()))
        .map_err(|message| {
            Failure::Core(Error::Format {
                path: path.display().to_string(),
                message,
            })
        })
}

fn lowerbound(cmd: &Command, a: &LowerboundArgs) -> Out {
    let report = a.report.as_ref();
    match &a.action {
        Lowerbound::GenHadamard {
            n,
            template,
            seed,
            out,
            meta,
        } => {
            let f = gen_hadamard_family(*n, &generate::from_spec(template, *n)?, *seed)?;
            io::save(&f.hypergraph, out)?;
            write_json(meta, &f)?;
            print(&format!("{} edges of arity {}, d = {}", f.hypergraph.num_edges(), f.arity, f.meta.d))?;
            emit(cmd, report, false, &f.meta)
        }
        Lowerbound::GenDirected {
            n,
            epsilon,
            seed,
            out,
            meta,
        } => {
            let f = gen_directed_family(*n, *epsilon, *seed)?;
            io::save(&f.hypergraph, out)?;
            write_json(meta, &f)?;
            print(&format!("{} edges", f.hypergraph.num_edges()))?;
            emit(cmd, report, false, &json!({ "edges": f.hypergraph.num_edges() }))
        }
        Lowerbound::GenDistinguish {
            n,
            epsilon,
            seed,
            out,
            meta,
        } => {
            let f = gen_distinguish_family(*n, *epsilon, *seed)?;
            let h = f.hypergraph()?;
            io::save(&h, out)?;
            write_json(meta, &f)?;
            print(&format!("{} edges on {} vertices", h.num_edges(), h.n))?;
            emit(cmd, report, false, &json!({ "edges": h.num_edges() }))
        }
        Lowerbound::Decode {
            family,
            meta,
            input,
            encoded,
            epsilon,
        } => {
            let oracle: Box<dyn CutOracle> = if *encoded {
                let bytes = std::fs::read(input)?;
                let enc = subsparse::encode::EncodedSparsifier::from_bytes(bytes);
                Box::new(EncodedOracle::new(&enc)?)
            } else {
                Box::new(load(input)?)
            };
            let doc: Value = read_json(meta)?;
            let result = match family {
                FamilyKind::Hadamard => {
                    let m: HadamardMeta = field(&doc, "meta", meta)?;
                    let truth: Option<Vec<Vec<bool>>> = field(&doc, "b", meta).ok();
                    let d = decode_hadamard(oracle.as_ref(), &m, *epsilon)?;
                    json!({ "matches_ground_truth": truth.map(|t| t == d.b), "decoding": d })
                }
                FamilyKind::Directed => {
                    let m: DirectedMeta = field(&doc, "meta", meta)?;
                    let truth: Option<Vec<Vec<bool>>> = field(&doc, "tails", meta).ok();
                    let d = decode_directed(oracle.as_ref(), &m)?;
                    json!({ "matches_ground_truth": truth.map(|t| t == d.tails), "decoding": d })
                }
            };
            emit(cmd, report, true, &result)
        }
        Lowerbound::Reweight {
            input,
            out,
            epsilon,
            seed,
        } => {
            let h = load(input)?;
            io::save(&analysis::reweight(&h, *epsilon, *seed), out)?;
            Ok(())
        }
        Lowerbound::Distinguish { meta, sibling, seed } => {
            let f: DistinguishFamily = read_json(meta)?;
            let s = f.sibling(sibling_kind(*sibling), *seed)?;
            let check = check_distinguish(&f, &s)?;
            emit(cmd, report, true, &check)?;
            if check.separated {
                Ok(())
            } else {
                Err(Failure::Verify("no separating cut found".into()))
            }
        }
    }
}
