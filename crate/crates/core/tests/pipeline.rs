use subsparse::analysis::{
    decode_directed, decode_hadamard, gen_directed_family, gen_hadamard_family, reweight,
    verify, verify_hypergraphs, EncodedOracle, VerifyMode,
};
use subsparse::deform::{succinct_pipeline, DeformConfig};
use subsparse::encode::encode;
use subsparse::generate::{additive_family, random_monotone, RandomSpec};
use subsparse::io;
use subsparse::sparsify::general::SampleConfig;
use subsparse::sparsify::spread::SpreadConfig;
use subsparse::sparsify::sparsify_monotone;
use subsparse::{Error, SplittingFn};

#[test]
fn hadamard_bits_survive_encoding() {
    let fam = gen_hadamard_family(48, &SplittingFn::additive(2.0), 3).unwrap();
    let h2 = reweight(&fam.hypergraph, 0.1, 9);
    let oracle = EncodedOracle::new(&encode(&h2).unwrap()).unwrap();
    let out = decode_hadamard(&oracle, &fam.meta, 0.1).unwrap();
    assert_eq!(out.b, fam.b);
    assert!(out.queries > 0);
}

#[test]
fn hadamard_decoder_rejects_foreign_meta() {
    let a = gen_hadamard_family(48, &SplittingFn::additive(2.0), 1).unwrap();
    let b = gen_hadamard_family(24, &SplittingFn::additive(2.0), 1).unwrap();
    assert!(matches!(
        decode_hadamard(&a.hypergraph, &b.meta, 0.1),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn directed_decoder_notices_a_missing_edge() {
    let f = gen_directed_family(24, 1.0 / 16.0, 8).unwrap();
    let dropped = {
        let mut h = f.hypergraph.clone();
        h.edges.remove(5);
        h
    };
    // Removing an edge breaks the three-cut identity for its label.
    let out = decode_directed(&dropped, &f.meta);
    assert!(out.map(|d| d.tails != f.tails).unwrap_or(true));
}

#[test]
fn monotone_sparsifier_end_to_end_through_files() {
    let dir = std::env::temp_dir().join(format!("subsparse-pipeline-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let h = random_monotone(&RandomSpec::new(10, 120, 5), 2).unwrap();
    io::save(&h, dir.join("h.json")).unwrap();
    let h = io::load(dir.join("h.json")).unwrap();
    let (s, rep) = sparsify_monotone(&h, &SampleConfig::new(0.5, 2, 0.5)).unwrap();
    io::save(&s, dir.join("s.json")).unwrap();
    let s2 = io::load(dir.join("s.json")).unwrap();
    assert_eq!(s, s2);
    assert_eq!(rep.output_edges, s.num_edges());
    let v = verify_hypergraphs(&h, &s2, 0.5, VerifyMode::exhaustive()).unwrap();
    assert!(v.pass, "{v:?}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn succinct_output_matches_its_encoding() {
    let h = additive_family(&RandomSpec::new(16, 200, 6), 2.0, 4).unwrap();
    let (out, enc, rep) =
        succinct_pipeline(&h, &DeformConfig::new(0.5, 1), &SpreadConfig::new(0.5, 1).with_t(0.3)).unwrap();
    assert_eq!(rep.bit_count, enc.bit_count);
    let oracle = EncodedOracle::new(&enc).unwrap();
    let r = verify(&out, &oracle, 0.01, VerifyMode::Sampled { count: 300, seed: 1 }).unwrap();
    assert_eq!(r.max_error, 0.0);
}
