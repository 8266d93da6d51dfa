use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_subsparse"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

struct Scratch(PathBuf);

impl std::ops::Deref for Scratch {
    type Target = Path;
    fn deref(&self) -> &Path {
        &self.0
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        std::fs::remove_dir_all(&self.0).ok();
    }
}

fn scratch(name: &str) -> Scratch {
    let d = std::env::temp_dir().join(format!("subsparse-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    Scratch(d)
}

#[test]
fn usage_errors_exit_one() {
    let d = scratch("usage");
    assert_eq!(code(&run(&d, &["sparsify", "--bogus"])), 1);
    assert_eq!(code(&run(&d, &["sparsify", "--in", "x", "--out", "y", "--epsilon", "2"])), 1);
    assert_eq!(code(&run(&d, &["sparsify", "--in", "missing.json", "--out", "y", "--epsilon", "0.5"])), 1);
    std::fs::write(d.0.join("junk.json"), "{not json").unwrap();
    let o = run(&d, &["verify", "--in", "junk.json", "--against", "junk.json", "--epsilon", "0.5"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("junk.json"));
    assert_eq!(code(&run(&d, &["--help"])), 0);
}

#[test]
fn sparsify_then_verify() {
    let d = scratch("roundtrip");
    let gen = ["generate", "monotone", "--n", "10", "--edges", "300", "--max-arity", "5", "--seed", "4", "--out", "h.json"];
    assert_eq!(code(&run(&d, &gen)), 0);
    let sp = run(&d, &[
        "sparsify", "--in", "h.json", "--out", "s.json", "--method", "monotone", "--epsilon", "0.5",
        "--oversample", "0.5", "--seed", "4", "--report", "r.json",
    ]);
    assert_eq!(code(&sp), 0, "{}", String::from_utf8_lossy(&sp.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.0.join("r.json")).unwrap()).unwrap();
    assert_eq!(report["config"]["subcommand"], "sparsify");
    assert_eq!(report["config"]["method"], "monotone");

    let ok = run(&d, &["verify", "--in", "h.json", "--against", "s.json", "--epsilon", "0.5"]);
    assert_eq!(code(&ok), 0);
    let v: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["result"]["pass"], true);
    assert_eq!(v["result"]["cuts_tested"], 1024);

    // At a tolerance the sample cannot meet, verification reports a witness.
    let bad = run(&d, &["verify", "--in", "h.json", "--against", "s.json", "--epsilon", "0.001"]);
    assert_eq!(code(&bad), 2);
    assert!(String::from_utf8_lossy(&bad.stderr).contains("cut ["));
}

#[test]
fn fixed_seed_gives_identical_bytes() {
    let d = scratch("determinism");
    assert_eq!(code(&run(&d, &["generate", "cardinality", "--n", "9", "--edges", "60", "--out", "h.json"])), 0);
    for out in ["a.json", "b.json"] {
        let o = run(&d, &["sparsify", "--in", "h.json", "--out", out, "--epsilon", "0.5", "--oversample", "0.2", "--seed", "11"]);
        assert_eq!(code(&o), 0);
    }
    for (threads, out) in [("1", "c.json"), ("4", "d.json")] {
        let o = bin()
            .current_dir(&d.0)
            .env("SUBSPARSE_THREADS", threads)
            .args(["sparsify", "--in", "h.json", "--out", out, "--method", "spread", "--epsilon", "0.5", "--t", "0.3", "--seed", "11"])
            .output()
            .unwrap();
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let read = |f: &str| std::fs::read(d.0.join(f)).unwrap();
    assert_eq!(read("a.json"), read("b.json"));
    assert_eq!(read("c.json"), read("d.json"));
}

#[test]
fn refusals_exit_three() {
    let d = scratch("refusal");
    let gen = ["generate", "random-submodular", "--n", "20", "--edges", "10", "--out", "h.json"];
    assert_eq!(code(&run(&d, &gen)), 0);
    // Brute-force importances need n at most the threshold.
    let o = run(&d, &["importance", "--in", "h.json", "--sigma", "--threshold", "12"]);
    assert_eq!(code(&o), 3);
    let o = run(&d, &["sparsify", "--in", "h.json", "--out", "s.json", "--method", "monotone", "--epsilon", "0.5"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn encode_decode_and_lower_bound_families() {
    let d = scratch("families");
    assert_eq!(code(&run(&d, &["generate", "additive", "--n", "16", "--edges", "50", "--max-arity", "6", "--k", "3", "--out", "a.json"])), 0);
    assert_eq!(code(&run(&d, &["encode", "--in", "a.json", "--out", "a.bin"])), 0);
    assert_eq!(code(&run(&d, &["decode", "--in", "a.bin", "--out", "b.json"])), 0);
    assert_eq!(code(&run(&d, &["verify", "--in", "a.json", "--against", "b.json", "--epsilon", "0.000001"])), 0);

    let gen = ["lowerbound", "gen-hadamard", "--n", "48", "--out", "f.json", "--meta", "m.json"];
    assert_eq!(code(&run(&d, &gen)), 0);
    assert_eq!(code(&run(&d, &["lowerbound", "reweight", "--in", "f.json", "--out", "g.json", "--epsilon", "0.1"])), 0);
    assert_eq!(code(&run(&d, &["encode", "--in", "g.json", "--out", "g.bin"])), 0);
    let o = run(&d, &["lowerbound", "decode", "--family", "hadamard", "--meta", "m.json", "--in", "g.bin", "--encoded"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["matches_ground_truth"], true);

    let gen = ["lowerbound", "gen-directed", "--n", "24", "--epsilon", "0.0625", "--out", "df.json", "--meta", "dm.json"];
    assert_eq!(code(&run(&d, &gen)), 0);
    let o = run(&d, &["lowerbound", "decode", "--family", "directed", "--meta", "dm.json", "--in", "df.json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["matches_ground_truth"], true);
}

#[test]
fn analysis_reports() {
    let d = scratch("analyze");
    let o = run(&d, &["analyze", "gradient", "--fn", "polynomial:0.5", "--arity", "12"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["non_increasing"], true);
    assert_eq!(v["result"]["series"]["deltas"].as_array().unwrap().len(), 12);

    let o = run(&d, &["analyze", "bound", "--fn", "additive:4", "--arity", "64", "--epsilon", "0.1", "--route", "additive"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(code(&run(&d, &["analyze", "gradient", "--fn", "nonsense", "--arity", "4"])), 3);
}
