use serde_json::Value;
use subsparse_wasm::{deformation_curve, delta_curve, sparsify_demo};

fn call(f: fn(&str) -> String, config: &str) -> Value {
    serde_json::from_str(&f(config)).unwrap()
}

#[test]
fn sparsify_demo_lists_every_cut() {
    let v = call(sparsify_demo, r#"{"n": 8, "edges": 150, "method": "monotone"}"#);
    assert!(v.get("error").is_none(), "{v}");
    let cuts = v["cuts"].as_array().unwrap();
    assert_eq!(cuts.len(), 256);
    assert_eq!(cuts[0], serde_json::json!([0.0, 0.0]));
    let max = v["max_error"].as_f64().unwrap();
    let worst = cuts
        .iter()
        .map(|c| (c[0].as_f64().unwrap(), c[1].as_f64().unwrap()))
        .filter(|&(a, _)| a > 0.0)
        .map(|(a, b)| (b / a - 1.0).abs())
        .fold(0.0, f64::max);
    assert!((max - worst).abs() < 1e-12);
    assert!(v["output_edges"].as_u64().unwrap() <= 150);
}

#[test]
fn errors_come_back_as_json() {
    assert!(call(sparsify_demo, r#"{"n": 30}"#)["error"].is_string());
    assert!(call(sparsify_demo, r#"{"method": "magic"}"#)["error"].is_string());
    assert!(call(delta_curve, "not json")["error"].is_string());
    assert!(call(delta_curve, r#"{"func": "product", "arity": 6}"#).get("error").is_none());
}

#[test]
fn deformation_tracks_its_expectation() {
    let v = call(deformation_curve, r#"{"arity": 64, "k": 8, "piece_budget": 20000}"#);
    assert!(v.get("error").is_none(), "{v}");
    let curve = v["curve"].as_array().unwrap();
    assert_eq!(curve.len(), 65);
    for row in curve {
        let exact = row["exact"].as_f64().unwrap();
        let expected = row["expected"].as_f64().unwrap();
        let drawn = row["drawn"].as_f64().unwrap();
        assert!(expected <= exact + 1e-9);
        assert!((drawn - expected).abs() <= 0.1 * exact.max(1.0), "{row}");
    }
    assert_eq!(curve[0]["drawn"], 0.0);
}

#[test]
fn delta_of_a_power_is_flat() {
    let v = call(delta_curve, r#"{"func": "polynomial:0.5", "arity": 20}"#);
    let want = 1.0 - 2f64.powf(-0.5);
    for row in v["curve"].as_array().unwrap() {
        assert!((row["delta_bar"].as_f64().unwrap() - want).abs() < 1e-12);
    }
}
