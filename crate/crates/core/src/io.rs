//! JSON file format for hypergraphs.
//!
//! ```json
//! {"version": 1, "n": 3, "labels": ["a", "b", "c"],
//!  "edges": [{"vertices": [0, "c"], "fn": {"kind": "all_or_nothing"}, "scale": 1.0}]}
//! ```
//!
//! `labels` is optional. When present, edge vertices may be given either as
//! ids or as label strings.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Hyperedge, Result, SplittingFn, SubmodularHypergraph};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Deserialize)]
#[serde(untagged)]
enum VertexRef {
    Id(u64),
    Label(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEdge {
    vertices: Vec<VertexRef>,
    #[serde(rename = "fn")]
    func: SplittingFn,
    #[serde(default)]
    scale: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    version: u32,
    n: usize,
    #[serde(default)]
    labels: Option<Vec<String>>,
    edges: Vec<RawEdge>,
}

#[derive(Serialize)]
struct OutFile<'a> {
    version: u32,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<&'a Vec<String>>,
    edges: &'a [Hyperedge],
}

fn field(path: String, message: impl Into<String>) -> Error {
    Error::Format {
        path,
        message: message.into(),
    }
}

/// Parses and validates a hypergraph document.
pub fn from_json_str(text: &str) -> Result<SubmodularHypergraph> {
    let raw: RawFile = serde_json::from_str(text)?;
    if raw.version != FORMAT_VERSION {
        return Err(field(
            "version".into(),
            format!("unsupported version {}, expected {FORMAT_VERSION}", raw.version),
        ));
    }
    let index: HashMap<&str, u32> = match &raw.labels {
        Some(l) => {
            if l.len() != raw.n {
                return Err(field(
                    "labels".into(),
                    format!("{} labels for n = {}", l.len(), raw.n),
                ));
            }
            let mut m = HashMap::new();
            for (i, s) in l.iter().enumerate() {
                if m.insert(s.as_str(), i as u32).is_some() {
                    return Err(field(format!("labels[{i}]"), format!("duplicate label {s:?}")));
                }
            }
            m
        }
        None => HashMap::new(),
    };

    let mut edges = Vec::with_capacity(raw.edges.len());
    for (i, e) in raw.edges.into_iter().enumerate() {
        let mut ids = Vec::with_capacity(e.vertices.len());
        for (j, v) in e.vertices.iter().enumerate() {
            let path = format!("edges[{i}].vertices[{j}]");
            let id = match v {
                VertexRef::Id(id) => *id,
                VertexRef::Label(s) => *index
                    .get(s.as_str())
                    .ok_or_else(|| field(path.clone(), format!("unknown label {s:?}")))?
                    as u64,
            };
            if id >= raw.n as u64 {
                return Err(field(path, format!("vertex {id} is outside [0, {})", raw.n)));
            }
            ids.push(id as u32);
        }
        if ids.windows(2).any(|w| w[0] >= w[1]) {
            return Err(field(
                format!("edges[{i}].vertices"),
                "vertices must be listed in increasing order without repeats",
            ));
        }
        let scale = e.scale.unwrap_or(1.0);
        let edge = Hyperedge::new(ids, e.func, scale).map_err(|err| {
            let sub = match err {
                Error::MalformedFunction(_) => "fn",
                _ => "",
            };
            let path = if sub.is_empty() {
                format!("edges[{i}]")
            } else {
                format!("edges[{i}].{sub}")
            };
            field(path, err.to_string())
        })?;
        edges.push(edge);
    }
    let mut h = SubmodularHypergraph::new(raw.n, edges)?;
    h.labels = raw.labels;
    Ok(h)
}

pub fn to_json_string(h: &SubmodularHypergraph) -> String {
    let out = OutFile {
        version: FORMAT_VERSION,
        n: h.n,
        labels: h.labels.as_ref(),
        edges: &h.edges,
    };
    serde_json::to_string(&out).expect("hypergraph serialization cannot fail")
}

pub fn load(path: impl AsRef<Path>) -> Result<SubmodularHypergraph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    from_json_str(&text).map_err(|e| match e {
        Error::Format { path: p, message } => Error::Format {
            path: format!("{}: {p}", path.display()),
            message,
        },
        other => other,
    })
}

pub fn save(h: &SubmodularHypergraph, path: impl AsRef<Path>) -> Result<()> {
    let mut s = to_json_string(h);
    s.push('\n');
    std::fs::write(path, s)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_and_round_trip() {
        let text = r#"{"version":1,"n":3,"labels":["a","b","c"],
            "edges":[{"vertices":["a",2],"fn":{"kind":"all_or_nothing"}},
                     {"vertices":[0,1,2],"fn":{"kind":"additive","k":1.5,"symmetric":true},"scale":2}]}"#;
        let h = from_json_str(text).unwrap();
        assert_eq!(h.edges[0].vertices, vec![0, 2]);
        assert_eq!(h.edges[0].scale, 1.0);
        let back = from_json_str(&to_json_string(&h)).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn diagnostics() {
        let bad_table = r#"{"version":1,"n":2,"edges":[
            {"vertices":[0,1],"fn":{"kind":"explicit","table":[0,1,1]}}]}"#;
        match from_json_str(bad_table) {
            Err(Error::Format { path, .. }) => assert_eq!(path, "edges[0].fn"),
            other => panic!("unexpected {other:?}"),
        }
        let out_of_range = r#"{"version":1,"n":2,"edges":[{"vertices":[0,5],"fn":{"kind":"product"}}]}"#;
        match from_json_str(out_of_range) {
            Err(Error::Format { path, .. }) => assert_eq!(path, "edges[0].vertices[1]"),
            other => panic!("unexpected {other:?}"),
        }
        let syntax = "{\"version\":1,\n\"n\":2,\n\"edges\":[}";
        match from_json_str(syntax) {
            Err(Error::Json { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let unknown_kind = r#"{"version":1,"n":2,"edges":[{"vertices":[0,1],"fn":{"kind":"magic"}}]}"#;
        assert!(matches!(from_json_str(unknown_kind), Err(Error::Json { .. })));
    }
}
