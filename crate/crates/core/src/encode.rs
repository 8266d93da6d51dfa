//! Compact binary encoding of additive hypergraphs.
//!
//! Layout, all integers as unsigned LEB128 varints:
//!
//! ```text
//! n, m
//! per edge: arity, v_0, v_1 - v_0, ..., v_{a-1} - v_{a-2},
//!           flags (bit 0 symmetric, bit 1 K stored as f64),
//!           K (varint, or f64 little-endian), scale (f64 little-endian)
//! ```

use serde::{Deserialize, Serialize};

use crate::{Error, Hyperedge, Result, SplittingFn, SubmodularHypergraph};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodedSparsifier {
    #[serde(skip)]
    pub bytes: Vec<u8>,
    pub bit_count: usize,
}

impl EncodedSparsifier {
    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        let bit_count = bytes.len() * 8;
        Self { bytes, bit_count }
    }
}

const SYMMETRIC: u8 = 1;
const FLOAT_K: u8 = 2;

fn put_varint(out: &mut Vec<u8>, mut x: u64) {
    loop {
        let byte = (x & 0x7f) as u8;
        x >>= 7;
        if x == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn byte(&mut self) -> Result<u8> {
        let b = *self
            .buf
            .get(self.pos)
            .ok_or_else(|| Error::Encoding(format!("unexpected end of input at byte {}", self.pos)))?;
        self.pos += 1;
        Ok(b)
    }

    fn varint(&mut self) -> Result<u64> {
        let mut x = 0u64;
        for shift in (0..64).step_by(7) {
            let b = self.byte()?;
            x |= ((b & 0x7f) as u64) << shift;
            if b & 0x80 == 0 {
                return Ok(x);
            }
        }
        Err(Error::Encoding(format!("varint too long at byte {}", self.pos)))
    }

    fn f64(&mut self) -> Result<f64> {
        let end = self.pos + 8;
        let s = self
            .buf
            .get(self.pos..end)
            .ok_or_else(|| Error::Encoding("truncated float".into()))?;
        self.pos = end;
        Ok(f64::from_le_bytes(s.try_into().unwrap()))
    }
}

/// Encodes a hypergraph whose edges are all additive.
pub fn encode(h: &SubmodularHypergraph) -> Result<EncodedSparsifier> {
    let mut out = Vec::new();
    put_varint(&mut out, h.n as u64);
    put_varint(&mut out, h.num_edges() as u64);
    for (i, e) in h.edges.iter().enumerate() {
        let SplittingFn::Additive { k, symmetric } = e.func else {
            return Err(Error::Encoding(format!(
                "edge {i} is {}; only additive edges can be encoded",
                e.func.kind_name()
            )));
        };
        put_varint(&mut out, e.arity() as u64);
        let mut prev = 0;
        for (j, &v) in e.vertices.iter().enumerate() {
            put_varint(&mut out, (if j == 0 { v } else { v - prev }) as u64);
            prev = v;
        }
        let integral = k.fract() == 0.0 && k < 9.0e15;
        let flags = if symmetric { SYMMETRIC } else { 0 } | if integral { 0 } else { FLOAT_K };
        out.push(flags);
        if integral {
            put_varint(&mut out, k as u64);
        } else {
            out.extend_from_slice(&k.to_le_bytes());
        }
        out.extend_from_slice(&e.scale.to_le_bytes());
    }
    Ok(EncodedSparsifier::from_bytes(out))
}

pub fn decode(bytes: &[u8]) -> Result<SubmodularHypergraph> {
    let mut r = Reader { buf: bytes, pos: 0 };
    let n = r.varint()? as usize;
    let m = r.varint()? as usize;
    let mut edges = Vec::with_capacity(m.min(1 << 20));
    for i in 0..m {
        let a = r.varint()? as usize;
        let mut vs = Vec::with_capacity(a.min(1 << 20));
        let mut prev = 0u64;
        for j in 0..a {
            let d = r.varint()?;
            prev = if j == 0 { d } else { prev + d };
            if prev > u32::MAX as u64 {
                return Err(Error::Encoding(format!("edge {i}: vertex id overflows")));
            }
            vs.push(prev as u32);
        }
        let flags = r.byte()?;
        if flags & !(SYMMETRIC | FLOAT_K) != 0 {
            return Err(Error::Encoding(format!("edge {i}: unknown flags {flags:#x}")));
        }
        let k = if flags & FLOAT_K != 0 { r.f64()? } else { r.varint()? as f64 };
        let scale = r.f64()?;
        let f = SplittingFn::Additive {
            k,
            symmetric: flags & SYMMETRIC != 0,
        };
        edges.push(
            Hyperedge::new(vs, f, scale).map_err(|e| Error::Encoding(format!("edge {i}: {e}")))?,
        );
    }
    if r.pos != bytes.len() {
        return Err(Error::Encoding(format!(
            "{} trailing bytes",
            bytes.len() - r.pos
        )));
    }
    SubmodularHypergraph::new(n, edges).map_err(|e| Error::Encoding(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let edges = vec![
            Hyperedge::new(vec![0, 5, 300], SplittingFn::additive(2.0), 1.25).unwrap(),
            Hyperedge::new(vec![7], SplittingFn::additive_symmetric(0.37), 3.0).unwrap(),
        ];
        let h = SubmodularHypergraph::new(1000, edges).unwrap();
        let enc = encode(&h).unwrap();
        assert_eq!(enc.bit_count, enc.bytes.len() * 8);
        assert_eq!(decode(&enc.bytes).unwrap(), h);
    }

    #[test]
    fn rejects_garbage() {
        assert!(decode(&[]).is_err());
        assert!(decode(&[2, 1, 1, 0, 9]).is_err());
        let h = SubmodularHypergraph::new(
            2,
            vec![Hyperedge::unit(vec![0, 1], SplittingFn::Product).unwrap()],
        )
        .unwrap();
        assert!(encode(&h).is_err());
    }
}
