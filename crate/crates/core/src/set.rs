use serde::{Deserialize, Serialize};

/// A subset of the vertex universe `[0, n)`, stored as a packed bitset.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct VertexSet {
    words: Vec<u64>,
    universe: usize,
}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        Self {
            words: vec![0; universe.div_ceil(64)],
            universe,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for v in 0..universe {
            s.insert(v as u32);
        }
        s
    }

    /// Builds the set whose members are the set bits of `mask` (`universe <= 64`).
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        assert!(universe <= 64, "mask sets need a universe of at most 64");
        let mut s = Self::empty(universe);
        if universe > 0 {
            let keep = if universe == 64 { u64::MAX } else { (1u64 << universe) - 1 };
            s.words[0] = mask & keep;
        }
        s
    }

    pub fn from_vertices<I: IntoIterator<Item = u32>>(universe: usize, it: I) -> Self {
        let mut s = Self::empty(universe);
        for v in it {
            s.insert(v);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn contains(&self, v: u32) -> bool {
        let v = v as usize;
        v < self.universe && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: u32) {
        let v = v as usize;
        assert!(v < self.universe, "vertex {v} outside universe {}", self.universe);
        self.words[v / 64] |= 1 << (v % 64);
    }

    #[inline]
    pub fn remove(&mut self, v: u32) {
        let v = v as usize;
        if v < self.universe {
            self.words[v / 64] &= !(1 << (v % 64));
        }
    }

    pub fn toggle(&mut self, v: u32) {
        if self.contains(v) {
            self.remove(v)
        } else {
            self.insert(v)
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros();
                w &= w - 1;
                Some((i * 64) as u32 + b)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
        out
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
        out
    }

    pub fn complement(&self) -> Self {
        let mut out = Self::full(self.universe);
        for (a, b) in out.words.iter_mut().zip(&self.words) {
            *a &= !*b;
        }
        out
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }
}

impl Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_vec().serialize(s)
    }
}

/// Deserializes as a plain list of vertex ids; the universe is taken to be
/// one past the largest id.
impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<u32>::deserialize(d)?;
        let universe = v.iter().map(|&x| x as usize + 1).max().unwrap_or(0);
        Ok(Self::from_vertices(universe, v))
    }
}

/// Iterates over all subsets of `[0, n)` as bitmasks, `n <= 63`.
pub fn all_masks(n: usize) -> std::ops::Range<u64> {
    assert!(n < 64);
    0..(1u64 << n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let mut s = VertexSet::empty(130);
        s.insert(0);
        s.insert(64);
        s.insert(129);
        assert_eq!(s.len(), 3);
        assert_eq!(s.to_vec(), vec![0, 64, 129]);
        assert!(s.contains(129));
        assert!(!s.contains(128));
        let c = s.complement();
        assert_eq!(c.len(), 127);
        assert!(s.intersection(&c).is_empty());
        assert_eq!(s.union(&c).len(), 130);
        s.toggle(64);
        assert!(!s.contains(64));
    }

    #[test]
    fn mask_round_trip() {
        let s = VertexSet::from_mask(5, 0b10110);
        assert_eq!(s.to_vec(), vec![1, 2, 4]);
        assert_eq!(VertexSet::from_mask(3, u64::MAX).len(), 3);
    }
}
