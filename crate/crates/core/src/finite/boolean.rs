use serde_json::Value;

use super::{caps, ElementCodec, FiniteLattice};
use crate::error::{Error, Result};
use crate::lattice::GradedLattice;
use crate::rank::Rank;

/// A subset of `[n] = {1, …, n}`; bit `i − 1` stands for `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitSubset {
    n: u8,
    mask: u32,
}

impl BitSubset {
    pub fn empty(n: u8) -> Self {
        BitSubset { n, mask: 0 }
    }

    pub fn full(n: u8) -> Self {
        BitSubset {
            n,
            mask: full_mask(n),
        }
    }

    pub fn from_mask(n: u8, mask: u32) -> Result<Self> {
        if n as usize > caps::BOOLEAN_N {
            return Err(Error::SizeCap {
                what: "Boolean ground set".into(),
                limit: caps::BOOLEAN_N,
            });
        }
        if mask & !full_mask(n) != 0 {
            return Err(Error::Mismatch(format!("mask {mask:#b} exceeds [{n}]")));
        }
        Ok(BitSubset { n, mask })
    }

    /// Builds the subset from 1-based indices.
    pub fn from_indices(n: u8, idx: &[u32]) -> Result<Self> {
        let mut mask = 0u32;
        for &i in idx {
            if i == 0 || i > n as u32 {
                return Err(Error::Mismatch(format!("index {i} outside [{n}]")));
            }
            mask |= 1 << (i - 1);
        }
        BitSubset::from_mask(n, mask)
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn len(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, i: u32) -> bool {
        i >= 1 && i <= self.n as u32 && self.mask & (1 << (i - 1)) != 0
    }

    /// Sorted 1-based indices.
    pub fn indices(&self) -> Vec<u32> {
        (1..=self.n as u32).filter(|&i| self.contains(i)).collect()
    }
}

fn full_mask(n: u8) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

impl std::fmt::Display for BitSubset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let body: Vec<String> = self.indices().iter().map(u32::to_string).collect();
        write!(f, "{{{}}}", body.join(","))
    }
}

/// The Boolean lattice `B_n` of subsets of `[n]`, ranked by cardinality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BooleanLattice {
    n: u8,
}

impl BooleanLattice {
    pub fn new(n: u8) -> Result<Self> {
        if n as usize > caps::BOOLEAN_N {
            return Err(Error::SizeCap {
                what: "Boolean ground set".into(),
                limit: caps::BOOLEAN_N,
            });
        }
        Ok(BooleanLattice { n })
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn subset(&self, idx: &[u32]) -> Result<BitSubset> {
        BitSubset::from_indices(self.n, idx)
    }

    /// `∅ ⊂ {1} ⊂ {1,2} ⊂ …`
    pub fn prefix_chain(&self) -> Vec<BitSubset> {
        (0..=self.n)
            .map(|k| BitSubset {
                n: self.n,
                mask: full_mask(k),
            })
            .collect()
    }
}

impl GradedLattice for BooleanLattice {
    type Elem = BitSubset;

    fn meet(&self, x: &BitSubset, y: &BitSubset) -> BitSubset {
        BitSubset {
            n: self.n,
            mask: x.mask & y.mask,
        }
    }

    fn join(&self, x: &BitSubset, y: &BitSubset) -> BitSubset {
        BitSubset {
            n: self.n,
            mask: x.mask | y.mask,
        }
    }

    fn rank(&self, x: &BitSubset) -> Rank {
        Rank::int(x.len() as i64)
    }

    fn bottom(&self) -> Option<BitSubset> {
        Some(BitSubset::empty(self.n))
    }

    fn top(&self) -> Option<BitSubset> {
        Some(BitSubset::full(self.n))
    }

    fn validate(&self, x: &BitSubset) -> Result<()> {
        if x.n != self.n {
            return Err(Error::Mismatch(format!(
                "subset of [{}] used in B_{}",
                x.n, self.n
            )));
        }
        Ok(())
    }
}

impl FiniteLattice for BooleanLattice {
    fn elements(&self) -> Result<Vec<BitSubset>> {
        let count = 1usize << self.n;
        if count > caps::ENUMERATED_ELEMENTS {
            return Err(Error::SizeCap {
                what: format!("B_{} elements", self.n),
                limit: caps::ENUMERATED_ELEMENTS,
            });
        }
        Ok((0..count as u32)
            .map(|mask| BitSubset { n: self.n, mask })
            .collect())
    }
}

impl ElementCodec for BooleanLattice {
    fn encode_json(&self, x: &BitSubset) -> Value {
        Value::from(x.indices())
    }

    fn decode_json(&self, v: &Value) -> Result<BitSubset> {
        let idx: Vec<u32> = serde_json::from_value(v.clone())?;
        self.subset(&idx)
    }
}
