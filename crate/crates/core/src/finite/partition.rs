use std::collections::HashMap;

use serde_json::Value;

use super::{caps, ElementCodec, FiniteLattice};
use crate::error::{Error, Result};
use crate::lattice::GradedLattice;
use crate::rank::Rank;

/// A set partition of `[n]` stored as a restricted growth string: `labels[i]`
/// is the block of element `i + 1`, blocks numbered in order of their minima.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    labels: Vec<u8>,
}

impl SetPartition {
    pub fn discrete(n: u8) -> Self {
        SetPartition {
            labels: (0..n).collect(),
        }
    }

    pub fn full(n: u8) -> Self {
        SetPartition {
            labels: vec![0; n as usize],
        }
    }

    /// Relabels an arbitrary block assignment into canonical form.
    pub fn from_labels(raw: &[u8]) -> Self {
        let mut map = HashMap::new();
        let labels = raw
            .iter()
            .map(|l| {
                let next = map.len() as u8;
                *map.entry(*l).or_insert(next)
            })
            .collect();
        SetPartition { labels }
    }

    /// Builds a partition from 1-based blocks. Elements not mentioned become
    /// singletons, so `from_blocks(4, &[vec![1, 2]])` is `{{1,2},{3},{4}}`.
    pub fn from_blocks(n: u8, blocks: &[Vec<u32>]) -> Result<Self> {
        if n as usize > caps::PARTITION_N {
            return Err(Error::SizeCap {
                what: "partition ground set".into(),
                limit: caps::PARTITION_N,
            });
        }
        let mut raw: Vec<Option<u8>> = vec![None; n as usize];
        for (b, block) in blocks.iter().enumerate() {
            for &i in block {
                if i == 0 || i > n as u32 {
                    return Err(Error::Mismatch(format!("element {i} outside [{n}]")));
                }
                let slot = &mut raw[i as usize - 1];
                if slot.is_some() {
                    return Err(Error::Mismatch(format!(
                        "element {i} appears in two blocks"
                    )));
                }
                *slot = Some(b as u8);
            }
        }
        let mut fresh = blocks.len() as u8;
        let raw: Vec<u8> = raw
            .into_iter()
            .map(|s| {
                s.unwrap_or_else(|| {
                    fresh += 1;
                    fresh - 1
                })
            })
            .collect();
        Ok(SetPartition::from_labels(&raw))
    }

    pub fn n(&self) -> u8 {
        self.labels.len() as u8
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn block_count(&self) -> usize {
        self.labels
            .iter()
            .map(|&l| l as usize + 1)
            .max()
            .unwrap_or(0)
    }

    /// Blocks as sorted 1-based element lists, ordered by minimum.
    pub fn blocks(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.block_count()];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l as usize].push(i as u32 + 1);
        }
        out
    }

    pub fn canonicalize(&self) -> Self {
        SetPartition::from_labels(&self.labels)
    }
}

impl std::fmt::Display for SetPartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let blocks: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| b.iter().map(u32::to_string).collect::<Vec<_>>().join(""))
            .collect();
        f.write_str(&blocks.join("|"))
    }
}

/// Minimal disjoint-set forest used for partition joins.
struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// The partition lattice `Π_n` ordered by refinement, `ρ = n − #blocks`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionLattice {
    n: u8,
}

impl PartitionLattice {
    pub fn new(n: u8) -> Result<Self> {
        if n == 0 || n as usize > caps::PARTITION_N {
            return Err(Error::SizeCap {
                what: "partition ground set".into(),
                limit: caps::PARTITION_N,
            });
        }
        Ok(PartitionLattice { n })
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn partition(&self, blocks: &[Vec<u32>]) -> Result<SetPartition> {
        SetPartition::from_blocks(self.n, blocks)
    }

    /// `{1..i+1}` as the only non-singleton block, for `i = 0..n−1`.
    pub fn growing_block_chain(&self) -> Vec<SetPartition> {
        (0..self.n)
            .map(|i| {
                let raw: Vec<u8> = (0..self.n).map(|j| if j <= i { 0 } else { j }).collect();
                SetPartition::from_labels(&raw)
            })
            .collect()
    }
}

impl GradedLattice for PartitionLattice {
    type Elem = SetPartition;

    /// Common refinement: two elements share a block iff they do in both.
    fn meet(&self, x: &SetPartition, y: &SetPartition) -> SetPartition {
        let mut map = HashMap::new();
        let labels = x
            .labels
            .iter()
            .zip(&y.labels)
            .map(|pair| {
                let next = map.len() as u8;
                *map.entry(pair).or_insert(next)
            })
            .collect();
        SetPartition { labels }
    }

    fn join(&self, x: &SetPartition, y: &SetPartition) -> SetPartition {
        let n = self.n as usize;
        let mut ds = DisjointSets::new(n);
        for part in [x, y] {
            let mut first: HashMap<u8, usize> = HashMap::new();
            for (i, &l) in part.labels.iter().enumerate() {
                match first.get(&l) {
                    Some(&j) => ds.union(i, j),
                    None => {
                        first.insert(l, i);
                    }
                }
            }
        }
        let raw: Vec<u8> = (0..n).map(|i| ds.find(i) as u8).collect();
        SetPartition::from_labels(&raw)
    }

    fn rank(&self, x: &SetPartition) -> Rank {
        Rank::int(self.n as i64 - x.block_count() as i64)
    }

    fn bottom(&self) -> Option<SetPartition> {
        Some(SetPartition::discrete(self.n))
    }

    fn top(&self) -> Option<SetPartition> {
        Some(SetPartition::full(self.n))
    }

    fn validate(&self, x: &SetPartition) -> Result<()> {
        if x.n() != self.n {
            return Err(Error::Mismatch(format!(
                "partition of [{}] used in Π_{}",
                x.n(),
                self.n
            )));
        }
        if *x != x.canonicalize() {
            return Err(Error::Mismatch("partition labels not canonical".into()));
        }
        Ok(())
    }
}

impl FiniteLattice for PartitionLattice {
    fn elements(&self) -> Result<Vec<SetPartition>> {
        // Restricted growth strings: labels[0] = 0, labels[i] ≤ 1 + max(labels[..i]).
        let n = self.n as usize;
        let mut out = Vec::new();
        let mut cur = vec![0u8; n];
        fn rec(i: usize, max: u8, cur: &mut Vec<u8>, out: &mut Vec<SetPartition>) {
            if i == cur.len() {
                out.push(SetPartition {
                    labels: cur.clone(),
                });
                return;
            }
            for l in 0..=max + 1 {
                cur[i] = l;
                rec(i + 1, max.max(l), cur, out);
            }
        }
        cur[0] = 0;
        if n == 1 {
            out.push(SetPartition { labels: cur });
        } else {
            rec(1, 0, &mut cur, &mut out);
        }
        Ok(out)
    }
}

impl ElementCodec for PartitionLattice {
    fn encode_json(&self, x: &SetPartition) -> Value {
        Value::from(x.blocks())
    }

    fn decode_json(&self, v: &Value) -> Result<SetPartition> {
        let blocks: Vec<Vec<u32>> = serde_json::from_value(v.clone())?;
        let covered: usize = blocks.iter().map(Vec::len).sum();
        if covered != self.n as usize {
            return Err(Error::Mismatch(format!(
                "blocks cover {covered} elements, expected {}",
                self.n
            )));
        }
        self.partition(&blocks)
    }
}
