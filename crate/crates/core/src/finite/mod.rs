//! Small exact lattices used as exhaustive oracles.

mod boolean;
mod partition;
mod product_plane;
mod subspace;

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use serde_json::Value;

pub use boolean::{BitSubset, BooleanLattice};
pub use partition::{PartitionLattice, SetPartition};
pub use product_plane::{
    product_plane_limit_demo, ProductPlane, ProductPlaneDemo, ProductPlanePoint,
};
pub use subspace::{Subspace, SubspaceLattice};

use crate::error::{Error, Result};
use crate::lattice::{is_rank_modular_on, ChainSample, GradedLattice};
use crate::rank::Rank;

/// Size limits for construction and exhaustive enumeration.
pub mod caps {
    pub const BOOLEAN_N: usize = 24;
    pub const PARTITION_N: usize = 7;
    pub const SUBSPACE_DIM: usize = 6;
    pub const SUBSPACE_PRIME: u32 = 97;
    /// Largest element list any family will enumerate.
    pub const ENUMERATED_ELEMENTS: usize = 1 << 12;
    pub const MAXIMAL_CHAINS: usize = 1_000_000;
    /// Antichain enumeration uses one `u128` bitmask per element.
    pub const CUTSET_ELEMENTS: usize = 128;
    pub const ANTICHAINS: usize = 5_000_000;
}

/// A lattice small enough to list.
pub trait FiniteLattice: GradedLattice<Elem: Eq + Hash> {
    fn elements(&self) -> Result<Vec<Self::Elem>>;
}

/// JSON encoding of elements; the lattice supplies the ambient parameters.
pub trait ElementCodec: GradedLattice {
    fn encode_json(&self, x: &Self::Elem) -> Value;
    fn decode_json(&self, v: &Value) -> Result<Self::Elem>;
}

struct Indexed<E> {
    elems: Vec<E>,
    index: HashMap<E, usize>,
    ranks: Vec<Rank>,
}

impl<E: Clone + Eq + Hash> Indexed<E> {
    fn new<L: FiniteLattice<Elem = E>>(l: &L) -> Result<Self> {
        let elems = l.elements()?;
        let index = elems
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        let ranks = elems.iter().map(|e| l.rank(e)).collect();
        Ok(Indexed {
            elems,
            index,
            ranks,
        })
    }

    /// Upper covers: `x < y` with `ρ(y) = ρ(x) + 1`. Valid for the
    /// integer-graded families in this module.
    fn covers<L: FiniteLattice<Elem = E>>(&self, l: &L) -> Vec<Vec<usize>> {
        let one = Rank::int(1);
        (0..self.elems.len())
            .map(|i| {
                let target = self.ranks[i].checked_add(&one).ok();
                (0..self.elems.len())
                    .filter(|&j| {
                        Some(&self.ranks[j]) == target.as_ref()
                            && l.lt(&self.elems[i], &self.elems[j])
                    })
                    .collect()
            })
            .collect()
    }
}

fn extrema<L: GradedLattice>(l: &L) -> Result<(L::Elem, L::Elem)> {
    match (l.bottom(), l.top()) {
        (Some(b), Some(t)) => Ok((b, t)),
        _ => Err(Error::Precondition("finite lattice without 0̂ or 1̂".into())),
    }
}

fn chain_index_lists<L: FiniteLattice>(l: &L, ix: &Indexed<L::Elem>) -> Result<Vec<Vec<usize>>> {
    let (bottom, top) = extrema(l)?;
    let covers = ix.covers(l);
    let (b, t) = (ix.index[&bottom], ix.index[&top]);
    let mut out = Vec::new();
    let mut path = vec![b];
    fn dfs(
        at: usize,
        top: usize,
        covers: &[Vec<usize>],
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        if at == top {
            if out.len() >= caps::MAXIMAL_CHAINS {
                return Err(Error::SizeCap {
                    what: "maximal chains".into(),
                    limit: caps::MAXIMAL_CHAINS,
                });
            }
            out.push(path.clone());
            return Ok(());
        }
        for &next in &covers[at] {
            path.push(next);
            dfs(next, top, covers, path, out)?;
            path.pop();
        }
        Ok(())
    }
    dfs(b, t, &covers, &mut path, &mut out)?;
    Ok(out)
}

/// Every saturated chain from `0̂` to `1̂`.
pub fn enumerate_maximal_chains<L: FiniteLattice>(l: &L) -> Result<Vec<Vec<L::Elem>>> {
    let ix = Indexed::new(l)?;
    Ok(chain_index_lists(l, &ix)?
        .into_iter()
        .map(|c| c.into_iter().map(|i| ix.elems[i].clone()).collect())
        .collect())
}

/// All antichains that meet every maximal chain, each sorted by element
/// enumeration order.
pub fn antichain_cutsets_exhaustive<L: FiniteLattice>(l: &L) -> Result<Vec<Vec<L::Elem>>> {
    let ix = Indexed::new(l)?;
    let n = ix.elems.len();
    if n > caps::CUTSET_ELEMENTS {
        return Err(Error::SizeCap {
            what: "elements for cutset search".into(),
            limit: caps::CUTSET_ELEMENTS,
        });
    }
    let chains: Vec<u128> = chain_index_lists(l, &ix)?
        .iter()
        .map(|c| c.iter().fold(0u128, |m, &i| m | 1 << i))
        .collect();
    let incomparable: Vec<u128> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| !l.comparable(&ix.elems[i], &ix.elems[j]))
                .fold(0u128, |m, j| m | 1 << j)
        })
        .collect();

    struct Search<'a> {
        chains: &'a [u128],
        incomparable: &'a [u128],
        visited: usize,
        found: Vec<u128>,
    }
    impl Search<'_> {
        fn go(&mut self, chosen: u128, allowed: u128, from: usize) -> Result<()> {
            self.visited += 1;
            if self.visited > caps::ANTICHAINS {
                return Err(Error::SizeCap {
                    what: "antichains".into(),
                    limit: caps::ANTICHAINS,
                });
            }
            if chosen != 0 && self.chains.iter().all(|c| c & chosen != 0) {
                self.found.push(chosen);
            }
            for j in from..self.incomparable.len() {
                if allowed & (1 << j) != 0 {
                    self.go(chosen | 1 << j, allowed & self.incomparable[j], j + 1)?;
                }
            }
            Ok(())
        }
    }
    let mut search = Search {
        chains: &chains,
        incomparable: &incomparable,
        visited: 0,
        found: Vec::new(),
    };
    search.go(
        0,
        if n == 128 {
            u128::MAX
        } else {
            (1u128 << n) - 1
        },
        0,
    )?;
    Ok(search
        .found
        .into_iter()
        .map(|mask| {
            (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| ix.elems[i].clone())
                .collect()
        })
        .collect())
}

/// True iff `set` is an antichain meeting every maximal chain.
pub fn is_antichain_cutset<L: FiniteLattice>(l: &L, set: &[L::Elem]) -> Result<bool> {
    for (i, a) in set.iter().enumerate() {
        if set[i + 1..].iter().any(|b| l.comparable(a, b)) {
            return Ok(false);
        }
    }
    Ok(enumerate_maximal_chains(l)?
        .iter()
        .all(|c| c.iter().any(|e| set.contains(e))))
}

/// Elements whose rank-modular defect vanishes against every element.
pub fn rank_modular_elements<L: FiniteLattice>(l: &L) -> Result<Vec<L::Elem>> {
    let elems = l.elements()?;
    let mut out = Vec::new();
    for m in &elems {
        if is_rank_modular_on(l, m, &elems)? {
            out.push(m.clone());
        }
    }
    Ok(out)
}

/// `{x : ρ(x) = r}`.
pub fn level_set<L: FiniteLattice>(l: &L, r: &Rank) -> Result<Vec<L::Elem>> {
    Ok(l.elements()?
        .into_iter()
        .filter(|e| &l.rank(e) == r)
        .collect())
}

/// A maximal chain of rank-modular elements, re-verified exhaustively.
pub trait ChiefChain: FiniteLattice + Sized {
    fn chief_candidates(&self) -> Vec<Self::Elem>;

    fn chief_chain(&self) -> Result<ChainSample<Self::Elem>> {
        let chain = self.chief_candidates();
        let modular = rank_modular_elements(self)?;
        if let Some(bad) = chain.iter().find(|e| !modular.contains(e)) {
            return Err(Error::Internal(format!(
                "chief chain element {bad:?} is not rank modular"
            )));
        }
        let sample = ChainSample::new(self, chain)
            .map_err(|e| Error::Internal(format!("chief chain is not a chain: {e}")))?;
        let one = Rank::int(1);
        let saturated = sample
            .points()
            .windows(2)
            .all(|w| w[0].0.checked_add(&one).ok().as_ref() == Some(&w[1].0));
        let (bottom, top) = extrema(self)?;
        let ends = sample.points().first().map(|p| &p.1) == Some(&bottom)
            && sample.points().last().map(|p| &p.1) == Some(&top);
        if !saturated || !ends {
            return Err(Error::Internal("chief chain is not maximal".into()));
        }
        Ok(sample)
    }
}

impl ChiefChain for BooleanLattice {
    fn chief_candidates(&self) -> Vec<BitSubset> {
        self.prefix_chain()
    }
}

impl ChiefChain for PartitionLattice {
    fn chief_candidates(&self) -> Vec<SetPartition> {
        self.growing_block_chain()
    }
}

impl ChiefChain for SubspaceLattice {
    fn chief_candidates(&self) -> Vec<Subspace> {
        self.coordinate_flag()
    }
}

/// One of the four concrete families, selected at run time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Boolean(BooleanLattice),
    Partition(PartitionLattice),
    Subspace(SubspaceLattice),
    ProductPlane,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiniteElement {
    Subset(BitSubset),
    Partition(SetPartition),
    Subspace(Subspace),
    Plane(ProductPlanePoint),
}

impl fmt::Display for FiniteElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteElement::Subset(s) => s.fmt(f),
            FiniteElement::Partition(p) => p.fmt(f),
            FiniteElement::Subspace(s) => s.fmt(f),
            FiniteElement::Plane(p) => {
                write!(f, "{}", serde_json::to_string(p).unwrap_or_default())
            }
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    /// `boolean:N`, `partition:N`, `subspace:P:N` or `plane`.
    fn from_str(s: &str) -> Result<Family> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| {
            t.parse::<u32>()
                .map_err(|_| Error::Mismatch(format!("bad family spec {s:?}")))
        };
        let small = |t: &str| -> Result<u8> {
            num(t)?
                .try_into()
                .map_err(|_| Error::Mismatch(format!("bad family spec {s:?}")))
        };
        match parts.as_slice() {
            ["boolean", n] => Ok(Family::Boolean(BooleanLattice::new(small(n)?)?)),
            ["partition", n] => Ok(Family::Partition(PartitionLattice::new(small(n)?)?)),
            ["subspace", p, n] => Ok(Family::Subspace(SubspaceLattice::new(num(p)?, small(n)?)?)),
            ["plane"] => Ok(Family::ProductPlane),
            _ => Err(Error::Mismatch(format!("unknown family spec {s:?}"))),
        }
    }
}

impl Family {
    pub fn element_from_json(&self, v: &Value) -> Result<FiniteElement> {
        Ok(match self {
            Family::Boolean(l) => FiniteElement::Subset(l.decode_json(v)?),
            Family::Partition(l) => FiniteElement::Partition(l.decode_json(v)?),
            Family::Subspace(l) => FiniteElement::Subspace(l.decode_json(v)?),
            Family::ProductPlane => FiniteElement::Plane(serde_json::from_value(v.clone())?),
        })
    }

    pub fn element_to_json(&self, x: &FiniteElement) -> Result<Value> {
        Ok(match (self, x) {
            (Family::Boolean(l), FiniteElement::Subset(e)) => l.encode_json(e),
            (Family::Partition(l), FiniteElement::Partition(e)) => l.encode_json(e),
            (Family::Subspace(l), FiniteElement::Subspace(e)) => l.encode_json(e),
            (Family::ProductPlane, FiniteElement::Plane(e)) => serde_json::to_value(e)?,
            _ => {
                return Err(Error::Mismatch(format!(
                    "{x} is not an element of {self:?}"
                )))
            }
        })
    }
}

/// Meet, join and both ranks, after checking both elements belong to `family`.
pub fn family_meet_join_rank(
    family: &Family,
    x: &FiniteElement,
    y: &FiniteElement,
) -> Result<(FiniteElement, FiniteElement, Rank, Rank)> {
    fn go<L: GradedLattice>(
        l: &L,
        x: &L::Elem,
        y: &L::Elem,
        wrap: fn(L::Elem) -> FiniteElement,
    ) -> Result<(FiniteElement, FiniteElement, Rank, Rank)> {
        l.validate(x)?;
        l.validate(y)?;
        Ok((wrap(l.meet(x, y)), wrap(l.join(x, y)), l.rank(x), l.rank(y)))
    }
    use FiniteElement as E;
    match (family, x, y) {
        (Family::Boolean(l), E::Subset(a), E::Subset(b)) => go(l, a, b, E::Subset),
        (Family::Partition(l), E::Partition(a), E::Partition(b)) => go(l, a, b, E::Partition),
        (Family::Subspace(l), E::Subspace(a), E::Subspace(b)) => go(l, a, b, E::Subspace),
        (Family::ProductPlane, E::Plane(a), E::Plane(b)) => go(&ProductPlane, a, b, E::Plane),
        _ => Err(Error::Mismatch(format!(
            "{x} and {y} are not both elements of {family:?}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent chain count: a maximal chain of `B_n` is a permutation.
    fn factorial(n: usize) -> usize {
        (1..=n).product()
    }

    #[test]
    fn boolean_chain_counts() {
        for n in 0..=5u8 {
            let l = BooleanLattice::new(n).unwrap();
            assert_eq!(
                enumerate_maximal_chains(&l).unwrap().len(),
                factorial(n as usize)
            );
        }
    }

    #[test]
    fn partition_chain_counts() {
        // Π_n has n!(n−1)!/2^(n−1) maximal chains.
        let expect = [1usize, 1, 3, 18, 180];
        for (n, &e) in (1..=5u8).zip(&expect) {
            let l = PartitionLattice::new(n).unwrap();
            assert_eq!(enumerate_maximal_chains(&l).unwrap().len(), e, "Π_{n}");
        }
    }

    #[test]
    fn b2_cutsets_match_brute_force_over_all_subsets() {
        let l = BooleanLattice::new(2).unwrap();
        let elems = l.elements().unwrap();
        let chains = enumerate_maximal_chains(&l).unwrap();
        // Oracle: filter all 2^4 subsets of elements by the definition.
        let mut oracle = Vec::new();
        for mask in 1u32..16 {
            let set: Vec<BitSubset> = (0..4)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| elems[i])
                .collect();
            let anti = set
                .iter()
                .enumerate()
                .all(|(i, a)| set[i + 1..].iter().all(|b| !l.comparable(a, b)));
            let cuts = chains.iter().all(|c| c.iter().any(|e| set.contains(e)));
            if anti && cuts {
                oracle.push(set);
            }
        }
        let found = antichain_cutsets_exhaustive(&l).unwrap();
        assert_eq!(found.len(), 3);
        assert_eq!(found.len(), oracle.len());
        for s in &oracle {
            assert!(found.contains(s));
        }
    }

    #[test]
    fn pi4_and_b3_cutsets_are_exactly_the_levels() {
        fn brute<L: FiniteLattice>(l: &L) -> usize {
            let elems = l.elements().unwrap();
            let chains = enumerate_maximal_chains(l).unwrap();
            let mut count = 0;
            for mask in 1u32..(1 << elems.len()) {
                let set: Vec<&L::Elem> = (0..elems.len())
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| &elems[i])
                    .collect();
                let anti = set
                    .iter()
                    .enumerate()
                    .all(|(i, a)| set[i + 1..].iter().all(|b| !l.comparable(a, b)));
                if anti && chains.iter().all(|c| c.iter().any(|e| set.contains(&e))) {
                    count += 1;
                }
            }
            count
        }
        let p4 = PartitionLattice::new(4).unwrap();
        assert_eq!(antichain_cutsets_exhaustive(&p4).unwrap().len(), brute(&p4));
        let b3 = BooleanLattice::new(3).unwrap();
        assert_eq!(antichain_cutsets_exhaustive(&b3).unwrap().len(), brute(&b3));
    }

    #[test]
    fn every_level_set_is_a_cutset() {
        let l = PartitionLattice::new(4).unwrap();
        let found = antichain_cutsets_exhaustive(&l).unwrap();
        for r in 0..=3 {
            let mut lv = level_set(&l, &Rank::int(r)).unwrap();
            lv.sort();
            assert!(found.iter().any(|s| {
                let mut s = s.clone();
                s.sort();
                s == lv
            }));
            assert!(is_antichain_cutset(&l, &lv).unwrap());
        }
    }

    #[test]
    fn modular_element_counts() {
        assert_eq!(
            rank_modular_elements(&BooleanLattice::new(4).unwrap())
                .unwrap()
                .len(),
            16
        );
        let f23 = SubspaceLattice::new(2, 3).unwrap();
        assert_eq!(
            rank_modular_elements(&f23).unwrap().len(),
            f23.elements().unwrap().len()
        );
        let pi4 = PartitionLattice::new(4).unwrap();
        let modular = rank_modular_elements(&pi4).unwrap();
        assert_eq!(modular.len(), 12);
        assert!(modular
            .iter()
            .all(|p| p.blocks().iter().filter(|b| b.len() > 1).count() <= 1));
    }

    #[test]
    fn chief_chains() {
        let b3 = BooleanLattice::new(3).unwrap().chief_chain().unwrap();
        let shown: Vec<String> = b3.elements().map(|e| e.to_string()).collect();
        assert_eq!(shown, ["{}", "{1}", "{1,2}", "{1,2,3}"]);
        let pi4 = PartitionLattice::new(4).unwrap().chief_chain().unwrap();
        let shown: Vec<String> = pi4.elements().map(|e| e.to_string()).collect();
        assert_eq!(shown, ["1|2|3|4", "12|3|4", "123|4", "1234"]);
        let flag = SubspaceLattice::new(2, 3).unwrap().chief_chain().unwrap();
        let ranks: Vec<Rank> = flag.points().iter().map(|p| p.0.clone()).collect();
        assert_eq!(ranks, (0..=3).map(Rank::int).collect::<Vec<_>>());
    }

    #[test]
    fn pi3_has_three_chains() {
        assert_eq!(
            enumerate_maximal_chains(&PartitionLattice::new(3).unwrap())
                .unwrap()
                .len(),
            3
        );
    }

    #[test]
    fn dispatch_checks_family_membership() {
        let fam: Family = "partition:4".parse().unwrap();
        let x = fam
            .element_from_json(&serde_json::json!([[1, 3], [2], [4]]))
            .unwrap();
        let y = fam
            .element_from_json(&serde_json::json!([[1, 2], [3], [4]]))
            .unwrap();
        let (_, join, rx, ry) = family_meet_join_rank(&fam, &x, &y).unwrap();
        assert_eq!(
            fam.element_to_json(&join).unwrap(),
            serde_json::json!([[1, 2, 3], [4]])
        );
        assert_eq!((rx, ry), (Rank::int(1), Rank::int(1)));

        let b5: Family = "boolean:5".parse().unwrap();
        let s = FiniteElement::Subset(BitSubset::from_indices(4, &[1]).unwrap());
        assert!(matches!(
            family_meet_join_rank(&b5, &s, &s),
            Err(Error::Mismatch(_))
        ));
        assert!(family_meet_join_rank(&b5, &s, &x).is_err());
        assert!("tree:3".parse::<Family>().is_err());
    }

    #[test]
    fn enumeration_caps() {
        assert!(BooleanLattice::new(20).unwrap().elements().is_err());
        assert!(antichain_cutsets_exhaustive(&BooleanLattice::new(8).unwrap()).is_err());
    }
}
